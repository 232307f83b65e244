use serde::Serialize;

use crate::num::{ceil_size, Real};
use crate::params::ProblemParams;
use crate::set::IntSet;

use super::{Certificate, ContainerChain};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness<R> {
    pub label: String,
    pub value: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<R>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionCheck<R> {
    /// Roman numeral, `"i"` to `"vii"`.
    pub condition: &'static str,
    pub holds: bool,
    pub witnesses: Vec<Witness<R>>,
}

impl<R: Real> ConditionCheck<R> {
    fn new(condition: &'static str) -> Self {
        ConditionCheck { condition, holds: true, witnesses: Vec::new() }
    }

    fn flag(&mut self, label: impl Into<String>, ok: bool) {
        let value = if ok { R::one() } else { R::zero() };
        self.push(label, value, None, ok);
    }

    fn push(&mut self, label: impl Into<String>, value: R, bound: Option<R>, ok: bool) {
        self.holds &= ok;
        self.witnesses.push(Witness { label: label.into(), value, bound, ok });
    }
}

/// Which alternative of the stopping condition (vii) held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum StopBranch {
    /// `L = 0` and `|C₀ ∩ I| < √n / log n`.
    NoPhases,
    /// `|C_L ∩ I| < 12n / |C_L|`.
    FewRemaining,
    /// `|C_L| ≤ 12√n`.
    SmallContainer,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport<R> {
    pub n: u32,
    #[serde(rename = "L")]
    pub phases: usize,
    pub conditions: Vec<ConditionCheck<R>>,
    pub stop_branches: Vec<StopBranch>,
    /// Every step of the chain drops at least one element.
    pub strictly_nested: bool,
    /// `log log n + 1`; the construction guarantees `L` below it.
    pub phase_bound: R,
    pub phase_bound_ok: bool,
    pub pass: bool,
}

impl<R> VerificationReport<R> {
    pub fn failed(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|c| !c.holds).map(|c| c.condition).collect()
    }
}

/// Evaluates conditions (i) to (vii) against `I − removed`.
pub fn verify_certificate<R: Real>(
    cert: &Certificate,
    chain: &ContainerChain,
    set: &IntSet,
    params: &ProblemParams<R>,
) -> VerificationReport<R> {
    let n = params.n;
    let nr = R::count(n as u64);
    let l = cert.phases;
    let eff = set.difference(&cert.removed);
    let empty = IntSet::empty();
    let c_at = |i: usize| chain.c.get(i).unwrap_or(&empty);
    let r_at = |i: usize| cert.r.get(i).unwrap_or(&empty);
    let last = c_at(l);
    let selected = cert.selected();
    let size = |k: usize| R::size(k);

    let mut i = ConditionCheck::new("i");
    i.flag("union of R inside I", selected.is_subset(&eff));
    i.flag("I inside C_L plus union of R", eff.is_subset(&last.union(&selected)));
    i.push("|I - removed|", size(eff.len()), None, true);

    let mut ii = ConditionCheck::new("ii");
    ii.flag("certificate n matches", cert.n == n);
    ii.flag("chain has L+1 sets", chain.c.len() == l + 1);
    ii.flag("chain nested", chain.is_nested());
    ii.push("|C_0|", size(c_at(0).len()), Some(nr), size(c_at(0).len()) <= nr);
    for k in 1..l {
        let ck = size(c_at(k).len());
        let lower = params.small_container();
        let upper = params.phase_one_stop() / R::lit(2.0).powi(k as i32 - 1);
        ii.push(format!("|C_{k}| above 12 sqrt n"), ck, Some(lower), ck > lower);
        ii.push(format!("|C_{k}|"), ck, Some(upper), ck <= upper);
    }

    let mut iii = ConditionCheck::new("iii");
    let r0 = r_at(0);
    iii.flag("R_0 inside [n]", r0.check_within(n).is_ok());
    iii.push("|R_0|", size(r0.len()), Some(params.r0_bound()), size(r0.len()) <= params.r0_bound());

    let mut iv = ConditionCheck::new("iv");
    iv.flag("R has L+1 sets", cert.r.len() == l + 1);
    for k in 1..=l {
        let rk = r_at(k);
        iv.flag(format!("R_{k} inside C_{}", k - 1), rk.is_subset(c_at(k - 1)));
        let bound = params.r_bound(k);
        iv.push(format!("|R_{k}|"), size(rk.len()), Some(bound), size(rk.len()) <= bound);
    }

    let mut v = ConditionCheck::new("v");
    v.flag("U has L sets", cert.u.len() == l);
    if l >= 1 {
        let u0 = cert.u.first().unwrap_or(&empty);
        let want = params.u0_size();
        v.flag("U_0 inside [n]", u0.check_within(n).is_ok());
        v.push("|U_0|", size(u0.len()), Some(size(want)), u0.len() == want);
    }

    let mut vi = ConditionCheck::new("vi");
    for k in 1..l {
        let uk = cert.u.get(k).unwrap_or(&empty);
        let ck = c_at(k);
        vi.flag(format!("U_{k} inside C_{k}"), uk.is_subset(ck));
        let want = if ck.is_empty() { 0 } else { ceil_size(params.aux_size(ck.len())) };
        vi.push(format!("|U_{k}|"), size(uk.len()), Some(size(want)), uk.len() == want && want > 0);
    }

    let mut vii = ConditionCheck::new("vii");
    let inside0 = size(c_at(0).intersection(&eff).len());
    let inside_l = size(last.intersection(&eff).len());
    let mut branches = Vec::new();
    if l == 0 && inside0 < params.size_small {
        branches.push(StopBranch::NoPhases);
    }
    let aux_l = if last.is_empty() { R::infinity() } else { params.aux_size(last.len()) };
    if inside_l < aux_l {
        branches.push(StopBranch::FewRemaining);
    }
    if size(last.len()) <= params.small_container() {
        branches.push(StopBranch::SmallContainer);
    }
    vii.push("|C_0 and I|", inside0, Some(params.size_small), l == 0 && inside0 < params.size_small);
    vii.push("|C_L and I|", inside_l, Some(aux_l), inside_l < aux_l);
    vii.push("|C_L|", size(last.len()), Some(params.small_container()), size(last.len()) <= params.small_container());
    vii.holds = !branches.is_empty();

    let conditions = vec![i, ii, iii, iv, v, vi, vii];
    let pass = conditions.iter().all(|c| c.holds);
    let phase_bound = params.phase_limit();
    VerificationReport {
        n,
        phases: l,
        conditions,
        stop_branches: branches,
        strictly_nested: chain.is_strictly_nested(),
        phase_bound,
        phase_bound_ok: size(l) < phase_bound,
        pass,
    }
}
