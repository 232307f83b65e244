//! Finite-`n` audits of the container counting arithmetic.
//!
//! Each check evaluates the counted quantity with exact log-gamma binomials
//! (the report's `lhs`, as a sum of named `components`) and compares it with
//! the closed-form bound (`rhs`). Intermediate inequalities of the chain,
//! including the Stirling-type estimates, are listed as `steps`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{floor_size, Real};

mod binom;

pub use binom::{ln_gamma, log2_add, log2_binomial, log2_binomial_sum};

/// Smallest `n` the audits accept (`log log n ≥ 1` with room to spare).
pub const MIN_N: u64 = 4096;

/// One inequality `value ≤ bound` of a chain.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Step<R> {
    pub name: String,
    pub value: R,
    pub bound: R,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport<R> {
    pub check: String,
    pub n: u64,
    /// `log₂` of the evaluated quantity; the sum of `components`.
    pub lhs: R,
    /// `log₂` of the closed-form bound.
    pub rhs: R,
    /// `lhs ≤ rhs` and every step holds.
    pub holds: bool,
    pub components: BTreeMap<String, R>,
    pub steps: Vec<Step<R>>,
    /// Names of the steps that failed (plus `"total"` if `lhs > rhs`).
    pub failing: Vec<String>,
    /// Some binomial had `k > m`.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

impl<R: Real> BoundReport<R> {
    /// `|Σ components − lhs|` relative to `max(1, |lhs|)`.
    pub fn reconciliation_error(&self) -> R {
        let sum = self.components.values().fold(R::zero(), |a, &b| a + b);
        (sum - self.lhs).abs() / self.lhs.abs().max(R::one())
    }
}

struct Builder<R> {
    check: String,
    n: u64,
    components: BTreeMap<String, R>,
    steps: Vec<Step<R>>,
    degenerate: bool,
}

impl<R: Real> Builder<R> {
    fn new(check: impl Into<String>, n: u64) -> Self {
        Builder { check: check.into(), n, components: BTreeMap::new(), steps: Vec::new(), degenerate: false }
    }

    fn component(&mut self, name: impl Into<String>, value: R) {
        self.components.insert(name.into(), value);
    }

    fn step(&mut self, name: impl Into<String>, value: R, bound: R) {
        let holds = value <= bound;
        self.steps.push(Step { name: name.into(), value, bound, holds });
    }

    fn sub(&mut self, report: &BoundReport<R>, name: String) {
        self.steps.push(Step { name, value: report.lhs, bound: report.rhs, holds: report.holds });
    }

    fn binomial(&mut self, m: R, k: R) -> R {
        log2_binomial(m, k).unwrap_or_else(|| {
            self.degenerate = true;
            R::zero()
        })
    }

    fn finish(self, rhs: R) -> BoundReport<R> {
        let lhs = self.components.values().fold(R::zero(), |a, &b| a + b);
        let mut failing: Vec<String> = self.steps.iter().filter(|s| !s.holds).map(|s| s.name.clone()).collect();
        if lhs > rhs || lhs.is_nan() || rhs.is_nan() {
            failing.push("total".into());
        }
        let holds = failing.is_empty() && !self.degenerate;
        BoundReport {
            check: self.check,
            n: self.n,
            lhs,
            rhs,
            holds,
            components: self.components,
            steps: self.steps,
            failing,
            degenerate: self.degenerate,
        }
    }
}

/// `n`, `√n`, `log n` and `log log n` (base 2).
struct Scale<R> {
    n: u64,
    nr: R,
    sqrt: R,
    log: R,
    loglog: R,
}

impl<R: Real> Scale<R> {
    fn new(n: u64) -> Result<Self> {
        if n < MIN_N {
            return Err(Error::Argument(format!("bound audits need n ≥ {MIN_N}, got {n}")));
        }
        let nr = R::count(n);
        let log = nr.log2();
        Ok(Scale { n, nr, sqrt: nr.sqrt(), log, loglog: log.log2() })
    }

    /// `√n / log n`.
    fn k0(&self) -> R {
        self.sqrt / self.log
    }

    fn sum_up_to(&self, limit: R) -> R {
        log2_binomial_sum(self.n, floor_size(limit) as u64)
    }
}

fn lit<R: Real>(x: f64) -> R {
    R::lit(x)
}

/// Claim on `Π_{i=0}^{log log n − 1} C(2^i x, 24n / (2^i x))`, `x = 12√n`, against `2^{25√n}`.
pub fn claim41_check<R: Real>(n: u64) -> Result<BoundReport<R>> {
    let s = Scale::<R>::new(n)?;
    let mut b = Builder::new("claim41", n);
    let x = lit::<R>(12.0) * s.sqrt;
    let top = floor_size(s.loglog - R::one());
    let mut stirling = R::zero();
    for i in 0..=top {
        let m = lit::<R>(2.0).powi(i as i32) * x;
        let k = lit::<R>(24.0) * s.nr / m;
        let exact = b.binomial(m, k);
        let bound = k * (R::E() * m / k).log2();
        b.component(format!("factor i={i}"), exact);
        b.step(format!("stirling i={i}"), exact, bound);
        stirling = stirling + bound;
    }
    let constant = lit::<R>(4.0) * (lit::<R>(6.0) * R::E()).log2() + lit(8.0);
    b.step("stirling product", stirling, constant * s.sqrt);
    b.step("chain constant", constant, lit(25.0));
    Ok(b.finish(lit::<R>(25.0) * s.sqrt))
}

fn small_choose(m: usize, k: usize) -> u64 {
    if k > m {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (m - i) as u64 / (i as u64 + 1))
}

/// Number of certificates with `ℓ` phases.
///
/// `ℓ = 0` compares against `2^{16√n + 1}`; `ℓ ≥ 1` evaluates each factor of
/// the product (removed set, `R₀`, `U₀`, `R₁`, the later `R_i`, and the
/// `U_i` choices indexed by increasing `z` tuples) and compares against
/// `2^{167√n} log n`.
pub fn certificate_count_check<R: Real>(n: u64, ell: u32) -> Result<BoundReport<R>> {
    let s = Scale::<R>::new(n)?;
    let ell_r = R::count(ell as u64);
    if ell_r > s.loglog + R::one() {
        return Err(Error::Argument(format!("ell = {ell} exceeds log log n + 1 = {}", s.loglog + R::one())));
    }
    let mut b = Builder::new(format!("certificate_count ell={ell}"), n);
    let k0 = s.k0();
    let root = s.sqrt;
    let removed = s.sum_up_to(k0);
    let r0 = s.sum_up_to(lit::<R>(16.0) * k0);
    if ell == 0 {
        b.component("removed or R_0", log2_add(removed, r0));
        b.step("removed", removed, root);
        b.step("R_0", r0, lit::<R>(16.0) * root);
        return Ok(b.finish(lit::<R>(16.0) * root + R::one()));
    }

    b.component("removed", removed);
    b.step("removed", removed, root);
    b.component("R_0", r0);
    b.step("R_0", r0, lit::<R>(16.0) * root);
    let u0 = b.binomial(s.nr, k0);
    b.component("U_0", u0);
    b.step("U_0", u0, root);
    let r1 = s.sum_up_to(lit::<R>(108.0) * k0);
    b.component("R_1", r1);
    b.step("R_1", r1, lit::<R>(108.0) * root);

    let mut later = R::zero();
    let mut later_bound = R::zero();
    for i in 1..ell {
        let shrink = lit::<R>(2.0).powi(2 * i as i32 - 2);
        later = later + s.sum_up_to(lit::<R>(12.0) * k0 / shrink);
        later_bound = later_bound + lit::<R>(12.0) / shrink;
    }
    b.component("R_geometric", later);
    b.step("R_geometric", later, later_bound * root);
    b.step("geometric series", later_bound, lit(16.0));
    let fixed = lit::<R>(1.0 + 16.0 + 1.0 + 108.0) + lit(16.0);
    b.step("fixed exponent", fixed, lit(142.0));

    // U_i choices: z ranges over integers in [1, log log n).
    let wide = lit::<R>(6.0) * s.sqrt * s.log;
    let mut factors: Vec<R> = (1..)
        .take_while(|&z| R::count(z) < s.loglog)
        .map(|z| {
            let m = wide / lit::<R>(2.0).powi(z as i32 - 1);
            let k = lit::<R>(12.0) * s.nr * lit::<R>(2.0).powi(z as i32) / wide;
            b.binomial(m, k)
        })
        .collect();
    let full = factors.iter().fold(R::zero(), |a, &f| a + f);
    factors.sort_by(|a, c| c.partial_cmp(a).expect("finite"));
    let picks = ell as usize - 1;
    let tuples = small_choose(factors.len(), picks);
    let choose_bound = b.binomial(s.loglog, R::size(picks));
    let claim = claim41_check::<R>(n)?;
    if tuples > 0 {
        let worst = factors[..picks].iter().fold(R::zero(), |a, &f| a + f);
        let tuple_count = R::count(tuples).log2();
        b.component("choose", tuple_count + worst);
        b.step("z tuple count", tuple_count, choose_bound);
        b.step("worst z tuple", worst, full);
    } else {
        b.component("choose", R::zero());
    }
    b.step("full z product", full, claim.rhs);
    b.sub(&claim, "claim41".into());

    let rhs = lit::<R>(167.0) * root + s.log.log2();
    let summed = fixed * root + choose_bound + claim.rhs;
    let mut report = b.finish(rhs);
    let lhs = report.lhs;
    let extra = [
        Step { name: "summed exponents".into(), value: lhs, bound: summed, holds: lhs <= summed },
        Step { name: "summed exponents at most rhs".into(), value: summed, bound: rhs, holds: summed <= rhs },
    ];
    for step in extra {
        if !step.holds {
            report.failing.push(step.name.clone());
            report.holds = false;
        }
        report.steps.push(step);
    }
    Ok(report)
}

/// Number of `I` one certificate can stand for, by the case of the stop rule.
///
/// Case 1 needs `size_cl ≤ 12√n`; cases 2 and 3 need `12√n < size_cl ≤ n`.
pub fn containers_per_certificate_check<R: Real>(n: u64, case: u8, size_cl: u64) -> Result<BoundReport<R>> {
    let s = Scale::<R>::new(n)?;
    let twelve = lit::<R>(12.0) * s.sqrt;
    let size = R::count(size_cl);
    let mut b = Builder::new(format!("containers case={case}"), n);
    let small = size <= twelve;
    let rhs = match case {
        1 => {
            if !small {
                return Err(Error::Argument(format!("case 1 needs |C_L| ≤ {twelve}, got {size_cl}")));
            }
            b.component("2^|C_L|", size);
            twelve
        }
        2 | 3 if small || size_cl > n => {
            return Err(Error::Argument(format!("case {case} needs {twelve} < |C_L| ≤ {n}, got {size_cl}")));
        }
        2 => {
            let k0 = s.k0();
            let sum = s.sum_up_to(k0);
            let two_c = R::one() + b.binomial(s.nr, k0);
            b.component("small subsets of [n]", sum);
            b.step("sum at most 2C(n, k)", sum, two_c);
            b.step("2C(n, k) at most n^k", two_c, k0 * s.log);
            s.sqrt
        }
        3 => {
            let x = lit::<R>(12.0) * s.nr / size;
            let below_x = x.ceil() - R::one();
            let sum = log2_binomial_sum(size_cl, floor_size(below_x) as u64);
            let two_c = R::one() + b.binomial(size, x);
            let stirling = R::one() + x * (lit::<R>(12.0) * R::E() * s.nr / (x * x)).log2();
            let convex = (lit::<R>(12.0) * R::E() * s.nr).sqrt() + R::one();
            b.component("subsets of C_L below x", sum);
            b.step("sum at most 2C(|C_L|, x)", sum, two_c);
            b.step("stirling", two_c, stirling);
            b.step("convexity", stirling, convex);
            b.step("sqrt(12en) + 1 at most 6 sqrt n", convex, lit::<R>(6.0) * s.sqrt);
            lit::<R>(6.0) * s.sqrt
        }
        _ => return Err(Error::Argument(format!("case must be 1, 2 or 3, got {case}"))),
    };
    b.step("case bound at most 12 sqrt n", rhs, twelve);
    Ok(b.finish(rhs))
}

/// Total count `|C| · max |I_C|` against `2^{180√n}`.
pub fn theorem_assembly_check<R: Real>(n: u64) -> Result<BoundReport<R>> {
    let s = Scale::<R>::new(n)?;
    let max_ell = floor_size(s.loglog + R::one()) as u32;
    let mut subs = vec![claim41_check::<R>(n)?];
    for ell in 0..=max_ell {
        subs.push(certificate_count_check(n, ell)?);
    }
    let twelve = floor_size(lit::<R>(12.0) * s.sqrt) as u64;
    let mut cases = vec![containers_per_certificate_check(n, 1, twelve)?, containers_per_certificate_check(n, 2, n)?];
    let mut size = twelve + 1;
    while size < n {
        cases.push(containers_per_certificate_check(n, 3, size)?);
        size *= 2;
    }
    cases.push(containers_per_certificate_check(n, 3, n)?);
    Ok(assemble(&s, &subs, &cases))
}

fn assemble<R: Real>(s: &Scale<R>, certs: &[BoundReport<R>], cases: &[BoundReport<R>]) -> BoundReport<R> {
    let mut b = Builder::new("theorem_assembly", s.n);
    let mut containers = R::neg_infinity();
    for r in certs {
        if r.check.starts_with("certificate_count") {
            containers = log2_add(containers, r.lhs);
        }
        b.sub(r, r.check.clone());
    }
    let mut per = R::neg_infinity();
    for r in cases {
        per = per.max(r.lhs);
        b.sub(r, r.check.clone());
    }
    for r in certs.iter().chain(cases) {
        b.degenerate |= r.degenerate;
    }
    let root = s.sqrt;
    b.component("certificates", containers);
    b.component("sets per certificate", per);
    let total_bound = log2_add(
        lit::<R>(16.0) * root + R::one(),
        lit::<R>(167.0) * root + (s.loglog + R::one()).log2() + s.log.log2(),
    );
    b.step("container count", containers, total_bound);
    b.step("container count at most 168 sqrt n", total_bound, lit::<R>(168.0) * root);
    b.step("sets per certificate", per, lit::<R>(12.0) * root);
    b.step("168 + 12", lit(168.0 + 12.0), lit(180.0));
    b.finish(lit::<R>(180.0) * root)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIZES: [u64; 5] = [1 << 12, 1 << 14, 1 << 16, 1 << 18, 1 << 20];

    fn reconciles(r: &BoundReport<f64>) {
        assert!(r.reconciliation_error() < 1e-9, "{}: {:?}", r.check, r.components);
    }

    #[test]
    fn claim41_holds() {
        for n in SIZES {
            let r = claim41_check::<f64>(n).unwrap();
            assert!(r.holds, "n = {n}: {:?}", r.failing);
            assert!(!r.degenerate);
            reconciles(&r);
        }
    }

    #[test]
    fn claim41_factors_add_up() {
        let r = claim41_check::<f64>(1 << 14).unwrap();
        // log log n = log₂ 14, so i runs over 0..=2.
        assert_eq!(r.components.len(), 3);
        let direct: f64 = (0..3)
            .map(|i| {
                let m = 2f64.powi(i) * 12.0 * 128.0;
                log2_binomial(m, 24.0 * 16384.0 / m).unwrap()
            })
            .sum();
        assert!((r.lhs - direct).abs() < 1e-9);
    }

    #[test]
    fn guard_below_minimum() {
        let err = claim41_check::<f64>(4095).unwrap_err();
        assert!(err.to_string().contains("4096"));
        assert!(certificate_count_check::<f64>(100, 0).is_err());
        assert!(theorem_assembly_check::<f64>(1000).is_err());
    }

    #[test]
    fn certificate_counts_hold() {
        for n in SIZES {
            for ell in 0..=2 {
                let r = certificate_count_check::<f64>(n, ell).unwrap();
                assert!(r.holds, "n = {n}, ell = {ell}: {:?}", r.failing);
                reconciles(&r);
            }
        }
        let r = certificate_count_check::<f64>(1 << 20, 0).unwrap();
        assert!((r.rhs - (16.0 * 1024.0 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn certificate_components_listed() {
        let r = certificate_count_check::<f64>(1 << 16, 1).unwrap();
        let names: Vec<&str> = r.components.keys().map(String::as_str).collect();
        assert_eq!(names, ["R_0", "R_1", "R_geometric", "U_0", "choose", "removed"]);
        assert_eq!(r.components["R_geometric"], 0.0);
        let fixed = r.steps.iter().find(|s| s.name == "fixed exponent").unwrap();
        assert_eq!((fixed.value, fixed.bound), (142.0, 142.0));
        let geo = certificate_count_check::<f64>(1 << 16, 3).unwrap();
        let series = geo.steps.iter().find(|s| s.name == "geometric series").unwrap();
        assert_eq!(series.value, 12.0 + 3.0);
    }

    #[test]
    fn certificate_ell_out_of_range() {
        // log log 2¹⁶ + 1 = 5.
        assert!(certificate_count_check::<f64>(1 << 16, 5).is_ok());
        assert!(certificate_count_check::<f64>(1 << 16, 6).is_err());
    }

    #[test]
    fn containers_cases() {
        let n = 1u64 << 20;
        let r = containers_per_certificate_check::<f64>(n, 1, 12 * 1024).unwrap();
        assert_eq!((r.lhs, r.rhs), (12.0 * 1024.0, 12.0 * 1024.0));
        assert!(r.holds);

        let r = containers_per_certificate_check::<f64>(n, 3, 2 * 12 * 1024).unwrap();
        assert!(r.holds, "{:?}", r.failing);
        assert_eq!(r.steps.len(), 5);

        let r = containers_per_certificate_check::<f64>(n, 2, n).unwrap();
        assert!(r.holds);
        assert!(r.lhs <= 1024.0);

        assert!(containers_per_certificate_check::<f64>(n, 1, 12 * 1024 + 1).is_err());
        assert!(containers_per_certificate_check::<f64>(n, 2, 12 * 1024).is_err());
        assert!(containers_per_certificate_check::<f64>(n, 3, n + 1).is_err());
        assert!(containers_per_certificate_check::<f64>(n, 4, 100).is_err());
    }

    #[test]
    fn containers_hold_everywhere() {
        for n in SIZES {
            let twelve = (12.0 * (n as f64).sqrt()) as u64;
            for (case, size) in [(1, twelve), (1, 1), (2, twelve + 1), (2, n), (3, twelve + 1), (3, n / 2), (3, n)] {
                let r = containers_per_certificate_check::<f64>(n, case, size).unwrap();
                assert!(r.holds, "n = {n} case {case} size {size}: {:?}", r.failing);
                reconciles(&r);
            }
        }
    }

    #[test]
    fn assembly_holds() {
        for n in SIZES {
            let r = theorem_assembly_check::<f64>(n).unwrap();
            assert!(r.holds, "n = {n}: {:?}", r.failing);
            reconciles(&r);
            assert_eq!(r.rhs, 180.0 * (n as f64).sqrt());
        }
    }

    #[test]
    fn assembly_propagates_failures() {
        let n = 1u64 << 16;
        let s = Scale::<f64>::new(n).unwrap();
        let mut certs = vec![claim41_check::<f64>(n).unwrap(), certificate_count_check(n, 0).unwrap()];
        let cases = vec![containers_per_certificate_check::<f64>(n, 2, n).unwrap()];
        assert!(assemble(&s, &certs, &cases).holds);
        certs[0].holds = false;
        let r = assemble(&s, &certs, &cases);
        assert!(!r.holds);
        assert_eq!(r.failing, ["claim41"]);
    }

    #[test]
    fn single_precision_agrees() {
        let a = claim41_check::<f32>(1 << 16).unwrap();
        let b = claim41_check::<f64>(1 << 16).unwrap();
        assert!(a.holds);
        assert!(((a.lhs as f64) - b.lhs).abs() / b.lhs < 1e-3);
    }
}
