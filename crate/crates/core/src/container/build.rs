use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ceil_size, Real};
use crate::params::ProblemParams;
use crate::prob::{heavy_vertices, select_w};
use crate::set::IntSet;
use crate::tuples::{vertex_stats, BetweenVariant};

use super::engine::run_core;
use super::{clean_heavy, CaseTag, Certificate, ContainerChain, TieOrder};

/// Which hypotheses the build insists on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Mode {
    /// Pick the set-up from `|I_h|`; no size requirement on `I`.
    #[default]
    Auto,
    /// Requires `|I| ≥ √n / √(log n)`; either set-up may be used.
    SizeBounded,
    /// Requires `|I_h| ≤ √n / log n`, so only the few-heavy set-up runs.
    FewHeavy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BuildOptions {
    pub mode: Mode,
    pub tie_order: TieOrder,
    pub max_w_attempts: u32,
    /// Which `s(u, W, v)` the sampling check uses.
    pub w_variant: BetweenVariant,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            mode: Mode::Auto,
            tie_order: TieOrder::Ascending,
            max_w_attempts: 64,
            w_variant: BetweenVariant::Literal,
        }
    }
}

/// Phase thresholds and stop rules shared by build and replay.
pub(crate) struct PhasePlan<R> {
    pub threshold: R,
    pub stop_below: R,
}

impl<R: Real> PhasePlan<R> {
    /// Phase `j ≥ 1` starting from a container of size `prev`.
    pub fn new(params: &ProblemParams<R>, j: usize, prev: usize) -> Self {
        if j == 1 {
            PhasePlan { threshold: params.g_low, stop_below: params.phase_one_stop() }
        } else {
            PhasePlan { threshold: params.g_mid, stop_below: R::size(prev) / R::lit(2.0) }
        }
    }

    pub fn stop(&self, size: usize) -> bool {
        R::size(size) < self.stop_below
    }
}

/// Builds the certificate and container chain for an already cleaned `I`.
///
/// `certificate.removed` is left empty; [`certify`] fills it in.
pub fn build_certificate<R: Real>(
    set: &IntSet,
    params: &ProblemParams<R>,
    seed: u64,
    options: &BuildOptions,
) -> Result<(Certificate, ContainerChain)> {
    let n = params.n;
    set.check_within(n)?;
    let rank = options.tie_order.ranks(n)?;
    if let Some((v, s)) = vertex_stats(set).iter().find(|&(_, s)| R::count(s) >= params.g_mid) {
        return Err(Error::Argument(format!(
            "s_I({v}) = {s} is not below {}; clean I first",
            params.g_mid
        )));
    }
    let heavy = heavy_vertices(set, params.g_low)?;
    let few_heavy = R::size(heavy.len()) <= params.size_small;
    match options.mode {
        Mode::SizeBounded if R::size(set.len()) < params.size_big => {
            return Err(Error::Argument(format!(
                "|I| = {} is below {}",
                set.len(),
                params.size_big
            )));
        }
        Mode::FewHeavy if !few_heavy => {
            return Err(Error::Argument(format!(
                "|I_h| = {} exceeds {}",
                heavy.len(),
                params.size_small
            )));
        }
        _ => {}
    }

    let (case_tag, r0, w) = if few_heavy {
        (CaseTag::FewHeavy, heavy, None)
    } else {
        let (report, attempt) = select_w(set, params, seed, options.max_w_attempts, options.w_variant)?;
        log::debug!("W accepted on attempt {attempt}");
        (CaseTag::Sampled, report.s_of_w, Some(report.w))
    };

    let c0 = IntSet::interval(n).difference(&r0);
    let mut r = vec![r0];
    let mut u = Vec::new();
    let mut c = vec![c0];

    // Phase 1.
    let first = &c[0];
    if R::size(first.intersection(set).len()) >= params.size_small {
        let u0 = match w {
            Some(w) => w,
            None => first.intersection(set).smallest(params.u0_size()),
        };
        let plan = PhasePlan::new(params, 1, first.len());
        let out = run_core(n, first, set, &u0, plan.threshold, |s| plan.stop(s), &rank, false)?;
        r.push(out.state.selected);
        c.push(out.state.available);
        u.push(u0);

        // Phases j ≥ 2.
        loop {
            let prev = c.last().expect("nonempty");
            let inside = prev.intersection(set);
            let aux = params.aux_size(prev.len());
            if prev.is_empty()
                || R::size(inside.len()) < aux
                || R::size(prev.len()) <= params.small_container()
            {
                break;
            }
            let uj = inside.smallest(ceil_size(aux));
            let plan = PhasePlan::new(params, r.len(), prev.len());
            let out = run_core(n, prev, set, &uj, plan.threshold, |s| plan.stop(s), &rank, false)?;
            r.push(out.state.selected);
            c.push(out.state.available);
            u.push(uj);
        }
    }

    let cert = Certificate {
        n,
        alpha: params.alpha,
        case_tag,
        tie_order: options.tie_order.clone(),
        removed: IntSet::empty(),
        phases: r.len() - 1,
        r,
        u,
        seed,
    };
    Ok((cert, ContainerChain { c }))
}

/// Cleans `I` with threshold `√n / log³ n`, then builds the certificate.
///
/// Returns the certificate (with `removed` set), its chain, and `I′`.
pub fn certify<R: Real>(
    set: &IntSet,
    params: &ProblemParams<R>,
    seed: u64,
    options: &BuildOptions,
) -> Result<(Certificate, ContainerChain, IntSet)> {
    set.check_within(params.n)?;
    let (cleaned, removed) = clean_heavy(set, params.g_mid)?;
    let (mut cert, chain) = build_certificate(&cleaned, params, seed, options)?;
    cert.removed = removed;
    Ok((cert, chain, cleaned))
}
