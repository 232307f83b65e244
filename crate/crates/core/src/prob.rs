//! Random subsets `W ⊆ I`, the checks they must pass, and the Janson bound.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result, WCondition};
use crate::multigraph::DifferenceTable;
use crate::num::Real;
use crate::params::ProblemParams;
use crate::set::IntSet;
use crate::tuples::{enumerate_tuples, s_restricted_unchecked, vertex_stats, BetweenVariant};

/// Includes each element of `I` independently with probability
/// `2 / √(log n)`, driven by ChaCha8 seeded with `seed` on stream 0.
pub fn sample_w<R: Real>(set: &IntSet, params: &ProblemParams<R>, seed: u64) -> Result<IntSet> {
    sample_w_stream(set, params, seed, 0)
}

/// [`sample_w`] on an explicit ChaCha stream, so resamples stay independent
/// yet reproducible from a single seed.
pub fn sample_w_stream<R: Real>(
    set: &IntSet,
    params: &ProblemParams<R>,
    seed: u64,
    stream: u64,
) -> Result<IntSet> {
    let p = params.w_probability().as_f64();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!(
            "inclusion probability {p:.4} exceeds 1 at n = {}; need n >= 16",
            params.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let picked = set.iter().filter(|_| rng.gen::<f64>() < p).collect();
    Ok(IntSet::from_sorted_unchecked(picked))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WSampleReport<R> {
    #[serde(rename = "W")]
    pub w: IntSet,
    /// `|W| ≥ √n / log n`.
    pub size_ok: bool,
    /// `max s(u, W, v) ≤ 8√n / log⁴ n`.
    pub multiplicity_ok: bool,
    /// `|S(W)| ≤ 16√n / log n`.
    pub heavy_ok: bool,
    #[serde(rename = "S_of_W")]
    pub s_of_w: IntSet,
    pub max_s_uv: u64,
    /// First ordered pair `(u, v)` attaining `max_s_uv`.
    pub argmax: Option<(u32, u32)>,
    pub variant: BetweenVariant,
    pub size_threshold: R,
    pub multiplicity_cap: R,
    /// Vertices with `s_{I,W}(v)` strictly above this enter `S(W)`.
    pub heavy_threshold: R,
    pub heavy_cap: R,
}

impl<R> WSampleReport<R> {
    pub fn accepted(&self) -> bool {
        self.size_ok && self.multiplicity_ok && self.heavy_ok
    }

    pub fn failed(&self) -> Vec<WCondition> {
        let mut out = Vec::new();
        if !self.size_ok {
            out.push(WCondition::Size);
        }
        if !self.heavy_ok {
            out.push(WCondition::HeavySet);
        }
        if !self.multiplicity_ok {
            out.push(WCondition::Multiplicity);
        }
        out
    }
}

/// `S(W) = {v ∈ I : s_{I,W}(v) > threshold}`.
pub fn heavy_for_w<R: Real>(set: &IntSet, w: &IntSet, threshold: R) -> IntSet {
    let picked = set
        .iter()
        .filter(|&v| R::count(s_restricted_unchecked(set, w, v)) > threshold)
        .collect();
    IntSet::from_sorted_unchecked(picked)
}

/// Evaluates the three sampling requirements for `W` exactly, with the
/// literal `s(u, W, v)`.
pub fn check_w<R: Real>(set: &IntSet, w: &IntSet, params: &ProblemParams<R>) -> Result<WSampleReport<R>> {
    check_w_with(set, w, params, BetweenVariant::Literal)
}

pub fn check_w_with<R: Real>(
    set: &IntSet,
    w: &IntSet,
    params: &ProblemParams<R>,
    variant: BetweenVariant,
) -> Result<WSampleReport<R>> {
    if !w.is_subset(set) {
        return Err(Error::Argument("W must be a subset of I".into()));
    }
    // s(u, W, v) = D_W(|u − v|), less one for (a, b) = (v, u) when disjoint.
    let table = DifferenceTable::new(w);
    let xs = set.as_slice();
    let (mut best, mut argmax) = (0u64, None);
    for &u in xs {
        for &v in xs {
            if u == v {
                continue;
            }
            let mut s = table.count(u.abs_diff(v)) as u64;
            if variant == BetweenVariant::Disjoint && s > 0 && w.contains(u) && w.contains(v) {
                s -= 1;
            }
            if argmax.is_none() || s > best {
                best = s;
                argmax = Some((u, v));
            }
        }
    }
    let s_of_w = heavy_for_w(set, w, params.g_low);
    let multiplicity_cap = params.w_multiplicity_cap();
    let heavy_cap = params.r0_bound();
    Ok(WSampleReport {
        w: w.clone(),
        size_ok: R::size(w.len()) >= params.size_small,
        multiplicity_ok: R::count(best) <= multiplicity_cap,
        heavy_ok: R::size(s_of_w.len()) <= heavy_cap,
        s_of_w,
        max_s_uv: best,
        argmax,
        variant,
        size_threshold: params.size_small,
        multiplicity_cap,
        heavy_threshold: params.g_low,
        heavy_cap,
    })
}

/// Resamples `W` until it passes every check, trying streams
/// `0..max_attempts`. Samples are trimmed to their `⌈√n / log n⌉` smallest
/// elements before checking.
pub fn select_w<R: Real>(
    set: &IntSet,
    params: &ProblemParams<R>,
    seed: u64,
    max_attempts: u32,
    variant: BetweenVariant,
) -> Result<(WSampleReport<R>, u32)> {
    let want = params.u0_size();
    let mut failed = vec![WCondition::Size];
    for attempt in 0..max_attempts {
        let w = sample_w_stream(set, params, seed, attempt as u64)?;
        if w.len() < want {
            log::debug!("W attempt {attempt}: |W| = {} < {want}", w.len());
            failed = vec![WCondition::Size];
            continue;
        }
        let report = check_w_with(set, &w.smallest(want), params, variant)?;
        if report.accepted() {
            return Ok((report, attempt));
        }
        failed = report.failed();
        log::debug!("W attempt {attempt}: rejected for {failed:?}");
    }
    Err(Error::WFailure { attempts: max_attempts, failed })
}

/// `{v ∈ I : s_I(v) ≥ g}`.
pub fn heavy_vertices<R: Real>(set: &IntSet, g: R) -> Result<IntSet> {
    if g.is_nan() || g < R::zero() {
        return Err(Error::Argument(format!("heavy threshold must be nonnegative, got {g}")));
    }
    let stats = vertex_stats(set);
    let picked = stats.iter().filter(|&(_, s)| R::count(s) >= g).map(|(v, _)| v).collect();
    Ok(IntSet::from_sorted_unchecked(picked))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JansonInput<R> {
    pub expectation: R,
    pub t: R,
    pub delta1: R,
    pub family_size: u64,
}

/// `exp(−2t² / (Δ₁ |𝒜|))`, or 1 for an empty family.
pub fn janson_bound<R: Real>(input: &JansonInput<R>) -> Result<R> {
    let JansonInput { expectation, t, delta1, family_size } = *input;
    if [expectation, t].iter().any(|x| x.is_nan() || *x < R::zero()) {
        return Err(Error::Argument("expectation and t must be nonnegative".into()));
    }
    if delta1.is_nan() || delta1 < R::one() {
        return Err(Error::Argument(format!("delta1 must be at least 1, got {delta1}")));
    }
    if family_size == 0 {
        log::warn!("janson_bound on an empty family; returning the vacuous bound 1");
        return Ok(R::one());
    }
    let two = R::lit(2.0);
    Ok((-(two * t * t) / (delta1 * R::count(family_size))).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase", tag = "mode")]
pub enum DependencyMode {
    /// Pairs `(a, b)` with `(u, a, b, v)` counted by `s(u, I, v)`, adjacent
    /// when `{a, b}` meet.
    TupleOverlap { u: u32, v: u32 },
    /// All ordered tuples of `I`, adjacent when their middle pairs meet.
    MiddleOverlap,
}

/// `Δ(Γ) + 1` for the dependency graph selected by `mode`.
pub fn dependency_degree(set: &IntSet, mode: DependencyMode) -> Result<u64> {
    // Each vertex is a middle pair; its degree is the number of other
    // vertices sharing an element with it.
    let middles: Vec<(u32, u32)> = match mode {
        DependencyMode::TupleOverlap { u, v } => {
            if u == v {
                return Err(Error::Argument("tuple_overlap needs u != v".into()));
            }
            let shift = u as i64 - v as i64;
            set.iter()
                .filter_map(|a| {
                    let b = a as i64 + shift;
                    (b > 0 && set.contains(b as u32)).then_some((a, b as u32))
                })
                .collect()
        }
        DependencyMode::MiddleOverlap => enumerate_tuples(set).iter().map(|t| (t.b, t.c)).collect(),
    };
    let mut by_elem: HashMap<u32, u64> = HashMap::new();
    let mut by_pair: HashMap<(u32, u32), u64> = HashMap::new();
    for &(b, c) in &middles {
        *by_elem.entry(b).or_default() += 1;
        if c != b {
            *by_elem.entry(c).or_default() += 1;
        }
        *by_pair.entry((b.min(c), b.max(c))).or_default() += 1;
    }
    let delta = middles
        .iter()
        .map(|&(b, c)| {
            if b == c {
                by_elem[&b] - 1
            } else {
                by_elem[&b] + by_elem[&c] - by_pair[&(b.min(c), b.max(c))] - 1
            }
        })
        .max()
        .unwrap_or(0);
    Ok(delta + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_set;
    use crate::tuples::{count_sidon_tuples, s_between, s_restricted, SidonTuple};

    fn params(n: u32) -> ProblemParams<f64> {
        ProblemParams::new(n, 0).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = params(4096);
        let set = IntSet::interval(300);
        assert_eq!(sample_w(&set, &p, 9).unwrap(), sample_w(&set, &p, 9).unwrap());
        assert_ne!(sample_w_stream(&set, &p, 9, 0).unwrap(), sample_w_stream(&set, &p, 9, 1).unwrap());
        assert!(sample_w(&IntSet::empty(), &p, 1).unwrap().is_empty());
        assert!(sample_w(&set, &params(8), 1).is_err());
    }

    #[test]
    fn mean_sample_size() {
        let p = params(65536);
        let set = IntSet::interval(64);
        let seeds = 10_000u64;
        let total: usize = (0..seeds).map(|s| sample_w(&set, &p, s).unwrap().len()).sum();
        let mean = total as f64 / seeds as f64;
        assert!((mean - 32.0).abs() < 0.05 * 32.0, "mean {mean}");
    }

    #[test]
    fn inclusion_frequency() {
        let p = params(65536);
        let set = IntSet::interval(20);
        let seeds = 10_000u64;
        let mut hits = [0u32; 20];
        for s in 0..seeds {
            for x in sample_w(&set, &p, s).unwrap().iter() {
                hits[x as usize - 1] += 1;
            }
        }
        let se = (0.5 * 0.5 / seeds as f64).sqrt();
        for h in hits {
            assert!((h as f64 / seeds as f64 - 0.5).abs() < 3.0 * se + 1e-3);
        }
    }

    #[test]
    fn check_w_examples() {
        let p = ProblemParams::<f64>::new(4, 0).unwrap();
        let full = int_set![1, 2, 3, 4];
        let r = check_w(&full, &full, &p).unwrap();
        assert!(r.s_of_w.contains(1));
        assert!((r.heavy_threshold - 0.125).abs() < 1e-12);

        let p = params(4096);
        let r = check_w(&full, &IntSet::empty(), &p).unwrap();
        assert_eq!(r.max_s_uv, 0);
        assert!(r.multiplicity_ok && !r.size_ok);

        let sidon = int_set![1, 2, 5, 11, 13];
        let r = check_w_with(&sidon, &sidon, &p, BetweenVariant::Disjoint).unwrap();
        assert!(r.s_of_w.is_empty() && r.heavy_ok && r.multiplicity_ok);
        assert_eq!(r.max_s_uv, 0);
        // the literal count keeps (a, b) = (v, u), so every difference of I shows up once
        let r = check_w(&sidon, &sidon, &p).unwrap();
        assert!(r.s_of_w.is_empty() && r.heavy_ok);
        assert_eq!(r.max_s_uv, 1);
        assert!(check_w(&sidon, &int_set![3], &p).is_err());
    }

    fn brute_report(set: &IntSet, w: &IntSet, g: f64, variant: BetweenVariant) -> (u64, IntSet) {
        let mut best = 0;
        for u in set.iter() {
            for v in set.iter().filter(|&v| v != u) {
                best = best.max(s_between(u, w, v, variant).unwrap());
            }
        }
        let heavy = set
            .iter()
            .filter(|&v| {
                let mut c = 0u64;
                for a in set.iter() {
                    for b in w.iter() {
                        for cc in w.iter() {
                            for d in set.iter() {
                                let t = SidonTuple { a, b, c: cc, d };
                                if t.is_valid() && (a == v || d == v) {
                                    c += 1;
                                }
                            }
                        }
                    }
                }
                c as f64 > g
            })
            .collect();
        (best, IntSet::new(heavy).unwrap())
    }

    #[test]
    fn check_w_matches_brute_force() {
        let p = ProblemParams::<f64>::with_thresholds(64, 0, 1.5, 2.0, 3.0, 4.0).unwrap();
        for mask in (1u64..(1 << 12)).step_by(37) {
            let set = IntSet::from_mask(mask);
            for wmask in [mask & 0x555, mask & 0xF0F, mask] {
                let w = IntSet::from_mask(wmask);
                for variant in [BetweenVariant::Literal, BetweenVariant::Disjoint] {
                    let r = check_w_with(&set, &w, &p, variant).unwrap();
                    let (best, heavy) = brute_report(&set, &w, 1.5, variant);
                    assert_eq!(r.max_s_uv, best, "{set} {w}");
                    assert_eq!(r.s_of_w, heavy, "{set} {w}");
                    if let Some((u, v)) = r.argmax {
                        assert_eq!(s_between(u, &w, v, variant).unwrap(), best);
                    }
                }
            }
        }
    }

    #[test]
    fn heavy_vertices_examples() {
        let full = int_set![1, 2, 3, 4];
        assert_eq!(heavy_vertices(&full, 13.0).unwrap(), int_set![2, 3]);
        assert_eq!(heavy_vertices(&full, 0.0).unwrap(), full);
        assert!(heavy_vertices(&int_set![1, 2, 5, 11], 0.5).unwrap().is_empty());
        assert!(heavy_vertices(&full, -1.0).is_err());
    }

    #[test]
    fn janson_examples() {
        let j = |e: f64, t: f64, d: f64, f: u64| {
            janson_bound(&JansonInput { expectation: e, t, delta1: d, family_size: f }).unwrap()
        };
        assert_eq!(j(3.0, 0.0, 3.0, 10), 1.0);
        assert!((j(10.0, 5.0, 3.0, 100) - (-1.0f64 / 6.0).exp()).abs() < 1e-15);
        assert_eq!(j(0.0, 1.0, 1.0, 0), 1.0);
        assert!(j(1.0, 2.0, 3.0, 10) <= j(1.0, 1.0, 3.0, 10));
        assert!(j(1.0, 2.0, 3.0, 10) <= j(1.0, 2.0, 4.0, 10));
        assert!(j(1.0, 2.0, 3.0, 10) <= j(1.0, 2.0, 3.0, 11));
        assert!(janson_bound(&JansonInput { expectation: 1.0, t: 1.0, delta1: 0.5, family_size: 1 }).is_err());
    }

    #[test]
    fn janson_reproduces_multiplicity_tail() {
        // |𝒜| = μ/p², Δ₁ = 3, t = μ.
        let p = params(1 << 20);
        let prob = p.w_probability();
        let mu = 8.0 * p.g_low;
        let family = (mu / (prob * prob)).round();
        let mu = family * prob * prob;
        let b = janson_bound(&JansonInput { expectation: mu, t: mu, delta1: 3.0, family_size: family as u64 }).unwrap();
        let want = (-2.0 * mu / (3.0 * prob * prob)).exp();
        assert!((b - want).abs() <= 1e-12 * want.max(1e-300));
        let sqrt_n = 1024.0f64;
        let lg4 = 20f64.powi(4);
        let tail = (-16.0 * sqrt_n / (3.0 * lg4)).exp();
        let at_cap = (-2.0 * (8.0 * sqrt_n / lg4) / 3.0).exp();
        assert!((tail - at_cap).abs() < 1e-15);
    }

    #[test]
    fn dependency_examples() {
        let sidon = int_set![1, 2, 5, 11];
        assert_eq!(dependency_degree(&sidon, DependencyMode::MiddleOverlap).unwrap(), 1);
        let three = int_set![1, 2, 3];
        assert_eq!(dependency_degree(&three, DependencyMode::TupleOverlap { u: 2, v: 1 }).unwrap(), 2);
        assert!(dependency_degree(&three, DependencyMode::TupleOverlap { u: 2, v: 2 }).is_err());
        let full = int_set![1, 2, 3, 4];
        let d = dependency_degree(&full, DependencyMode::MiddleOverlap).unwrap();
        let max_s = vertex_stats(&full).max_s();
        assert!(d <= 2 * max_s + 1);
    }

    fn brute_dependency(set: &IntSet) -> u64 {
        let ts = enumerate_tuples(set);
        let mut best = 0;
        for (i, x) in ts.iter().enumerate() {
            let deg = ts
                .iter()
                .enumerate()
                .filter(|&(j, y)| j != i && [y.b, y.c].iter().any(|e| *e == x.b || *e == x.c))
                .count() as u64;
            best = best.max(deg);
        }
        best + 1
    }

    #[test]
    fn dependency_matches_brute_force() {
        for mask in (0u64..(1 << 10)).step_by(3) {
            let set = IntSet::from_mask(mask);
            assert_eq!(
                dependency_degree(&set, DependencyMode::MiddleOverlap).unwrap(),
                brute_dependency(&set)
            );
            for u in set.iter() {
                for v in set.iter().filter(|&v| v != u) {
                    let d = dependency_degree(&set, DependencyMode::TupleOverlap { u, v }).unwrap();
                    assert!(d <= 3, "{set} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn tuple_family_is_quarter_degree_sum() {
        for mask in 0u64..(1 << 10) {
            let set = IntSet::from_mask(mask);
            if crate::tuples::tuple_counts(&set).degenerate > 0 {
                continue;
            }
            let sum = vertex_stats(&set).degree_sum();
            assert_eq!(4 * count_sidon_tuples(&set), sum);
            let inner: u64 = set.iter().map(|v| s_restricted(&set, &set, v).unwrap()).sum();
            assert_eq!(2 * inner, sum);
        }
    }

    #[test]
    fn select_w_fails_loudly_at_small_n() {
        let p = params(4096);
        let err = select_w(&int_set![1, 2], &p, 1, 4, BetweenVariant::Literal).unwrap_err();
        assert!(matches!(err, Error::WFailure { attempts: 4, .. }));
    }
}
