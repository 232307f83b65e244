use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ceil_size, Real};

/// Ground-set size, tuple budget, and the `√n / logᵏ n` threshold family.
///
/// All logarithms are base 2. `alpha` is a budget on the ordered tuple count
/// (see [`crate::tuples::count_sidon_tuples`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProblemParams<R> {
    pub n: u32,
    pub alpha: u64,
    /// `√n / log⁴ n`: light/heavy split and the Phase 1 prune threshold.
    pub g_low: R,
    /// `√n / log³ n`: cleaning threshold and the later-phase prune threshold.
    pub g_mid: R,
    /// `√n / log n`.
    pub size_small: R,
    /// `√n / √(log n)`.
    pub size_big: R,
}

impl<R: Real> ProblemParams<R> {
    /// Derives every threshold from `n`. Requires `log₂ n > 1`, i.e. `n ≥ 3`.
    pub fn new(n: u32, alpha: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument(format!(
                "n = {n}: thresholds need log2(n) > 1, so n >= 3"
            )));
        }
        let nr = R::count(n as u64);
        let sqrt_n = nr.sqrt();
        let lg = nr.log2();
        Ok(ProblemParams {
            n,
            alpha,
            g_low: sqrt_n / lg.powi(4),
            g_mid: sqrt_n / lg.powi(3),
            size_small: sqrt_n / lg,
            size_big: sqrt_n / lg.sqrt(),
        })
    }

    /// Overrides the derived thresholds. Used to exercise code paths that only
    /// occur at astronomically large `n` with the standard family.
    pub fn with_thresholds(
        n: u32,
        alpha: u64,
        g_low: R,
        g_mid: R,
        size_small: R,
        size_big: R,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument(format!("n = {n} must be at least 3")));
        }
        let all_positive = [g_low, g_mid, size_small, size_big]
            .iter()
            .all(|&x| x > R::zero() && x.is_finite());
        if !all_positive {
            return Err(Error::Argument("thresholds must be positive and finite".into()));
        }
        if g_low >= g_mid {
            return Err(Error::Argument("g_low must be below g_mid".into()));
        }
        Ok(ProblemParams { n, alpha, g_low, g_mid, size_small, size_big })
    }

    #[inline]
    pub fn n_real(&self) -> R {
        R::count(self.n as u64)
    }

    #[inline]
    pub fn sqrt_n(&self) -> R {
        self.n_real().sqrt()
    }

    #[inline]
    pub fn log_n(&self) -> R {
        self.n_real().log2()
    }

    /// Phase 1 stops at the first `A` with `|A| < 6√n log n`.
    pub fn phase_one_stop(&self) -> R {
        R::lit(6.0) * self.sqrt_n() * self.log_n()
    }

    /// Containers of size at most `12√n` end the construction.
    pub fn small_container(&self) -> R {
        R::lit(12.0) * self.sqrt_n()
    }

    /// `12n / |C|`, the auxiliary-set size for a container of size `c`.
    pub fn aux_size(&self, c: usize) -> R {
        R::lit(12.0) * self.n_real() / R::size(c)
    }

    /// Required `|U₀|` (rounded up).
    pub fn u0_size(&self) -> usize {
        ceil_size(self.size_small)
    }

    /// `|R₀|` bound, `16√n / log n`.
    pub fn r0_bound(&self) -> R {
        R::lit(16.0) * self.size_small
    }

    /// `|R_i|` bound for `i ≥ 1`: `108√n/log n` for `i = 1`, otherwise
    /// `12√n / (2^{2i−4} log n)`.
    pub fn r_bound(&self, i: usize) -> R {
        if i == 1 {
            R::lit(108.0) * self.size_small
        } else {
            let shift = R::lit(2.0).powi(2 * i as i32 - 4);
            R::lit(12.0) * self.size_small / shift
        }
    }

    /// `8√n / log⁴ n`, the cap on `s(u, W, v)` for an accepted sample.
    pub fn w_multiplicity_cap(&self) -> R {
        R::lit(8.0) * self.g_low
    }

    /// Inclusion probability `2 / √(log n)` for `W`.
    pub fn w_probability(&self) -> R {
        R::lit(2.0) / self.log_n().sqrt()
    }

    /// Upper bound on the phase count: `log log n + 1`.
    pub fn phase_limit(&self) -> R {
        self.log_n().log2() + R::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn rejects_small_n() {
        assert!(ProblemParams::<f64>::new(2, 0).is_err());
        assert!(ProblemParams::<f64>::new(1, 0).is_err());
        assert!(ProblemParams::<f64>::new(3, 0).is_ok());
    }

    #[test]
    fn thresholds_at_4096() {
        let p = ProblemParams::<f64>::new(4096, 0).unwrap();
        assert!(close(p.g_low, 64.0 / 20736.0));
        assert!(close(p.g_mid, 64.0 / 1728.0));
        assert!(close(p.size_small, 64.0 / 12.0));
        assert!(close(p.size_big, 64.0 / 12f64.sqrt()));
        assert_eq!(p.u0_size(), 6);
        assert!(close(p.phase_one_stop(), 4608.0));
        assert!(close(p.small_container(), 768.0));
        assert!(close(p.r_bound(2), 64.0));
        assert!(close(p.r_bound(3), 16.0));
        assert!(close(p.r_bound(1), 576.0));
    }

    #[test]
    fn ordered_family_for_every_valid_n() {
        for n in 3..5000u32 {
            let p = ProblemParams::<f64>::new(n, 0).unwrap();
            assert!(p.g_low > 0.0 && p.g_low < p.g_mid, "n = {n}");
        }
    }

    #[test]
    fn generic_over_f32() {
        let p = ProblemParams::<f32>::new(65536, 0).unwrap();
        assert!((p.size_small - 16.0).abs() < 1e-5);
        assert!((p.w_probability() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn custom_thresholds_validated() {
        assert!(ProblemParams::<f64>::with_thresholds(100, 0, 2.0, 1.0, 1.0, 1.0).is_err());
        assert!(ProblemParams::<f64>::with_thresholds(100, 0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ProblemParams::<f64>::with_thresholds(100, 0, 1.0, 2.0, 3.0, 4.0).is_ok());
    }
}
