//! Log-gamma and base-2 log binomials for real arguments.

use crate::num::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, `g = 7`).
pub fn ln_gamma<R: Real>(x: R) -> R {
    if x < R::lit(0.5) {
        // Reflection.
        let pi = R::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(R::one() - x);
    }
    let x = x - R::one();
    let mut acc = R::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + R::lit(c) / (x + R::size(i));
    }
    let t = x + R::lit(LANCZOS_G + 0.5);
    R::lit(0.5) * (R::lit(2.0) * R::PI()).ln() + (x + R::lit(0.5)) * t.ln() - t + acc.ln()
}

/// `log₂ C(m, k)` for real `0 ≤ k ≤ m`; `None` when `k` is out of range.
pub fn log2_binomial<R: Real>(m: R, k: R) -> Option<R> {
    if k.is_nan() || m.is_nan() || k < R::zero() || k > m {
        return None;
    }
    if k == R::zero() || k == m {
        return Some(R::zero());
    }
    let one = R::one();
    Some((ln_gamma(m + one) - ln_gamma(k + one) - ln_gamma(m - k + one)) / R::LN_2())
}

/// `log₂ (2^a + 2^b)`.
pub fn log2_add<R: Real>(a: R, b: R) -> R {
    if a == R::neg_infinity() {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (R::one() + R::lit(2.0).powf(lo - hi)).log2()
}

/// `log₂ Σ_{i=0}^{k} C(m, i)` for integer `m`; `k` is clamped to `m`.
pub fn log2_binomial_sum<R: Real>(m: u64, k: u64) -> R {
    let k = k.min(m);
    let mut term = R::zero();
    let mut total = R::zero();
    for i in 0..k {
        term = term + (R::count(m - i) / R::count(i + 1)).log2();
        total = log2_add(total, term);
    }
    total
}
