use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` the exact counters accept unless told otherwise.
pub const DEFAULT_COUNT_CAP: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountResult {
    pub n: u32,
    pub alpha: u64,
    /// `|G_n(α)|`, including `∅`.
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    /// `log₂ count / √n`.
    pub exponent: f64,
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

/// Plain JSON number when it fits in `u64`, decimal string otherwise.
pub(crate) fn serialize_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(x) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

/// Depth-first extension by a new largest element, with the pair-sum
/// counts `r(σ)` kept incrementally.
struct Walker {
    n: u32,
    alpha: u64,
    r: Vec<u32>,
    elems: Vec<u32>,
}

impl Walker {
    fn new(n: u32, alpha: u64) -> Self {
        Walker { n, alpha, r: vec![0; 2 * n as usize + 1], elems: Vec::with_capacity(n as usize) }
    }

    /// New ordered tuples created by adding `x`.
    #[inline]
    fn delta(&self, x: u32) -> u64 {
        let cross: u64 = self.elems.iter().map(|&y| self.r[(x + y) as usize] as u64).sum();
        4 * cross + 2 * self.r[2 * x as usize] as u64
    }

    fn push(&mut self, x: u32) {
        for &y in &self.elems {
            self.r[(x + y) as usize] += 2;
        }
        self.r[2 * x as usize] += 1;
        self.elems.push(x);
    }

    fn pop(&mut self) {
        let x = self.elems.pop().expect("pop on empty walker");
        self.r[2 * x as usize] -= 1;
        for &y in &self.elems {
            self.r[(x + y) as usize] -= 2;
        }
    }

    /// Sets extending the current one (itself included).
    fn walk(&mut self, tuples: u64) -> u64 {
        let start = self.elems.last().map_or(1, |&m| m + 1);
        let mut total = 1;
        for x in start..=self.n {
            let next = tuples + self.delta(x);
            if next <= self.alpha {
                self.push(x);
                total += self.walk(next);
                self.pop();
            }
        }
        total
    }
}

/// `|Z_n|`: Sidon subsets of `[n]`, `∅` included.
pub fn count_sidon_sets(n: u32) -> Result<BigUint> {
    Ok(count_generalized(n, 0)?.count)
}

/// `|G_n(α)|` with the default cap.
pub fn count_generalized(n: u32, alpha: u64) -> Result<CountResult> {
    count_generalized_capped(n, alpha, DEFAULT_COUNT_CAP)
}

/// `|G_n(α)|`, refusing `n > cap`. Work is split over all two-element
/// prefixes and summed.
pub fn count_generalized_capped(n: u32, alpha: u64, cap: u32) -> Result<CountResult> {
    if n > cap {
        return Err(Error::CapExceeded { what: "exact enumeration", n, cap });
    }
    let start = Instant::now();
    let prefixes: Vec<(u32, u32)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let deep: u128 = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut w = Walker::new(n, alpha);
            w.push(a);
            w.push(b);
            w.walk(0) as u128
        })
        .sum();
    let count = BigUint::from(deep + 1 + n as u128);
    let exponent = if n == 0 { 0.0 } else { log2_big(&count) / (n as f64).sqrt() };
    Ok(CountResult { n, alpha, count, exponent, elapsed: start.elapsed() })
}

pub(crate) fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return (u64::try_from(x).expect("fits") as f64).log2();
    }
    let shift = bits - 52;
    let top = u64::try_from(x >> shift).expect("fits") as f64;
    top.log2() + shift as f64
}
