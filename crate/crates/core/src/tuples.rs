//! Sidon 4-tuples: exact counting, per-vertex statistics and the `s(·)`
//! family of restricted counts.
//!
//! A Sidon 4-tuple in `A` is an ordered `(a, b, c, d) ∈ A⁴` with
//! `a + b = c + d` and `{a, b} ∩ {c, d} = ∅`. Counts are over ordered
//! tuples: a quadruple with four distinct values appears 8 times, one with
//! `a = b` appears 4 times.
//!
//! For a sum `σ` let `r(σ)` be the number of ordered pairs `(x, y) ∈ A²` with
//! `x + y = σ`. Distinct unordered pairs with the same sum are disjoint, so
//! the ordered tuple count is `Σ_σ r(σ)² − Σ_{pairs} w²`, where `w` is 2 for
//! `x ≠ y` and 1 for `x = y`. That collapses to `Σ r(σ)² − 2m² + m`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::IntSet;

/// An ordered 4-tuple `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SidonTuple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl SidonTuple {
    /// Returns the tuple if `a + b = c + d` and `{a, b} ∩ {c, d} = ∅`.
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Option<Self> {
        let t = SidonTuple { a, b, c, d };
        t.is_valid().then_some(t)
    }

    pub fn is_valid(&self) -> bool {
        let SidonTuple { a, b, c, d } = *self;
        a as u64 + b as u64 == c as u64 + d as u64 && a != c && a != d && b != c && b != d
    }

    /// `a = b` or `c = d` (a three-term progression).
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b || self.c == self.d
    }

    pub fn contains(&self, v: u32) -> bool {
        self.a == v || self.b == v || self.c == v || self.d == v
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// `r(σ)` for every `σ ∈ [0, 2·max A]`.
pub fn pair_sum_counts(set: &IntSet) -> Vec<u32> {
    let top = set.largest().unwrap_or(0) as usize;
    let mut r = vec![0u32; 2 * top + 1];
    let xs = set.as_slice();
    for (i, &x) in xs.iter().enumerate() {
        r[2 * x as usize] += 1;
        for &y in &xs[i + 1..] {
            r[(x + y) as usize] += 2;
        }
    }
    r
}

/// Ordered count of Sidon 4-tuples in `set`, in `O(|A|² + max A)`.
pub fn count_sidon_tuples(set: &IntSet) -> u64 {
    let m = set.len() as u64;
    if m < 2 {
        return 0;
    }
    let r = pair_sum_counts(set);
    let squares: u64 = r.iter().map(|&x| (x as u64) * (x as u64)).sum();
    squares + m - 2 * m * m
}

/// Ordered and orbit counts side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TupleCounts {
    pub ordered: u64,
    /// Orbits under the swaps `a ↔ b`, `c ↔ d`, `(a,b) ↔ (c,d)`:
    /// one per unordered pair of equal-sum pairs.
    pub essential: u64,
    /// Ordered tuples with `a = b` or `c = d`.
    pub degenerate: u64,
}

pub fn tuple_counts(set: &IntSet) -> TupleCounts {
    let top = set.largest().unwrap_or(0) as usize;
    // per sum: (unordered pairs, unordered pairs of the form {x, x})
    let mut pairs = vec![0u64; 2 * top + 1];
    let mut doubles = vec![0u64; 2 * top + 1];
    let xs = set.as_slice();
    for (i, &x) in xs.iter().enumerate() {
        pairs[2 * x as usize] += 1;
        doubles[2 * x as usize] += 1;
        for &y in &xs[i + 1..] {
            pairs[(x + y) as usize] += 1;
        }
    }
    let mut essential = 0;
    let mut degenerate = 0;
    for (k, d) in pairs.iter().zip(&doubles) {
        essential += k * k.saturating_sub(1) / 2;
        // a doubled pair {x,x} against any of the other k-1 pairs, which are proper
        degenerate += d * k.saturating_sub(1) * 4;
    }
    TupleCounts { ordered: count_sidon_tuples(set), essential, degenerate }
}

/// `count_sidon_tuples(set) == 0`, with early exit on the first repeated sum.
pub fn is_sidon(set: &IntSet) -> bool {
    let top = set.largest().unwrap_or(0) as usize;
    let mut seen = vec![false; 2 * top + 1];
    let xs = set.as_slice();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i..] {
            let s = (x + y) as usize;
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    true
}

/// All ordered Sidon 4-tuples of `set`, grouped by sum, lexicographic within.
pub fn enumerate_tuples(set: &IntSet) -> Vec<SidonTuple> {
    let top = set.largest().unwrap_or(0) as usize;
    let mut by_sum: Vec<Vec<(u32, u32)>> = vec![Vec::new(); 2 * top + 1];
    let xs = set.as_slice();
    for &x in xs {
        for &y in xs {
            by_sum[(x + y) as usize].push((x, y));
        }
    }
    let mut out = Vec::new();
    for group in by_sum.iter().filter(|g| g.len() > 1) {
        for &(a, b) in group {
            for &(c, d) in group {
                if a != c && a != d {
                    out.push(SidonTuple { a, b, c, d });
                }
            }
        }
    }
    out
}

/// Per-vertex tuple counts `s_A(v)` for a fixed owner set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStats {
    owner: IntSet,
    per_vertex: Vec<u64>,
    total: u64,
    essential: u64,
}

impl VertexStats {
    pub fn owner(&self) -> &IntSet {
        &self.owner
    }

    /// `s_A(v)`; zero for `v ∉ A`.
    pub fn s(&self, v: u32) -> u64 {
        self.owner
            .as_slice()
            .binary_search(&v)
            .map(|i| self.per_vertex[i])
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn essential(&self) -> u64 {
        self.essential
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.owner.iter().zip(self.per_vertex.iter().copied())
    }

    pub fn max_s(&self) -> u64 {
        self.per_vertex.iter().copied().max().unwrap_or(0)
    }

    pub fn degree_sum(&self) -> u64 {
        self.per_vertex.iter().sum()
    }

    pub fn report(&self, n: u32) -> StatsReport {
        StatsReport {
            n,
            set_size: self.owner.len(),
            ordered_count: self.total,
            essential_count: self.essential,
            per_vertex: self.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatsReport {
    pub n: u32,
    pub set_size: usize,
    pub ordered_count: u64,
    pub essential_count: u64,
    pub per_vertex: BTreeMap<u32, u64>,
}

/// Computes `s_A(v)` for every `v ∈ A`.
///
/// Each `v` lies in exactly one pair per sum, `{v, x}` with weight `w`, and
/// the ordered tuples containing `v` at that sum number `2·w·(r(v+x) − w)`.
pub fn vertex_stats(set: &IntSet) -> VertexStats {
    let r = pair_sum_counts(set);
    let xs = set.as_slice();
    let per_vertex = xs
        .iter()
        .map(|&v| {
            xs.iter()
                .map(|&x| {
                    let w: u64 = if x == v { 1 } else { 2 };
                    2 * w * (r[(v + x) as usize] as u64 - w)
                })
                .sum()
        })
        .collect();
    let counts = tuple_counts(set);
    VertexStats {
        owner: set.clone(),
        per_vertex,
        total: counts.ordered,
        essential: counts.essential,
    }
}

/// Whether `s(u, A, v)` also requires `(u, a, b, v)` to be a Sidon 4-tuple.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BetweenVariant {
    /// `|{(a, b) ∈ A² : u + a = b + v}|` with no disjointness requirement.
    #[default]
    Literal,
    /// Additionally `{u, a} ∩ {b, v} = ∅`, which only drops `(a, b) = (v, u)`.
    Disjoint,
}

/// `s(u, A, v)`: ordered pairs `(a, b) ∈ A²` with `u + a = b + v`.
pub fn s_between(u: u32, set: &IntSet, v: u32, variant: BetweenVariant) -> Result<u64> {
    if u == v {
        return Err(Error::Argument(format!("s(u, A, v) needs u != v, got u = v = {u}")));
    }
    // b = a + (u - v)
    let shift = u as i64 - v as i64;
    let mut count = 0u64;
    for a in set.iter() {
        let b = a as i64 + shift;
        if b > 0 && set.contains(b as u32) {
            if variant == BetweenVariant::Disjoint && a == v {
                continue;
            }
            count += 1;
        }
    }
    Ok(count)
}

/// `s_{A,B}(v)`: ordered tuples `(a, b, c, d)` of `A` with `v ∈ {a, d}` and
/// `b, c ∈ B`.
pub fn s_restricted(set: &IntSet, inner: &IntSet, v: u32) -> Result<u64> {
    if !inner.is_subset(set) {
        return Err(Error::Argument("s_{A,B}(v) needs B to be a subset of A".into()));
    }
    if !set.contains(v) {
        return Err(Error::Argument(format!("{v} is not an element of A")));
    }
    Ok(s_restricted_unchecked(set, inner, v))
}

/// [`s_restricted`] without the membership checks.
pub(crate) fn s_restricted_unchecked(set: &IntSet, inner: &IntSet, v: u32) -> u64 {
    let v = v as i64;
    let mut count = 0u64;
    for b in inner.iter().map(i64::from) {
        for c in inner.iter().map(i64::from) {
            if b == c {
                continue;
            }
            // (v, b, c, d) with d = v + b - c; needs c != v (then d != b).
            if c != v {
                let d = v + b - c;
                if d > 0 && set.contains(d as u32) {
                    count += 1;
                }
            }
            // (a, b, c, v) with a = c + v - b; needs b != v (then a != c).
            if b != v {
                let a = c + v - b;
                if a > 0 && set.contains(a as u32) {
                    count += 1;
                }
            }
        }
    }
    count
}
