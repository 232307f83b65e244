//! The multigraph `H^U(A)`.
//!
//! For `a₁ < a₂` in `A` the multiplicity of `a₁a₂` is the number of ordered
//! `(u₁, u₂) ∈ U²` with `(a₁, u₁, u₂, a₂)` a Sidon 4-tuple. Writing
//! `δ = a₂ − a₁`, the tuple forces `u₁ − u₂ = δ`, and disjointness reduces to
//! the single exclusion `(u₁, u₂) = (a₂, a₁)`. So
//!
//! ```text
//! mult(a₁, a₂) = D_U(δ) − [a₁ ∈ U and a₂ ∈ U]
//! ```
//!
//! where `D_U(δ)` counts ordered pairs of `U` at difference `δ`. Everything
//! here is built on that identity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::num::Real;
use crate::set::IntSet;

/// `D_U(δ)` for `δ ∈ [1, max U]`, plus a membership table for `U`.
#[derive(Debug, Clone)]
pub struct DifferenceTable {
    counts: Vec<u32>,
    member: Vec<bool>,
    /// Distinct positive differences of `U`, ascending.
    support: Vec<u32>,
}

impl DifferenceTable {
    pub fn new(u: &IntSet) -> Self {
        let top = u.largest().unwrap_or(0) as usize;
        let mut counts = vec![0u32; top + 1];
        let xs = u.as_slice();
        for (i, &x) in xs.iter().enumerate() {
            for &y in &xs[..i] {
                counts[(x - y) as usize] += 1;
            }
        }
        let support = (1..counts.len() as u32).filter(|&d| counts[d as usize] > 0).collect();
        DifferenceTable { counts, member: u.indicator(top as u32), support }
    }

    #[inline]
    pub fn count(&self, delta: u32) -> u32 {
        self.counts.get(delta as usize).copied().unwrap_or(0)
    }

    #[inline]
    fn in_u(&self, x: u32) -> bool {
        self.member.get(x as usize).copied().unwrap_or(false)
    }

    /// Edge multiplicity between two distinct vertices.
    #[inline]
    pub fn mult(&self, x: u32, y: u32) -> u32 {
        debug_assert_ne!(x, y);
        let delta = x.abs_diff(y);
        let base = self.count(delta);
        if base > 0 && self.in_u(x) && self.in_u(y) {
            base - 1
        } else {
            base
        }
    }

    /// Positive differences `δ` with `D_U(δ) > 0`. Only vertices at these
    /// distances can share an edge.
    pub fn support(&self) -> &[u32] {
        &self.support
    }
}

/// Sparse `H^U(A)`: only pairs with nonzero multiplicity are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadMultigraph {
    pub vertex_set: IntSet,
    pub u_set: IntSet,
    #[serde(serialize_with = "serialize_edges")]
    pub mult: BTreeMap<(u32, u32), u32>,
}

fn serialize_edges<S: serde::Serializer>(
    m: &BTreeMap<(u32, u32), u32>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (&(a, b), &k) in m {
        seq.serialize_element(&[a, b, k])?;
    }
    seq.end()
}

impl QuadMultigraph {
    /// Multiplicity of `{a₁, a₂}` (order-insensitive; zero if absent).
    pub fn multiplicity(&self, a1: u32, a2: u32) -> u32 {
        let key = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        self.mult.get(&key).copied().unwrap_or(0)
    }

    /// `e(H) = Σ mult`.
    pub fn edge_count(&self) -> u64 {
        self.mult.values().map(|&k| k as u64).sum()
    }

    pub fn degree(&self, v: u32) -> u64 {
        self.mult
            .iter()
            .filter(|((a, b), _)| *a == v || *b == v)
            .map(|(_, &k)| k as u64)
            .sum()
    }
}

/// Builds `H^U(A)` over all pairs of `A` via the difference table of `U`.
pub fn build_multigraph(a: &IntSet, u: &IntSet) -> QuadMultigraph {
    let table = DifferenceTable::new(u);
    let xs = a.as_slice();
    let mut mult = BTreeMap::new();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            let k = table.mult(x, y);
            if k > 0 {
                mult.insert((x, y), k);
            }
        }
    }
    QuadMultigraph { vertex_set: a.clone(), u_set: u.clone(), mult }
}

/// `e(H^U(A))` without materializing the graph:
/// `Σ_δ D_A(δ)·D_U(δ) − C(|A ∩ U|, 2)`.
pub fn edge_count(a: &IntSet, u: &IntSet) -> u64 {
    let da = DifferenceTable::new(a);
    let du = DifferenceTable::new(u);
    let raw: u64 = da
        .support()
        .iter()
        .map(|&d| da.count(d) as u64 * du.count(d) as u64)
        .sum();
    let common = a.intersection(u).len() as u64;
    raw - common * common.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupersaturationReport<R> {
    pub n: u32,
    pub set_size: usize,
    pub u_size: usize,
    pub edges: u64,
    /// `|A|²|U|² / (12n)`.
    pub bound: R,
    /// `|A|·|U| ≥ 6n`.
    pub precondition: bool,
    /// `e(H) > bound`.
    pub holds: bool,
}

/// Evaluates the supersaturation inequality `e(H^U(A)) > |A|²|U|²/(12n)`.
///
/// The inequality is a theorem whenever `|A|·|U| ≥ 6n`; debug builds assert it.
pub fn check_supersaturation<R: Real>(n: u32, a: &IntSet, u: &IntSet) -> Result<SupersaturationReport<R>> {
    a.check_within(n)?;
    u.check_within(n)?;
    let edges = edge_count(a, u);
    let (sa, su) = (a.len() as u64, u.len() as u64);
    let bound = R::count(sa * sa) * R::count(su * su) / (R::lit(12.0) * R::count(n as u64));
    let precondition = sa * su >= 6 * n as u64;
    let holds = R::count(edges) > bound;
    debug_assert!(
        !precondition || holds,
        "supersaturation violated: n={n} |A|={sa} |U|={su} e={edges}"
    );
    Ok(SupersaturationReport {
        n,
        set_size: a.len(),
        u_size: u.len(),
        edges,
        bound,
        precondition,
        holds,
    })
}
