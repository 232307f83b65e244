use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::DifferenceTable;
use crate::num::Real;
use crate::set::IntSet;

use super::TieOrder;

/// Snapshot of `(A, T, t, round)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoreState {
    #[serde(rename = "A")]
    pub available: IntSet,
    #[serde(rename = "T")]
    pub selected: IntSet,
    /// Nonzero values of `t` only.
    pub t: BTreeMap<u32, u64>,
    pub round: usize,
}

/// One iteration of the core loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RoundLog {
    pub round: usize,
    pub vertex: u32,
    pub degree: u64,
    pub selected: bool,
    /// `Q`, ascending.
    pub pruned: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreOutcome {
    #[serde(rename = "final")]
    pub state: CoreState,
    pub trace: Vec<RoundLog>,
}

/// Incremental state for the max-degree peeling on `H^U(A)[A]`.
///
/// Degrees only ever decrease, so vertices sit in buckets keyed by degree
/// and the maximum is tracked by a pointer that only moves down.
pub struct CoreEngine<'r> {
    n: u32,
    table: DifferenceTable,
    in_a: Vec<bool>,
    in_i: Vec<bool>,
    deg: Vec<u64>,
    t: Vec<u64>,
    /// Largest `t` that is not pruned; `None` for an infinite threshold.
    cap: Option<u64>,
    rank: &'r [u32],
    buckets: Vec<BTreeSet<(u32, u32)>>,
    top: usize,
    size: usize,
    selected: Vec<u32>,
    round: usize,
}

impl<'r> CoreEngine<'r> {
    /// `rank` must come from [`TieOrder::ranks`] for the same `n`.
    pub fn new<R: Real>(
        n: u32,
        a0: &IntSet,
        oracle: &IntSet,
        u: &IntSet,
        t_threshold: R,
        rank: &'r [u32],
    ) -> Result<Self> {
        if t_threshold.is_nan() || t_threshold < R::zero() {
            return Err(Error::Argument(format!("t_threshold must be nonnegative, got {t_threshold}")));
        }
        for s in [a0, oracle, u] {
            s.check_within(n)?;
        }
        if rank.len() != n as usize + 1 {
            return Err(Error::Argument("tie ranks do not match n".into()));
        }
        let cap = if t_threshold.is_infinite() {
            None
        } else {
            Some(t_threshold.floor().to_u64().unwrap_or(u64::MAX))
        };
        let table = DifferenceTable::new(u);
        let in_a = a0.indicator(n);
        let in_u = u.indicator(n);
        let common = a0.iter().filter(|&v| in_u[v as usize]).count() as u64;
        let mut deg = vec![0u64; n as usize + 1];
        for v in a0.iter() {
            let mut d = 0u64;
            for &delta in table.support() {
                let k = table.count(delta) as u64;
                if v > delta && in_a[(v - delta) as usize] {
                    d += k;
                }
                if v + delta <= n && in_a[(v + delta) as usize] {
                    d += k;
                }
            }
            if in_u[v as usize] {
                d -= common - 1;
            }
            deg[v as usize] = d;
        }
        let top = a0.iter().map(|v| deg[v as usize]).max().unwrap_or(0) as usize;
        let mut buckets = vec![BTreeSet::new(); top + 1];
        for v in a0.iter() {
            buckets[deg[v as usize] as usize].insert((rank[v as usize], v));
        }
        Ok(CoreEngine {
            n,
            table,
            in_a,
            in_i: oracle.indicator(n),
            deg,
            t: vec![0; n as usize + 1],
            cap,
            rank,
            buckets,
            top,
            size: a0.len(),
            selected: Vec::new(),
            round: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Current degree of `v` in `H[A]` (meaningful for `v ∈ A`).
    pub fn degree(&self, v: u32) -> u64 {
        self.deg[v as usize]
    }

    pub fn available(&self) -> IntSet {
        IntSet::from_sorted_unchecked((1..=self.n).filter(|&v| self.in_a[v as usize]).collect())
    }

    fn remove(&mut self, x: u32) {
        debug_assert!(self.in_a[x as usize]);
        self.in_a[x as usize] = false;
        self.size -= 1;
        self.buckets[self.deg[x as usize] as usize].remove(&(self.rank[x as usize], x));
        for i in 0..self.table.support().len() {
            let delta = self.table.support()[i];
            for v in [x.checked_sub(delta), x.checked_add(delta)].into_iter().flatten() {
                if v == 0 || v > self.n || !self.in_a[v as usize] {
                    continue;
                }
                let m = self.table.mult(v, x) as u64;
                if m == 0 {
                    continue;
                }
                let d = self.deg[v as usize];
                let key = (self.rank[v as usize], v);
                self.buckets[d as usize].remove(&key);
                self.buckets[(d - m) as usize].insert(key);
                self.deg[v as usize] = d - m;
            }
        }
    }

    fn pick(&mut self) -> Option<u32> {
        if self.size == 0 {
            return None;
        }
        while self.buckets[self.top].is_empty() {
            self.top -= 1;
        }
        self.buckets[self.top].first().map(|&(_, v)| v)
    }

    /// Runs one round; `None` once `A` is empty.
    pub fn step(&mut self) -> Option<RoundLog> {
        let u = self.pick()?;
        let degree = self.deg[u as usize];
        self.remove(u);
        self.round += 1;
        let selected = self.in_i[u as usize];
        let mut pruned = Vec::new();
        if selected {
            self.selected.push(u);
            for i in 0..self.table.support().len() {
                let delta = self.table.support()[i];
                for v in [u.checked_sub(delta), u.checked_add(delta)].into_iter().flatten() {
                    if v == 0 || v > self.n || !self.in_a[v as usize] {
                        continue;
                    }
                    let m = self.table.mult(v, u) as u64;
                    if m == 0 {
                        continue;
                    }
                    self.t[v as usize] += m;
                    if self.cap.is_some_and(|c| self.t[v as usize] > c) {
                        pruned.push(v);
                    }
                }
            }
            pruned.sort_unstable();
            pruned.dedup();
            for &v in &pruned {
                self.remove(v);
            }
        }
        Some(RoundLog { round: self.round, vertex: u, degree, selected, pruned })
    }

    pub fn state(&self) -> CoreState {
        let mut selected = self.selected.clone();
        selected.sort_unstable();
        CoreState {
            available: self.available(),
            selected: IntSet::from_sorted_unchecked(selected),
            t: (1..=self.n)
                .filter(|&v| self.t[v as usize] > 0)
                .map(|v| (v, self.t[v as usize]))
                .collect(),
            round: self.round,
        }
    }
}

/// Runs the core loop from `A₀` until `stop(|A|)` holds or `A` is empty.
///
/// `oracle` answers "is `u ∈ I`" for the picked vertex.
pub fn core_algorithm<R: Real>(
    n: u32,
    a0: &IntSet,
    oracle: &IntSet,
    u: &IntSet,
    t_threshold: R,
    stop: impl Fn(usize) -> bool,
    tie: &TieOrder,
) -> Result<CoreOutcome> {
    let rank = tie.ranks(n)?;
    run_core(n, a0, oracle, u, t_threshold, stop, &rank, true)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_core<R: Real>(
    n: u32,
    a0: &IntSet,
    oracle: &IntSet,
    u: &IntSet,
    t_threshold: R,
    stop: impl Fn(usize) -> bool,
    rank: &[u32],
    keep_trace: bool,
) -> Result<CoreOutcome> {
    let mut engine = CoreEngine::new(n, a0, oracle, u, t_threshold, rank)?;
    let mut trace = Vec::new();
    while !stop(engine.len()) {
        match engine.step() {
            Some(log) if keep_trace => trace.push(log),
            Some(_) => {}
            None => break,
        }
    }
    Ok(CoreOutcome { state: engine.state(), trace })
}
