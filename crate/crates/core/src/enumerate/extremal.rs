use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::IntSet;
use crate::tuples::is_sidon;

use super::construct::{prime_power, singer_set};

/// Largest `n` for which [`max_sidon`] runs the exact search by default.
pub const DEFAULT_PHI_CAP: u32 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremalResult {
    pub n: u32,
    pub phi: usize,
    pub witness: IntSet,
    /// `false` for heuristic results, which are only lower bounds.
    pub exact: bool,
}

/// Exact `Φ(n)` with the default cap.
pub fn max_sidon(n: u32) -> Result<ExtremalResult> {
    max_sidon_capped(n, DEFAULT_PHI_CAP)
}

pub fn max_sidon_capped(n: u32, cap: u32) -> Result<ExtremalResult> {
    if n > cap {
        return Err(Error::CapExceeded { what: "exact extremal search", n, cap });
    }
    let (phi, witness) = phi_table(n);
    Ok(ExtremalResult { n, phi: phi[n as usize], witness: witness[n as usize].clone(), exact: true })
}

/// `Φ(m)` and a witness for every `m ≤ n`.
///
/// `Φ(m) ∈ {Φ(m−1), Φ(m−1) + 1}`, and a set realizing the larger value
/// may be taken to contain both 1 and `m`, so each step is one
/// branch-and-bound search bounded by the earlier table entries.
pub fn phi_table(n: u32) -> (Vec<usize>, Vec<IntSet>) {
    let mut phi = vec![0usize];
    let mut wit = vec![IntSet::empty()];
    for m in 1..=n {
        let k = phi[m as usize - 1] + 1;
        match Search::new(m, k, &phi).run() {
            Some(found) => {
                phi.push(k);
                wit.push(IntSet::from_sorted_unchecked(found));
            }
            None => {
                phi.push(k - 1);
                let prev = wit[m as usize - 1].clone();
                wit.push(prev);
            }
        }
    }
    (phi, wit)
}

struct Search<'a> {
    m: u32,
    k: usize,
    phi: &'a [usize],
    elems: Vec<u32>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(m: u32, k: usize, phi: &'a [usize]) -> Self {
        Search { m, k, phi, elems: Vec::with_capacity(k), used: vec![false; m as usize] }
    }

    fn run(mut self) -> Option<Vec<u32>> {
        if self.k == 1 {
            return (self.m == 1).then(|| vec![1]);
        }
        self.place(1);
        self.go().then_some(self.elems)
    }

    fn fits(&self, x: u32) -> bool {
        self.elems.iter().all(|&s| !self.used[(x - s) as usize])
    }

    fn place(&mut self, x: u32) {
        for &s in &self.elems {
            self.used[(x - s) as usize] = true;
        }
        self.elems.push(x);
    }

    fn unplace(&mut self) {
        let x = self.elems.pop().expect("nonempty");
        for &s in &self.elems {
            self.used[(x - s) as usize] = false;
        }
    }

    /// The `after` gaps still to come are distinct unused differences, so
    /// they need at least the sum of the `after` smallest unused values.
    fn gap_room(&self, x: u32, after: usize) -> bool {
        let room = self.m - x;
        let (mut need, mut taken) = (0u32, 0usize);
        for d in 1..self.used.len() as u32 {
            if taken == after {
                break;
            }
            if !self.used[d as usize] {
                need += d;
                taken += 1;
                if need > room {
                    return false;
                }
            }
        }
        taken == after
    }

    /// Every suffix `{a_i, …, m}` of the final set is Sidon inside
    /// `[a_i, m]`, so it cannot outgrow `Φ(m − a_i + 1)`.
    fn tails_fit(&self) -> bool {
        self.elems
            .iter()
            .enumerate()
            .skip(1)
            .all(|(i, &a)| self.phi[(self.m - a + 1) as usize] >= self.k - i)
    }

    fn go(&mut self) -> bool {
        let placed = self.elems.len();
        let last = *self.elems.last().expect("1 is placed first");
        if placed + 1 == self.k {
            // Mirror images are skipped by requiring the first gap to be
            // smaller than the last one.
            let first_gap = self.elems.get(1).map_or(0, |&a| a - 1);
            let ok = self.fits(self.m) && (self.k < 3 || first_gap < self.m - last);
            if ok {
                self.place(self.m);
            }
            return ok;
        }
        let after = self.k - placed - 1;
        let first_gap = self.elems.get(1).map(|&a| a - 1);
        for x in last + 1..self.m {
            // {x, …, m} must hold `after + 1` elements.
            if self.phi[(self.m - x + 1) as usize] < after + 1 {
                break;
            }
            if let Some(g) = first_gap {
                if self.m - x <= g {
                    break;
                }
            }
            if !self.fits(x) {
                continue;
            }
            self.place(x);
            if self.gap_room(x, after) && self.tails_fit() && self.go() {
                return true;
            }
            self.unplace();
        }
        false
    }
}

/// Best Sidon set found by greedy extension and by windows of rotated
/// Singer sets. A lower bound on `Φ(n)` only.
pub fn max_sidon_heuristic(n: u32) -> ExtremalResult {
    let mut best = greedy(n, 1);
    let root = (n as f64).sqrt();
    let lo = (root / 2.0).floor().max(2.0) as u32;
    let hi = (2.0 * root).ceil() as u32;
    for q in lo..=hi {
        if prime_power(q).is_none() {
            continue;
        }
        let Ok(d) = singer_set(q) else { continue };
        let modulus = q * q + q + 1;
        let zero_based: Vec<u32> = d.iter().map(|x| x - 1).collect();
        for shift in 0..modulus {
            let mut window: Vec<u32> =
                zero_based.iter().map(|&x| (x + shift) % modulus).filter(|&x| x < n).map(|x| x + 1).collect();
            if window.len() > best.len() {
                window.sort_unstable();
                best = IntSet::from_sorted_unchecked(window);
            }
        }
    }
    debug_assert!(is_sidon(&best));
    ExtremalResult { n, phi: best.len(), witness: best, exact: false }
}

fn greedy(n: u32, start: u32) -> IntSet {
    let mut used = vec![false; n as usize + 1];
    let mut elems: Vec<u32> = Vec::new();
    for x in start..=n {
        if elems.iter().all(|&s| !used[(x - s) as usize]) {
            for &s in &elems {
                used[(x - s) as usize] = true;
            }
            elems.push(x);
        }
    }
    IntSet::from_sorted_unchecked(elems)
}
