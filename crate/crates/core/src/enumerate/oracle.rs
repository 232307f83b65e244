//! Exhaustive reference implementations, kept deliberately naive.

use crate::error::{Error, Result};
use crate::set::IntSet;
use crate::tuples::{count_sidon_tuples, SidonTuple};

/// Largest `n` accepted by the `2ⁿ` oracles.
pub const ORACLE_CAP: u32 = 24;

/// Ordered Sidon 4-tuples by testing all `|A|⁴` candidates.
pub fn brute_force_tuples(set: &IntSet) -> u64 {
    let xs = set.as_slice();
    let mut count = 0;
    for &a in xs {
        for &b in xs {
            for &c in xs {
                for &d in xs {
                    if (SidonTuple { a, b, c, d }).is_valid() {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `|G_n(α)|` by testing every subset of `[n]`.
pub fn exhaustive_count(n: u32, alpha: u64) -> Result<u64> {
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded { what: "exhaustive oracle", n, cap: ORACLE_CAP });
    }
    Ok((0u64..1 << n).filter(|&m| count_sidon_tuples(&IntSet::from_mask(m)) <= alpha).count() as u64)
}

/// `Φ(n)` by testing every subset of `[n]`.
pub fn exhaustive_phi(n: u32) -> Result<usize> {
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded { what: "exhaustive oracle", n, cap: ORACLE_CAP });
    }
    Ok((0u64..1 << n)
        .filter(|&m| count_sidon_tuples(&IntSet::from_mask(m)) == 0)
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0))
}
