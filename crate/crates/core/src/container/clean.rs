use crate::error::{Error, Result};
use crate::num::Real;
use crate::set::IntSet;
use crate::tuples::vertex_stats;

/// Repeatedly drops the smallest `v` with `s_I(v) ≥ threshold`.
///
/// Returns `(I′, I − I′)`; every `v ∈ I′` has `s_{I′}(v) < threshold`.
pub fn clean_heavy<R: Real>(set: &IntSet, threshold: R) -> Result<(IntSet, IntSet)> {
    if threshold.is_nan() || threshold <= R::zero() {
        return Err(Error::Argument(format!("cleaning threshold must be positive, got {threshold}")));
    }
    let mut current = set.clone();
    let mut removed = Vec::new();
    loop {
        let heavy = vertex_stats(&current).iter().find(|&(_, s)| R::count(s) >= threshold);
        match heavy {
            Some((v, s)) => {
                log::trace!("clean: drop {v} (s = {s})");
                removed.push(v);
                current = current.without(v);
            }
            None => break,
        }
    }
    removed.sort_unstable();
    Ok((current, IntSet::from_sorted_unchecked(removed)))
}
