//! Weighted to unweighted bag collections by bag duplication.

use alloc::vec::Vec;

use crate::bag::BagCollection;
use crate::error::{bail, Result};

/// Slack subtracted before rounding up, so `w_i m (T-1)` that lands a few
/// ulps above an integer is not bumped to the next copy count.
const CEIL_SLACK: f64 = 1e-9;

/// Number of copies of each bag: `n_i = ⌈w_i (T−1)⌉` after rescaling the
/// weights to sum to `m`.
pub fn copy_counts(weights: &[f64], t: usize) -> Result<Vec<usize>> {
    if t < 2 {
        bail!(Parameter, "T must be at least 2, got {t}");
    }
    let m = weights.len() as f64;
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        bail!(Parameter, "weights must have positive total");
    }
    Ok(weights
        .iter()
        .map(|w| {
            let scaled = w * m / total * (t - 1) as f64;
            libm::ceil(scaled - CEIL_SLACK).max(0.0) as usize
        })
        .collect())
}

/// Unweighted collection with `n_i` copies of bag `i`. For every classifier
/// the accuracy changes by at most `1/(T−1)`, and
/// `(T−1)m ≤ |output| ≤ Tm`.
pub fn weighted_to_unweighted(coll: &BagCollection, t: usize) -> Result<BagCollection> {
    let Some(weights) = coll.weights() else {
        bail!(Parameter, "collection is not weighted");
    };
    let counts = copy_counts(weights, t)?;
    let mut bags = Vec::with_capacity(counts.iter().sum());
    for (bag, &n) in coll.bags().iter().zip(&counts) {
        bags.extend((0..n).map(|_| bag.clone()));
    }
    BagCollection::unweighted(coll.mode(), coll.shared_table().clone(), bags)
}
