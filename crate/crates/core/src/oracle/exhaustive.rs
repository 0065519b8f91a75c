use alloc::vec;
use alloc::vec::Vec;

use super::{OracleResult, WeakOracle};
use crate::bag::{BagCollection, Mode};
use crate::classifier::{Classifier, Labeling};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_MAX_INSTANCES: usize = 24;

/// One bag as bit masks over the distinct instances: `levels[k]` holds the
/// instances appearing more than `k` times.
struct MaskedBag {
    levels: Vec<u64>,
    label: u32,
}

impl MaskedBag {
    fn satisfied(&self, mode: Mode, mask: u64) -> bool {
        match mode {
            Mode::Llp => {
                let count: u32 = self.levels.iter().map(|l| (l & mask).count_ones()).sum();
                count == self.label
            }
            Mode::Mil => u32::from(self.levels.first().is_some_and(|l| l & mask != 0)) == self.label,
        }
    }
}

/// Best labeling of the distinct instances by exhaustive search.
///
/// Labelings are enumerated as bit masks over the sorted distinct ids, so the
/// lowest mask attaining the maximum is returned. Instances used by no bag
/// are labeled 0.
pub fn brute_force_best_labeling(coll: &BagCollection) -> Result<(Labeling, f64)> {
    let ids = coll.distinct_instances();
    let n = ids.len();
    if n > BRUTE_FORCE_MAX_INSTANCES {
        return Err(Error::Size {
            what: "distinct instances for brute force",
            actual: n as u128,
            limit: BRUTE_FORCE_MAX_INSTANCES as u128,
        });
    }
    let mut bit_of = vec![usize::MAX; coll.table().len()];
    for (bit, id) in ids.iter().enumerate() {
        bit_of[id.index()] = bit;
    }
    let masked: Vec<MaskedBag> = coll
        .bags()
        .iter()
        .map(|bag| {
            let mut counts = vec![0usize; n];
            for id in bag.members() {
                counts[bit_of[id.index()]] += 1;
            }
            let depth = counts.iter().copied().max().unwrap_or(0);
            let levels = (0..depth)
                .map(|k| {
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > k)
                        .fold(0u64, |acc, (b, _)| acc | 1 << b)
                })
                .collect();
            MaskedBag {
                levels,
                label: bag.label(),
            }
        })
        .collect();

    let mode = coll.mode();
    let weights = coll.weights();
    let score = |mask: u64| -> f64 {
        match weights {
            Some(w) => masked
                .iter()
                .zip(w)
                .filter(|(b, _)| b.satisfied(mode, mask))
                .map(|(_, w)| w)
                .sum(),
            None => masked.iter().filter(|b| b.satisfied(mode, mask)).count() as f64,
        }
    };

    let mut best_mask = 0u64;
    let mut best = score(0);
    for mask in 1..(1u64 << n) {
        let s = score(mask);
        if s > best {
            best = s;
            best_mask = mask;
        }
    }
    if weights.is_none() {
        best = if coll.is_empty() { 0.0 } else { best / coll.len() as f64 };
    }
    Ok((Labeling::from_mask(coll.table().len(), &ids, best_mask), best))
}

/// [`WeakOracle`] returning the exact optimum as an explicit labeling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExhaustiveOracle;

impl WeakOracle for ExhaustiveOracle {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn fit(&self, bags: &BagCollection, alpha: f64) -> Result<OracleResult> {
        let (labels, _) = brute_force_best_labeling(bags)?;
        OracleResult::evaluate(Classifier::Explicit(labels), bags, alpha)
    }
}
