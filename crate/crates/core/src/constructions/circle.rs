//! MIL bags on the circle.
//!
//! The circle is cut into `2T` equal arcs represented by their midpoints.
//! A 1-bag joins arcs `απ` apart and a 0-bag joins arcs `(1−α)π` apart, one
//! of each starting at every arc, all with weight `1/(4T)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bag::{Bag, BagCollection, InstanceId, InstanceTable, Mode};
use crate::error::{bail, Result};
use crate::oracle::{best_halfspace_2d, brute_force_best_labeling, OracleResult, BRUTE_FORCE_MAX_INSTANCES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleMilConfig {
    pub alpha_num: u32,
    pub alpha_den: u32,
    /// Half the number of arcs.
    pub t: u32,
}

impl CircleMilConfig {
    pub fn alpha(&self) -> f64 {
        f64::from(self.alpha_num) / f64::from(self.alpha_den)
    }

    /// Arc width in units of π.
    pub fn delta(&self) -> f64 {
        1.0 / f64::from(self.t)
    }

    /// `2/3 − (1−α)/2 − 2δ`.
    pub fn weak_bound(&self) -> f64 {
        2.0 / 3.0 - (1.0 - self.alpha()) / 2.0 - 2.0 * self.delta()
    }

    /// Checks `α ∈ (1/2, 1)`, integrality of `αT`, and the arc-width
    /// condition `2δ ≤ min(2α−1, 1−α)`.
    pub fn validate(&self) -> Result<()> {
        let (p, q, t) = (u64::from(self.alpha_num), u64::from(self.alpha_den), u64::from(self.t));
        if q == 0 || t == 0 || !(2 * p > q && p < q) {
            bail!(Parameter, "need 1/2 < alpha < 1 and T ≥ 1, got {p}/{q}, T={t}");
        }
        if (p * t) % q != 0 {
            bail!(Parameter, "alpha*T = {p}*{t}/{q} is not an integer");
        }
        // In units of 1/(qT): 2δ = 2q, 2α−1 = (2p−q)T, 1−α = (q−p)T.
        let width = 2 * q;
        if width > (2 * p - q) * t || width > (q - p) * t {
            bail!(Parameter, "arcs too wide: 2/T exceeds min(2α−1, 1−α)");
        }
        Ok(())
    }
}

/// `(o1, o0)`: arc offsets of 1-bag and 0-bag partners.
pub fn circle_offsets(cfg: &CircleMilConfig) -> Result<(usize, usize)> {
    cfg.validate()?;
    let o1 = (cfg.alpha_num * cfg.t / cfg.alpha_den) as usize;
    Ok((o1, cfg.t as usize - o1))
}

/// The weighted circle collection: 1-bags first, then 0-bags, each indexed
/// by starting arc.
pub fn gen_mil_circle_bags(cfg: &CircleMilConfig) -> Result<BagCollection> {
    let (o1, o0) = circle_offsets(cfg)?;
    let arcs = 2 * cfg.t as usize;
    let mut table = InstanceTable::with_capacity(2, arcs);
    for i in 0..arcs {
        let phi = core::f64::consts::PI * (i as f64 + 0.5) / f64::from(cfg.t);
        table.push(&[libm::cos(phi), libm::sin(phi)], None)?;
    }
    let mut bags = Vec::with_capacity(2 * arcs);
    for (offset, label) in [(o1, 1), (o0, 0)] {
        for i in 0..arcs {
            bags.push(Bag::new(
                Mode::Mil,
                vec![InstanceId(i), InstanceId((i + offset) % arcs)],
                label,
            )?);
        }
    }
    let w = 1.0 / bags.len() as f64;
    let weights = vec![w; bags.len()];
    BagCollection::new(Mode::Mil, Arc::new(table), bags, Some(weights))
}

/// Exact best accuracy over all arc labelings.
pub fn verify_mil_no_strong(coll: &BagCollection) -> Result<f64> {
    if coll.mode() != Mode::Mil {
        bail!(Precondition, "expected MIL bags");
    }
    if coll.table().len() > BRUTE_FORCE_MAX_INSTANCES {
        return Err(crate::error::Error::Size {
            what: "arcs",
            actual: coll.table().len() as u128,
            limit: BRUTE_FORCE_MAX_INSTANCES as u128,
        });
    }
    Ok(brute_force_best_labeling(coll)?.1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakExistsReport {
    /// Best of the constants and 720 planar halfspaces.
    pub best: OracleResult,
    pub bound: f64,
    pub holds: bool,
}

/// Best constant-or-halfspace accuracy under `weights`, compared against
/// `2/3 − (1−α)/2 − 2δ`.
pub fn verify_mil_weak_exists(
    coll: &BagCollection,
    weights: &[f64],
    cfg: &CircleMilConfig,
) -> Result<WeakExistsReport> {
    cfg.validate()?;
    let weighted = coll.with_weights(weights.to_vec())?;
    let bound = cfg.weak_bound();
    let best = best_halfspace_2d(&weighted, 720, bound)?;
    Ok(WeakExistsReport {
        holds: best.met_contract,
        best,
        bound,
    })
}
