//! Bag collections on which no classifier is strong although weak
//! halfspaces exist, with verifiers for both halves of that claim.

mod circle;
mod maxcut;

pub use circle::{
    circle_offsets, gen_mil_circle_bags, verify_mil_no_strong, verify_mil_weak_exists, CircleMilConfig,
    WeakExistsReport,
};
pub use maxcut::{
    gen_llp_maxcut_bags, local_search_best_labeling, verify_llp_no_strong, MaxCutLlpConfig, NoStrongReport,
};

use alloc::vec::Vec;

use rand::Rng;

use crate::bag::BagCollection;
use crate::classifier::{Classifier, Labeling};
use crate::error::{bail, Result};
use crate::game::{fictitious_play, PlaySettings};
use crate::metrics::{accuracy_with, satisfies};
use crate::oracle::{direction_2d, random_homogeneous_halfspace};

/// The bag weighting that minimizes the best menu accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingResult {
    pub weights: Vec<f64>,
    /// Best menu accuracy under `weights`.
    pub value: f64,
    /// Menu index attaining `value`.
    pub witness: usize,
    /// `value` minus the guaranteed value of the menu's mixed strategy.
    pub duality_gap: f64,
    pub rounds: usize,
}

/// Minimax weighting over a finite classifier menu, `values[c][j]` being
/// 1 when menu entry `c` satisfies bag `j`.
pub fn adversarial_weights(values: &[Vec<f64>], settings: PlaySettings) -> Result<WeightingResult> {
    if values.is_empty() || values[0].is_empty() {
        bail!(
            Precondition,
            "adversarial weighting needs a non-empty menu and collection"
        );
    }
    if values.iter().any(|row| row.len() != values[0].len()) {
        bail!(Data, "menu rows have different lengths");
    }
    let g = fictitious_play(values, settings);
    Ok(WeightingResult {
        duality_gap: g.duality_gap(),
        value: g.upper,
        witness: g.best_response,
        rounds: g.rounds,
        weights: g.bag_weights,
    })
}

/// Satisfaction matrix of `menu` against the bags of `coll`.
pub fn menu_values(coll: &BagCollection, menu: &[Classifier]) -> Result<Vec<Vec<f64>>> {
    menu.iter()
        .map(|h| {
            let labels = h.label_table(coll.table())?;
            Ok(coll
                .bags()
                .iter()
                .map(|b| f64::from(u8::from(satisfies(&labels, b))))
                .collect())
        })
        .collect()
}

/// Constant-0, constant-1, then `n_dirs` evenly spaced planar halfspaces.
pub fn halfspace_menu_2d(n_dirs: usize) -> Vec<Classifier> {
    let mut menu = alloc::vec![Classifier::constant(2, false), Classifier::constant(2, true)];
    menu.extend((0..n_dirs).map(|k| Classifier::HomogeneousHalfspace {
        normal: direction_2d(k, n_dirs).to_vec(),
    }));
    menu
}

/// Weights drawn uniformly from the simplex (flat Dirichlet).
pub fn random_simplex_weights<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(rand_distr::Exp1)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Mean accuracy of `draws` uniformly random homogeneous halfspaces.
pub fn mean_random_halfspace_accuracy<R: Rng + ?Sized>(coll: &BagCollection, draws: usize, rng: &mut R) -> Result<f64> {
    if draws == 0 {
        bail!(Parameter, "need at least one draw");
    }
    let mut total = 0.0;
    for _ in 0..draws {
        let h = random_homogeneous_halfspace(coll.table().dim(), rng)?;
        let labels: Labeling = h.label_table(coll.table())?;
        total += accuracy_with(&labels, coll);
    }
    Ok(total / draws as f64)
}
