//! Weak-learner oracles.
//!
//! An oracle takes a (possibly weighted) bag collection and returns a
//! classifier. Whether it reached the accuracy α the boosting argument
//! assumes is reported in [`OracleResult::met_contract`], never assumed.

mod exhaustive;
mod halfspace;
mod sgd;

pub use exhaustive::{brute_force_best_labeling, ExhaustiveOracle, BRUTE_FORCE_MAX_INSTANCES};
pub use halfspace::{best_halfspace_2d, direction_2d, random_homogeneous_halfspace, HalfspaceOracle};
pub use sgd::{
    bag_loss, bag_loss_and_grad, fit_linear_sigmoid, train_linear_sigmoid, FitOutcome, SgdOracle, TrainConfig,
    WeightInit,
};

use crate::bag::BagCollection;
use crate::classifier::Classifier;
use crate::error::Result;
use crate::metrics::accuracy;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub classifier: Classifier,
    /// Accuracy on the collection the oracle was given.
    pub achieved_accuracy: f64,
    /// `achieved_accuracy ≥ α`.
    pub met_contract: bool,
}

impl OracleResult {
    /// Scores `classifier` on `coll` and compares against `alpha`.
    pub fn evaluate(classifier: Classifier, coll: &BagCollection, alpha: f64) -> Result<Self> {
        let achieved_accuracy = accuracy(&classifier, coll)?;
        Ok(Self {
            classifier,
            achieved_accuracy,
            met_contract: achieved_accuracy >= alpha,
        })
    }
}

/// A concrete stand-in for the assumed accuracy-α oracle.
pub trait WeakOracle {
    fn name(&self) -> &'static str;

    fn fit(&self, bags: &BagCollection, alpha: f64) -> Result<OracleResult>;
}
