//! Linear-sigmoid model trained by mini-batch SGD on bag-level squared error.
//!
//! For a bag `B` with label `σ` the loss is `(σ − Σ_{x∈B} g(x))²` with
//! `g(x) = sigmoid(<w,x> + b)`. A step uses the mean loss over the
//! mini-batch.

use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{OracleResult, WeakOracle};
use crate::bag::{Bag, BagCollection, InstanceTable, Mode};
use crate::classifier::{dot, sigmoid, Classifier, DEFAULT_SIGMOID_THRESHOLD};
use crate::error::{bail, Error, Result};
use crate::rng::{stream_rng, STREAM_TRAIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightInit {
    /// iid uniform in `[-scale, scale]`, bias 0.
    SymmetricUniform {
        scale: f64,
    },
    Zeros,
}

impl Default for WeightInit {
    fn default() -> Self {
        WeightInit::SymmetricUniform { scale: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Bags per mini-batch.
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub weight_init: WeightInit,
    /// Decision cutoff on the sigmoid output.
    pub threshold: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-2,
            batch_size: 512,
            epochs: 160,
            seed: 0,
            weight_init: WeightInit::default(),
            threshold: DEFAULT_SIGMOID_THRESHOLD,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            bail!(Parameter, "learning rate must be positive, got {}", self.learning_rate);
        }
        if self.batch_size == 0 || self.epochs == 0 {
            bail!(Parameter, "batch size and epochs must be positive");
        }
        Ok(())
    }
}

/// Bag loss at parameters `(weights, bias)`.
pub fn bag_loss(weights: &[f64], bias: f64, table: &InstanceTable, bag: &Bag) -> f64 {
    let total: f64 = bag
        .members()
        .iter()
        .map(|&id| sigmoid(dot(weights, table.coords(id)) + bias))
        .sum();
    let r = f64::from(bag.label()) - total;
    r * r
}

/// Bag loss, adding its gradient into `grad_w` and returning
/// `(loss, d loss / d bias)`.
pub fn bag_loss_and_grad(
    weights: &[f64],
    bias: f64,
    table: &InstanceTable,
    bag: &Bag,
    grad_w: &mut [f64],
    scratch: &mut Vec<f64>,
) -> (f64, f64) {
    scratch.clear();
    let mut total = 0.0;
    for &id in bag.members() {
        let g = sigmoid(dot(weights, table.coords(id)) + bias);
        total += g;
        scratch.push(g * (1.0 - g));
    }
    let r = f64::from(bag.label()) - total;
    let coef = -2.0 * r;
    let mut grad_b = 0.0;
    for (&id, &slope) in bag.members().iter().zip(scratch.iter()) {
        let c = coef * slope;
        grad_b += c;
        for (gw, x) in grad_w.iter_mut().zip(table.coords(id)) {
            *gw += c * x;
        }
    }
    (r * r, grad_b)
}

/// Trained parameters plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub classifier: Classifier,
    /// Mean bag loss over the last epoch.
    pub final_loss: f64,
    /// Epoch whose model was returned (the last one unless monitored).
    pub selected_epoch: usize,
}

/// Mini-batch SGD on the bag-level loss.
///
/// Unweighted collections are reshuffled every epoch and visited without
/// replacement. Weighted collections draw `m` bags per epoch with
/// probability proportional to weight.
///
/// With `monitor = Some(test)` (a labeled instance table), the model with
/// the best instance accuracy on `test` across epochs is returned. This
/// looks at test labels and exists for diagnostics only.
pub fn fit_linear_sigmoid(
    coll: &BagCollection,
    cfg: &TrainConfig,
    monitor: Option<&InstanceTable>,
) -> Result<FitOutcome> {
    cfg.validate()?;
    if coll.mode() != Mode::Llp {
        bail!(Precondition, "bag-level squared loss needs LLP bags");
    }
    if coll.is_empty() {
        bail!(Precondition, "cannot train on an empty collection");
    }
    let table = coll.table();
    let d = table.dim();
    let mut rng = stream_rng(cfg.seed, STREAM_TRAIN);
    let mut weights: Vec<f64> = match cfg.weight_init {
        WeightInit::SymmetricUniform { scale } => (0..d).map(|_| rng.random_range(-scale..=scale)).collect(),
        WeightInit::Zeros => vec![0.0; d],
    };
    let mut bias = 0.0;

    let m = coll.len();
    let sampler = match coll.weights() {
        Some(w) => Some(WeightedIndex::new(w).map_err(|e| Error::Data(alloc::format!("bag weights: {e}")))?),
        None => None,
    };
    let mut order: Vec<usize> = (0..m).collect();
    let mut grad_w = vec![0.0; d];
    let mut scratch = Vec::new();
    let mut final_loss = f64::NAN;
    let mut best: Option<(f64, Vec<f64>, f64, usize)> = None;

    for epoch in 0..cfg.epochs {
        match &sampler {
            Some(s) => order.iter_mut().for_each(|j| *j = s.sample(&mut rng)),
            None => order.shuffle(&mut rng),
        }
        let mut epoch_loss = 0.0;
        for (batch, chunk) in order.chunks(cfg.batch_size).enumerate() {
            grad_w.iter_mut().for_each(|g| *g = 0.0);
            let mut grad_b = 0.0;
            let mut loss = 0.0;
            for &j in chunk {
                let (l, gb) = bag_loss_and_grad(&weights, bias, table, &coll.bags()[j], &mut grad_w, &mut scratch);
                loss += l;
                grad_b += gb;
            }
            if !loss.is_finite() {
                return Err(Error::Training { epoch, batch, loss });
            }
            epoch_loss += loss;
            let step = cfg.learning_rate / chunk.len() as f64;
            weights.iter_mut().zip(&grad_w).for_each(|(w, g)| *w -= step * g);
            bias -= step * grad_b;
        }
        final_loss = epoch_loss / m as f64;
        if let Some(test) = monitor {
            let acc = instance_accuracy(&weights, bias, cfg.threshold, test);
            if best.as_ref().map_or(true, |b| acc > b.0) {
                best = Some((acc, weights.clone(), bias, epoch));
            }
        }
    }
    let selected_epoch = match best {
        Some((_, w, b, epoch)) => {
            weights = w;
            bias = b;
            epoch
        }
        None => cfg.epochs - 1,
    };
    Ok(FitOutcome {
        classifier: Classifier::LinearSigmoid {
            weights,
            bias,
            threshold: cfg.threshold,
        },
        final_loss,
        selected_epoch,
    })
}

fn instance_accuracy(weights: &[f64], bias: f64, threshold: f64, test: &InstanceTable) -> f64 {
    let mut hits = 0usize;
    let mut seen = 0usize;
    for x in test.iter() {
        if let Some(y) = x.label {
            seen += 1;
            hits += usize::from((sigmoid(dot(weights, x.coords) + bias) >= threshold) == y);
        }
    }
    if seen == 0 {
        0.0
    } else {
        hits as f64 / seen as f64
    }
}

/// Trains with [`fit_linear_sigmoid`] and scores the result on `coll`.
pub fn train_linear_sigmoid(coll: &BagCollection, cfg: &TrainConfig, alpha: f64) -> Result<OracleResult> {
    let fit = fit_linear_sigmoid(coll, cfg, None)?;
    OracleResult::evaluate(fit.classifier, coll, alpha)
}

/// [`WeakOracle`] backed by [`train_linear_sigmoid`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgdOracle(pub TrainConfig);

impl WeakOracle for SgdOracle {
    fn name(&self) -> &'static str {
        "linear-sigmoid-sgd"
    }

    fn fit(&self, bags: &BagCollection, alpha: f64) -> Result<OracleResult> {
        train_linear_sigmoid(bags, &self.0, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::InstanceId;
    use crate::geometry::random_unit_vector;
    use alloc::sync::Arc;

    fn single_bag(label: u32) -> BagCollection {
        let mut rng = stream_rng(9, 0);
        let mut t = InstanceTable::new(3);
        for _ in 0..4 {
            t.push(&random_unit_vector(3, &mut rng), None).unwrap();
        }
        let bag = Bag::new(Mode::Llp, (0..4).map(InstanceId).collect(), label).unwrap();
        BagCollection::unweighted(Mode::Llp, Arc::new(t), vec![bag]).unwrap()
    }

    #[test]
    fn all_zero_target_is_learned() {
        let c = single_bag(0);
        let cfg = TrainConfig {
            learning_rate: 0.5,
            epochs: 20_000,
            ..TrainConfig::default()
        };
        let fit = fit_linear_sigmoid(&c, &cfg, None).unwrap();
        let Classifier::LinearSigmoid { weights, bias, .. } = &fit.classifier else {
            unreachable!()
        };
        assert!(bag_loss(weights, *bias, c.table(), &c.bags()[0]) < 1e-3);
        for x in c.table().iter() {
            assert!(fit.classifier.score(x.coords).unwrap() < 0.5);
        }
    }

    #[test]
    fn training_is_reproducible() {
        let c = single_bag(2);
        let cfg = TrainConfig {
            epochs: 50,
            ..TrainConfig::default()
        };
        let a = fit_linear_sigmoid(&c, &cfg, None).unwrap();
        let b = fit_linear_sigmoid(&c, &cfg, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn divergence_is_reported() {
        let c = single_bag(4);
        let cfg = TrainConfig {
            learning_rate: f64::MAX,
            epochs: 5,
            weight_init: WeightInit::Zeros,
            ..TrainConfig::default()
        };
        match fit_linear_sigmoid(&c, &cfg, None) {
            Err(Error::Training { .. }) => {}
            Ok(fit) => panic!("expected divergence, got {:?}", fit.final_loss),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn rejects_bad_config_and_mil() {
        let c = single_bag(1);
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(fit_linear_sigmoid(&c, &bad, None).is_err());
    }

    #[test]
    fn oracle_result_is_recomputed_accuracy() {
        let c = single_bag(2);
        let r = SgdOracle(TrainConfig {
            epochs: 30,
            ..TrainConfig::default()
        })
        .fit(&c, 0.5)
        .unwrap();
        assert_eq!(
            r.achieved_accuracy,
            crate::metrics::accuracy(&r.classifier, &c).unwrap()
        );
        assert_eq!(r.met_contract, r.achieved_accuracy >= 0.5);
    }
}
