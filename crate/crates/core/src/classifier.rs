//! {0,1}-valued classifiers over feature vectors.

use alloc::vec::Vec;
use core::fmt;

use crate::bag::{FeatureVector, InstanceId, InstanceTable};
use crate::error::{bail, Result};

/// Decision threshold applied to the sigmoid output.
pub const DEFAULT_SIGMOID_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    LinearSigmoid,
    HomogeneousHalfspace,
    AffineHalfspace,
    ExplicitLabeling,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::LinearSigmoid => "linear-sigmoid",
            ClassifierKind::HomogeneousHalfspace => "homogeneous-halfspace",
            ClassifierKind::AffineHalfspace => "affine-halfspace",
            ClassifierKind::ExplicitLabeling => "explicit-labeling",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "linear-sigmoid" => ClassifierKind::LinearSigmoid,
            "homogeneous-halfspace" => ClassifierKind::HomogeneousHalfspace,
            "affine-halfspace" => ClassifierKind::AffineHalfspace,
            "explicit-labeling" => ClassifierKind::ExplicitLabeling,
            _ => return None,
        })
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A {0,1} labeling indexed by [`InstanceId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling(Vec<bool>);

impl Labeling {
    pub fn new(labels: Vec<bool>) -> Self {
        Self(labels)
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Self(alloc::vec![value; n])
    }

    /// Labeling of the first `n` ids read from the bits of `mask`
    /// (bit `i` is the label of the `i`-th entry of `ids`).
    pub fn from_mask(n: usize, ids: &[InstanceId], mask: u64) -> Self {
        let mut labels = alloc::vec![false; n];
        for (bit, id) in ids.iter().enumerate() {
            labels[id.0] = mask >> bit & 1 == 1;
        }
        Self(labels)
    }

    #[inline]
    pub fn get(&self, id: InstanceId) -> Option<bool> {
        self.0.get(id.0).copied()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn positives(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// A predictor `x -> {0,1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    /// `sigmoid(<w,x> + b) >= threshold`.
    LinearSigmoid {
        weights: Vec<f64>,
        bias: f64,
        threshold: f64,
    },
    /// `pos(<r,x>)`.
    HomogeneousHalfspace { normal: Vec<f64> },
    /// `pos(<r,x> + c)`.
    AffineHalfspace { normal: Vec<f64>, offset: f64 },
    /// Fixed label per instance id.
    Explicit(Labeling),
}

/// `pos(z) = 1` iff `z > 0`.
#[inline]
pub fn pos(z: f64) -> bool {
    z > 0.0
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Classifier {
    /// `pos(±1)` over `dim` coordinates: the all-ones or all-zeros classifier.
    pub fn constant(dim: usize, value: bool) -> Self {
        Classifier::AffineHalfspace {
            normal: alloc::vec![0.0; dim],
            offset: if value { 1.0 } else { -1.0 },
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Classifier::LinearSigmoid { .. } => ClassifierKind::LinearSigmoid,
            Classifier::HomogeneousHalfspace { .. } => ClassifierKind::HomogeneousHalfspace,
            Classifier::AffineHalfspace { .. } => ClassifierKind::AffineHalfspace,
            Classifier::Explicit(_) => ClassifierKind::ExplicitLabeling,
        }
    }

    /// Input dimension, `None` for explicit labelings.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Classifier::LinearSigmoid { weights, .. } => Some(weights.len()),
            Classifier::HomogeneousHalfspace { normal } | Classifier::AffineHalfspace { normal, .. } => {
                Some(normal.len())
            }
            Classifier::Explicit(_) => None,
        }
    }

    /// Sigmoid output for the linear-sigmoid kind.
    pub fn score(&self, coords: &[f64]) -> Option<f64> {
        match self {
            Classifier::LinearSigmoid { weights, bias, .. } => Some(sigmoid(dot(weights, coords) + bias)),
            _ => None,
        }
    }

    pub fn predict(&self, x: FeatureVector<'_>) -> Result<bool> {
        if let Some(d) = self.dim() {
            if d != x.coords.len() {
                bail!(
                    Data,
                    "classifier dimension {d} does not match instance dimension {}",
                    x.coords.len()
                );
            }
        }
        Ok(match self {
            Classifier::LinearSigmoid {
                weights,
                bias,
                threshold,
            } => sigmoid(dot(weights, x.coords) + bias) >= *threshold,
            Classifier::HomogeneousHalfspace { normal } => pos(dot(normal, x.coords)),
            Classifier::AffineHalfspace { normal, offset } => pos(dot(normal, x.coords) + offset),
            Classifier::Explicit(labels) => match labels.get(x.id) {
                Some(b) => b,
                None => bail!(Data, "explicit labeling has no label for instance {}", x.id),
            },
        })
    }

    /// Predictions for every row of `table`.
    pub fn label_table(&self, table: &InstanceTable) -> Result<Labeling> {
        if let Classifier::Explicit(labels) = self {
            if labels.len() < table.len() {
                bail!(
                    Data,
                    "explicit labeling covers {} instances, table has {}",
                    labels.len(),
                    table.len()
                );
            }
            return Ok(Labeling(labels.0[..table.len()].to_vec()));
        }
        table
            .iter()
            .map(|x| self.predict(x))
            .collect::<Result<Vec<_>>>()
            .map(Labeling)
    }
}
