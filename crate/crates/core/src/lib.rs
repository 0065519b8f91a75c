//! Learning from label proportions with bag-level accuracy.
//!
//! The crate covers the bag model and its accuracy measures, the union-bag
//! distribution that turns a weak bag classifier into a strong one, weak
//! oracles, the LLP and MIL constructions on which no such amplification is
//! possible, and synthetic data generation.
//!
//! Everything builds without `std` (with `alloc`); the `std` feature only
//! forwards to dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bag;
pub mod classifier;
pub mod constructions;
pub mod error;
pub mod game;
pub mod geometry;
pub mod metrics;
pub mod oracle;
pub mod reweight;
pub mod rng;
pub mod synth;
pub mod union;
pub mod weak_to_strong;

pub use bag::{Bag, BagCollection, FeatureVector, InstanceId, InstanceTable, Mode};
pub use classifier::{Classifier, ClassifierKind, Labeling};
pub use error::{Error, Result};
pub use metrics::{accuracy, residual, trivial_accuracy};
pub use oracle::{OracleResult, WeakOracle};
