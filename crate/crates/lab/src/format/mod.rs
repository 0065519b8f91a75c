//! Text formats for bag collections and classifiers.

pub mod bags;
pub mod classifier;

pub use bags::{load_collection, read_collection, save_collection, write_collection, write_instances};
pub use classifier::{classifier_from_line, classifier_to_line, load_classifier, save_classifier};
