//! Weighted to unweighted bag collections.

use std::fmt::Write as _;
use std::path::Path;

use llp_core::reweight::weighted_to_unweighted;
use llp_core::BagCollection;

use crate::error::{LabError, Result};
use crate::format::{load_collection, save_collection};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvertReport {
    pub input_bags: usize,
    pub output_bags: usize,
    pub t: usize,
    /// `1/(T−1)`.
    pub drift_bound: f64,
}

impl ConvertReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "input_bags: {}", self.input_bags).unwrap();
        writeln!(s, "output_bags: {}", self.output_bags).unwrap();
        writeln!(s, "T: {}", self.t).unwrap();
        writeln!(s, "drift_bound: {}", self.drift_bound).unwrap();
        s
    }
}

pub fn convert(coll: &BagCollection, t: usize) -> Result<(BagCollection, ConvertReport)> {
    if !coll.is_weighted() {
        return Err(LabError::Config("input collection is not weighted".into()));
    }
    let out = weighted_to_unweighted(coll, t)?;
    let report = ConvertReport {
        input_bags: coll.len(),
        output_bags: out.len(),
        t,
        drift_bound: 1.0 / (t - 1) as f64,
    };
    Ok((out, report))
}

pub fn cmd_convert(input: &Path, output: &Path, t: usize) -> Result<ConvertReport> {
    let coll = load_collection(input)?;
    let (out, report) = convert(&coll, t)?;
    save_collection(&out, output)?;
    Ok(report)
}
