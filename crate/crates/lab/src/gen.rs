//! Writes datasets and constructions to files.

use std::path::Path;

use llp_core::constructions::{gen_llp_maxcut_bags, gen_mil_circle_bags, CircleMilConfig, MaxCutLlpConfig};
use llp_core::rng::{stream_rng, STREAM_UNION};
use llp_core::union::{sample_union_collection, UnionConfig};
use llp_core::BagCollection;

use crate::config::{Experiment, ExperimentConfig, SampleSpec};
use crate::error::{LabError, Result};
use crate::experiment::{prepare_dataset, Dataset};
use crate::format::{load_collection, save_collection};

/// Small bags and test instances described by the data section of `cfg`.
pub fn gen_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let exp = Experiment {
        data: cfg.resolve_data()?,
        q: cfg.q.ok_or_else(|| LabError::Config("`q` is required".into()))?,
        t: 1,
        epsilon: None,
        alpha: None,
        c0: llp_core::union::DEFAULT_C0,
        sample: SampleSpec::Fixed(1),
        train: Default::default(),
        runs: 1,
        seed: cfg.seed.unwrap_or(0),
        output: None,
        parallel: false,
    };
    prepare_dataset(&exp)
}

pub fn write_dataset(data: &Dataset, bags: &Path, test: Option<&Path>) -> Result<()> {
    save_collection(&data.bags, bags)?;
    if let Some(path) = test {
        let file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        crate::format::write_instances(&data.test, &mut out).map_err(|e| LabError::io(path, e))?;
    }
    Ok(())
}

pub fn gen_mil(cfg: &CircleMilConfig) -> Result<BagCollection> {
    Ok(gen_mil_circle_bags(cfg)?)
}

pub fn gen_llp(cfg: &MaxCutLlpConfig) -> Result<BagCollection> {
    Ok(gen_llp_maxcut_bags(cfg)?)
}

/// `s` union bags of `t` slots drawn from the collection at `input`.
pub fn gen_unions(input: &Path, t: usize, s: usize, seed: u64) -> Result<BagCollection> {
    let coll = load_collection(input)?;
    let mut rng = stream_rng(seed, STREAM_UNION);
    Ok(sample_union_collection(&coll, &UnionConfig::fixed(t)?, s, &mut rng)?)
}
