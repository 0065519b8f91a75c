//! Repeated weak-to-strong runs over a fixed set of small bags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use llp_core::oracle::{SgdOracle, TrainConfig};
use llp_core::rng::{stream_rng, STREAM_DATA, STREAM_UNION};
use llp_core::synth::{gen_hard_bags, gen_random_bags, partition_into_bags, split_test, BagKind, SyntheticConfig};
use llp_core::weak_to_strong::{algorithm_a2, compute_s, WeakToStrongParams};
use llp_core::{BagCollection, Classifier, InstanceTable};
use rayon::prelude::*;

use crate::config::{DataSpec, Experiment, SampleSpec};
use crate::error::{LabError, Result};
use crate::format::save_classifier;
use crate::tabular::{load_tabular, IngestionReport};

/// Small bags plus labeled held-out instances.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub bags: BagCollection,
    pub test: InstanceTable,
    /// Rows left out of the last short bag (tabular data only).
    pub dropped: usize,
    pub ingestion: Option<IngestionReport>,
}

/// Builds the small bags once, from the base seed.
pub fn prepare_dataset(exp: &Experiment) -> Result<Dataset> {
    match &exp.data {
        DataSpec::Synthetic {
            kind,
            n_bags,
            d,
            eta,
            n_test,
        } => {
            let cfg = SyntheticConfig {
                n_bags: *n_bags,
                q: exp.q,
                d: *d,
                kind: *kind,
                eta: *eta,
                n_test: *n_test,
                seed: exp.seed,
                ..SyntheticConfig::default()
            };
            let data = match kind {
                BagKind::Random => gen_random_bags(&cfg)?,
                BagKind::Hard => gen_hard_bags(&cfg)?,
            };
            Ok(Dataset {
                bags: data.bags,
                test: data.test,
                dropped: 0,
                ingestion: None,
            })
        }
        DataSpec::Tabular {
            path,
            schema,
            test_fraction,
        } => {
            let data = load_tabular(path, schema)?;
            let mut rng = stream_rng(exp.seed, STREAM_DATA);
            let (train, test) = split_test(&data.table, *test_fraction, &mut rng)?;
            let part = partition_into_bags(&train, exp.q, &mut rng)?;
            Ok(Dataset {
                bags: part.bags,
                test,
                dropped: part.dropped,
                ingestion: Some(data.report),
            })
        }
    }
}

/// Fraction of labeled instances `h` gets right.
pub fn instance_accuracy(h: &Classifier, test: &InstanceTable) -> Result<f64> {
    if test.is_empty() {
        return Err(LabError::Data("test set is empty".into()));
    }
    let predicted = h.label_table(test)?;
    let mut hits = 0usize;
    for x in test.iter() {
        let y = x
            .label
            .ok_or_else(|| LabError::Data(format!("test row {} has no label", x.id.index())))?;
        hits += usize::from(predicted.get(x.id) == Some(y));
    }
    Ok(hits as f64 / test.len() as f64)
}

/// One run; accuracies are percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub run: usize,
    pub seed: u64,
    pub large_acc: f64,
    pub small_acc: f64,
    pub test_acc: f64,
    /// `None` when no `α` was configured.
    pub met_contract: Option<bool>,
    pub classifier: Classifier,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub sd: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<RunRow>,
    pub large: Aggregate,
    pub small: Aggregate,
    pub test: Aggregate,
    /// False for a single run.
    pub sd_defined: bool,
    pub t: usize,
    pub s: usize,
    pub n_small_bags: usize,
    pub n_test: usize,
    pub dropped: usize,
}

impl ExperimentReport {
    pub fn from_rows(rows: Vec<RunRow>, t: usize, s: usize, dataset: &Dataset) -> Self {
        let col = |f: fn(&RunRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
        Self {
            large: Aggregate::of(&col(|r| r.large_acc)),
            small: Aggregate::of(&col(|r| r.small_acc)),
            test: Aggregate::of(&col(|r| r.test_acc)),
            sd_defined: rows.len() > 1,
            t,
            s,
            n_small_bags: dataset.bags.len(),
            n_test: dataset.test.len(),
            dropped: dataset.dropped,
            rows,
        }
    }

    /// Header plus one row per run.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| LabError::Data(format!("csv: {e}"));
        w.write_record(["run", "seed", "large_acc", "small_acc", "test_acc", "met_contract"])
            .map_err(csv_err)?;
        for r in &self.rows {
            let met = match r.met_contract {
                Some(true) => "1",
                Some(false) => "0",
                None => "-",
            };
            w.write_record([
                r.run.to_string(),
                r.seed.to_string(),
                format!("{:.3}", r.large_acc),
                format!("{:.3}", r.small_acc),
                format!("{:.3}", r.test_acc),
                met.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Data(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// `key: value` lines.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        writeln!(s, "runs: {}", self.rows.len()).unwrap();
        writeln!(s, "t: {}", self.t).unwrap();
        writeln!(s, "s: {}", self.s).unwrap();
        writeln!(s, "small_bags: {}", self.n_small_bags).unwrap();
        writeln!(s, "test_instances: {}", self.n_test).unwrap();
        writeln!(s, "dropped_rows: {}", self.dropped).unwrap();
        for (name, a) in [
            ("large_acc", self.large),
            ("small_acc", self.small),
            ("test_acc", self.test),
        ] {
            writeln!(s, "{name}_mean: {:.3}", a.mean).unwrap();
            writeln!(s, "{name}_sd: {:.3}", a.sd).unwrap();
        }
        writeln!(s, "sd_defined: {}", self.sd_defined).unwrap();
        let met: Vec<bool> = self.rows.iter().filter_map(|r| r.met_contract).collect();
        if met.len() == self.rows.len() {
            writeln!(s, "met_contract: {}/{}", met.iter().filter(|&&m| m).count(), met.len()).unwrap();
        } else {
            writeln!(s, "met_contract: -").unwrap();
        }
        s
    }
}

fn sample_count(exp: &Experiment, bags: &BagCollection) -> Result<usize> {
    match exp.sample {
        SampleSpec::Fixed(s) => Ok(s),
        SampleSpec::Derived { delta, vc } => {
            let alpha = exp
                .alpha
                .ok_or_else(|| LabError::Config("deriving s needs `alpha`".into()))?;
            Ok(compute_s(bags.distinct_instances().len(), alpha, delta, vc)?.s)
        }
    }
}

fn run_once(exp: &Experiment, data: &Dataset, run: usize, s: usize) -> Result<RunRow> {
    let seed = exp.seed.wrapping_add(run as u64);
    let params = WeakToStrongParams {
        epsilon: exp.epsilon.unwrap_or(1.0),
        alpha: exp.alpha.unwrap_or(1.0),
        c0: exp.c0,
        t: Some(exp.t),
    };
    let oracle = SgdOracle(TrainConfig { seed, ..exp.train });
    let mut rng = stream_rng(seed, STREAM_UNION);
    let out = algorithm_a2(&data.bags, &params, 0.5, Some(s), &oracle, &mut rng)?;
    Ok(RunRow {
        run,
        seed,
        large_acc: 100.0 * out.large_accuracy,
        small_acc: 100.0 * out.small_accuracy,
        test_acc: 100.0 * instance_accuracy(&out.classifier, &data.test)?,
        met_contract: exp.alpha.map(|_| out.met_contract),
        classifier: out.classifier,
    })
}

/// Runs `exp.runs` repetitions; run `i` uses seed `base + i` for both the
/// union sampling and SGD. The small bags stay fixed across runs.
pub fn cmd_run(exp: &Experiment) -> Result<ExperimentReport> {
    let data = prepare_dataset(exp)?;
    run_on(exp, &data)
}

pub fn run_on(exp: &Experiment, data: &Dataset) -> Result<ExperimentReport> {
    let s = sample_count(exp, &data.bags)?;
    let one = |i: usize| run_once(exp, data, i, s).map_err(|e| e.in_run(i));
    let rows: Vec<RunRow> = if exp.parallel {
        (0..exp.runs).into_par_iter().map(one).collect::<Result<_>>()?
    } else {
        (0..exp.runs).map(one).collect::<Result<_>>()?
    };
    Ok(ExperimentReport::from_rows(rows, exp.t, s, data))
}

/// Sidecar path next to the CSV report.
pub fn summary_path(output: &Path) -> PathBuf {
    let mut name = output.file_stem().unwrap_or_default().to_os_string();
    name.push(".summary.txt");
    output.with_file_name(name)
}

/// Writes the CSV at `output`, the summary beside it, and one classifier
/// file per run.
pub fn write_report(report: &ExperimentReport, dataset: &Dataset, output: &Path) -> Result<()> {
    let write = |p: &Path, text: &str| std::fs::write(p, text).map_err(|e| LabError::io(p, e));
    write(output, &report.to_csv()?)?;
    let mut summary = report.summary();
    if let Some(ing) = &dataset.ingestion {
        for line in ing.to_text().lines() {
            writeln!(summary, "ingestion.{line}").unwrap();
        }
    }
    write(&summary_path(output), &summary)?;
    let stem = output.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    for r in &report.rows {
        save_classifier(
            &r.classifier,
            &output.with_file_name(format!("{stem}.run{}.clf", r.run)),
        )?;
    }
    Ok(())
}
