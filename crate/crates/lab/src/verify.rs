//! Verification of the no-strong-classifier constructions.

use std::fmt::Write as _;

use llp_core::constructions::{
    adversarial_weights, circle_offsets, gen_llp_maxcut_bags, gen_mil_circle_bags, halfspace_menu_2d,
    mean_random_halfspace_accuracy, menu_values, random_simplex_weights, verify_llp_no_strong, verify_mil_no_strong,
    verify_mil_weak_exists, CircleMilConfig, MaxCutLlpConfig,
};
use llp_core::game::PlaySettings;
use llp_core::oracle::random_homogeneous_halfspace;
use llp_core::rng::{stream_rng, STREAM_VERIFY};
use llp_core::{trivial_accuracy, Classifier};

use crate::error::{LabError, Result};

/// Verdict of one check; `Info` lines never fail the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// What `value` was compared against, as text.
    pub target: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub kind: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, value: f64, target: impl Into<String>, status: Status) {
        self.checks.push(Check {
            name: name.into(),
            value,
            target: target.into(),
            status,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `key: value` lines, three per check, then the overall verdict.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "kind: {}", self.kind).unwrap();
        for c in &self.checks {
            writeln!(s, "{}.value: {:.6}", c.name, c.value).unwrap();
            writeln!(s, "{}.target: {}", c.name, c.target).unwrap();
            writeln!(s, "{}.status: {}", c.name, c.status.as_str()).unwrap();
        }
        writeln!(s, "result: {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        s
    }

    /// Turns a failing report into a verification error.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name.as_str())
            .collect();
        Err(LabError::Verification(failed.join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilVerifyParams {
    pub circle: CircleMilConfig,
    pub weightings: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlpVerifyParams {
    pub construction: MaxCutLlpConfig,
    pub halfspace_draws: usize,
    pub menu_size: usize,
    pub restarts: usize,
}

const GAP_LIMIT: f64 = 1e-3;

/// Circle construction: trivial accuracy, exact optimum, offset
/// disjointness, and weak halfspaces under uniform, random and adversarial
/// weightings.
pub fn verify_mil(p: &MilVerifyParams) -> Result<VerifyReport> {
    let cfg = &p.circle;
    let coll = gen_mil_circle_bags(cfg)?;
    let mut r = VerifyReport {
        kind: "mil".into(),
        ..Default::default()
    };
    let trivial = trivial_accuracy(&coll)?;
    r.push(
        "trivial_accuracy",
        trivial,
        "0.5 +- 1e-3",
        Status::from_bool((trivial - 0.5).abs() <= 1e-3),
    );

    let optimum = verify_mil_no_strong(&coll)?;
    r.push(
        "no_strong_optimum",
        optimum,
        "<= 0.75",
        Status::from_bool(optimum <= 0.75 + 1e-12),
    );

    let (o1, o0) = circle_offsets(cfg)?;
    let arcs = coll.table().len();
    let disjoint = o0 != o1 && o0 != arcs - o1;
    r.push(
        "offsets_disjoint",
        f64::from(u8::from(disjoint)),
        "1",
        Status::from_bool(disjoint),
    );

    let bound = cfg.weak_bound();
    let target = format!(">= {bound:.6}");
    let uniform = vec![1.0 / coll.len() as f64; coll.len()];
    let u = verify_mil_weak_exists(&coll, &uniform, cfg)?;
    r.push(
        "weak_exists_uniform",
        u.best.achieved_accuracy,
        target.clone(),
        Status::from_bool(u.holds),
    );

    let mut rng = stream_rng(p.seed, STREAM_VERIFY);
    let mut worst = f64::INFINITY;
    let mut all_hold = true;
    for _ in 0..p.weightings {
        let w = random_simplex_weights(coll.len(), &mut rng);
        let rep = verify_mil_weak_exists(&coll, &w, cfg)?;
        worst = worst.min(rep.best.achieved_accuracy);
        all_hold &= rep.holds;
    }
    if p.weightings > 0 {
        r.push(
            "weak_exists_random_worst",
            worst,
            target.clone(),
            Status::from_bool(all_hold),
        );
    }

    let menu = halfspace_menu_2d(720);
    let adv = adversarial_weights(&menu_values(&coll, &menu)?, PlaySettings::default())?;
    let rep = verify_mil_weak_exists(&coll, &adv.weights, cfg)?;
    r.push(
        "weak_exists_adversarial",
        rep.best.achieved_accuracy,
        target,
        Status::from_bool(rep.holds),
    );
    r.push(
        "adversarial_duality_gap",
        adv.duality_gap,
        format!("<= {GAP_LIMIT}"),
        Status::from_bool(adv.duality_gap <= GAP_LIMIT),
    );
    Ok(r)
}

/// Sampled max-cut construction: trivial accuracy, mean random-halfspace
/// accuracy against `α`, the best labeling (exact or local search), and
/// the adversarial weighting over a random halfspace menu.
pub fn verify_llp(p: &LlpVerifyParams) -> Result<VerifyReport> {
    let cfg = &p.construction;
    let coll = gen_llp_maxcut_bags(cfg)?;
    let mut r = VerifyReport {
        kind: "llp".into(),
        ..Default::default()
    };
    let trivial = trivial_accuracy(&coll)?;
    r.push(
        "trivial_accuracy",
        trivial,
        "0.5 +- 1e-3",
        Status::from_bool((trivial - 0.5).abs() <= 1e-3),
    );

    let mut rng = stream_rng(cfg.seed, STREAM_VERIFY);
    let mean = mean_random_halfspace_accuracy(&coll, p.halfspace_draws, &mut rng)?;
    let floor = cfg.alpha - 0.02;
    r.push(
        "random_halfspace_mean",
        mean,
        format!(">= {floor:.6}"),
        Status::from_bool(mean >= floor),
    );

    let ns = verify_llp_no_strong(&coll, p.restarts, &mut rng)?;
    let name = if ns.exact {
        "best_labeling_exact"
    } else {
        "best_labeling_local_search"
    };
    r.push(
        name,
        ns.best_accuracy,
        format!("alpha + epsilon = {:.6}", cfg.alpha + cfg.epsilon),
        Status::Info,
    );

    let d = coll.table().dim();
    let mut menu = vec![Classifier::constant(d, false), Classifier::constant(d, true)];
    for _ in 0..p.menu_size {
        menu.push(random_homogeneous_halfspace(d, &mut rng)?);
    }
    let adv = adversarial_weights(&menu_values(&coll, &menu)?, PlaySettings::default())?;
    r.push(
        "adversarial_menu_value",
        adv.value,
        format!(">= {floor:.6}"),
        Status::from_bool(adv.value >= floor),
    );
    r.push(
        "adversarial_duality_gap",
        adv.duality_gap,
        format!("<= {GAP_LIMIT}"),
        Status::from_bool(adv.duality_gap <= GAP_LIMIT),
    );
    Ok(r)
}

/// Parses `p/q`.
pub fn parse_fraction(s: &str) -> Result<(u32, u32)> {
    let bad = || LabError::Config(format!("expected a fraction p/q, got {s:?}"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    Ok((
        p.trim().parse().map_err(|_| bad())?,
        q.trim().parse().map_err(|_| bad())?,
    ))
}
