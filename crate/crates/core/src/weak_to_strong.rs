//! Weak-to-strong learning from label proportions.
//!
//! Both algorithms hand the oracle union bags built from the small bags.
//! A1 uses the exact, weighted support of the union distribution; A2 uses
//! `s` iid draws. A classifier with accuracy below `1 − ε` on the small bags
//! satisfies at most `C₀/√(εt) + exp(−εt/8) ≤ α/2` of the union mass, so an
//! oracle that reaches `α` on the unions must return a `1 − ε` classifier.
//!
//! The oracle's success is reported, not assumed.

use rand::RngCore;

use crate::bag::BagCollection;
use crate::classifier::Classifier;
use crate::error::{bail, Error, Result};
use crate::metrics::accuracy;
use crate::oracle::WeakOracle;
use crate::union::{compute_t, sample_union_collection, support_collection, DEFAULT_C0};

/// `ε`, `α`, `C₀` and an optional explicit `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakToStrongParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub c0: f64,
    /// Overrides `compute_t(ε, α, C₀)`.
    pub t: Option<usize>,
}

impl WeakToStrongParams {
    pub fn new(epsilon: f64, alpha: f64) -> Self {
        Self {
            epsilon,
            alpha,
            c0: DEFAULT_C0,
            t: None,
        }
    }

    /// The slot count in force. With an explicit `t`, `ε` and `C₀` are not
    /// consulted.
    pub fn slots(&self) -> Result<usize> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            bail!(Parameter, "alpha must be in (0,1], got {}", self.alpha);
        }
        match self.t {
            Some(0) => bail!(Parameter, "t must be at least 1"),
            Some(t) => Ok(t),
            None => compute_t(self.epsilon, self.alpha, self.c0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakToStrongOutcome {
    pub classifier: Classifier,
    pub t: usize,
    /// The union-bag collection given to the oracle.
    pub large_bags: BagCollection,
    /// Oracle accuracy on `large_bags`.
    pub large_accuracy: f64,
    /// Accuracy of `classifier` on the input small bags.
    pub small_accuracy: f64,
    /// Whether the oracle reached `α` on `large_bags`.
    pub met_contract: bool,
}

fn finish<O: WeakOracle + ?Sized>(
    coll: &BagCollection,
    large_bags: BagCollection,
    t: usize,
    alpha: f64,
    oracle: &O,
) -> Result<WeakToStrongOutcome> {
    let kt = coll.max_bag_size() * t;
    if large_bags.max_bag_size() > kt {
        bail!(Data, "union bag larger than k·t = {kt}");
    }
    let r = oracle.fit(&large_bags, alpha)?;
    let small_accuracy = accuracy(&r.classifier, coll)?;
    Ok(WeakToStrongOutcome {
        classifier: r.classifier,
        t,
        large_bags,
        large_accuracy: r.achieved_accuracy,
        small_accuracy,
        met_contract: r.met_contract,
    })
}

/// A1: run the oracle on the exact support of the union distribution.
///
/// Fails with a size error when `(m+1)^t` exceeds the enumeration guard.
pub fn algorithm_a1<O: WeakOracle + ?Sized>(
    coll: &BagCollection,
    params: &WeakToStrongParams,
    oracle: &O,
) -> Result<WeakToStrongOutcome> {
    let t = params.slots()?;
    let support = support_collection(coll, t)?;
    finish(coll, support, t, params.alpha, oracle)
}

/// A2: run the oracle on `s` iid union bags, treated as unweighted.
///
/// Without an explicit `s`, it comes from [`compute_s`] with `n` the number
/// of distinct instances in `coll`.
pub fn algorithm_a2<O: WeakOracle + ?Sized, R: RngCore + ?Sized>(
    coll: &BagCollection,
    params: &WeakToStrongParams,
    delta: f64,
    s: Option<usize>,
    oracle: &O,
    rng: &mut R,
) -> Result<WeakToStrongOutcome> {
    let t = params.slots()?;
    let s = match s {
        Some(0) => bail!(Parameter, "s must be at least 1"),
        Some(s) => s,
        None => compute_s(coll.distinct_instances().len(), params.alpha, delta, None)?.s,
    };
    let cfg = crate::union::UnionConfig {
        t,
        c0: params.c0,
        epsilon: Some(params.epsilon),
        alpha: Some(params.alpha),
    };
    let large = sample_union_collection(coll, &cfg, s, rng)?;
    finish(coll, large, t, params.alpha, oracle)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSizePlan {
    pub n: usize,
    pub alpha: f64,
    pub delta: f64,
    pub vc_dim: Option<usize>,
    pub s: usize,
}

/// Number of union samples so that, with probability `1 − δ`, no
/// classifier with small-bag accuracy below `1 − ε` reaches `α` on them.
///
/// A fixed bad classifier satisfies a sample with probability at most
/// `α/2`, so by a Chernoff bound it reaches `α` on `s` samples with
/// probability at most `exp(−αs/6)`. A union bound over the `Π(n)`
/// labelings of `n` instances needs `Π(n)·exp(−αs/6) ≤ δ`, i.e.
/// `s ≥ (6/α)(ln Π(n) + ln(1/δ))`, with `Π(n) ≤ 2^n` in general and
/// `Π(n) ≤ (en/r)^r` for VC dimension `r < n`.
pub fn compute_s(n: usize, alpha: f64, delta: f64, vc_dim: Option<usize>) -> Result<SampleSizePlan> {
    if n == 0 {
        bail!(Parameter, "n must be at least 1");
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        bail!(Parameter, "alpha must be in (0,1], got {alpha}");
    }
    if !(delta > 0.0 && delta < 1.0) {
        bail!(Parameter, "delta must be in (0,1), got {delta}");
    }
    let nf = n as f64;
    let log_growth = match vc_dim {
        Some(0) => return Err(Error::Parameter("VC dimension must be positive".into())),
        Some(r) if r < n => {
            let r = r as f64;
            r * libm::log(core::f64::consts::E * nf / r)
        }
        _ => nf * core::f64::consts::LN_2,
    };
    let raw = 6.0 / alpha * (log_growth + libm::log(1.0 / delta));
    let s = (libm::ceil(raw * (1.0 - 1e-12)) as usize).max(1);
    Ok(SampleSizePlan {
        n,
        alpha,
        delta,
        vc_dim,
        s,
    })
}
