//! The union-bag distribution over small-bag collections.
//!
//! A draw picks `t` bags uniformly with replacement, keeps each one
//! independently with probability 1/2, and concatenates the kept bags into
//! one large bag whose label is the sum of the kept labels. Concatenation is
//! a multiset union: a bag drawn twice contributes its members twice, which
//! keeps `h(B̄) − σ̄ = Σ (h(B_i) − σ_i)` exact for every classifier.

use alloc::vec::Vec;

use rand::RngCore;

use crate::bag::{Bag, BagCollection, InstanceId, Mode};
use crate::classifier::Classifier;
use crate::error::{bail, Error, Result};
use crate::metrics::{accuracy_with, residual_with};
use crate::rng::{coin_draw, index_draw};

/// Default anti-concentration constant, close to `sqrt(2/π)`.
pub const DEFAULT_C0: f64 = 0.8;

/// Largest `(m+1)^t` accepted by [`enumerate_support`].
pub const SUPPORT_GUARD: u128 = 10_000_000;

/// `t = ⌈(32/ε)(C₀/α)²⌉`.
pub fn compute_t(epsilon: f64, alpha: f64, c0: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        bail!(Parameter, "epsilon must be in (0,1], got {epsilon}");
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        bail!(Parameter, "alpha must be in (0,1], got {alpha}");
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        bail!(Parameter, "C0 must be positive, got {c0}");
    }
    let ratio = c0 / alpha;
    let raw = 32.0 / epsilon * ratio * ratio;
    // Relative slack absorbs representation error in ε, α, C₀ (e.g. 32/0.1).
    Ok((libm::ceil(raw * (1.0 - 1e-12)) as usize).max(1))
}

/// `C₀/√(ζt) + exp(−ζt/8)`, the bound on how often a classifier with
/// accuracy at most `1 − ζ` satisfies a union bag.
pub fn amplification_bound(c0: f64, zeta: f64, t: usize) -> f64 {
    let zt = zeta * t as f64;
    c0 / libm::sqrt(zt) + libm::exp(-zt / 8.0)
}

/// Parameters of the union distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionConfig {
    /// Number of slots.
    pub t: usize,
    pub c0: f64,
    /// Target slack, when `t` was derived.
    pub epsilon: Option<f64>,
    /// Oracle accuracy, when `t` was derived.
    pub alpha: Option<f64>,
}

impl UnionConfig {
    /// Explicit slot count with the default `C₀`.
    pub fn fixed(t: usize) -> Result<Self> {
        if t == 0 {
            bail!(Parameter, "t must be at least 1");
        }
        Ok(Self {
            t,
            c0: DEFAULT_C0,
            epsilon: None,
            alpha: None,
        })
    }

    /// `t` from [`compute_t`].
    pub fn derived(epsilon: f64, alpha: f64, c0: f64) -> Result<Self> {
        Ok(Self {
            t: compute_t(epsilon, alpha, c0)?,
            c0,
            epsilon: Some(epsilon),
            alpha: Some(alpha),
        })
    }
}

/// One draw: concatenated members, summed label, kept source indices (in
/// slot order for samples, ascending for support entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionBag {
    pub members: Vec<InstanceId>,
    pub label: u32,
    pub provenance: Vec<usize>,
}

impl UnionBag {
    fn from_sources(coll: &BagCollection, provenance: Vec<usize>) -> Self {
        let bags = coll.bags();
        let size = provenance.iter().map(|&j| bags[j].len()).sum();
        let mut members = Vec::with_capacity(size);
        let mut label = 0u32;
        for &j in &provenance {
            members.extend_from_slice(bags[j].members());
            label += bags[j].label();
        }
        Self {
            members,
            label,
            provenance,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_bag(self) -> Bag {
        Bag::union(self.members, self.label, self.provenance).expect("union of valid LLP bags is a valid LLP bag")
    }
}

/// Draws the `t` slots: `t` index draws then `t` coin draws, one `u64` each.
/// Writes kept source indices (slot order) into `kept`.
fn draw_slots<R: RngCore + ?Sized>(rng: &mut R, m: usize, t: usize, picks: &mut Vec<usize>, kept: &mut Vec<usize>) {
    picks.clear();
    kept.clear();
    picks.extend((0..t).map(|_| index_draw(rng, m)));
    for &j in picks.iter() {
        if coin_draw(rng) {
            kept.push(j);
        }
    }
}

fn check_source(coll: &BagCollection) -> Result<()> {
    if coll.is_weighted() {
        bail!(Precondition, "union sampling needs an unweighted collection");
    }
    if coll.is_empty() {
        bail!(Precondition, "union sampling needs at least one bag");
    }
    if coll.mode() != Mode::Llp {
        bail!(Precondition, "union bags are defined for LLP collections");
    }
    Ok(())
}

/// One draw from the union distribution.
pub fn sample_union<R: RngCore + ?Sized>(coll: &BagCollection, cfg: &UnionConfig, rng: &mut R) -> Result<UnionBag> {
    check_source(coll)?;
    let mut picks = Vec::with_capacity(cfg.t);
    let mut kept = Vec::with_capacity(cfg.t);
    draw_slots(rng, coll.len(), cfg.t, &mut picks, &mut kept);
    Ok(UnionBag::from_sources(coll, kept))
}

/// `s` iid draws as an unweighted collection over the same instance table.
/// Every bag is checked against the `k·t` size bound.
pub fn sample_union_collection<R: RngCore + ?Sized>(
    coll: &BagCollection,
    cfg: &UnionConfig,
    s: usize,
    rng: &mut R,
) -> Result<BagCollection> {
    check_source(coll)?;
    let cap = coll.max_bag_size() * cfg.t;
    let mut picks = Vec::with_capacity(cfg.t);
    let mut kept = Vec::with_capacity(cfg.t);
    let mut bags = Vec::with_capacity(s);
    for _ in 0..s {
        draw_slots(rng, coll.len(), cfg.t, &mut picks, &mut kept);
        let union = UnionBag::from_sources(coll, kept.clone());
        if union.members.len() > cap {
            bail!(Data, "union bag of size {} exceeds k·t = {cap}", union.members.len());
        }
        bags.push(union.into_bag());
    }
    BagCollection::unweighted(Mode::Llp, coll.shared_table().clone(), bags)
}

/// One point of the exact support.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportEntry {
    pub union: UnionBag,
    pub weight: f64,
}

fn support_size_bound(m: usize, t: usize) -> u128 {
    (m as u128 + 1).checked_pow(t as u32).unwrap_or(u128::MAX)
}

/// Exact support of the union distribution, one entry per multiset of
/// source indices (sorted ascending). A multiset of size `r` with
/// multiplicities `c_1..c_u` has probability
/// `C(t,r) 2^{-t} · r!/∏c_i! · m^{-r}`.
pub fn enumerate_support(coll: &BagCollection, t: usize) -> Result<Vec<SupportEntry>> {
    check_source(coll)?;
    let m = coll.len();
    let bound = support_size_bound(m, t);
    if bound > SUPPORT_GUARD {
        return Err(Error::Size {
            what: "(m+1)^t",
            actual: bound,
            limit: SUPPORT_GUARD,
        });
    }
    let half_t = libm::pow(0.5, t as f64);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t);
    for r in 0..=t {
        let slot_prob = binomial(t, r) * half_t * libm::pow(m as f64, -(r as f64));
        multisets(m, r, 0, &mut current, &mut |ms| {
            let weight = slot_prob * arrangements(ms);
            out.push(SupportEntry {
                union: UnionBag::from_sources(coll, ms.to_vec()),
                weight,
            });
        });
    }
    Ok(out)
}

/// Support of the union distribution as a weighted collection.
pub fn support_collection(coll: &BagCollection, t: usize) -> Result<BagCollection> {
    let support = enumerate_support(coll, t)?;
    let (bags, weights): (Vec<Bag>, Vec<f64>) = support.into_iter().map(|e| (e.union.into_bag(), e.weight)).unzip();
    BagCollection::new(Mode::Llp, coll.shared_table().clone(), bags, Some(weights))
}

fn multisets(m: usize, remaining: usize, start: usize, current: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if remaining == 0 {
        f(current);
        return;
    }
    for j in start..m {
        current.push(j);
        multisets(m, remaining - 1, j, current, f);
        current.pop();
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `r!/∏c_i!` for a sorted multiset.
fn arrangements(sorted: &[usize]) -> f64 {
    let mut value = 1.0;
    let mut run = 0usize;
    for (i, j) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *j { run + 1 } else { 1 };
        value *= (i + 1) as f64 / run as f64;
    }
    value
}

/// Outcome of [`verify_error_amplification`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationReport {
    /// Accuracy of the classifier on the small bags.
    pub accuracy: f64,
    pub empirical_sat_rate: f64,
    pub standard_error: f64,
    pub bound: f64,
    /// `empirical_sat_rate ≤ bound + 3·standard_error`.
    pub holds: bool,
}

/// Monte-Carlo check that a classifier with accuracy at most `1 − ζ` on the
/// small bags satisfies union bags at most `C₀/√(ζt) + exp(−ζt/8)` of the
/// time. Union residuals are accumulated from per-bag residuals.
pub fn verify_error_amplification<R: RngCore + ?Sized>(
    h: &Classifier,
    coll: &BagCollection,
    cfg: &UnionConfig,
    zeta: f64,
    n_samples: usize,
    rng: &mut R,
) -> Result<AmplificationReport> {
    check_source(coll)?;
    if !(zeta > 0.0 && zeta < 1.0) {
        bail!(Parameter, "zeta must be in (0,1), got {zeta}");
    }
    if n_samples == 0 {
        bail!(Parameter, "n_samples must be positive");
    }
    let labels = h.label_table(coll.table())?;
    let accuracy = accuracy_with(&labels, coll);
    if accuracy > 1.0 - zeta + 1e-12 {
        bail!(
            Precondition,
            "classifier accuracy {accuracy} exceeds 1 - zeta = {}",
            1.0 - zeta
        );
    }
    let residuals: Vec<i64> = coll.bags().iter().map(|b| residual_with(&labels, b)).collect();
    let mut picks = Vec::with_capacity(cfg.t);
    let mut kept = Vec::with_capacity(cfg.t);
    let mut hits = 0usize;
    for _ in 0..n_samples {
        draw_slots(rng, coll.len(), cfg.t, &mut picks, &mut kept);
        if kept.iter().map(|&j| residuals[j]).sum::<i64>() == 0 {
            hits += 1;
        }
    }
    let rate = hits as f64 / n_samples as f64;
    let standard_error = libm::sqrt(rate * (1.0 - rate) / n_samples as f64);
    let bound = amplification_bound(cfg.c0, zeta, cfg.t);
    Ok(AmplificationReport {
        accuracy,
        empirical_sat_rate: rate,
        standard_error,
        bound,
        holds: rate <= bound + 3.0 * standard_error,
    })
}
