//! Sampled LLP bags from wide-angle edges on the sphere.
//!
//! Points are added one at a time. Each new point is drawn uniformly from
//! the band of angles `[θ, θ + band]` around a random earlier point, and
//! every earlier point at an angle inside the band becomes an edge. Each
//! edge is a size-2 bag with label 1, so a labeling satisfies a bag exactly
//! when it cuts the edge.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::bag::{Bag, BagCollection, InstanceId, InstanceTable, Mode};
use crate::classifier::Labeling;
use crate::error::{bail, Error, Result};
use crate::geometry::{angle, random_orthogonal_unit, random_unit_vector, rotate_towards};
use crate::metrics::accuracy_with;
use crate::oracle::{brute_force_best_labeling, BRUTE_FORCE_MAX_INSTANCES};
use crate::rng::{index_draw, stream_rng, unit_f64, STREAM_DATA};

const BAND_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxCutLlpConfig {
    /// `θ/π`.
    pub alpha: f64,
    pub epsilon: f64,
    pub d: usize,
    pub n_pairs: usize,
    pub seed: u64,
    /// Band width in radians; `επ` when unset.
    pub band: Option<f64>,
    /// Rejection attempts per sampled angle.
    pub max_attempts: u64,
}

impl MaxCutLlpConfig {
    pub fn new(alpha: f64, epsilon: f64, d: usize, n_pairs: usize, seed: u64) -> Self {
        Self {
            alpha,
            epsilon,
            d,
            n_pairs,
            seed,
            band: None,
            max_attempts: 10_000,
        }
    }

    /// `(θ, θ + band)`.
    pub fn angle_range(&self) -> (f64, f64) {
        let theta = self.alpha * core::f64::consts::PI;
        let band = self.band.unwrap_or(self.epsilon * core::f64::consts::PI);
        (theta, theta + band)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.5 && self.alpha < 1.0) {
            bail!(Parameter, "alpha must be in [1/2, 1), got {}", self.alpha);
        }
        if !(self.epsilon > 0.0 && self.alpha + self.epsilon < 1.0) {
            bail!(Parameter, "need epsilon > 0 and alpha + epsilon < 1");
        }
        if self.d < 2 {
            bail!(Parameter, "dimension must be at least 2");
        }
        if self.n_pairs == 0 {
            bail!(Parameter, "need at least one pair");
        }
        let (lo, hi) = self.angle_range();
        if !(hi > lo && hi <= core::f64::consts::PI) {
            bail!(Parameter, "angle band [{lo}, {hi}] must be non-empty and inside [0, π]");
        }
        Ok(())
    }
}

/// Angle in `[lo, hi]` with density proportional to `sin^{d−2}`, the law of
/// the angle between two uniform points on `S^{d−1}`.
fn sample_band_angle<R: Rng + ?Sized>(lo: f64, hi: f64, d: usize, max_attempts: u64, rng: &mut R) -> Result<f64> {
    let power = (d - 2) as i32;
    let peak = if lo <= core::f64::consts::FRAC_PI_2 && hi >= core::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        libm::sin(lo).max(libm::sin(hi))
    };
    let peak = libm::pow(peak, f64::from(power));
    for _ in 0..max_attempts {
        let phi = lo + (hi - lo) * unit_f64(rng);
        if unit_f64(rng) * peak <= libm::pow(libm::sin(phi), f64::from(power)) {
            return Ok(phi);
        }
    }
    Err(Error::Generation {
        what: "band angle",
        attempts: max_attempts,
    })
}

/// LLP bags `{u, v}` with `σ = 1` for `n_pairs` edges in the angle band.
pub fn gen_llp_maxcut_bags(cfg: &MaxCutLlpConfig) -> Result<BagCollection> {
    cfg.validate()?;
    let (lo, hi) = cfg.angle_range();
    let mut rng = stream_rng(cfg.seed, STREAM_DATA);
    let mut points: Vec<Vec<f64>> = vec![random_unit_vector(cfg.d, &mut rng)];
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(cfg.n_pairs);
    while edges.len() < cfg.n_pairs {
        let parent = index_draw(&mut rng, points.len());
        let phi = sample_band_angle(lo, hi, cfg.d, cfg.max_attempts, &mut rng)?;
        let dir = random_orthogonal_unit(&points[parent], &mut rng);
        let x = rotate_towards(&points[parent], &dir, phi);
        let new = points.len();
        edges.push((parent, new));
        for (u, p) in points.iter().enumerate() {
            if edges.len() == cfg.n_pairs {
                break;
            }
            let a = angle(p, &x);
            if u != parent && a >= lo - BAND_EPS && a <= hi + BAND_EPS {
                edges.push((u, new));
            }
        }
        points.push(x);
    }
    let mut table = InstanceTable::with_capacity(cfg.d, points.len());
    for p in &points {
        table.push(p, None)?;
    }
    let bags = edges
        .into_iter()
        .map(|(u, v)| Bag::new(Mode::Llp, vec![InstanceId(u), InstanceId(v)], 1))
        .collect::<Result<Vec<_>>>()?;
    BagCollection::unweighted(Mode::Llp, Arc::new(table), bags)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoStrongReport {
    pub best_accuracy: f64,
    pub labeling: Labeling,
    /// True when `best_accuracy` is the exact optimum; otherwise it is only
    /// a lower bound on it.
    pub exact: bool,
}

/// Best labeling accuracy: exact for at most 24 distinct instances, else
/// the best of `budget` hill-climbing restarts.
pub fn verify_llp_no_strong<R: Rng + ?Sized>(
    coll: &BagCollection,
    budget: usize,
    rng: &mut R,
) -> Result<NoStrongReport> {
    if coll.distinct_instances().len() <= BRUTE_FORCE_MAX_INSTANCES {
        let (labeling, best_accuracy) = brute_force_best_labeling(coll)?;
        return Ok(NoStrongReport {
            best_accuracy,
            labeling,
            exact: true,
        });
    }
    let (labeling, best_accuracy) = local_search_best_labeling(coll, budget, rng)?;
    Ok(NoStrongReport {
        best_accuracy,
        labeling,
        exact: false,
    })
}

/// Random restarts of single-flip hill climbing on the bag accuracy.
pub fn local_search_best_labeling<R: Rng + ?Sized>(
    coll: &BagCollection,
    restarts: usize,
    rng: &mut R,
) -> Result<(Labeling, f64)> {
    if restarts == 0 {
        bail!(Parameter, "need at least one restart");
    }
    let n = coll.table().len();
    let mode = coll.mode();
    // incidence[i] = (bag, multiplicity of i in it)
    let mut incidence: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (j, bag) in coll.bags().iter().enumerate() {
        for id in bag.members() {
            match incidence[id.index()].iter_mut().find(|(b, _)| *b == j) {
                Some(entry) => entry.1 += 1,
                None => incidence[id.index()].push((j, 1)),
            }
        }
    }
    let weight: Vec<f64> = (0..coll.len()).map(|j| coll.weight(j)).collect();
    let sat = |count: u32, label: u32| match mode {
        Mode::Llp => count == label,
        Mode::Mil => u32::from(count > 0) == label,
    };

    let mut best: Option<(Vec<bool>, f64)> = None;
    for _ in 0..restarts {
        let mut labels: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
        let mut counts: Vec<u32> = coll
            .bags()
            .iter()
            .map(|b| b.members().iter().filter(|id| labels[id.index()]).count() as u32)
            .collect();
        loop {
            let mut improved = false;
            for i in 0..n {
                let gain: f64 = incidence[i]
                    .iter()
                    .map(|&(j, mult)| {
                        let label = coll.bags()[j].label();
                        let after = if labels[i] { counts[j] - mult } else { counts[j] + mult };
                        weight[j]
                            * (f64::from(u8::from(sat(after, label))) - f64::from(u8::from(sat(counts[j], label))))
                    })
                    .sum();
                if gain > 1e-12 {
                    for &(j, mult) in &incidence[i] {
                        counts[j] = if labels[i] { counts[j] - mult } else { counts[j] + mult };
                    }
                    labels[i] = !labels[i];
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        let acc = accuracy_with(&Labeling::new(labels.clone()), coll);
        if best.as_ref().map_or(true, |b| acc > b.1) {
            best = Some((labels, acc));
        }
    }
    let (labels, acc) = best.expect("at least one restart");
    Ok((Labeling::new(labels), acc))
}
