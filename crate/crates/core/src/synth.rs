//! Synthetic realizable bags, bag partitioning and train/test splits.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bag::{Bag, BagCollection, InstanceId, InstanceTable, Mode};
use crate::classifier::{dot, pos, Classifier, Labeling};
use crate::error::{bail, Error, Result};
use crate::geometry::{random_orthogonal_unit, random_unit_vector, rotate_towards};
use crate::rng::{index_draw, stream_rng, unit_f64, STREAM_DATA};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BagKind {
    /// `q` uniform points per bag.
    Random,
    /// `(q−1)/2` adversarial pairs plus one uniform point.
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub n_bags: usize,
    pub q: usize,
    pub d: usize,
    pub kind: BagKind,
    /// Angular slack of hard pairs, in radians.
    pub eta: f64,
    pub n_test: usize,
    pub seed: u64,
    /// Rejection attempts per hard pair.
    pub max_attempts: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_bags: 1000,
            q: 5,
            d: 10,
            kind: BagKind::Random,
            eta: 0.1,
            n_test: 1500,
            seed: 0,
            max_attempts: 100_000,
        }
    }
}

/// Generated bags together with the hidden labeler.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    /// Bags over an unlabeled instance table.
    pub bags: BagCollection,
    /// `pos(<f*, x>)`.
    pub target: Classifier,
    /// Ground-truth labels of the training instances.
    pub truth: Labeling,
    /// Labeled test instances, each a copy of a member of a random bag.
    pub test: InstanceTable,
}

fn validate(cfg: &SyntheticConfig, kind: BagKind) -> Result<()> {
    if cfg.kind != kind {
        bail!(Parameter, "configuration is for {:?} bags", cfg.kind);
    }
    if cfg.q == 0 || cfg.n_bags == 0 {
        bail!(Parameter, "q and n_bags must be positive");
    }
    if cfg.d < 2 {
        bail!(Parameter, "dimension must be at least 2");
    }
    if kind == BagKind::Hard {
        if cfg.q % 2 == 0 {
            bail!(Parameter, "hard bags need odd q, got {}", cfg.q);
        }
        if !(cfg.eta > 0.0 && cfg.eta < core::f64::consts::FRAC_PI_2) {
            bail!(Parameter, "eta must be in (0, π/2), got {}", cfg.eta);
        }
    }
    Ok(())
}

/// Bags of `q` uniform points on the sphere labeled by a random
/// homogeneous halfspace.
pub fn gen_random_bags(cfg: &SyntheticConfig) -> Result<SyntheticData> {
    validate(cfg, BagKind::Random)?;
    generate(cfg, |rng, _f, out| {
        for _ in 0..cfg.q {
            out.push(random_unit_vector(cfg.d, rng));
        }
        Ok(())
    })
}

/// Bags of close opposite-label pairs and near-antipodal same-label pairs
/// (fair coin per pair) plus one uniform point.
pub fn gen_hard_bags(cfg: &SyntheticConfig) -> Result<SyntheticData> {
    validate(cfg, BagKind::Hard)?;
    generate(cfg, |rng, f, out| {
        for _ in 0..cfg.q / 2 {
            let close = rng.random::<bool>();
            let (x, y) = hard_pair(f, close, cfg, rng)?;
            out.push(x);
            out.push(y);
        }
        out.push(random_unit_vector(cfg.d, rng));
        Ok(())
    })
}

fn hard_pair<R: Rng + ?Sized>(
    f: &[f64],
    close: bool,
    cfg: &SyntheticConfig,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    for _ in 0..cfg.max_attempts {
        let x = random_unit_vector(cfg.d, rng);
        let v = random_orthogonal_unit(&x, rng);
        let slack = cfg.eta * unit_f64(rng);
        let phi = if close { slack } else { core::f64::consts::PI - slack };
        let y = rotate_towards(&x, &v, phi);
        let same = pos(dot(f, &x)) == pos(dot(f, &y));
        if same != close {
            return Ok((x, y));
        }
    }
    Err(Error::Generation {
        what: if close { "close pair" } else { "antipodal pair" },
        attempts: cfg.max_attempts,
    })
}

fn generate<F>(cfg: &SyntheticConfig, mut bag_points: F) -> Result<SyntheticData>
where
    F: FnMut(&mut crate::rng::ChaCha8Rng, &[f64], &mut Vec<Vec<f64>>) -> Result<()>,
{
    let mut rng = stream_rng(cfg.seed, STREAM_DATA);
    let f = random_unit_vector(cfg.d, &mut rng);
    let mut table = InstanceTable::with_capacity(cfg.d, cfg.n_bags * cfg.q);
    let mut truth = Vec::with_capacity(cfg.n_bags * cfg.q);
    let mut bags = Vec::with_capacity(cfg.n_bags);
    let mut points = Vec::with_capacity(cfg.q);
    for _ in 0..cfg.n_bags {
        points.clear();
        bag_points(&mut rng, &f, &mut points)?;
        let mut members = Vec::with_capacity(cfg.q);
        let mut sigma = 0u32;
        for p in &points {
            let y = pos(dot(&f, p));
            sigma += u32::from(y);
            truth.push(y);
            members.push(table.push(p, None)?);
        }
        bags.push(Bag::new(Mode::Llp, members, sigma)?);
    }
    let mut test = InstanceTable::with_capacity(cfg.d, cfg.n_test);
    for _ in 0..cfg.n_test {
        let bag = &bags[index_draw(&mut rng, bags.len())];
        let id = bag.members()[index_draw(&mut rng, bag.len())];
        test.push(table.coords(id), Some(truth[id.index()]))?;
    }
    Ok(SyntheticData {
        bags: BagCollection::unweighted(Mode::Llp, Arc::new(table), bags)?,
        target: Classifier::HomogeneousHalfspace { normal: f },
        truth: Labeling::new(truth),
        test,
    })
}

/// Bags from a random partition of a labeled table.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Bags over the table with labels stripped.
    pub bags: BagCollection,
    /// Rows left out by the short final block.
    pub dropped: usize,
}

/// Random permutation cut into consecutive `q`-blocks; `σ` is the sum of
/// member labels. A short final block is dropped.
pub fn partition_into_bags<R: Rng + ?Sized>(table: &InstanceTable, q: usize, rng: &mut R) -> Result<Partition> {
    if q == 0 || q > table.len() {
        bail!(Parameter, "bag size {q} must be in 1..={}", table.len());
    }
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.shuffle(rng);
    let mut bags = Vec::with_capacity(table.len() / q);
    for block in order.chunks_exact(q) {
        let mut sigma = 0u32;
        let mut members = Vec::with_capacity(q);
        for &i in block {
            let id = InstanceId(i);
            match table.label(id) {
                Some(y) => sigma += u32::from(y),
                None => bail!(Data, "row {i} has no label"),
            }
            members.push(id);
        }
        bags.push(Bag::new(Mode::Llp, members, sigma)?);
    }
    Ok(Partition {
        dropped: table.len() % q,
        bags: BagCollection::unweighted(Mode::Llp, Arc::new(table.without_labels()), bags)?,
    })
}

/// Number of test rows: `fraction·n` rounded to nearest, ties up.
pub fn test_size(n: usize, fraction: f64) -> usize {
    libm::floor(fraction * n as f64 + 0.5 + 1e-9) as usize
}

/// `(train, test)` by a random subset of `test_size(n, fraction)` rows.
/// Both parts keep the original row order.
pub fn split_test<R: Rng + ?Sized>(
    table: &InstanceTable,
    fraction: f64,
    rng: &mut R,
) -> Result<(InstanceTable, InstanceTable)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        bail!(Parameter, "test fraction must be in (0,1), got {fraction}");
    }
    let n_test = test_size(table.len(), fraction);
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.shuffle(rng);
    let mut is_test = alloc::vec![false; table.len()];
    order[..n_test].iter().for_each(|&i| is_test[i] = true);
    let pick = |want: bool| -> Vec<InstanceId> {
        (0..table.len())
            .filter(|&i| is_test[i] == want)
            .map(InstanceId)
            .collect()
    };
    Ok((table.select(&pick(false)), table.select(&pick(true))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::angle;
    use crate::metrics::accuracy_with;

    fn small(kind: BagKind) -> SyntheticConfig {
        SyntheticConfig {
            n_bags: 200,
            n_test: 300,
            kind,
            seed: 4,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn random_bags_consistent_with_target() {
        let data = gen_random_bags(&small(BagKind::Random)).unwrap();
        assert_eq!(data.bags.len(), 200);
        assert_eq!(accuracy_with(&data.truth, &data.bags), 1.0);
        assert_eq!(data.target.label_table(data.bags.table()).unwrap(), data.truth);
        for x in data.test.iter() {
            assert_eq!(Some(data.target.predict(x).unwrap()), x.label);
        }
    }

    #[test]
    fn hard_pairs_have_their_shape() {
        let cfg = small(BagKind::Hard);
        let data = gen_hard_bags(&cfg).unwrap();
        assert_eq!(accuracy_with(&data.truth, &data.bags), 1.0);
        let t = data.bags.table();
        for bag in data.bags.bags() {
            for pair in bag.members()[..4].chunks(2) {
                let a = angle(t.coords(pair[0]), t.coords(pair[1]));
                let same = data.truth.get(pair[0]) == data.truth.get(pair[1]);
                if a <= cfg.eta + 1e-9 {
                    assert!(!same);
                } else {
                    assert!(a >= core::f64::consts::PI - cfg.eta - 1e-9);
                    assert!(same);
                }
            }
        }
    }

    #[test]
    fn hard_needs_odd_q() {
        let cfg = SyntheticConfig {
            q: 4,
            ..small(BagKind::Hard)
        };
        assert!(gen_hard_bags(&cfg).is_err());
        assert!(gen_random_bags(&small(BagKind::Hard)).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_random_bags(&small(BagKind::Random)).unwrap();
        let b = gen_random_bags(&small(BagKind::Random)).unwrap();
        assert_eq!(a, b);
    }

    fn labeled(n: usize) -> InstanceTable {
        let mut t = InstanceTable::new(1);
        for i in 0..n {
            t.push(&[i as f64], Some(i % 3 == 0)).unwrap();
        }
        t
    }

    #[test]
    fn partition_examples() {
        let t = labeled(103);
        let mut rng = stream_rng(0, 0);
        let p = partition_into_bags(&t, 5, &mut rng).unwrap();
        assert_eq!((p.bags.len(), p.dropped), (20, 3));
        for b in p.bags.bags() {
            let s = b.members().iter().filter(|id| t.label(**id) == Some(true)).count();
            assert_eq!(s as u32, b.label());
            assert!(b.members().iter().all(|id| p.bags.table().label(*id).is_none()));
        }
        let mut seen = p.bags.distinct_instances();
        seen.dedup();
        assert_eq!(seen.len(), 100);
        assert!(partition_into_bags(&t, 104, &mut rng).is_err());
    }

    #[test]
    fn split_rounding() {
        assert_eq!(test_size(690, 0.15), 104);
        assert_eq!(test_size(303, 0.15), 45);
        let mut rng = stream_rng(0, 0);
        let (train, test) = split_test(&labeled(690), 0.15, &mut rng).unwrap();
        assert_eq!((train.len(), test.len()), (586, 104));
        assert!(split_test(&labeled(10), 1.0, &mut rng).is_err());
    }
}
