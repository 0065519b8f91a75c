use alloc::vec::Vec;

use rand::Rng;

use super::{OracleResult, WeakOracle};
use crate::bag::BagCollection;
use crate::classifier::{Classifier, Labeling};
use crate::error::{bail, Result};
use crate::geometry::random_unit_vector;
use crate::metrics::accuracy_with;

/// `pos(<r,x>)` with `r` uniform on the unit sphere.
pub fn random_homogeneous_halfspace<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Classifier> {
    if d < 2 {
        bail!(Parameter, "random halfspace needs dimension at least 2, got {d}");
    }
    Ok(Classifier::HomogeneousHalfspace {
        normal: random_unit_vector(d, rng),
    })
}

/// `(cos(2πk/n), sin(2πk/n))`.
pub fn direction_2d(k: usize, n: usize) -> [f64; 2] {
    let phi = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
    [libm::cos(phi), libm::sin(phi)]
}

/// Best of the two constants and `n_dirs` evenly spaced homogeneous
/// halfspaces in the plane. Constants are tried first and only a strictly
/// better halfspace replaces the incumbent.
pub fn best_halfspace_2d(coll: &BagCollection, n_dirs: usize, alpha: f64) -> Result<OracleResult> {
    let table = coll.table();
    if table.dim() != 2 {
        bail!(Data, "2-D halfspace search on {}-dimensional data", table.dim());
    }
    if n_dirs == 0 {
        bail!(Parameter, "need at least one direction");
    }
    let n = table.len();
    let mut best = (
        Classifier::constant(2, false),
        accuracy_with(&Labeling::constant(n, false), coll),
    );
    let ones = accuracy_with(&Labeling::constant(n, true), coll);
    if ones > best.1 {
        best = (Classifier::constant(2, true), ones);
    }
    for k in 0..n_dirs {
        let r = direction_2d(k, n_dirs);
        let labels: Vec<bool> = table
            .iter()
            .map(|x| r[0] * x.coords[0] + r[1] * x.coords[1] > 0.0)
            .collect();
        let acc = accuracy_with(&Labeling::new(labels), coll);
        if acc > best.1 {
            best = (Classifier::HomogeneousHalfspace { normal: r.to_vec() }, acc);
        }
    }
    let (classifier, achieved_accuracy) = best;
    Ok(OracleResult {
        classifier,
        achieved_accuracy,
        met_contract: achieved_accuracy >= alpha,
    })
}

/// [`WeakOracle`] backed by [`best_halfspace_2d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfspaceOracle {
    pub n_dirs: usize,
}

impl Default for HalfspaceOracle {
    fn default() -> Self {
        Self { n_dirs: 720 }
    }
}

impl WeakOracle for HalfspaceOracle {
    fn name(&self) -> &'static str {
        "halfspace-2d"
    }

    fn fit(&self, bags: &BagCollection, alpha: f64) -> Result<OracleResult> {
        best_halfspace_2d(bags, self.n_dirs, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::{Bag, InstanceId, InstanceTable, Mode};
    use crate::geometry::norm;
    use crate::metrics::accuracy;
    use crate::rng::stream_rng;
    use alloc::sync::Arc;
    use alloc::vec;

    #[test]
    fn random_halfspace_is_unit_and_checked() {
        let mut rng = stream_rng(1, 0);
        let Classifier::HomogeneousHalfspace { normal } = random_homogeneous_halfspace(5, &mut rng).unwrap() else {
            unreachable!()
        };
        assert!((norm(&normal) - 1.0).abs() < 1e-12);
        assert!(random_homogeneous_halfspace(1, &mut rng).is_err());
    }

    #[test]
    fn finds_separating_direction() {
        let mut t = InstanceTable::new(2);
        for p in [[1.0, 0.2], [0.9, -0.1], [-1.0, 0.3], [-0.8, -0.4]] {
            t.push(&p, None).unwrap();
        }
        let llp = |m: &[usize], l| Bag::new(Mode::Llp, m.iter().map(|&i| InstanceId(i)).collect(), l).unwrap();
        let bags = vec![llp(&[0, 1], 2), llp(&[2, 3], 0), llp(&[0, 2], 1)];
        let c = BagCollection::unweighted(Mode::Llp, Arc::new(t), bags).unwrap();
        let r = best_halfspace_2d(&c, 720, 0.9).unwrap();
        assert_eq!(r.achieved_accuracy, 1.0);
        assert!(r.met_contract);
        assert_eq!(accuracy(&r.classifier, &c).unwrap(), 1.0);
    }

    #[test]
    fn constants_win_ties() {
        let mut t = InstanceTable::new(2);
        t.push(&[1.0, 0.0], None).unwrap();
        let bags = vec![Bag::new(Mode::Llp, vec![InstanceId(0)], 0).unwrap()];
        let c = BagCollection::unweighted(Mode::Llp, Arc::new(t), bags).unwrap();
        let r = best_halfspace_2d(&c, 8, 0.5).unwrap();
        assert_eq!(r.classifier, Classifier::constant(2, false));
    }
}
