//! Bag satisfaction, accuracy and the trivial-accuracy baseline.

use alloc::vec::Vec;

use crate::bag::{Bag, BagCollection, InstanceTable, Mode};
use crate::classifier::{Classifier, Labeling};
use crate::error::{bail, Result};
use crate::game;

/// `h(B) - σ` for a labeling that covers every member of `bag`.
///
/// Panics if a member is outside the labeling.
pub fn residual_with(labels: &Labeling, bag: &Bag) -> i64 {
    let positives = bag
        .members()
        .iter()
        .filter(|&&id| labels.as_slice()[id.index()])
        .count();
    positives as i64 - i64::from(bag.label())
}

/// Whether `labels` reproduces the aggregate label of `bag`.
pub fn satisfies(labels: &Labeling, bag: &Bag) -> bool {
    match bag.mode() {
        Mode::Llp => residual_with(labels, bag) == 0,
        Mode::Mil => {
            let any = bag.members().iter().any(|&id| labels.as_slice()[id.index()]);
            u32::from(any) == bag.label()
        }
    }
}

/// Weighted fraction of bags satisfied by `labels`.
pub fn accuracy_with(labels: &Labeling, coll: &BagCollection) -> f64 {
    match coll.weights() {
        Some(w) => coll
            .bags()
            .iter()
            .zip(w)
            .filter(|(bag, _)| satisfies(labels, bag))
            .map(|(_, w)| w)
            .sum(),
        None if coll.is_empty() => 0.0,
        None => {
            let hits = coll.bags().iter().filter(|b| satisfies(labels, b)).count();
            hits as f64 / coll.len() as f64
        }
    }
}

fn labels_for_bag(h: &Classifier, bag: &Bag, table: &InstanceTable) -> Result<Labeling> {
    if let Some(id) = bag.members().iter().find(|id| !table.contains(**id)) {
        bail!(Data, "bag member {id} is not in the instance table");
    }
    h.label_table(table)
}

/// `Σ_{x∈B} h(x) − σ` for an LLP bag.
pub fn residual(h: &Classifier, bag: &Bag, table: &InstanceTable) -> Result<i64> {
    if bag.mode() != Mode::Llp {
        bail!(Precondition, "residual is defined for LLP bags only");
    }
    let labels = labels_for_bag(h, bag, table)?;
    Ok(residual_with(&labels, bag))
}

pub fn is_satisfied(h: &Classifier, bag: &Bag, table: &InstanceTable) -> Result<bool> {
    let labels = labels_for_bag(h, bag, table)?;
    Ok(satisfies(&labels, bag))
}

/// Weighted accuracy of `h` on `coll` (uniform `1/m` when unweighted).
pub fn accuracy(h: &Classifier, coll: &BagCollection) -> Result<f64> {
    let labels = h.label_table(coll.table())?;
    Ok(accuracy_with(&labels, coll))
}

/// Probability that iid fair-coin instance labels satisfy `bag`.
pub fn random_classifier_satisfaction_prob(bag: &Bag) -> f64 {
    let q = bag.len();
    let sigma = bag.label() as usize;
    match bag.mode() {
        Mode::Llp => binomial_half_pmf(q, sigma),
        Mode::Mil if sigma == 0 => libm::pow(0.5, q as f64),
        Mode::Mil => 1.0 - libm::pow(0.5, q as f64),
    }
}

/// `C(q, k) / 2^q`, computed by interleaving the product with halvings so
/// nothing overflows for large `q`.
fn binomial_half_pmf(q: usize, k: usize) -> f64 {
    if k > q {
        return 0.0;
    }
    let k = k.min(q - k);
    let mut p = 1.0f64;
    let mut halvings = q;
    for i in 0..k {
        p *= (q - i) as f64 / (i + 1) as f64;
        while p > 1.0 && halvings > 0 {
            p *= 0.5;
            halvings -= 1;
        }
    }
    p * libm::pow(0.5, halvings as f64)
}

/// Satisfaction values of the three reference classifiers on one bag:
/// `[random, all-zeros, all-ones]`.
pub fn reference_values(bag: &Bag) -> [f64; 3] {
    let sigma = bag.label() as usize;
    let (zero, one) = match bag.mode() {
        Mode::Llp => (sigma == 0, sigma == bag.len()),
        Mode::Mil => (sigma == 0, sigma == 1),
    };
    [
        random_classifier_satisfaction_prob(bag),
        f64::from(u8::from(zero)),
        f64::from(u8::from(one)),
    ]
}

/// Worst-case weighting's best accuracy among the random, all-zeros and
/// all-ones classifiers, evaluated as the value of the bags-vs-references
/// zero-sum game. The collection's own weights are ignored.
pub fn trivial_accuracy(coll: &BagCollection) -> Result<f64> {
    if coll.is_empty() {
        bail!(Precondition, "trivial accuracy of an empty collection");
    }
    let rows: Vec<[f64; 3]> = coll.bags().iter().map(reference_values).collect();
    Ok(game::best_mixture3(&rows).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::InstanceId;
    use alloc::sync::Arc;
    use alloc::vec;

    fn ids(v: &[usize]) -> Vec<InstanceId> {
        v.iter().map(|&i| InstanceId(i)).collect()
    }

    fn table(n: usize) -> InstanceTable {
        let mut t = InstanceTable::new(1);
        for i in 0..n {
            t.push(&[i as f64], None).unwrap();
        }
        t
    }

    fn explicit(v: &[u8]) -> Classifier {
        Classifier::Explicit(Labeling::new(v.iter().map(|&b| b == 1).collect()))
    }

    #[test]
    fn residual_examples() {
        let t = table(5);
        let bag = Bag::new(Mode::Llp, ids(&[0, 1]), 1).unwrap();
        assert_eq!(residual(&explicit(&[1, 0, 0, 0, 0]), &bag, &t).unwrap(), 0);
        assert_eq!(residual(&explicit(&[0, 0, 0, 0, 0]), &bag, &t).unwrap(), -1);
        let five = Bag::new(Mode::Llp, ids(&[0, 1, 2, 3, 4]), 3).unwrap();
        assert_eq!(residual(&explicit(&[1, 1, 1, 1, 1]), &five, &t).unwrap(), 2);
    }

    #[test]
    fn residual_rejects_mil_and_unknown_ids() {
        let t = table(2);
        let mil = Bag::new(Mode::Mil, ids(&[0, 1]), 1).unwrap();
        assert!(residual(&explicit(&[1, 1]), &mil, &t).is_err());
        let far = Bag::new(Mode::Llp, ids(&[0, 9]), 1).unwrap();
        assert!(residual(&explicit(&[1, 1]), &far, &t).is_err());
    }

    #[test]
    fn satisfaction_examples() {
        let t = table(2);
        let mil1 = Bag::new(Mode::Mil, ids(&[0, 1]), 1).unwrap();
        let mil0 = Bag::new(Mode::Mil, ids(&[0, 1]), 0).unwrap();
        let llp1 = Bag::new(Mode::Llp, ids(&[0, 1]), 1).unwrap();
        assert!(is_satisfied(&explicit(&[0, 1]), &mil1, &t).unwrap());
        assert!(is_satisfied(&explicit(&[0, 0]), &mil0, &t).unwrap());
        assert!(!is_satisfied(&explicit(&[1, 1]), &llp1, &t).unwrap());
    }

    #[test]
    fn accuracy_examples() {
        let t = Arc::new(table(2));
        let a = Bag::new(Mode::Llp, ids(&[0, 1]), 1).unwrap();
        let b = Bag::new(Mode::Llp, ids(&[0, 1]), 2).unwrap();
        let h = explicit(&[1, 0]);
        let unw = BagCollection::unweighted(Mode::Llp, t.clone(), vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(accuracy(&h, &unw).unwrap(), 0.5);
        let w = unw.with_weights(vec![0.9, 0.1]).unwrap();
        assert_eq!(accuracy(&h, &w).unwrap(), 0.9);
        let none = BagCollection::unweighted(Mode::Llp, t, vec![b]).unwrap();
        assert_eq!(accuracy(&h, &none).unwrap(), 0.0);
    }

    #[test]
    fn random_satisfaction_closed_forms() {
        let llp = Bag::new(Mode::Llp, ids(&[0, 1]), 1).unwrap();
        let mil0 = Bag::new(Mode::Mil, ids(&[0, 1]), 0).unwrap();
        let mil1 = Bag::new(Mode::Mil, ids(&[0, 1]), 1).unwrap();
        assert_eq!(random_classifier_satisfaction_prob(&llp), 0.5);
        assert_eq!(random_classifier_satisfaction_prob(&mil0), 0.25);
        assert_eq!(random_classifier_satisfaction_prob(&mil1), 0.75);
    }

    #[test]
    fn binomial_pmf_matches_pascal() {
        // Independent route: Pascal's triangle scaled row by row.
        let mut row = vec![1.0f64];
        for q in 1..=60usize {
            let mut next = vec![0.0; q + 1];
            for k in 0..=q {
                let left = if k > 0 { row[k - 1] } else { 0.0 };
                let right = if k < q { row[k] } else { 0.0 };
                next[k] = 0.5 * (left + right);
            }
            row = next;
            for (k, expected) in row.iter().enumerate() {
                let got = binomial_half_pmf(q, k);
                assert!((got - expected).abs() <= 1e-14 * expected.max(1e-300), "q={q} k={k}");
            }
        }
        assert!(binomial_half_pmf(2000, 1000) > 0.0);
        assert_eq!(binomial_half_pmf(3, 4), 0.0);
    }

    #[test]
    fn trivial_accuracy_examples() {
        let t = Arc::new(table(4));
        let llp: Vec<Bag> = (0..3)
            .map(|j| Bag::new(Mode::Llp, ids(&[j, j + 1]), 1).unwrap())
            .collect();
        let c = BagCollection::unweighted(Mode::Llp, t.clone(), llp).unwrap();
        assert!((trivial_accuracy(&c).unwrap() - 0.5).abs() < 1e-6);

        let mil = vec![
            Bag::new(Mode::Mil, ids(&[0, 1]), 0).unwrap(),
            Bag::new(Mode::Mil, ids(&[2, 3]), 1).unwrap(),
        ];
        let c = BagCollection::unweighted(Mode::Mil, t.clone(), mil).unwrap();
        assert!((trivial_accuracy(&c).unwrap() - 0.5).abs() < 1e-6);

        let single = vec![Bag::new(Mode::Llp, ids(&[0]), 1).unwrap()];
        let c = BagCollection::unweighted(Mode::Llp, t, single).unwrap();
        assert!((trivial_accuracy(&c).unwrap() - 1.0).abs() < 1e-6);
    }
}
