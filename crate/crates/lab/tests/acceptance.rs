//! End-to-end acceptance checks, one PASS/FAIL line each.
//!
//! Run with `cargo test -p llp-lab --test acceptance`. The process exits
//! non-zero when any check fails.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use llp_core::bag::{Bag, BagCollection, InstanceId, InstanceTable, Mode};
use llp_core::classifier::{Classifier, Labeling};
use llp_core::constructions::{
    adversarial_weights, gen_llp_maxcut_bags, gen_mil_circle_bags, halfspace_menu_2d, menu_values,
    random_simplex_weights, verify_mil_no_strong, verify_mil_weak_exists, CircleMilConfig, MaxCutLlpConfig,
};
use llp_core::game::PlaySettings;
use llp_core::geometry::{angle, random_orthogonal_unit, random_unit_vector, rotate_towards};
use llp_core::metrics::{accuracy_with, residual_with};
use llp_core::oracle::{
    bag_loss, bag_loss_and_grad, brute_force_best_labeling, random_homogeneous_halfspace, ExhaustiveOracle,
};
use llp_core::reweight::weighted_to_unweighted;
use llp_core::rng::{stream_rng, STREAM_UNION, STREAM_VERIFY};
use llp_core::synth::{gen_random_bags, SyntheticConfig};
use llp_core::union::{amplification_bound, enumerate_support, sample_union, verify_error_amplification, UnionConfig};
use llp_core::weak_to_strong::{algorithm_a1, WeakToStrongParams};
use llp_core::{accuracy, trivial_accuracy};
use llp_lab::config::{Experiment, ExperimentConfig, SampleSpec};
use llp_lab::experiment::{cmd_run, ExperimentReport};
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn experiment(file: &str, s: usize) -> Experiment {
    let mut exp = ExperimentConfig::load(&configs().join(file))
        .unwrap()
        .resolve()
        .unwrap();
    exp.sample = SampleSpec::Fixed(s);
    exp.runs = 5;
    exp.parallel = true;
    exp
}

struct Runs {
    random_15k: ExperimentReport,
    random_5k: ExperimentReport,
    hard_15k: ExperimentReport,
}

fn table1_runs() -> Runs {
    Runs {
        random_15k: cmd_run(&experiment("table1_random.yaml", 15_000)).unwrap(),
        random_5k: cmd_run(&experiment("table1_random.yaml", 5_000)).unwrap(),
        hard_15k: cmd_run(&experiment("table1_hard.yaml", 15_000)).unwrap(),
    }
}

fn criterion_1(r: &Runs) -> Outcome {
    let (small, test) = (r.random_15k.small.mean, r.random_15k.test.mean);
    verdict(
        small >= 85.0 && test >= 94.0,
        format!("small {small:.3} (>= 85), test {test:.3} (>= 94)"),
    )
}

fn criterion_2(r: &Runs) -> Outcome {
    let (random, hard) = (r.random_15k.small.mean, r.hard_15k.small.mean);
    verdict(
        random - hard >= 5.0,
        format!(
            "random small {random:.3}, hard small {hard:.3}, gap {:.3} (>= 5)",
            random - hard
        ),
    )
}

fn criterion_3() -> Outcome {
    let report = cmd_run(&experiment("heart.yaml", 10_000)).map_err(|e| e.to_string())?;
    let test = report.test.mean;
    verdict(test >= 70.0, format!("test {test:.3} +- {:.3} (>= 70)", report.test.sd))
}

fn criterion_4(r: &Runs) -> Outcome {
    let (hi, lo) = (r.random_15k.test.mean, r.random_5k.test.mean);
    verdict(hi > lo, format!("test at s=15000 {hi:.3}, at s=5000 {lo:.3}"))
}

/// Best weighted MIL accuracy over all labelings, by direct enumeration.
fn mil_optimum(coll: &BagCollection) -> f64 {
    let n = coll.table().len();
    let w = coll.weights().unwrap();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let mut acc = 0.0;
        for (bag, wj) in coll.bags().iter().zip(w) {
            let any = bag.members().iter().any(|id| mask >> id.index() & 1 == 1);
            if u32::from(any) == bag.label() {
                acc += wj;
            }
        }
        best = best.max(acc);
    }
    best
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = CircleMilConfig {
        alpha_num: 3,
        alpha_den: 4,
        t: 8,
    };
    let coll = gen_mil_circle_bags(&cfg).map_err(|e| e.to_string())?;
    let exact = verify_mil_no_strong(&coll).map_err(|e| e.to_string())?;
    let direct = mil_optimum(&coll);
    let mut rng = stream_rng(0, STREAM_VERIFY);
    let mut weak_ok = verify_mil_weak_exists(&coll, &vec![1.0 / 32.0; 32], &cfg)
        .unwrap()
        .holds;
    for _ in 0..100 {
        let w = random_simplex_weights(coll.len(), &mut rng);
        weak_ok &= verify_mil_weak_exists(&coll, &w, &cfg).unwrap().holds;
    }
    let adv = adversarial_weights(
        &menu_values(&coll, &halfspace_menu_2d(720)).unwrap(),
        PlaySettings::default(),
    )
    .unwrap();
    weak_ok &= verify_mil_weak_exists(&coll, &adv.weights, &cfg).unwrap().holds;
    let secs = start.elapsed().as_secs_f64();
    let equals = (exact - 0.75).abs() < 1e-12;
    verdict(
        equals && exact <= 0.75 && (direct - exact).abs() < 1e-12 && weak_ok && adv.duality_gap <= 1e-3 && secs <= 60.0,
        format!(
            "optimum {exact:.6} (enumeration {direct:.6}, want = 0.75), weak bound {:.4} held: {weak_ok}, gap {:.2e}, {secs:.1}s",
            cfg.weak_bound(),
            adv.duality_gap
        ),
    )
}

fn criterion_6() -> Outcome {
    let llp = gen_llp_maxcut_bags(&MaxCutLlpConfig::new(0.75, 0.05, 3, 8, 0)).map_err(|e| e.to_string())?;
    let mut t = InstanceTable::new(2);
    t.push(&[1.0, 0.0], None).unwrap();
    t.push(&[0.0, 1.0], None).unwrap();
    let pair = BagCollection::unweighted(
        Mode::Mil,
        Arc::new(t),
        vec![
            Bag::new(Mode::Mil, vec![InstanceId(0)], 0).unwrap(),
            Bag::new(Mode::Mil, vec![InstanceId(1)], 1).unwrap(),
        ],
    )
    .unwrap();
    let a = trivial_accuracy(&llp).map_err(|e| e.to_string())?;
    let b = trivial_accuracy(&pair).map_err(|e| e.to_string())?;
    verdict(
        (a - 0.5).abs() <= 1e-3 && (b - 0.5).abs() <= 1e-3,
        format!("LLP construction {a:.6}, MIL pair {b:.6} (0.5 +- 1e-3)"),
    )
}

fn criterion_7() -> Outcome {
    let data = gen_random_bags(&SyntheticConfig {
        n_bags: 50,
        seed: 7,
        ..SyntheticConfig::default()
    })
    .map_err(|e| e.to_string())?;
    // Flip the first member of 15 bags, alternating direction, so 35 of 50
    // bags stay satisfied.
    let mut labels = data.truth.as_slice().to_vec();
    let mut flipped = 0;
    for bag in data.bags.bags() {
        if flipped == 15 {
            break;
        }
        let want = flipped % 2 == 0;
        if let Some(id) = bag.members().iter().find(|id| labels[id.index()] != want) {
            labels[id.index()] = want;
            flipped += 1;
        }
    }
    let h = Classifier::Explicit(Labeling::new(labels));
    let acc = accuracy(&h, &data.bags).unwrap();
    let cfg = UnionConfig::fixed(64).unwrap();
    let mut rng = stream_rng(7, STREAM_UNION);
    let r = verify_error_amplification(&h, &data.bags, &cfg, 0.3, 100_000, &mut rng).map_err(|e| e.to_string())?;
    let bound = amplification_bound(0.8, 0.3, 64);
    verdict(
        (acc - 0.7).abs() < 1e-12 && r.empirical_sat_rate <= bound + 3.0 * r.standard_error,
        format!(
            "accuracy {acc:.3}, rate {:.5} +- {:.5}, bound {bound:.5}",
            r.empirical_sat_rate, r.standard_error
        ),
    )
}

fn criterion_8() -> Outcome {
    let coll = random_llp(6, 3, 2, 8);
    let entries = enumerate_support(&coll, 3).map_err(|e| e.to_string())?;
    let total: f64 = entries.iter().map(|e| e.weight).sum();
    let cfg = UnionConfig::fixed(3).unwrap();
    let mut rng = stream_rng(8, STREAM_UNION);
    let n = 1_000_000;
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..n {
        let mut key = sample_union(&coll, &cfg, &mut rng).unwrap().provenance;
        key.sort_unstable();
        *counts.entry(key).or_default() += 1;
    }
    let mut worst = 0.0f64;
    for e in &entries {
        let p = e.weight;
        let freq = counts.get(&e.union.provenance).copied().unwrap_or(0) as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        worst = worst.max((freq - p).abs() / se);
    }
    let unseen = counts.len() > entries.len();
    verdict(
        (total - 1.0).abs() <= 1e-9 && worst <= 3.0 && !unseen,
        format!(
            "{} entries, sum {total:.12}, worst deviation {worst:.2} SE (<= 3)",
            entries.len()
        ),
    )
}

fn random_llp(n: usize, m: usize, k: usize, seed: u64) -> BagCollection {
    let mut rng = stream_rng(seed, 0);
    let mut t = InstanceTable::new(2);
    for _ in 0..n {
        t.push(&random_unit_vector(2, &mut rng), None).unwrap();
    }
    let bags = (0..m)
        .map(|_| {
            let size = rng.random_range(1..=k);
            let members = (0..size).map(|_| InstanceId(rng.random_range(0..n))).collect();
            Bag::new(Mode::Llp, members, rng.random_range(0..=size as u32)).unwrap()
        })
        .collect();
    BagCollection::unweighted(Mode::Llp, Arc::new(t), bags).unwrap()
}

fn criterion_9() -> Outcome {
    let mut t = InstanceTable::new(2);
    for p in [
        [1.0, 0.1],
        [0.7, -0.3],
        [-0.5, 0.9],
        [-0.9, -0.2],
        [0.2, 0.8],
        [-0.1, -1.0],
    ] {
        t.push(&p, None).unwrap();
    }
    let llp = |m: &[usize], l| Bag::new(Mode::Llp, m.iter().map(|&i| InstanceId(i)).collect(), l).unwrap();
    let coll = BagCollection::unweighted(
        Mode::Llp,
        Arc::new(t),
        vec![llp(&[0, 1], 2), llp(&[2, 3], 0), llp(&[4, 5], 1)],
    )
    .unwrap();
    let params = WeakToStrongParams {
        t: Some(4),
        ..WeakToStrongParams::new(0.3, 0.9)
    };
    let a = algorithm_a1(&coll, &params, &ExhaustiveOracle).map_err(|e| e.to_string())?;
    let b = algorithm_a1(&coll, &params, &ExhaustiveOracle).map_err(|e| e.to_string())?;
    let (_, optimum) = brute_force_best_labeling(&coll).unwrap();
    let labels = a.classifier.label_table(coll.table()).unwrap();
    let satisfied = coll
        .bags()
        .iter()
        .filter(|bag| bag.members().iter().filter(|id| labels.get(**id) == Some(true)).count() as u32 == bag.label())
        .count();
    let acc = satisfied as f64 / coll.len() as f64;
    verdict(
        acc >= 0.7 && acc <= optimum && (acc - a.small_accuracy).abs() < 1e-12 && a == b,
        format!(
            "small accuracy {acc:.3} (>= 0.7), brute-force optimum {optimum:.3}, deterministic {}",
            a == b
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = stream_rng(10, STREAM_VERIFY);
    let mut worst_ratio = 0.0f64;
    let mut size_ok = true;
    for c in 0..100 {
        let m = rng.random_range(2..=20);
        let base = random_llp(12, m, 4, 1000 + c);
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..1.0)).collect();
        let w: Vec<f64> = raw.iter().map(|x| x / raw.iter().sum::<f64>()).collect();
        let weighted = base.with_weights(w.clone()).unwrap();
        for t in [2usize, 5, 10] {
            let out = weighted_to_unweighted(&weighted, t).unwrap();
            size_ok &= out.len() >= (t - 1) * m && out.len() <= t * m;
            for _ in 0..20 {
                let labels = Labeling::new((0..12).map(|_| rng.random::<bool>()).collect());
                let before: f64 = base
                    .bags()
                    .iter()
                    .zip(&w)
                    .filter(|(b, _)| residual_with(&labels, b) == 0)
                    .map(|(_, x)| x)
                    .sum();
                let drift = (accuracy_with(&labels, &out) - before).abs();
                worst_ratio = worst_ratio.max(drift * (t - 1) as f64);
            }
        }
    }
    verdict(
        size_ok && worst_ratio <= 1.0 + 1e-12,
        format!("sizes in [(T-1)m, Tm]: {size_ok}, worst drift (T-1) {worst_ratio:.4} (<= 1)"),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    // Residual of a concatenation equals the sum of residuals.
    let mut rng = stream_rng(11, STREAM_VERIFY);
    let mut additive = true;
    for seed in 0..200 {
        let coll = random_llp(10, 2, 5, seed);
        let labels = Labeling::new((0..10).map(|_| rng.random::<bool>()).collect());
        let (a, b) = (&coll.bags()[0], &coll.bags()[1]);
        let mut members = a.members().to_vec();
        members.extend_from_slice(b.members());
        let u = Bag::union(members, a.label() + b.label(), vec![0, 1]).unwrap();
        additive &= residual_with(&labels, &u) == residual_with(&labels, a) + residual_with(&labels, b);
    }
    ok &= additive;
    notes.push(format!("additivity {additive}"));

    // Central differences against the analytic gradient.
    let data = gen_random_bags(&SyntheticConfig {
        n_bags: 100,
        seed: 11,
        ..SyntheticConfig::default()
    })
    .unwrap();
    let table = data.bags.table();
    let mut worst = 0.0f64;
    for bag in data.bags.bags() {
        let w: Vec<f64> = (0..10).map(|_| rng.random_range(-0.5..0.5)).collect();
        let b = rng.random_range(-0.5..0.5);
        let mut gw = vec![0.0; 10];
        let mut scratch = Vec::new();
        let (_, gb) = bag_loss_and_grad(&w, b, table, bag, &mut gw, &mut scratch);
        let h = 1e-6;
        let mut numeric = Vec::with_capacity(11);
        for i in 0..10 {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[i] += h;
            down[i] -= h;
            numeric.push((bag_loss(&up, b, table, bag) - bag_loss(&down, b, table, bag)) / (2.0 * h));
        }
        numeric.push((bag_loss(&w, b + h, table, bag) - bag_loss(&w, b - h, table, bag)) / (2.0 * h));
        gw.push(gb);
        let diff: f64 = gw
            .iter()
            .zip(&numeric)
            .map(|(a, n)| (a - n).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = gw.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-8);
        worst = worst.max(diff / scale);
    }
    ok &= worst <= 1e-4;
    notes.push(format!("gradient rel err {worst:.2e}"));

    // Random halfspaces separate two points at angle φ with probability φ/π.
    let mut sep_ok = true;
    for phi in [0.3, 1.2, 2.5] {
        let x = random_unit_vector(5, &mut rng);
        let v = random_orthogonal_unit(&x, &mut rng);
        let y = rotate_towards(&x, &v, phi);
        let draws = 10_000;
        let hits = (0..draws)
            .filter(|_| {
                let Classifier::HomogeneousHalfspace { normal } = random_homogeneous_halfspace(5, &mut rng).unwrap()
                else {
                    unreachable!()
                };
                let side = |p: &[f64]| normal.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() > 0.0;
                side(&x) != side(&y)
            })
            .count();
        let p = angle(&x, &y) / std::f64::consts::PI;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        sep_ok &= (hits as f64 / draws as f64 - p).abs() <= 3.0 * se;
    }
    ok &= sep_ok;
    notes.push(format!("separation {sep_ok}"));

    // Kept slots per union draw follow Binomial(t, 1/2).
    let coll = random_llp(8, 4, 2, 12);
    let t = 10;
    let cfg = UnionConfig::fixed(t).unwrap();
    let draws = 100_000;
    let mut counts = vec![0usize; t + 1];
    let mut urng = stream_rng(12, STREAM_UNION);
    for _ in 0..draws {
        counts[sample_union(&coll, &cfg, &mut urng).unwrap().provenance.len()] += 1;
    }
    let mut chi2 = 0.0;
    let mut choose = 1.0f64;
    for (k, &c) in counts.iter().enumerate() {
        if k > 0 {
            choose = choose * (t + 1 - k) as f64 / k as f64;
        }
        let expected = draws as f64 * choose / 2f64.powi(t as i32);
        chi2 += (c as f64 - expected).powi(2) / expected;
    }
    let critical = ChiSquared::new(t as f64).unwrap().inverse_cdf(0.99);
    ok &= chi2 <= critical;
    notes.push(format!("kept-count chi2 {chi2:.2} (<= {critical:.2})"));

    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 600.0;
    notes.push(format!("{secs:.1}s"));
    verdict(ok, notes.join(", "))
}

fn main() {
    let fast: [(usize, fn() -> Outcome); 8] = [
        (3, criterion_3),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let runs = table1_runs();
    let mut results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1(&runs)),
        (2, criterion_2(&runs)),
        (4, criterion_4(&runs)),
    ];
    results.extend(fast.iter().map(|(i, f)| (*i, f())));
    results.sort_by_key(|(i, _)| *i);
    let mut failed = 0;
    for (i, r) in &results {
        match r {
            Ok(detail) => println!("criterion {i:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {i:>2}: FAIL  {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
