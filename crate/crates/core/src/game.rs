//! Zero-sum games between a bag-weighting adversary and a classifier menu.
//!
//! The payoff of menu entry `c` against bag `j` is `v[c][j] ∈ [0,1]`, the
//! probability that `c` satisfies `j`. The adversary picks weights over bags to
//! minimize the best menu accuracy; the value equals (minimax theorem) the best
//! accuracy a mixture over the menu can guarantee against every single bag.

use alloc::vec;
use alloc::vec::Vec;

/// Absolute tolerance of the golden-section search on the 2-simplex.
pub const GOLDEN_TOLERANCE: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Optimal mixture for a three-entry menu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mixture3 {
    pub value: f64,
    pub mixture: [f64; 3],
}

fn golden_max(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    if hi - lo <= GOLDEN_TOLERANCE {
        return (lo, f(lo));
    }
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > GOLDEN_TOLERANCE {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    // The endpoints matter when the optimum sits on the simplex boundary.
    [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

/// `max_{p ∈ Δ3} min_j <p, rows[j]>` by nested golden-section search.
///
/// The objective is a minimum of linear functions, hence concave, and its
/// partial maximum over the inner coordinate is concave in the outer one.
pub fn best_mixture3(rows: &[[f64; 3]]) -> Mixture3 {
    let eval = |p0: f64, p1: f64| {
        let p2 = (1.0 - p0 - p1).max(0.0);
        rows.iter()
            .map(|v| p0 * v[0] + p1 * v[1] + p2 * v[2])
            .fold(f64::INFINITY, f64::min)
    };
    let inner = |p0: f64| golden_max(0.0, (1.0 - p0).max(0.0), |p1| eval(p0, p1));
    let (p0, _) = golden_max(0.0, 1.0, |p0| inner(p0).1);
    let (p1, value) = inner(p0);
    Mixture3 {
        value,
        mixture: [p0, p1, (1.0 - p0 - p1).max(0.0)],
    }
}

/// Result of [`fictitious_play`].
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    /// Empirical mixture of the adversary over bags.
    pub bag_weights: Vec<f64>,
    /// Empirical mixture of the maximizer over the menu.
    pub menu_mixture: Vec<f64>,
    /// Best menu accuracy under `bag_weights` (an upper bound on the value).
    pub upper: f64,
    /// Worst bag payoff of `menu_mixture` (a lower bound on the value).
    pub lower: f64,
    /// Menu entry achieving `upper`.
    pub best_response: usize,
    pub rounds: usize,
}

impl GameSolution {
    pub fn duality_gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Settings for [`fictitious_play`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaySettings {
    /// Rounds always played.
    pub min_rounds: usize,
    /// Hard cap on rounds.
    pub max_rounds: usize,
    /// Stop (after `min_rounds`) once the duality gap is at most this.
    pub gap_tolerance: f64,
}

impl Default for PlaySettings {
    fn default() -> Self {
        Self {
            min_rounds: 10_000,
            max_rounds: 2_000_000,
            gap_tolerance: 1e-3,
        }
    }
}

/// Alternating fictitious play on `values[c][j]` (menu `c`, bag `j`).
///
/// Each round the adversary adds the bag the menu's empirical mixture
/// handles worst, then the menu adds its best response to the adversary's
/// empirical weights. The gap between the two empirical best-response
/// values is checked every `min_rounds / 10` rounds. Ties break toward the
/// lowest index.
pub fn fictitious_play(values: &[Vec<f64>], settings: PlaySettings) -> GameSolution {
    let menu = values.len();
    assert!(menu > 0, "fictitious play needs a non-empty menu");
    let bags = values[0].len();
    assert!(bags > 0, "fictitious play needs at least one bag");

    let mut bag_counts = vec![0u64; bags];
    let mut menu_counts = vec![0u64; menu];
    // menu_payoff[c] = Σ_j bag_counts[j] v[c][j]; bag_payoff[j] = Σ_c menu_counts[c] v[c][j]
    let mut menu_payoff = vec![0.0f64; menu];
    let mut bag_payoff = vec![0.0f64; bags];

    let check_every = (settings.min_rounds / 10).max(1);
    let mut rounds = 0usize;
    let mut solution = None;
    while rounds < settings.max_rounds {
        let j = argmin(&bag_payoff);
        bag_counts[j] += 1;
        for (c, row) in values.iter().enumerate() {
            menu_payoff[c] += row[j];
        }
        let c = argmax(&menu_payoff);
        menu_counts[c] += 1;
        for (p, v) in bag_payoff.iter_mut().zip(&values[c]) {
            *p += v;
        }
        rounds += 1;
        if rounds % check_every == 0 || rounds == settings.max_rounds {
            let s = summarize(values, &bag_counts, &menu_counts, rounds);
            let done = rounds >= settings.min_rounds && s.duality_gap() <= settings.gap_tolerance;
            solution = Some(s);
            if done {
                break;
            }
        }
    }
    solution.unwrap_or_else(|| summarize(values, &bag_counts, &menu_counts, rounds))
}

fn summarize(values: &[Vec<f64>], bag_counts: &[u64], menu_counts: &[u64], rounds: usize) -> GameSolution {
    let total = rounds as f64;
    let bag_weights: Vec<f64> = bag_counts.iter().map(|&n| n as f64 / total).collect();
    let menu_mixture: Vec<f64> = menu_counts.iter().map(|&n| n as f64 / total).collect();
    let menu_values: Vec<f64> = values
        .iter()
        .map(|row| row.iter().zip(&bag_weights).map(|(v, w)| v * w).sum())
        .collect();
    let best_response = argmax(&menu_values);
    let lower = (0..bag_weights.len())
        .map(|j| values.iter().zip(&menu_mixture).map(|(row, p)| p * row[j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    GameSolution {
        bag_weights,
        menu_mixture,
        upper: menu_values[best_response],
        lower,
        best_response,
        rounds,
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}
