//! Independent verification: exact backward induction, exhaustive threshold
//! sweeps and Monte Carlo simulation of stop-set rules.
//!
//! Nothing here depends on the chain, total-positivity or solver modules.
//!
//! # Random numbers
//!
//! [`simulate`] uses ChaCha8 keyed by the 64-bit seed (expanded with
//! `SeedableRng::seed_from_u64`). Replicate `r` reads ChaCha stream `r` from
//! word position 0, and trial `k` consumes the `k`-th `f64` of that stream
//! (`Rng::random::<f64>()`); trial `k` succeeds when that draw is below
//! `p_k`. A replicate's outcome therefore depends only on
//! `(seed, r, k)`, never on scheduling, and per-index stop counts are merged
//! as integers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::profiles::StoppingProblem;

/// Relative tie tolerance when labelling indices where stopping is optimal.
pub const ORACLE_TIE_TOL: f64 = 1e-12;

const CHUNK: usize = 8192;

fn ties_or_beats(f: f64, c: f64) -> bool {
    f >= c - ORACLE_TIE_TOL * f.abs().max(c.abs())
}

/// Exact optimal value by backward induction.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub stop_set: Vec<usize>,
    /// `c_0..c_N`: optimal value of the game after passing trial `k`.
    pub continuation: Vec<f64>,
}

pub fn dp_solve(problem: &StoppingProblem) -> OracleResult {
    let n = problem.horizon();
    let profile = problem.profile();
    let mut c = vec![0.0; n + 1];
    c[n] = problem.f_inf();
    for k in (1..=n).rev() {
        let best = problem.f(k).max(c[k]);
        c[k - 1] = profile.p(k) * best + profile.q(k) * c[k];
    }
    let stop_set = (1..=n)
        .filter(|&k| ties_or_beats(problem.f(k), c[k]))
        .collect();
    OracleResult {
        value: c[0],
        stop_set,
        continuation: c,
    }
}

/// Exact expected payoff of "stop at the first success whose index lies in
/// `stop_set`", receiving `f_∞` if there is none.
pub fn rule_value(problem: &StoppingProblem, stop_set: &[usize]) -> f64 {
    let n = problem.horizon();
    let profile = problem.profile();
    let mask = stop_mask(n, stop_set);
    let mut v = problem.f_inf();
    for k in (1..=n).rev() {
        let on_success = if mask[k] { problem.f(k) } else { v };
        v = profile.p(k) * on_success + profile.q(k) * v;
    }
    v
}

fn stop_mask(n: usize, stop_set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n + 1];
    for &k in stop_set {
        if (1..=n).contains(&k) {
            mask[k] = true;
        }
    }
    mask
}

/// Values of every threshold rule `{t, ..., N}` for `t = 1..=N+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSweep {
    /// `(t, value)`; `t = N + 1` never stops.
    pub values: Vec<(usize, f64)>,
    pub best_value: f64,
    /// Thresholds attaining the best value within the tie tolerance.
    pub argmax: Vec<usize>,
}

pub fn threshold_sweep(problem: &StoppingProblem) -> ThresholdSweep {
    let n = problem.horizon();
    let profile = problem.profile();
    let values: Vec<(usize, f64)> = (1..=n + 1)
        .map(|t| {
            let mut v = problem.f_inf();
            for k in (1..=n).rev() {
                let on_success = if k >= t { problem.f(k) } else { v };
                v = profile.p(k) * on_success + profile.q(k) * v;
            }
            (t, v)
        })
        .collect();
    let best_value = values
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax = values
        .iter()
        .filter(|&&(_, v)| ties_or_beats(v, best_value))
        .map(|&(t, _)| t)
        .collect();
    ThresholdSweep {
        values,
        best_value,
        argmax,
    }
}

/// Monte Carlo estimate of a rule's expected payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replicates)`; zero when
    /// `replicates == 1`.
    pub std_error: f64,
    pub replicates: u64,
    pub seed: u64,
    /// How many replicates stopped at each trial `0..=N` (entry 0 unused),
    /// followed by the count that never stopped.
    pub stop_counts: Vec<u64>,
}

fn run_replicate(base: &ChaCha8Rng, replicate: u64, probs: &[f64], mask: &[bool]) -> Option<usize> {
    let mut rng = base.clone();
    rng.set_stream(replicate);
    rng.set_word_pos(0);
    for (i, &p) in probs.iter().enumerate() {
        let u: f64 = rng.random();
        if u < p && mask[i + 1] {
            return Some(i + 1);
        }
    }
    None
}

/// Simulates `replicates` independent trial sequences and applies the
/// stop-set rule to each. Bit-reproducible for fixed inputs.
///
/// # Panics
///
/// If `replicates == 0`.
pub fn simulate(
    problem: &StoppingProblem,
    stop_set: &[usize],
    replicates: u64,
    seed: u64,
) -> SimEstimate {
    assert!(replicates >= 1, "at least one replicate is required");
    let n = problem.horizon();
    let probs = problem.profile().probs();
    let mask = stop_mask(n, stop_set);
    let base = ChaCha8Rng::seed_from_u64(seed);

    let chunks = replicates.div_ceil(CHUNK as u64);
    let stop_counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; n + 2];
            let start = c * CHUNK as u64;
            let end = (start + CHUNK as u64).min(replicates);
            for r in start..end {
                match run_replicate(&base, r, probs, &mask) {
                    Some(k) => counts[k] += 1,
                    None => counts[n + 1] += 1,
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n + 2],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let payoff = |i: usize| {
        if i == n + 1 {
            problem.f_inf()
        } else {
            problem.f(i)
        }
    };
    let total = replicates as f64;
    let weighted = || {
        stop_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (c as f64 / total, payoff(i)))
    };
    let mean: f64 = weighted().map(|(w, x)| w * x).sum();
    let std_error = if replicates > 1 {
        let var: f64 =
            weighted().map(|(w, x)| w * (x - mean).powi(2)).sum::<f64>() * total / (total - 1.0);
        (var / total).sqrt()
    } else {
        0.0
    };

    SimEstimate {
        mean,
        std_error,
        replicates,
        seed,
        stop_counts,
    }
}
