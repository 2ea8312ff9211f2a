#![allow(dead_code)]

use bernoulli_stopping::{ExtendedSequence, StoppingProblem, SuccessProfile};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `N` uniform in `1..=max_n`, each `p_k` uniform in `(lo, hi)`.
pub fn random_profile(rng: &mut ChaCha8Rng, max_n: usize, lo: f64, hi: f64) -> SuccessProfile {
    let n = rng.random_range(1..=max_n);
    let probs = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    SuccessProfile::finite(probs).unwrap()
}

/// Random payoff with `f_0 = 0` and entries in `[0, 1)`.
pub fn random_problem(rng: &mut ChaCha8Rng, profile: SuccessProfile) -> StoppingProblem {
    let n = profile.len();
    let f: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let f_inf = rng.random::<f64>();
    StoppingProblem::from_trial_payoffs(profile, &f, f_inf).unwrap()
}

/// Unimodal sequence of length `len`: increments drawn nonnegative up to a
/// random mode, nonpositive after it.
pub fn random_unimodal(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mode = rng.random_range(0..len);
    let mut v = Vec::with_capacity(len);
    let mut x: f64 = rng.random();
    for i in 0..len {
        if i > 0 {
            let step: f64 = rng.random();
            // occasional plateaus
            let step = if rng.random_bool(0.2) { 0.0 } else { step };
            x += if i <= mode { step } else { -step };
        }
        v.push(x);
    }
    v
}

pub fn extended(states: Vec<f64>) -> ExtendedSequence {
    ExtendedSequence::from_states(states).unwrap()
}

/// Exact Poisson-binomial by enumerating every outcome of trials `k..=N`.
pub fn brute_force_counts(probs: &[f64], k: usize) -> Vec<f64> {
    let suffix = &probs[k - 1..];
    let len = suffix.len();
    let mut mass = vec![0.0; len + 1];
    for mask in 0u32..(1 << len) {
        let mut pr = 1.0;
        for (i, &p) in suffix.iter().enumerate() {
            pr *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        mass[mask.count_ones() as usize] += pr;
    }
    mass
}
