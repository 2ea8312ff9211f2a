//! Sign changes, sign patterns and unimodality of finite extended sequences.
//!
//! An extended sequence lives on the state set `{0, 1, ..., N, ∞}`. It is
//! stored flat: positions `0..=N` hold the finite states and position `N + 1`
//! holds the terminal value at `∞`. Every analysis here treats the terminal
//! value as an ordinary last element.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute zero tolerance: `|x| <= ZERO_TOL` is classified as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Relative tolerance used to detect the plateau of maxima.
pub const MODE_REL_TOL: f64 = 1e-10;

/// Real sequence indexed by `{0, ..., N, ∞}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSequence {
    states: Vec<f64>,
}

impl ExtendedSequence {
    /// Builds a sequence from its finite part `u_0..u_N` and terminal value.
    pub fn new(finite: Vec<f64>, terminal: f64) -> Result<Self> {
        if finite.is_empty() {
            return Err(Error::Empty);
        }
        let mut states = finite;
        states.push(terminal);
        Self::from_states(states)
    }

    /// Builds a sequence from the flat state vector, the last entry being
    /// the terminal value.
    pub fn from_states(states: Vec<f64>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: states.len(),
            });
        }
        if let Some((index, &value)) = states.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { states })
    }

    /// Constant sequence over `N + 2` states.
    pub fn constant(horizon: usize, value: f64) -> Self {
        Self {
            states: vec![value; horizon + 2],
        }
    }

    /// Largest finite index `N`.
    pub fn horizon(&self) -> usize {
        self.states.len() - 2
    }

    /// Number of states including `∞`.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Flat view over all states, terminal last.
    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn finite(&self) -> &[f64] {
        &self.states[..self.states.len() - 1]
    }

    pub fn terminal(&self) -> f64 {
        self.states[self.states.len() - 1]
    }

    /// Value at finite state `k` (`k <= N`).
    pub fn get(&self, k: usize) -> f64 {
        self.finite()[k]
    }

    pub fn into_states(self) -> Vec<f64> {
        self.states
    }

    /// Maximum over all states, terminal included.
    pub fn max(&self) -> f64 {
        self.states
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Strict sign of a nonzero entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+"),
            Sign::Minus => f.write_str("-"),
        }
    }
}

/// Closed interval of mode positions `[lo, hi]` into the flat state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeInterval {
    pub lo: usize,
    pub hi: usize,
}

fn classify(x: f64) -> Option<Sign> {
    if x > ZERO_TOL {
        Some(Sign::Plus)
    } else if x < -ZERO_TOL {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// Run-length compressed sign sequence of `u` after zero removal.
pub fn sign_pattern(u: &[f64]) -> Vec<Sign> {
    let mut pattern: Vec<Sign> = Vec::new();
    for s in u.iter().filter_map(|&x| classify(x)) {
        if pattern.last() != Some(&s) {
            pattern.push(s);
        }
    }
    pattern
}

/// Number of sign changes of `u` with zero entries removed.
pub fn sign_changes(u: &[f64]) -> usize {
    sign_pattern(u).len().saturating_sub(1)
}

/// `sign_changes(u - level)` without allocating the shifted sequence.
pub fn sign_changes_shifted(u: &[f64], level: f64) -> usize {
    let mut last = None;
    let mut count = 0;
    for s in u.iter().filter_map(|&x| classify(x - level)) {
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Maximal mode interval of `u` if it is unimodal, `None` otherwise.
///
/// The argmax set (within [`MODE_REL_TOL`] relative to the maximum) must be
/// contiguous; before it the increments may not be negative and after it they
/// may not be positive, each beyond [`ZERO_TOL`].
pub fn mode_interval(u: &[f64]) -> Option<ModeInterval> {
    if u.is_empty() {
        return None;
    }
    let max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eq_tol = MODE_REL_TOL * max.abs().max(1.0);
    let at_max = |x: f64| x >= max - eq_tol;

    let lo = u.iter().position(|&x| at_max(x))?;
    let hi = u.iter().rposition(|&x| at_max(x))?;
    if !u[lo..=hi].iter().all(|&x| at_max(x)) {
        return None;
    }
    let rising = u[..=lo].windows(2).all(|w| w[1] - w[0] >= -ZERO_TOL);
    let falling = u[hi..].windows(2).all(|w| w[1] - w[0] <= ZERO_TOL);
    (rising && falling).then_some(ModeInterval { lo, hi })
}

pub fn is_unimodal(u: &[f64]) -> bool {
    mode_interval(u).is_some()
}

/// Result of scanning `S(u - λ)` over all level shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaProfile {
    /// `max_λ S(u - λ)`.
    pub max_changes: usize,
    /// Every candidate level attaining the maximum with its sign pattern.
    pub maximizers: Vec<(f64, Vec<Sign>)>,
}

/// Candidate levels at which `S(u - λ)` takes every value it can take:
/// one level below the minimum, one above the maximum, and the midpoints
/// between consecutive distinct values.
pub fn candidate_levels(u: &[f64]) -> Vec<f64> {
    let mut sorted = u.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut levels = Vec::with_capacity(sorted.len() + 1);
    if let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) {
        levels.push(lo - 1.0);
        levels.extend(sorted.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        levels.push(hi + 1.0);
    }
    levels
}

pub fn lambda_profile(u: &[f64]) -> LambdaProfile {
    let scored: Vec<(f64, usize)> = candidate_levels(u)
        .into_iter()
        .map(|level| (level, sign_changes_shifted(u, level)))
        .collect();
    let max_changes = scored.iter().map(|&(_, c)| c).max().unwrap_or(0);
    let maximizers = scored
        .into_iter()
        .filter(|&(_, c)| c == max_changes)
        .map(|(level, _)| {
            let shifted: Vec<f64> = u.iter().map(|x| x - level).collect();
            (level, sign_pattern(&shifted))
        })
        .collect();
    LambdaProfile {
        max_changes,
        maximizers,
    }
}

/// Unimodality through the level-shift characterisation: at most two sign
/// changes for every level, and pattern `-, +, -` whenever there are two.
pub fn is_unimodal_by_levels(u: &[f64]) -> bool {
    candidate_levels(u).into_iter().all(|level| {
        let shifted: Vec<f64> = u.iter().map(|x| x - level).collect();
        let pattern = sign_pattern(&shifted);
        match pattern.len() {
            0..=2 => true,
            3 => pattern == [Sign::Minus, Sign::Plus, Sign::Minus],
            _ => false,
        }
    })
}
