//! Success profiles, odds, geometric truncation and existence checks.

use crate::error::{Error, Result};
use crate::sequences::ExtendedSequence;

/// Success probabilities `p_1..p_N` of independent Bernoulli trials.
///
/// `tail_bound`, when present, certifies `Σ_{k>N} p_k <= tail_bound`. A
/// value of zero marks a genuinely finite problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessProfile {
    probs: Vec<f64>,
    tail_bound: Option<f64>,
}

impl SuccessProfile {
    pub fn new(probs: Vec<f64>, tail_bound: Option<f64>) -> Result<Self> {
        make_profile(probs, tail_bound)
    }

    /// Finite profile with `tail_bound = 0`.
    pub fn finite(probs: Vec<f64>) -> Result<Self> {
        make_profile(probs, Some(0.0))
    }

    /// Classical secretary profile `p_k = 1/k`, `k = 1..=n`.
    pub fn secretary(n: usize) -> Result<Self> {
        Self::finite((1..=n).map(|k| 1.0 / k as f64).collect())
    }

    /// Number of trials `N`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p_k` for `1 <= k <= N`.
    pub fn p(&self, k: usize) -> f64 {
        self.probs[k - 1]
    }

    /// `q_k = 1 - p_k` for `1 <= k <= N`.
    pub fn q(&self, k: usize) -> f64 {
        1.0 - self.probs[k - 1]
    }

    pub fn tail_bound(&self) -> Option<f64> {
        self.tail_bound
    }

    /// First trial with `p_k = 1`, if any.
    pub fn first_certain_trial(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 1.0).map(|i| i + 1)
    }
}

pub fn make_profile(probs: Vec<f64>, tail_bound: Option<f64>) -> Result<SuccessProfile> {
    if probs.is_empty() {
        return Err(Error::Empty);
    }
    if let Some((i, &value)) = probs
        .iter()
        .enumerate()
        .find(|(_, p)| !(0.0..=1.0).contains(*p))
    {
        return Err(Error::OutOfRange {
            index: i + 1,
            value,
        });
    }
    match tail_bound {
        Some(t) if t.is_nan() || t < 0.0 => return Err(Error::NegativeTail(t)),
        _ => {}
    }
    Ok(SuccessProfile { probs, tail_bound })
}

/// Odds ratios `r_k = p_k / (1 - p_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddsVector(pub Vec<f64>);

impl OddsVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn odds(profile: &SuccessProfile) -> Result<OddsVector> {
    profile
        .probs
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if p >= 1.0 {
                Err(Error::DegenerateTrial(i + 1))
            } else {
                Ok(p / (1.0 - p))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(OddsVector)
}

/// Truncated geometric profile `p_k = c q^k` with the smallest `N >= 1` such
/// that the tail `c q^(N+1) / (1 - q)` is at most `eps`. The recorded tail
/// bound adds a small allowance for rounding, so that the truncated sum plus
/// the bound never falls below the full series.
pub fn truncate_geometric(c: f64, q: f64, eps: f64) -> Result<SuccessProfile> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "c",
            value: c,
            expected: "(0, 1]",
        });
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            value: q,
            expected: "(0, 1)",
        });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::ParamOutOfRange {
            name: "eps",
            value: eps,
            expected: "> 0",
        });
    }
    let mut probs = Vec::new();
    let mut sum = 0.0;
    let mut term = c * q;
    loop {
        probs.push(term);
        sum += term;
        // rounding in the powers and the running sum, kept on the safe side
        let allowance = 4.0 * (probs.len() + 1) as f64 * f64::EPSILON * sum;
        let tail = term * q / (1.0 - q) + allowance;
        if tail <= eps {
            return make_profile(probs, Some(tail));
        }
        term *= q;
    }
}

/// Stopping problem: a profile plus stopping payoffs `f` on `{0..N, ∞}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingProblem {
    profile: SuccessProfile,
    payoff: ExtendedSequence,
}

impl StoppingProblem {
    /// Validates `f_0 = 0`, nonnegative payoffs and matching dimensions.
    pub fn new(profile: SuccessProfile, payoff: ExtendedSequence) -> Result<Self> {
        let n = profile.len();
        if payoff.horizon() != n {
            return Err(Error::DimensionMismatch {
                expected: n + 2,
                found: payoff.dim(),
            });
        }
        if payoff.get(0) != 0.0 {
            return Err(Error::InvalidPayoff(format!(
                "f_0 must be 0, got {}",
                payoff.get(0)
            )));
        }
        if let Some((k, &v)) = payoff.states().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::InvalidPayoff(format!(
                "payoff at state {k} is negative ({v})"
            )));
        }
        Ok(Self { profile, payoff })
    }

    /// Builds `f` from the trial payoffs `f_1..f_N` and `f_∞`.
    pub fn from_trial_payoffs(
        profile: SuccessProfile,
        trial_payoffs: &[f64],
        f_inf: f64,
    ) -> Result<Self> {
        let mut finite = Vec::with_capacity(trial_payoffs.len() + 1);
        finite.push(0.0);
        finite.extend_from_slice(trial_payoffs);
        let payoff = ExtendedSequence::new(finite, f_inf)?;
        Self::new(profile, payoff)
    }

    pub fn profile(&self) -> &SuccessProfile {
        &self.profile
    }

    pub fn payoff(&self) -> &ExtendedSequence {
        &self.payoff
    }

    pub fn horizon(&self) -> usize {
        self.profile.len()
    }

    /// `f_k` for `0 <= k <= N`.
    pub fn f(&self, k: usize) -> f64 {
        self.payoff.get(k)
    }

    pub fn f_inf(&self) -> f64 {
        self.payoff.terminal()
    }
}

/// How far an existence condition is backed by the truncated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Certified,
    /// Holds on the data but relies on an approximated limit.
    Heuristic,
    Uncertified,
}

impl ConditionStatus {
    pub fn label(self) -> &'static str {
        match self {
            ConditionStatus::Certified => "certified",
            ConditionStatus::Heuristic => "heuristic",
            ConditionStatus::Uncertified => "uncertified",
        }
    }
}

/// Partial sums and status of the three sufficient existence conditions:
/// (i) `Σ f_k < ∞`, (ii) `Σ p_k < ∞`, (iii) `Σ f_k p_k < ∞` with
/// `lim f_k <= f_∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceReport {
    pub sum_f: f64,
    pub sum_p: f64,
    pub sum_fp: f64,
    pub tail_bound: Option<f64>,
    pub payoff_tail_bound: Option<f64>,
    /// Last finite payoff, standing in for `lim f_k`.
    pub lim_f_estimate: f64,
    pub f_inf: f64,
    pub summable_payoff: ConditionStatus,
    pub summable_probs: ConditionStatus,
    pub summable_weighted: ConditionStatus,
}

impl ExistenceReport {
    pub fn any_certified(&self) -> bool {
        [
            self.summable_payoff,
            self.summable_probs,
            self.summable_weighted,
        ]
        .contains(&ConditionStatus::Certified)
    }

    pub fn verdict(&self) -> &'static str {
        if self.any_certified() {
            "certified"
        } else {
            "uncertified"
        }
    }
}

pub fn existence_check(problem: &StoppingProblem) -> ExistenceReport {
    existence_check_with_payoff_tail(problem, None)
}

/// As [`existence_check`], with a caller-supplied bound on `Σ_{k>N} f_k`.
pub fn existence_check_with_payoff_tail(
    problem: &StoppingProblem,
    payoff_tail_bound: Option<f64>,
) -> ExistenceReport {
    let profile = problem.profile();
    let n = problem.horizon();
    let sum_f: f64 = (1..=n).map(|k| problem.f(k)).sum();
    let sum_p: f64 = profile.probs().iter().sum();
    let sum_fp: f64 = (1..=n).map(|k| problem.f(k) * profile.p(k)).sum();
    let lim_f_estimate = problem.f(n);
    let f_inf = problem.f_inf();
    let tail = profile.tail_bound();
    let finite_problem = tail == Some(0.0);
    let payoff_tail = payoff_tail_bound.filter(|t| t.is_finite() && *t >= 0.0);

    let summable_probs = match tail {
        Some(t) if t.is_finite() => ConditionStatus::Certified,
        _ => ConditionStatus::Uncertified,
    };
    let summable_payoff = if finite_problem || payoff_tail.is_some() {
        ConditionStatus::Certified
    } else {
        ConditionStatus::Uncertified
    };
    let summable_weighted = if finite_problem {
        ConditionStatus::Certified
    } else if payoff_tail.is_some() && lim_f_estimate <= f_inf {
        ConditionStatus::Heuristic
    } else {
        ConditionStatus::Uncertified
    };

    ExistenceReport {
        sum_f,
        sum_p,
        sum_fp,
        tail_bound: tail,
        payoff_tail_bound: payoff_tail,
        lim_f_estimate,
        f_inf,
        summable_payoff,
        summable_probs,
        summable_weighted,
    }
}
