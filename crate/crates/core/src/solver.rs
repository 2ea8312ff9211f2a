//! Myopic (one-step look-ahead) stopping rules and their certificates.
//!
//! The rule stops at the first success `k` with `f_k >= g_k`, where `g` is
//! the continuation payoff from [`continuation_backward`]. It is optimal
//! whenever the problem is monotone, which is guaranteed when `f` or `g` is
//! unimodal or when `g - f` is nonincreasing.
//!
//! For the last-success objectives the closed-form threshold indices are
//! computed from the odds and reported next to the myopic threshold. The
//! closed form `min{j : e_m(j) <= e_{ℓ-1}(j)}` points at the first suffix
//! start `j` whose comparison favours stopping; the trial at which the rule
//! starts stopping is one earlier, because `f_k` and `g_k` look at trials
//! `k + 1, k + 2, ...`.

use crate::chain::continuation_backward;
use crate::error::{Error, Result};
use crate::profiles::{StoppingProblem, SuccessProfile};
use crate::sequences::{is_unimodal, ExtendedSequence};
use crate::symfun::{CountTable, SuccessCounts};

/// Relative tie tolerance: `f_k >= g_k - TIE_TOL · max(|f_k|, |g_k|)` stops.
///
/// There is no absolute floor. Last-success payoffs early in a long profile
/// sit far below any fixed floor and would all read as ties.
pub const TIE_TOL: f64 = 1e-12;

/// Tolerance on `g = h + w f` when a Ferguson decomposition is supplied.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

// Disagreements between the myopic and closed-form thresholds are accepted
// only across comparisons this close to a tie.
const NEAR_TIE: f64 = 1e-9;

fn stops(f: f64, g: f64) -> bool {
    f >= g - TIE_TOL * f.abs().max(g.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Certificates {
    pub f_unimodal: bool,
    pub g_unimodal: bool,
    pub ferguson_ratio: bool,
    pub ferguson_diff: bool,
    pub monotone_stop_set: bool,
}

/// Cross-check of the myopic threshold against the odds closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormCheck {
    /// `k*` (or `l*`): first suffix start where stopping is favoured.
    pub index: usize,
    /// Trial at which the implied threshold rule starts stopping.
    pub implied_threshold: usize,
    /// `s_m(t)` or `u_m(t; ℓ)` at the myopic threshold `t`.
    pub value: f64,
    /// Whether the comparison used odds polynomials or product form.
    pub uses_odds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Trials at which a success is accepted, ascending.
    pub stop_set: Vec<usize>,
    /// Smallest element of `stop_set`; `None` means never stop.
    pub threshold: Option<usize>,
    /// Expected payoff of the rule.
    pub value: f64,
    pub certificates: Certificates,
    pub f: ExtendedSequence,
    pub g: ExtendedSequence,
    pub closed_form: Option<ClosedFormCheck>,
}

impl Solution {
    pub fn stops_at(&self, k: usize) -> bool {
        self.stop_set.binary_search(&k).is_ok()
    }
}

fn is_upward_closed(stop_set: &[usize], n: usize) -> bool {
    match stop_set.first() {
        None => true,
        Some(&t) => stop_set.len() == n + 1 - t,
    }
}

// expected payoff of stopping at the first success inside the mask
fn stop_set_value(problem: &StoppingProblem, stop_set: &[usize]) -> f64 {
    let profile = problem.profile();
    let mut v = problem.f_inf();
    let mut next = stop_set.iter().rev().peekable();
    for k in (1..=problem.horizon()).rev() {
        let on_success = if next.peek() == Some(&&k) {
            next.next();
            problem.f(k)
        } else {
            v
        };
        v = profile.p(k) * on_success + profile.q(k) * v;
    }
    v
}

pub fn myopic_stop_set(problem: &StoppingProblem) -> Solution {
    let n = problem.horizon();
    let f = problem.payoff().clone();
    let g = continuation_backward(problem);
    let stop_set: Vec<usize> = (1..=n).filter(|&k| stops(f.get(k), g.get(k))).collect();
    let threshold = stop_set.first().copied();
    let monotone = is_upward_closed(&stop_set, n);
    let value = match threshold {
        None => problem.f_inf(),
        Some(t) if monotone => g.get(t - 1),
        Some(_) => stop_set_value(problem, &stop_set),
    };
    let ferguson = ferguson_check(&f, &g, None).expect("f and g share dimensions");
    let certificates = Certificates {
        f_unimodal: is_unimodal(f.states()),
        g_unimodal: is_unimodal(g.states()),
        ferguson_ratio: ferguson.ratio_nonincreasing,
        ferguson_diff: ferguson.diff_nonincreasing,
        monotone_stop_set: monotone,
    };
    Solution {
        stop_set,
        threshold,
        value,
        certificates,
        f,
        g,
        closed_form: None,
    }
}

/// Outcome of Ferguson's sufficient condition (and its `g = h + w f` form).
#[derive(Debug, Clone, PartialEq)]
pub struct FergusonReport {
    pub diff_nonincreasing: bool,
    pub ratio_nonincreasing: bool,
    /// First trial `k` at which a checked sequence increases from `k - 1`.
    pub first_violation: Option<usize>,
    pub decomposition_w: Option<f64>,
    pub h_ratio_nonincreasing: Option<bool>,
}

impl FergusonReport {
    pub fn holds(&self) -> bool {
        self.diff_nonincreasing || self.ratio_nonincreasing
    }
}

// first position i >= 1 with xs[i] > xs[i-1] beyond tolerance
fn first_increase(xs: &[f64]) -> Option<usize> {
    xs.windows(2)
        .position(|w| {
            let (a, b) = (w[0], w[1]);
            if a == f64::INFINITY {
                false
            } else if b == f64::INFINITY {
                true
            } else {
                b > a + TIE_TOL * a.abs().max(b.abs())
            }
        })
        .map(|i| i + 1)
}

// ratio with x/0 = +∞ for every x
fn ratios(num: &[f64], den: &[f64]) -> Vec<f64> {
    num.iter()
        .zip(den)
        .map(|(&a, &b)| if b == 0.0 { f64::INFINITY } else { a / b })
        .collect()
}

/// Checks `g - f` and `g / f` for being nonincreasing over trials `1..=N`.
///
/// With `h_w = Some((h, w))` also validates `g = h + w f` (within
/// [`DECOMPOSITION_TOL`], `0 <= w < 1`) and checks `h / f`.
pub fn ferguson_check(
    f: &ExtendedSequence,
    g: &ExtendedSequence,
    h_w: Option<(&ExtendedSequence, f64)>,
) -> Result<FergusonReport> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    let n = f.horizon();
    let fs = &f.finite()[1..=n];
    let gs = &g.finite()[1..=n];

    let diff: Vec<f64> = gs.iter().zip(fs).map(|(a, b)| a - b).collect();
    let diff_violation = first_increase(&diff);
    let ratio_violation = first_increase(&ratios(gs, fs));

    let mut decomposition_w = None;
    let mut h_violation = None;
    let mut h_ok = None;
    if let Some((h, w)) = h_w {
        if !(0.0..1.0).contains(&w) {
            return Err(Error::BadW(w));
        }
        if h.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                found: h.dim(),
            });
        }
        let worst = g
            .states()
            .iter()
            .zip(h.states())
            .zip(f.states())
            .map(|((gv, hv), fv)| (gv - (hv + w * fv)).abs())
            .fold(0.0, f64::max);
        if worst > DECOMPOSITION_TOL {
            return Err(Error::BadDecomposition(worst));
        }
        h_violation = first_increase(&ratios(&h.finite()[1..=n], fs));
        h_ok = Some(h_violation.is_none());
        decomposition_w = Some(w);
    }

    // positions are 0-based into trials 1..=N
    let first_violation = [diff_violation, ratio_violation, h_violation]
        .into_iter()
        .flatten()
        .min()
        .map(|i| i + 1);

    Ok(FergusonReport {
        diff_nonincreasing: diff_violation.is_none(),
        ratio_nonincreasing: ratio_violation.is_none(),
        first_violation,
        decomposition_w,
        h_ratio_nonincreasing: h_ok,
    })
}

/// Sufficient conditions for optimality of the myopic rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodalityCertificate {
    pub f_unimodal: bool,
    pub g_unimodal: bool,
    pub myopic_optimal_claim: bool,
}

pub fn unimodality_certificate(problem: &StoppingProblem) -> UnimodalityCertificate {
    let g = continuation_backward(problem);
    let f_unimodal = is_unimodal(problem.payoff().states());
    let g_unimodal = is_unimodal(g.states());
    UnimodalityCertificate {
        f_unimodal,
        g_unimodal,
        myopic_optimal_claim: f_unimodal || g_unimodal,
    }
}

fn payoffs_from_table(
    profile: &SuccessProfile,
    table: &CountTable,
    ell: usize,
) -> Result<StoppingProblem> {
    let m = table.max_order();
    let payoffs = (1..=profile.len())
        .map(|k| table.s_range(ell - 1, m - 1, k + 1))
        .collect::<Result<Vec<f64>>>()?;
    StoppingProblem::from_trial_payoffs(profile.clone(), &payoffs, 0.0)
}

/// The ℓ-to-m last-success problem: `f_k = s_{ℓ-1}(k+1) + ... + s_{m-1}(k+1)`,
/// `f_∞ = 0`.
pub fn last_success_problem(
    profile: &SuccessProfile,
    ell: usize,
    m: usize,
) -> Result<StoppingProblem> {
    if ell == 0 || ell > m {
        return Err(Error::BadRange { ell, m });
    }
    payoffs_from_table(profile, &CountTable::build(profile, m), ell)
}

/// Myopic solution of "stop on any of the ℓ-th .. m-th last successes".
///
/// The payoff is [`last_success_problem`].
pub fn solve_l_to_m(profile: &SuccessProfile, ell: usize, m: usize) -> Result<Solution> {
    if ell == 0 || ell > m {
        return Err(Error::BadRange { ell, m });
    }
    let n = profile.len();
    let table = CountTable::build(profile, m);
    let problem = payoffs_from_table(profile, &table, ell)?;
    let mut solution = myopic_stop_set(&problem);

    // stopping favoured for the suffix starting at j
    let favoured = |j: usize| -> bool {
        match table.esp() {
            Some(esp) => stops(esp.e(ell - 1, j), esp.e(m, j)),
            None => stops(table.raw_s(ell - 1, j), table.raw_s(m, j)),
        }
    };
    let index = (1..=n + 1)
        .find(|&j| favoured(j))
        .expect("the empty suffix always favours stopping");
    let implied_threshold = (2..=n + 1)
        .find(|&j| favoured(j))
        .expect("the empty suffix always favours stopping")
        - 1;

    let threshold = solution
        .threshold
        .ok_or_else(|| Error::InternalInconsistency("last-success rule never stops".into()))?;
    if threshold != implied_threshold {
        let (lo, hi) = (
            threshold.min(implied_threshold),
            threshold.max(implied_threshold),
        );
        let all_near_ties = (lo..hi).all(|k| {
            let (fk, gk) = (solution.f.get(k), solution.g.get(k));
            (fk - gk).abs() <= NEAR_TIE * fk.abs().max(gk.abs())
        });
        if !all_near_ties {
            return Err(Error::InternalInconsistency(format!(
                "myopic threshold {threshold} but closed form implies {implied_threshold} (index {index})"
            )));
        }
    }
    let value = table.u_value(ell, threshold)?;
    solution.closed_form = Some(ClosedFormCheck {
        index,
        implied_threshold,
        value,
        uses_odds: table.esp().is_some(),
    });
    Ok(solution)
}

/// Myopic solution of "stop on the m-th last success".
///
/// Uses `f_k = s_{m-1}(k+1)`, `f_∞ = 0`.
pub fn solve_mth_last(profile: &SuccessProfile, m: usize) -> Result<Solution> {
    if m == 0 {
        return Err(Error::BadRange { ell: 0, m });
    }
    solve_l_to_m(profile, m, m)
}
