//! The Markov chain embedded in the success epochs of the trials.
//!
//! States are `{0, 1, ..., N, ∞}`; row and column `N + 1` stand for `∞`.
//! From state `i` the chain jumps to the next success `j > i`, or to `∞` if
//! no further success occurs among the `N` trials:
//!
//! ```text
//! P(i, j) = p_j · q_{i+1} ⋯ q_{j-1}        i < j <= N
//! P(i, ∞) = q_{i+1} ⋯ q_N                  (all mass beyond N folds into ∞)
//! P(∞, ∞) = 1
//! ```

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profiles::{StoppingProblem, SuccessProfile};
use crate::sequences::ExtendedSequence;

/// Largest number of trials for which a dense matrix is built.
pub const DENSE_LIMIT: usize = 2048;

/// Row-stochastic, strictly upper-triangular (on finite states) transition
/// matrix of the embedded chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    matrix: Matrix,
}

impl TransitionMatrix {
    /// Number of states `N + 2`.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of trials `N`.
    pub fn trials(&self) -> usize {
        self.dim() - 2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.matrix.row(i)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Plain-text export (`N=<dim>` header, tab-separated rows).
    pub fn to_text(&self) -> String {
        self.matrix.to_text()
    }
}

fn uses_log_products(profile: &SuccessProfile) -> bool {
    profile.len() > 100 && profile.probs().iter().any(|&p| 1.0 - p < 1e-3)
}

// Fills the last entry so the row sums to exactly 1 when added left to
// right. Rounding overshoot of the finite part is trimmed from its largest
// entry first.
fn close_row(row: &mut [f64]) {
    let (last, finite) = row.split_last_mut().expect("row has a terminal column");
    let sum = |xs: &[f64]| xs.iter().sum::<f64>();
    let mut s = sum(finite);
    while s > 1.0 {
        let largest = finite
            .iter_mut()
            .max_by(|a, b| a.total_cmp(b))
            .expect("overshoot needs a finite entry");
        *largest = (*largest - (s - 1.0)).max(0.0);
        s = sum(finite);
    }
    *last = 1.0 - s;
    while s + *last > 1.0 {
        *last = last.next_down();
    }
    while s + *last < 1.0 {
        *last = last.next_up();
    }
}

pub fn transition_matrix(profile: &SuccessProfile) -> Result<TransitionMatrix> {
    let n = profile.len();
    if n > DENSE_LIMIT {
        return Err(Error::MatrixTooLarge {
            trials: n,
            limit: DENSE_LIMIT,
        });
    }
    let dim = n + 2;
    let inf = n + 1;
    let log_space = uses_log_products(profile);
    let mut m = Matrix::zeros(dim, dim);

    for i in 0..=n {
        // running product q_{i+1} ⋯ q_{j-1}, possibly as a log
        let mut run: f64 = if log_space { 0.0 } else { 1.0 };
        for j in (i + 1)..=n {
            let survive = if log_space { run.exp() } else { run };
            m[(i, j)] = profile.p(j) * survive;
            if log_space {
                run += profile.q(j).ln();
            } else {
                run *= profile.q(j);
            }
        }
        close_row(m.row_mut(i));
    }
    m[(inf, inf)] = 1.0;
    Ok(TransitionMatrix { matrix: m })
}

/// `P^n f` by `n` successive matrix-vector products (`n = 0` returns `f`).
pub fn apply(p: &TransitionMatrix, f: &ExtendedSequence, n: usize) -> Result<ExtendedSequence> {
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: f.dim(),
        });
    }
    let mut v = f.states().to_vec();
    for _ in 0..n {
        v = p.matrix.mul_vec(&v)?;
    }
    ExtendedSequence::from_states(v)
}

/// Continuation payoff `g = P f` by the backward recursion
/// `g_{k-1} = p_k f_k + q_k g_k`, started from `g_N = g_∞ = f_∞`.
///
/// Runs in `O(N)` and has no size limit.
pub fn continuation_backward(problem: &StoppingProblem) -> ExtendedSequence {
    let n = problem.horizon();
    let profile = problem.profile();
    let f_inf = problem.f_inf();
    let mut g = vec![0.0; n + 2];
    g[n + 1] = f_inf;
    g[n] = f_inf;
    for k in (1..=n).rev() {
        g[k - 1] = profile.p(k) * problem.f(k) + profile.q(k) * g[k];
    }
    ExtendedSequence::from_states(g).expect("finite inputs give finite recursion")
}

/// Diagonal scalings with `O = D1 · P · D2⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `1, q_1, q_1 q_2, ..., q_1 ⋯ q_N`, then `q_1 ⋯ q_N` for `∞`.
    pub d1: Vec<f64>,
    /// `1, p_1, p_2 q_1, ..., p_N q_1 ⋯ q_{N-1}`, then `q_1 ⋯ q_N` for `∞`
    /// (`p_∞ = 1`).
    pub d2: Vec<f64>,
    pub o: Matrix,
}

impl Decomposition {
    /// 0/1 pattern `O` must match: ones strictly above the diagonal and in
    /// the absorbing corner `(∞, ∞)`, zeros elsewhere.
    pub fn expected_pattern(dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                m[(i, j)] = 1.0;
            }
        }
        m[(dim - 1, dim - 1)] = 1.0;
        m
    }

    pub fn max_pattern_deviation(&self) -> f64 {
        let dim = self.o.rows();
        let pattern = Self::expected_pattern(dim);
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((self.o[(i, j)] - pattern[(i, j)]).abs());
            }
        }
        worst
    }
}

pub fn decompose(p: &TransitionMatrix, profile: &SuccessProfile) -> Result<Decomposition> {
    let n = profile.len();
    if p.trials() != n {
        return Err(Error::DimensionMismatch {
            expected: n + 2,
            found: p.dim(),
        });
    }
    if let Some(k) = profile.probs().iter().position(|&x| x <= 0.0 || x >= 1.0) {
        return Err(Error::SingularScaling(k + 1));
    }
    let mut d1 = Vec::with_capacity(n + 2);
    let mut d2 = Vec::with_capacity(n + 2);
    d1.push(1.0);
    d2.push(1.0);
    let mut prefix = 1.0;
    for k in 1..=n {
        d2.push(profile.p(k) * prefix);
        prefix *= profile.q(k);
        d1.push(prefix);
    }
    d1.push(prefix);
    d2.push(prefix);

    let dim = n + 2;
    let mut o = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            o[(i, j)] = d1[i] * p.get(i, j) / d2[j];
        }
    }
    Ok(Decomposition { d1, d2, o })
}
