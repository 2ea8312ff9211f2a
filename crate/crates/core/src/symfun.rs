//! Elementary symmetric polynomials of the odds and the Poisson-binomial
//! probabilities built from them.
//!
//! For trials `k..=N`:
//!
//! * `s_0(k) = q_k ⋯ q_N` is the probability of no success,
//! * `e_j(k)` is the sum over all `j`-subsets of `{k..N}` of the product of
//!   their odds,
//! * `s_j(k) = s_0(k) e_j(k)` is the probability of exactly `j` successes,
//! * `u_m(k; ℓ) = s_ℓ(k) + ... + s_m(k)`.
//!
//! Index `k = N + 1` denotes the empty suffix.

use crate::error::{Error, Result};
use crate::profiles::{odds, SuccessProfile};

fn clamp_probability(x: f64) -> f64 {
    let c = x.clamp(0.0, 1.0);
    debug_assert!((c - x).abs() <= 1e-12, "probability {x} clamped too far");
    c
}

/// Access to the suffix success-count distribution of a profile.
pub trait SuccessCounts {
    /// Number of trials `N`.
    fn trials(&self) -> usize;

    /// Largest success count `m` held by the table.
    fn max_order(&self) -> usize;

    /// Unchecked `s_j(k)`; callers guarantee `j <= m`, `1 <= k <= N + 1`.
    fn raw_s(&self, j: usize, k: usize) -> f64;

    /// Probability of exactly `j` successes among trials `k..=N`.
    fn s_value(&self, j: usize, k: usize) -> Result<f64> {
        self.check_index(j, k)?;
        Ok(self.raw_s(j, k))
    }

    /// `s_lo(k) + ... + s_hi(k)`.
    fn s_range(&self, lo: usize, hi: usize, k: usize) -> Result<f64> {
        if lo > hi {
            return Err(Error::BadRange { ell: lo, m: hi });
        }
        self.check_index(hi, k)?;
        Ok(clamp_probability((lo..=hi).map(|j| self.raw_s(j, k)).sum()))
    }

    /// `u_m(k; ℓ)` with `m` the table's maximal order.
    fn u_value(&self, ell: usize, k: usize) -> Result<f64> {
        let m = self.max_order();
        if ell == 0 || ell > m {
            return Err(Error::BadRange { ell, m });
        }
        self.s_range(ell, m, k)
    }

    fn check_index(&self, j: usize, k: usize) -> Result<()> {
        if j > self.max_order() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.max_order(),
            });
        }
        if k == 0 || k > self.trials() + 1 {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.trials() + 1,
            });
        }
        Ok(())
    }
}

/// Elementary symmetric polynomials `e_j(k)` for `j = 0..=m`,
/// `k = 1..=N+1`, plus the no-success products `s_0(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EspTable {
    m: usize,
    n: usize,
    // e[j][k], position 0 unused
    e: Vec<Vec<f64>>,
    s0: Vec<f64>,
}

impl EspTable {
    pub fn e(&self, j: usize, k: usize) -> f64 {
        self.e[j][k]
    }

    pub fn s0(&self, k: usize) -> f64 {
        self.s0[k]
    }
}

impl SuccessCounts for EspTable {
    fn trials(&self) -> usize {
        self.n
    }

    fn max_order(&self) -> usize {
        self.m
    }

    fn raw_s(&self, j: usize, k: usize) -> f64 {
        clamp_probability(self.s0[k] * self.e[j][k])
    }
}

/// Builds the table by the backward recurrence
/// `e_j(k) = e_j(k+1) + r_k e_{j-1}(k+1)`.
pub fn esp_table(profile: &SuccessProfile, m: usize) -> Result<EspTable> {
    let r = odds(profile)?;
    let r = r.as_slice();
    let n = profile.len();

    let mut e = vec![vec![0.0; n + 2]; m + 1];
    e[0].iter_mut().for_each(|x| *x = 1.0);
    for j in 1..=m {
        let (lower, upper) = e.split_at_mut(j);
        let prev = &lower[j - 1];
        let cur = &mut upper[0];
        for k in (1..=n).rev() {
            cur[k] = cur[k + 1] + r[k - 1] * prev[k + 1];
        }
    }

    let mut s0 = vec![1.0; n + 2];
    for k in (1..=n).rev() {
        s0[k] = s0[k + 1] * profile.q(k);
    }
    Ok(EspTable { m, n, e, s0 })
}

/// Suffix success-count probabilities in product form,
/// `s_j(k) = p_k s_{j-1}(k+1) + q_k s_j(k+1)`. Valid when some `p_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTable {
    m: usize,
    n: usize,
    s: Vec<Vec<f64>>,
}

impl SuccessCounts for ProductTable {
    fn trials(&self) -> usize {
        self.n
    }

    fn max_order(&self) -> usize {
        self.m
    }

    fn raw_s(&self, j: usize, k: usize) -> f64 {
        clamp_probability(self.s[j][k])
    }
}

pub fn product_table(profile: &SuccessProfile, m: usize) -> ProductTable {
    let n = profile.len();
    let mut s = vec![vec![0.0; n + 2]; m + 1];
    s[0][n + 1] = 1.0;
    for k in (1..=n).rev() {
        let (p, q) = (profile.p(k), profile.q(k));
        for j in (0..=m).rev() {
            let from_success = if j > 0 { p * s[j - 1][k + 1] } else { 0.0 };
            s[j][k] = from_success + q * s[j][k + 1];
        }
    }
    ProductTable { m, n, s }
}

/// ESP table when every odds ratio is finite, product form otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum CountTable {
    Esp(EspTable),
    Product(ProductTable),
}

impl CountTable {
    pub fn build(profile: &SuccessProfile, m: usize) -> Self {
        match esp_table(profile, m) {
            Ok(t) => CountTable::Esp(t),
            Err(_) => CountTable::Product(product_table(profile, m)),
        }
    }

    pub fn esp(&self) -> Option<&EspTable> {
        match self {
            CountTable::Esp(t) => Some(t),
            CountTable::Product(_) => None,
        }
    }
}

impl SuccessCounts for CountTable {
    fn trials(&self) -> usize {
        match self {
            CountTable::Esp(t) => t.trials(),
            CountTable::Product(t) => t.trials(),
        }
    }

    fn max_order(&self) -> usize {
        match self {
            CountTable::Esp(t) => t.max_order(),
            CountTable::Product(t) => t.max_order(),
        }
    }

    fn raw_s(&self, j: usize, k: usize) -> f64 {
        match self {
            CountTable::Esp(t) => t.raw_s(j, k),
            CountTable::Product(t) => t.raw_s(j, k),
        }
    }
}
