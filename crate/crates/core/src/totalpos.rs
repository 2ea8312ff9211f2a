//! Sign-regularity certification of finite matrices by minor enumeration.
//!
//! A matrix is `TP_r` when every minor of order `k <= r` is nonnegative.
//! Minors are compared against a tolerance scaled by the largest absolute
//! entry of the submatrix, so a minor `d` counts as negative only when
//! `d < -tol · scale`.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Minor counts above this are sampled instead of enumerated, unless the
/// matrix is small enough for the exhaustive guarantee below.
pub const SAMPLE_CAP: usize = 200_000;
/// Matrices with at most this many rows and columns are enumerated
/// exhaustively up to order [`EXHAUSTIVE_MAX_ORDER`].
pub const EXHAUSTIVE_MAX_DIM: usize = 12;
pub const EXHAUSTIVE_MAX_ORDER: usize = 4;

const SAMPLE_SEED: u64 = 0x7090_5157;

/// Sign class of all minors of one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorSign {
    Positive,
    Negative,
    /// Both strict signs occur, or every minor is zero within tolerance.
    Indeterminate,
}

impl MinorSign {
    pub fn as_i8(self) -> Option<i8> {
        match self {
            MinorSign::Positive => Some(1),
            MinorSign::Negative => Some(-1),
            MinorSign::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderStats {
    pub order: usize,
    pub checked: usize,
    pub sampled: bool,
    /// Smallest `minor / scale` seen at this order.
    pub min_normalized: f64,
    pub max_normalized: f64,
    pub any_positive: bool,
    pub any_negative: bool,
}

impl OrderStats {
    pub fn sign(&self) -> MinorSign {
        match (self.any_positive, self.any_negative) {
            (true, false) => MinorSign::Positive,
            (false, true) => MinorSign::Negative,
            _ => MinorSign::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinorReport {
    pub order: usize,
    pub tol: f64,
    /// Most negative normalized minor over all orders.
    pub min_value: f64,
    pub sign_signature: Vec<MinorSign>,
    pub minors_checked: usize,
    pub per_order: Vec<OrderStats>,
}

impl MinorReport {
    /// Whether any order was sampled rather than enumerated.
    pub fn sampled(&self) -> bool {
        self.per_order.iter().any(|o| o.sampled)
    }

    /// `TP_k` verdict from the minors inspected, for `k <= order`.
    pub fn tp_through(&self, k: usize) -> bool {
        self.per_order.iter().take(k).all(|o| !o.any_negative)
    }
}

/// `n choose k`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k).min(1 << 20));
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rposition(|i| idx[i] < i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Determinant of the submatrix on `rows × cols` by Gaussian elimination
/// with partial pivoting, together with its largest absolute entry.
pub fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> (f64, f64) {
    let k = rows.len();
    let mut a: Vec<f64> = Vec::with_capacity(k * k);
    for &r in rows {
        for &c in cols {
            a.push(m[(r, c)]);
        }
    }
    let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    (det_in_place(&mut a, k), scale)
}

fn det_in_place(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| a[x * k + col].abs().total_cmp(&a[y * k + col].abs()))
            .expect("nonempty range");
        if a[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in (col + 1)..k {
            let factor = a[r * k + col] / p;
            if factor != 0.0 {
                for j in col..k {
                    a[r * k + j] -= factor * a[col * k + j];
                }
            }
        }
    }
    det
}

#[derive(Clone, Copy)]
struct Acc {
    checked: usize,
    min: f64,
    max: f64,
    pos: bool,
    neg: bool,
}

impl Acc {
    const EMPTY: Acc = Acc {
        checked: 0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        pos: false,
        neg: false,
    };

    fn push(mut self, det: f64, scale: f64, tol: f64) -> Acc {
        let normalized = if scale > 0.0 { det / scale } else { 0.0 };
        self.checked += 1;
        self.min = self.min.min(normalized);
        self.max = self.max.max(normalized);
        self.pos |= det > tol * scale;
        self.neg |= det < -tol * scale;
        self
    }

    // order-independent, so parallel reduction is deterministic
    fn merge(self, other: Acc) -> Acc {
        Acc {
            checked: self.checked + other.checked,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
            pos: self.pos || other.pos,
            neg: self.neg || other.neg,
        }
    }
}

fn order_stats(m: &Matrix, k: usize, tol: f64) -> OrderStats {
    let (rows, cols) = (m.rows(), m.cols());
    let total = binomial(rows, k).saturating_mul(binomial(cols, k));
    let small = rows.max(cols) <= EXHAUSTIVE_MAX_DIM && k <= EXHAUSTIVE_MAX_ORDER;
    let sampled = !(small || total <= SAMPLE_CAP);

    let acc = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ k as u64);
        let picks: Vec<(Vec<usize>, Vec<usize>)> = (0..SAMPLE_CAP)
            .map(|_| {
                let mut r = index::sample(&mut rng, rows, k).into_vec();
                let mut c = index::sample(&mut rng, cols, k).into_vec();
                r.sort_unstable();
                c.sort_unstable();
                (r, c)
            })
            .collect();
        picks
            .par_iter()
            .map(|(r, c)| {
                let (det, scale) = minor(m, r, c);
                Acc::EMPTY.push(det, scale, tol)
            })
            .reduce(|| Acc::EMPTY, Acc::merge)
    } else {
        let row_sets = combinations(rows, k);
        let col_sets = combinations(cols, k);
        row_sets
            .par_iter()
            .map(|r| {
                col_sets.iter().fold(Acc::EMPTY, |acc, c| {
                    let (det, scale) = minor(m, r, c);
                    acc.push(det, scale, tol)
                })
            })
            .reduce(|| Acc::EMPTY, Acc::merge)
    };

    OrderStats {
        order: k,
        checked: acc.checked,
        sampled,
        min_normalized: acc.min,
        max_normalized: acc.max,
        any_positive: acc.pos,
        any_negative: acc.neg,
    }
}

fn check_order(m: &Matrix, r: usize) -> Result<()> {
    if r == 0 || r > m.rows().min(m.cols()) {
        return Err(Error::OrderTooLarge {
            order: r,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Sign class of the minors of every order `1..=r`.
pub fn sign_signature(m: &Matrix, r: usize, tol: f64) -> Result<MinorReport> {
    check_order(m, r)?;
    let per_order: Vec<OrderStats> = (1..=r).map(|k| order_stats(m, k, tol)).collect();
    Ok(MinorReport {
        order: r,
        tol,
        min_value: per_order
            .iter()
            .map(|o| o.min_normalized)
            .fold(f64::INFINITY, f64::min),
        sign_signature: per_order.iter().map(OrderStats::sign).collect(),
        minors_checked: per_order.iter().map(|o| o.checked).sum(),
        per_order,
    })
}

/// Whether `m` is `TP_r`: no minor of order `<= r` below `-tol · scale`.
pub fn is_tp(m: &Matrix, r: usize, tol: f64) -> Result<(bool, MinorReport)> {
    let report = sign_signature(m, r, tol)?;
    Ok((report.tp_through(r), report))
}

/// Kernel matrix `(a_{i-j})` of a sequence, with `a_k = 0` for negative `k`
/// and beyond the end of `a`.
pub fn kernel_representation(a: &[f64], size: usize) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..=i {
            if let Some(&v) = a.get(i - j) {
                m[(i, j)] = v;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counterexample() -> Matrix {
        Matrix::from_rows(&[
            vec![10.0, 5.0, 0.0],
            vec![8.0, 4.0, 3.0],
            vec![4.0, 3.0, 8.0],
        ])
        .unwrap()
    }

    #[test]
    fn counterexample_is_tp2_not_tp3() {
        let a = counterexample();
        assert!(is_tp(&a, 2, 1e-10).unwrap().0);
        let (tp3, report) = is_tp(&a, 3, 1e-10).unwrap();
        assert!(!tp3);
        // det = -30, largest entry 10
        assert!((report.per_order[2].min_normalized + 3.0).abs() < 1e-12);
        assert_eq!(report.sign_signature[2], MinorSign::Negative);
        assert!(report.tp_through(2));
    }

    #[test]
    fn determinant_by_cofactors() {
        let a = counterexample();
        let (det, scale) = minor(&a, &[0, 1, 2], &[0, 1, 2]);
        assert!((det + 30.0).abs() < 1e-12);
        assert_eq!(scale, 10.0);
    }

    #[test]
    fn identity_is_tp_at_every_order() {
        let id = Matrix::identity(4);
        for r in 1..=4 {
            assert!(is_tp(&id, r, 1e-10).unwrap().0);
        }
    }

    #[test]
    fn signatures() {
        let lower = Matrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        let s = sign_signature(&lower, 2, 1e-10).unwrap();
        assert_eq!(
            s.sign_signature,
            vec![MinorSign::Positive, MinorSign::Positive]
        );

        let neg = Matrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let s = sign_signature(&neg, 2, 1e-10).unwrap();
        assert_eq!(
            s.sign_signature,
            vec![MinorSign::Negative, MinorSign::Positive]
        );

        let zero = Matrix::zeros(2, 2);
        let s = sign_signature(&zero, 2, 1e-10).unwrap();
        assert_eq!(s.sign_signature, vec![MinorSign::Indeterminate; 2]);
    }

    #[test]
    fn order_validation() {
        let a = counterexample();
        assert!(matches!(
            is_tp(&a, 4, 0.0),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            is_tp(&a, 0, 0.0),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn minor_counts() {
        let m = Matrix::identity(6);
        let report = sign_signature(&m, 4, 1e-10).unwrap();
        for o in &report.per_order {
            assert_eq!(o.checked, binomial(6, o.order).pow(2));
            assert!(!o.sampled);
        }
        assert_eq!(report.minors_checked, 36 + 225 + 400 + 225);
    }

    #[test]
    fn large_orders_are_sampled() {
        let m = Matrix::identity(20);
        let report = sign_signature(&m, 5, 1e-10).unwrap();
        // C(20,2)^2 = 36_100 fits under the cap, C(20,3)^2 = 1_299_600 does not
        assert!(!report.per_order[1].sampled);
        assert!(report.per_order[2].sampled);
        assert_eq!(report.per_order[4].checked, SAMPLE_CAP);
        assert!(report.sampled());
    }

    #[test]
    fn combinations_enumerate_in_order() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(10, 4).len(), binomial(10, 4));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_representation(&[1.0, 1.0], 3);
        assert_eq!(
            k,
            Matrix::from_rows(&[
                vec![1.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0],
                vec![0.0, 1.0, 1.0]
            ])
            .unwrap()
        );
        let k = kernel_representation(&[0.0, 1.0, 1.0, 1.0], 4);
        assert_eq!(
            k,
            Matrix::from_rows(&[
                vec![0.0, 0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0, 0.0],
                vec![1.0, 1.0, 1.0, 0.0]
            ])
            .unwrap()
        );
        assert!(is_tp(&k, 4, 1e-12).unwrap().0);
        let k = kernel_representation(&[2.0], 2);
        assert_eq!(k, Matrix::diagonal(&[2.0, 2.0]));
    }
}
