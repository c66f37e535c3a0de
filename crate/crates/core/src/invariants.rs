//! Switching-invariant matrices built from a chirality matrix, the scalar
//! invariants derived from them, and exact integer linear algebra.
//!
//! Both scalar invariants are traces of the form `tr[X (c I - R)^{-1}]`:
//!
//! * `invariant(P, R)   = tr[Q(P) (I - R)^{-1}]`
//! * `invariant_n(P, R) = tr[Qn(P, R) (I/2 - R)^{-1}]`
//!
//! `Q(P)` has row `i` equal to the column sums of `A_i`, the switching of `P`
//! whose row `i` is all `+1`. `Qn` weights the `A_i` by the row and column
//! sums of `R` and a global factor `3^-6`. All inverses are taken in exact
//! rational arithmetic and only the final trace is rounded to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::topomatrix::{RingMatrix, SeidelMatrix};

/// Global weight of `Qn`.
pub const QN_PREFACTOR_DENOM: i64 = 729;

/// Switch `P` so that row and column `i` are all `+1` off the diagonal.
pub fn switch_row_positive(p: &SeidelMatrix, i: usize) -> SeidelMatrix {
    let d: Vec<i64> = (0..p.order()).map(|k| if k == i { 1 } else { p.get(i, k) }).collect();
    p.switched(&d)
}

pub fn q_matrix(p: &SeidelMatrix) -> IntegerMatrix {
    let n = p.order();
    let mut q = IntegerMatrix::zeros(n);
    for i in 0..n {
        let a = switch_row_positive(p, i);
        for j in 0..n {
            q.set(i, j, a.col_sum(j));
        }
    }
    q
}

/// Square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn from_integer(m: &IntegerMatrix) -> Self {
        let n = m.order();
        let data = (0..n * n).map(|k| BigRational::from_integer(BigInt::from(m.get(k / n, k % n)))).collect();
        Self { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.n + j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| ratio_to_f64(self.get(i, j))).collect()).collect()
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::zeros(n);
        for i in 0..n {
            *inv.get_mut(i, i) = BigRational::one();
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let pv = a.get(col, col).clone();
            for j in 0..n {
                *a.get_mut(col, j) /= &pv;
                *inv.get_mut(col, j) /= &pv;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let da = a.get(col, j) * &factor;
                    let di = inv.get(col, j) * &factor;
                    *a.get_mut(r, j) -= da;
                    *inv.get_mut(r, j) -= di;
                }
            }
        }
        Some(inv)
    }

    /// `tr(self * other)`.
    pub fn trace_product(&self, other: &Self) -> BigRational {
        let n = self.n;
        let mut acc = BigRational::zero();
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if !x.is_zero() {
                    acc += x * other.get(k, i);
                }
            }
        }
        acc
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `(c I - R)^{-1}` with `c = num/den`.
fn shifted_inverse(r: &RingMatrix, num: i64, den: i64) -> Result<RationalMatrix> {
    let n = r.order();
    let mut m = RationalMatrix::zeros(n);
    let c = BigRational::new(BigInt::from(num), BigInt::from(den));
    for i in 0..n {
        for j in 0..n {
            let mut v = -BigRational::from_integer(BigInt::from(r.get(i, j)));
            if i == j {
                v += &c;
            }
            *m.get_mut(i, j) = v;
        }
    }
    m.inverse().ok_or(Error::SingularRingMatrix)
}

fn check_orders(p: &SeidelMatrix, r: &RingMatrix) -> Result<()> {
    if p.order() != r.order() {
        return Err(Error::OrderMismatch(p.order(), r.order()));
    }
    Ok(())
}

pub fn invariant_exact(p: &SeidelMatrix, r: &RingMatrix) -> Result<BigRational> {
    check_orders(p, r)?;
    let inv = shifted_inverse(r, 1, 1)?;
    Ok(RationalMatrix::from_integer(&q_matrix(p)).trace_product(&inv))
}

/// `tr[Q(P) (I - R)^{-1}]`. The mirror value is `invariant(&p.mirrored(), r)`.
pub fn invariant(p: &SeidelMatrix, r: &RingMatrix) -> Result<f64> {
    invariant_exact(p, r).map(|v| ratio_to_f64(&v))
}

/// `3^-6 * sum_i (row sum_i R)(col sum_i R) A_i`.
pub fn qn_matrix(p: &SeidelMatrix, r: &RingMatrix) -> Result<RationalMatrix> {
    check_orders(p, r)?;
    let n = p.order();
    let mut acc = IntegerMatrix::zeros(n);
    for i in 0..n {
        let w = r.row_sum(i) * r.col_sum(i);
        if w == 0 {
            continue;
        }
        let a = switch_row_positive(p, i);
        for x in 0..n {
            for y in 0..n {
                acc.set(x, y, acc.get(x, y) + w * a.get(x, y));
            }
        }
    }
    let mut out = RationalMatrix::from_integer(&acc);
    let den = BigRational::from_integer(BigInt::from(QN_PREFACTOR_DENOM));
    for v in &mut out.data {
        *v /= &den;
    }
    Ok(out)
}

pub fn invariant_n_exact(p: &SeidelMatrix, r: &RingMatrix) -> Result<BigRational> {
    let qn = qn_matrix(p, r)?;
    let inv = shifted_inverse(r, 1, 2)?;
    Ok(qn.trace_product(&inv))
}

/// `tr[Qn(P, R) (I/2 - R)^{-1}]`.
pub fn invariant_n(p: &SeidelMatrix, r: &RingMatrix) -> Result<f64> {
    invariant_n_exact(p, r).map(|v| ratio_to_f64(&v))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntegerMatrix) -> BigInt {
    let n = m.order();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.rows().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `det(P)` as a machine integer; Seidel determinants of the orders used
/// here are far below `i64::MAX`.
pub fn det_i64(m: &IntegerMatrix) -> i64 {
    match det_i128(m) {
        Some(d) => i64::try_from(d).expect("determinant exceeds i64"),
        None => det_exact(m).to_i64().expect("determinant exceeds i64"),
    }
}

/// Bareiss in machine integers; `None` on overflow.
fn det_i128(m: &IntegerMatrix) -> Option<i128> {
    let n = m.order();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.rows().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let r = (k + 1..n).find(|&r| a[r][k] != 0)?;
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Coefficients of `det(x I - M)`, lowest degree first; the last entry is 1.
///
/// Faddeev-LeVerrier recursion; every division by `k` is exact over the
/// integers.
pub fn char_poly(m: &IntegerMatrix) -> Vec<BigInt> {
    let n = m.order();
    let a: Vec<Vec<BigInt>> = m.rows().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // mk = A * M_{k-1} + c_{n-k+1} I, with M_0 = 0
    let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        // c_{n-k} = -tr(A M_k) / k
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !next[l][i].is_zero() {
                    tr += &a[i][l] * &next[l][i];
                }
            }
        }
        coeffs[n - k] = -tr / BigInt::from(k as u64);
        mk = next;
    }
    coeffs
}

/// Whether `P^2 = (N - 1) I`.
pub fn is_extreme(p: &SeidelMatrix) -> bool {
    let n = p.order();
    let sq = p.mul(p).expect("square");
    sq == IntegerMatrix::identity(n).scaled(n as i64 - 1)
}

/// Maximum number of rings that can encage one line of an `n`-cross.
pub fn max_rings(n: usize) -> usize {
    assert!(n >= 3, "max_rings needs n >= 3");
    if n.is_multiple_of(2) {
        (n - 2) * (n - 1) * n / 24
    } else {
        (n - 3) * (n * n - 1) / 24
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    EqualRound,
    FreeRound,
    EqualElliptic,
    FreeElliptic,
}

impl Profile {
    /// `(parameters per cylinder, shared parameters)`.
    pub fn parameter_counts(self) -> (i64, i64) {
        match self {
            Profile::EqualRound => (4, 1),
            Profile::FreeRound => (5, 0),
            Profile::EqualElliptic => (5, 1),
            Profile::FreeElliptic => (7, 0),
        }
    }

    pub fn is_round(self) -> bool {
        matches!(self, Profile::EqualRound | Profile::FreeRound)
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "equal_round" => Ok(Profile::EqualRound),
            "free_round" => Ok(Profile::FreeRound),
            "equal_elliptic" => Ok(Profile::EqualElliptic),
            "free_elliptic" => Ok(Profile::FreeElliptic),
            other => Err(Error::Parse(format!("unknown profile `{other}`"))),
        }
    }
}

/// Free parameters minus pairwise contacts minus the six rigid motions.
pub fn dof(n: usize, profile: Profile) -> i64 {
    let (per, shared) = profile.parameter_counts();
    let n = n as i64;
    per * n + shared - n * (n - 1) / 2 - 6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub det_p: i64,
    pub invariant: f64,
    pub invariant_mirror: f64,
    pub invariant_n: f64,
    pub invariant_n_mirror: f64,
    pub ring_count_per_line: Vec<u32>,
}

impl InvariantReport {
    pub fn compute(p: &SeidelMatrix, r: &RingMatrix) -> Result<Self> {
        check_orders(p, r)?;
        let inv1 = shifted_inverse(r, 1, 1)?;
        let inv_half = shifted_inverse(r, 1, 2)?;
        let mirror = p.mirrored();
        let q = |m: &SeidelMatrix| ratio_to_f64(&RationalMatrix::from_integer(&q_matrix(m)).trace_product(&inv1));
        let qn = |m: &SeidelMatrix| -> Result<f64> { Ok(ratio_to_f64(&qn_matrix(m, r)?.trace_product(&inv_half))) };
        Ok(Self {
            det_p: det_i64(p),
            invariant: q(p),
            invariant_mirror: q(&mirror),
            invariant_n: qn(p)?,
            invariant_n_mirror: qn(&mirror)?,
            ring_count_per_line: r.rings_per_line(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_seidel(n: usize, rng: &mut ChaCha8Rng) -> SeidelMatrix {
        SeidelMatrix::from_fn(n, |_, _| rng.random_bool(0.5))
    }

    /// Cofactor expansion along the first row; independent of Bareiss.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10_000 {
            let n = rng.random_range(1..=6);
            let m = IntegerMatrix::from_fn(n, |_, _| if rng.random_bool(0.5) { 1 } else { -1 });
            assert_eq!(det_exact(&m), BigInt::from(cofactor_det(&m.to_rows())));
            assert_eq!(det_i64(&m), cofactor_det(&m.to_rows()));
        }
        // zero pivots force row exchanges
        let m = IntegerMatrix::from_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]).unwrap();
        assert_eq!(det_exact(&m), BigInt::from(cofactor_det(&m.to_rows())));
    }

    #[test]
    fn det_complete_graph() {
        assert_eq!(det_exact(&SeidelMatrix::complete(5)), BigInt::from(4));
    }

    #[test]
    fn char_poly_small_cases() {
        assert_eq!(char_poly(&IntegerMatrix::zeros(2)), vec![BigInt::zero(), BigInt::zero(), BigInt::one()]);
        // J - I of order 3: (x - 2)(x + 1)^2 = x^3 - 3x - 2
        let c: Vec<i64> = char_poly(&SeidelMatrix::complete(3)).iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(c, vec![-2, -3, 0, 1]);
    }

    #[test]
    fn char_poly_constant_term_is_signed_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let n = rng.random_range(1..=9);
            let m = IntegerMatrix::from_fn(n, |_, _| rng.random_range(-3..=3));
            let c = char_poly(&m);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(c[0], BigInt::from(sign) * det_exact(&m));
            assert_eq!(c[n], BigInt::one());
        }
    }

    #[test]
    fn switch_row_positive_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = random_seidel(7, &mut rng);
        for i in 0..7 {
            let a = switch_row_positive(&p, i);
            for k in 0..7 {
                if k != i {
                    assert_eq!(a.get(i, k), 1);
                    assert_eq!(a.get(k, i), 1);
                }
            }
        }
        let k = SeidelMatrix::complete(6);
        assert_eq!(switch_row_positive(&k, 3), k);
    }

    #[test]
    fn q_matrix_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for n in 3..9 {
            let constant = {
                let p = random_seidel(n, &mut rng);
                let a = q_matrix(&p);
                let b = q_matrix(&p.mirrored());
                IntegerMatrix::from_fn(n, |i, j| a.get(i, j) + b.get(i, j))
            };
            for _ in 0..20 {
                let p = random_seidel(n, &mut rng);
                let q = q_matrix(&p);
                assert!(q.is_symmetric());
                for i in 0..n {
                    assert_eq!(q.get(i, i), n as i64 - 1);
                }
                let qm = q_matrix(&p.mirrored());
                assert_eq!(IntegerMatrix::from_fn(n, |i, j| q.get(i, j) + qm.get(i, j)), constant);
                // switching leaves Q unchanged
                let d: Vec<i64> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
                assert_eq!(q_matrix(&p.switched(&d)), q);
            }
        }
    }

    #[test]
    fn qn_of_zero_ring_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let p = random_seidel(6, &mut rng);
        let r = RingMatrix::new(IntegerMatrix::zeros(6)).unwrap();
        assert_eq!(qn_matrix(&p, &r).unwrap(), RationalMatrix::zeros(6));
        assert_eq!(invariant_n(&p, &r).unwrap(), 0.0);
    }

    #[test]
    fn qn_with_uniform_weights_is_scaled_sum_of_switchings() {
        let n = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let p = random_seidel(n, &mut rng);
        let mut sum = IntegerMatrix::zeros(n);
        for i in 0..n {
            let a = switch_row_positive(&p, i);
            sum = IntegerMatrix::from_fn(n, |x, y| sum.get(x, y) + a.get(x, y));
        }
        // every weight is 6 * 6
        let r = RingMatrix::new_unchecked(IntegerMatrix::from_fn(n, |i, j| if i == j { 0 } else { 3 }));
        let qn = qn_matrix(&p, &r).unwrap();
        for x in 0..n {
            for y in 0..n {
                let expected = BigRational::new(BigInt::from(36 * sum.get(x, y)), BigInt::from(729));
                assert_eq!(qn.get(x, y), &expected);
            }
        }
    }

    #[test]
    fn invariant_sums_depend_only_on_ring_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        // a fixed geometric ring matrix from a random 6-cross
        let cfg = crate::census::random_config(6, 5, 1.0).unwrap();
        let r = crate::topomatrix::ring_matrix(&cfg).unwrap();
        let base = random_seidel(6, &mut rng);
        let s0 = invariant(&base, &r).unwrap() + invariant(&base.mirrored(), &r).unwrap();
        let sn0 = invariant_n(&base, &r).unwrap() + invariant_n(&base.mirrored(), &r).unwrap();
        for _ in 0..100 {
            let p = random_seidel(6, &mut rng);
            let s = invariant(&p, &r).unwrap() + invariant(&p.mirrored(), &r).unwrap();
            let sn = invariant_n(&p, &r).unwrap() + invariant_n(&p.mirrored(), &r).unwrap();
            assert!((s - s0).abs() < 1e-9);
            assert!((sn - sn0).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_ring_term_reported() {
        // I/2 - R is never singular for integer R, but I - R is when R has an
        // eigenvalue 1.
        let p = SeidelMatrix::complete(4);
        let r = RingMatrix::new_unchecked(
            IntegerMatrix::from_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]).unwrap(),
        );
        assert_eq!(invariant(&p, &r), Err(Error::SingularRingMatrix));
        assert!(invariant_n(&p, &r).is_ok());
    }

    #[test]
    fn order_mismatch_rejected() {
        let p = SeidelMatrix::complete(4);
        let r = RingMatrix::new(IntegerMatrix::zeros(5)).unwrap();
        assert_eq!(qn_matrix(&p, &r).unwrap_err(), Error::OrderMismatch(4, 5));
    }

    #[test]
    fn is_extreme_examples() {
        assert!(is_extreme(&SeidelMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap()));
        assert!(!is_extreme(&SeidelMatrix::complete(5)));
    }

    #[test]
    fn max_rings_examples() {
        assert_eq!(max_rings(3), 0);
        assert_eq!(max_rings(6), 5);
        assert_eq!(max_rings(7), 8);
        assert_eq!(max_rings(10), 30);
    }

    #[test]
    fn dof_examples() {
        assert_eq!(dof(10, Profile::EqualElliptic), 0);
        assert_eq!(dof(2, Profile::FreeRound), 3);
        assert_eq!(dof(9, Profile::FreeRound), 3);
        assert_eq!(dof(10, Profile::FreeRound), -1);
        assert_eq!(dof(10, Profile::FreeElliptic), 19);
    }

    #[test]
    fn rational_inverse_round_trip() {
        let m = IntegerMatrix::from_rows(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]]).unwrap();
        let r = RationalMatrix::from_integer(&m);
        let inv = r.inverse().unwrap();
        let tr = r.trace_product(&inv);
        assert_eq!(tr, BigRational::from_integer(BigInt::from(3)));
        assert!(RationalMatrix::from_integer(&IntegerMatrix::zeros(2)).inverse().is_none());
    }
}
