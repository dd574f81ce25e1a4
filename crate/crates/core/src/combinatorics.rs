//! Exact binomials and the straightening matrices.
//!
//! Matrices are indexed 1-based through [`ExactMatrix::get`] so that the
//! entry formulas read the same as their usual `ij` statements.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Generalized binomial coefficient.
///
/// Zero for `k < 0`, otherwise the falling factorial `m (m-1) ... (m-k+1) / k!`,
/// which is an integer for every integer `m`, including negative ones.
pub fn gen_binom(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    // Product of k consecutive integers divided incrementally stays integral:
    // after step i the accumulator is binom(m, i).
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(m - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Same as [`gen_binom`] lifted to a rational.
pub fn binom_q(m: i64, k: i64) -> Rational {
    rational::from_bigint(gen_binom(m, k))
}

/// Dense exact matrix with immutable dimensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// Builds a matrix from a 1-based entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 1..=rows {
            for j in 1..=cols {
                m.entries[(i - 1) * cols + (j - 1)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("matrix rows must be non-empty and of equal length"));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
        .expect("well-formed literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[(i - 1) * self.cols..i * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (1..=self.cols).fold(Rational::zero(), |acc, t| acc + self.get(i, t) * rhs.get(t, j))
        }))
    }

    /// Matrix-vector product `A x`.
    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::domain("vector length does not match column count"));
        }
        Ok((1..=self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Row-vector product `y^T A`.
    pub fn vec_mul(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        self.transpose().mul_vec(y)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (1..=self.rows).all(|i| (1..i.min(self.cols + 1)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (1..=self.rows).all(|i| (i + 1..=self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (1..=n).map(|i| self.row(i).to_vec()).collect();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
        Ok(det)
    }

    /// Solves `A x = b` exactly; `None` when `A` is singular.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::domain("solve needs a square system"));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (1..=n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i - 1].clone());
                row
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(None);
            };
            a.swap(p, col);
            let pivot = a[col][col].clone();
            for c in col..=n {
                a[col][c] /= &pivot;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
        Ok(Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect()))
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Result<Option<ExactMatrix>> {
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 1..=n {
            let e: Vec<Rational> = (1..=n)
                .map(|i| if i == j { Rational::one() } else { Rational::zero() })
                .collect();
            match self.solve(&e)? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(Self::from_fn(n, n, |i, j| cols[j - 1][i - 1].clone())))
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (1..=self.rows)
            .map(|i| self.row(i).iter().map(rational::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<String>> = (1..=self.rows)
            .map(|i| self.row(i).iter().map(rational::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("ExactMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(d)?;
        let rows: Vec<Vec<Rational>> = raw
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| rational::parse(s).ok_or_else(|| format!("invalid rational {s:?}")))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(serde::de::Error::custom)?;
        let m = ExactMatrix::from_rows(rows).map_err(serde::de::Error::custom)?;
        if m.rows != raw.rows || m.cols != raw.cols {
            return Err(serde::de::Error::custom("declared dimensions do not match entries"));
        }
        Ok(m)
    }
}

/// Upper triangular Pascal matrix, entry `(i, j) = binom(j-1, i-1)`.
pub fn pascal_matrix(n: usize) -> ExactMatrix {
    let n = n.max(1);
    ExactMatrix::from_fn(n, n, |i, j| binom_q(j as i64 - 1, i as i64 - 1))
}

/// Inverse Pascal matrix, entry `(i, j) = (-1)^{i+j} binom(j-1, i-1)`.
pub fn pascal_inverse(n: usize) -> ExactMatrix {
    let n = n.max(1);
    ExactMatrix::from_fn(n, n, |i, j| {
        rational::sign((i + j) as i64) * binom_q(j as i64 - 1, i as i64 - 1)
    })
}

/// Straightening matrix `S_N(m)`, entry `(i, j) = binom(m-(j-1), m-(i-1)-(j-1))`.
pub fn s_matrix(n: usize, m: i64) -> ExactMatrix {
    let n = n.max(1);
    ExactMatrix::from_fn(n, n, |i, j| {
        let (i, j) = (i as i64 - 1, j as i64 - 1);
        binom_q(m - j, m - i - j)
    })
}

/// Lower triangular factor `L_N(m)` with `L_N(m) S_N(m) = P_N`,
/// entry `(i, j) = (-1)^{j-1} binom(m-(j-1), m-(i-1))`.
pub fn l_matrix(n: usize, m: i64) -> ExactMatrix {
    let n = n.max(1);
    ExactMatrix::from_fn(n, n, |i, j| {
        let (i, j) = (i as i64 - 1, j as i64 - 1);
        if j > i {
            // binom(m - j, m - i) already vanishes here whenever m >= N-1
            return Rational::zero();
        }
        rational::sign(j) * binom_q(m - j, m - i)
    })
}

/// `(-1)^{N(N-1)/2}`, the determinant of `S_N(m)` for `m >= N-1`.
pub fn det_s_closed_form(n: usize) -> Rational {
    let n = n as i64;
    rational::sign(n * (n - 1) / 2)
}

/// Exact determinant of `S_N(m)`, checked against the closed form.
pub fn det_s(n: usize, m: i64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("N must be positive"));
    }
    if m < n as i64 - 1 {
        return Err(Error::domain(format!("det_s requires m >= N-1 (N={n}, m={m})")));
    }
    let det = s_matrix(n, m).determinant()?;
    let expected = det_s_closed_form(n);
    if det != expected {
        return Err(Error::assertion(format!(
            "det S_{n}({m}) = {} but the closed form gives {}",
            rational::to_string(&det),
            rational::to_string(&expected)
        )));
    }
    Ok(det)
}

/// Whether `(N, n)` lies in the range where the difference-N identity is
/// built: `n + k - 1 < 0` for even `N`, `n + k < 0` for odd `N`, `k = N/2`.
pub fn coeffs_valid(n_diff: usize, n: i64) -> bool {
    if n_diff == 0 {
        return false;
    }
    let k = (n_diff / 2) as i64;
    if n_diff.is_multiple_of(2) {
        n + k - 1 < 0
    } else {
        n + k < 0
    }
}

/// Largest admissible centre `n` for a given difference.
pub fn coeffs_upper_bound(n_diff: usize) -> i64 {
    let k = (n_diff / 2) as i64;
    if n_diff.is_multiple_of(2) {
        -k
    } else {
        -k - 1
    }
}

/// Straightening coefficients `c_N(r, n)`, `r = 0..N-1`.
///
/// `values` is the first row of `S_N(-n+k-1)^{-1}`, i.e. the unique solution of
/// `values^T · S_N(-n+k-1) = e_1^T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffVector {
    #[serde(rename = "N")]
    pub n_diff: usize,
    pub n: i64,
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    pub values: Vec<Rational>,
}

impl CoeffVector {
    /// `c_N(r, n)`.
    pub fn get(&self, r: usize) -> &Rational {
        &self.values[r]
    }

    /// The `m` at which the coefficient matrix is evaluated, `-n + k - 1`.
    pub fn matrix_parameter(&self) -> i64 {
        -self.n + (self.n_diff / 2) as i64 - 1
    }
}

pub(crate) fn ser_rationals<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::to_string))
}

pub(crate) fn de_rationals<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<Rational>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    raw.iter()
        .map(|s| rational::parse(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
        .collect()
}

/// Closed form `c_N(r,n) = -sum_{t=1}^N (-1)^{r+t} binom(-n+k-1-r, -n+k-1-(t-1))`.
pub fn straightening_coeffs_closed_form(n_diff: usize, n: i64) -> Vec<Rational> {
    let m = -n + (n_diff / 2) as i64 - 1;
    (0..n_diff as i64)
        .map(|r| {
            let s: Rational = (1..=n_diff as i64)
                .map(|t| rational::sign(r + t) * binom_q(m - r, m - (t - 1)))
                .sum();
            -s
        })
        .collect()
}

/// Straightening coefficients from the closed form, cross-checked against an
/// exact solve of the linear system.
pub fn straightening_coeffs(n_diff: usize, n: i64) -> Result<CoeffVector> {
    if !coeffs_valid(n_diff, n) {
        return Err(Error::domain(format!(
            "straightening coefficients need n <= {} for N = {n_diff} (got n = {n})",
            coeffs_upper_bound(n_diff)
        )));
    }
    let closed = straightening_coeffs_closed_form(n_diff, n);
    let m = -n + (n_diff / 2) as i64 - 1;
    let s = s_matrix(n_diff, m);
    let mut e1 = vec![Rational::zero(); n_diff];
    e1[0] = Rational::one();
    let solved = s
        .transpose()
        .solve(&e1)?
        .ok_or_else(|| Error::assertion(format!("S_{n_diff}({m}) is singular")))?;
    if solved != closed {
        return Err(Error::assertion(format!(
            "closed form {:?} disagrees with elimination {:?} at N={n_diff}, n={n}",
            closed.iter().map(rational::to_string).collect::<Vec<_>>(),
            solved.iter().map(rational::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(CoeffVector {
        n_diff,
        n,
        values: closed,
    })
}

/// Evaluates both sides of the alternating binomial identity behind the row
/// reduction of `S_N(m)` to `P_N`:
/// `sum_{i=1}^k (-1)^{i-1} binom(m-(i-1), m-(k-1)) binom(m-(j-1), m-(i-1)-(j-1)) = binom(j-1, k-1)`.
pub fn alternating_binomial_sides(m: i64, k: i64, j: i64) -> Result<(BigInt, BigInt)> {
    if k < 1 || j < 1 || m < 0 {
        return Err(Error::domain("need m >= 0, k >= 1, j >= 1"));
    }
    if m < k - 1 {
        return Err(Error::domain(format!("need m >= k-1 (m={m}, k={k})")));
    }
    // columns of S_N(m) only run up to N <= m+1
    if j > m + 1 {
        return Err(Error::domain(format!("need j <= m+1 (m={m}, j={j})")));
    }
    let lhs: BigInt = (1..=k)
        .map(|i| {
            let t = gen_binom(m - (i - 1), m - (k - 1)) * gen_binom(m - (j - 1), m - (i - 1) - (j - 1));
            if (i - 1) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum();
    Ok((lhs, gen_binom(j - 1, k - 1)))
}

pub fn check_alternating_binomial(m: i64, k: i64, j: i64) -> Result<bool> {
    let (lhs, rhs) = alternating_binomial_sides(m, k, j)?;
    Ok(lhs == rhs)
}

/// Whether every entry is an integer (true for all of `P_N`, `L_N`, `S_N`).
pub fn is_integral(m: &ExactMatrix) -> bool {
    (1..=m.rows()).all(|i| m.row(i).iter().all(|x| x.is_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binom(5, 2), BigInt::from(10));
        assert_eq!(gen_binom(-7, 0), BigInt::one());
        assert_eq!(gen_binom(-1, 2), BigInt::one());
        assert_eq!(gen_binom(3, -1), BigInt::zero());
        assert_eq!(gen_binom(3, 5), BigInt::zero());
        assert_eq!(gen_binom(-2, 3), BigInt::from(-4));
    }

    #[test]
    fn pascal_small() {
        assert_eq!(pascal_matrix(1), ExactMatrix::from_i64(&[&[1]]));
        assert_eq!(
            pascal_matrix(3),
            ExactMatrix::from_i64(&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]])
        );
        let inv = pascal_matrix(3).inverse().unwrap().unwrap();
        assert_eq!(inv, pascal_inverse(3));
        assert_eq!(inv, ExactMatrix::from_i64(&[&[1, -1, 1], &[0, 1, -2], &[0, 0, 1]]));
    }

    #[test]
    fn s_matrix_examples() {
        assert_eq!(s_matrix(2, 5), ExactMatrix::from_i64(&[&[1, 1], &[5, 4]]));
        assert_eq!(
            s_matrix(3, 2),
            ExactMatrix::from_i64(&[&[1, 1, 1], &[2, 1, 0], &[1, 0, 0]])
        );
        for m in [0, 3, 9] {
            assert_eq!(s_matrix(1, m), ExactMatrix::from_i64(&[&[1]]));
        }
    }

    #[test]
    fn l_matrix_examples() {
        // (2,2) entry is (-1)^1 * binom(4, 4) = -1
        assert_eq!(l_matrix(2, 5), ExactMatrix::from_i64(&[&[1, 0], &[5, -1]]));
        let l = l_matrix(5, 7);
        for j in 1..=5 {
            assert_eq!(*l.get(j, j), rational::sign(j as i64 - 1));
        }
        assert_eq!(l_matrix(3, 2).mul(&s_matrix(3, 2)).unwrap(), pascal_matrix(3));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_s(2, 5).unwrap(), int(-1));
        assert_eq!(det_s(3, 2).unwrap(), int(-1));
        assert_eq!(det_s(1, 0).unwrap(), int(1));
        assert!(matches!(det_s(3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn determinant_of_general_matrix() {
        let m = ExactMatrix::from_i64(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        // cofactor expansion along row 2: -3 * (2*1 - 1*1) = -3
        assert_eq!(m.determinant().unwrap(), int(-3));
        let singular = ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant().unwrap(), int(0));
        assert_eq!(singular.solve(&q(&[1, 1])).unwrap(), None);
    }

    #[test]
    fn coefficient_worked_examples() {
        for n in -12..=-1 {
            let c = straightening_coeffs(2, n).unwrap();
            assert_eq!(c.values, vec![int(n + 1), int(1)]);
        }
        for n in -12..=-2 {
            let c = straightening_coeffs(3, n).unwrap();
            assert_eq!(
                c.values,
                vec![ratio(n * n + 3 * n + 2, 2), int(n + 2), int(1)]
            );
        }
        for n in -12..=-1 {
            assert_eq!(straightening_coeffs(1, n).unwrap().values, vec![int(1)]);
        }
    }

    #[test]
    fn coefficients_reject_out_of_range() {
        assert!(matches!(straightening_coeffs(2, 0), Err(Error::Domain(_))));
        assert!(matches!(straightening_coeffs(3, -1), Err(Error::Domain(_))));
        assert!(matches!(straightening_coeffs(4, -1), Err(Error::Domain(_))));
        assert!(matches!(straightening_coeffs(1, 0), Err(Error::Domain(_))));
        assert!(straightening_coeffs(4, -2).is_ok());
    }

    #[test]
    fn coefficients_are_first_row_of_inverse() {
        let c = straightening_coeffs(4, -5).unwrap();
        let s = s_matrix(4, c.matrix_parameter());
        let e1 = q(&[1, 0, 0, 0]);
        assert_eq!(s.vec_mul(&c.values).unwrap(), e1);
        let inv = s.inverse().unwrap().unwrap();
        assert_eq!(inv.row(1), &c.values[..]);
        assert_eq!(*c.values.last().unwrap(), int(1));
    }

    #[test]
    fn alternating_binomial_examples() {
        for m in 0..6 {
            for j in 1..=m + 1 {
                assert!(check_alternating_binomial(m, 1, j).unwrap());
            }
        }
        assert_eq!(alternating_binomial_sides(3, 2, 1).unwrap(), (BigInt::zero(), BigInt::zero()));
        assert_eq!(alternating_binomial_sides(4, 3, 3).unwrap(), (BigInt::one(), BigInt::one()));
        assert!(matches!(check_alternating_binomial(1, 3, 1), Err(Error::Domain(_))));
        assert!(matches!(check_alternating_binomial(2, 1, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn matrix_json_shape() {
        let json = serde_json::to_string(&s_matrix(2, 5)).unwrap();
        assert_eq!(json, r#"{"rows":2,"cols":2,"entries":[["1","1"],["5","4"]]}"#);
        let back: ExactMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s_matrix(2, 5));
    }
}
