//! Dense exact rational matrices.
//!
//! Everything here is exact: determinants use fraction-free (Bareiss)
//! elimination on the row-scaled integer matrix, inverses and solves use
//! Gauss–Jordan over `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational vector from integers.
pub fn rvec(values: &[i64]) -> Vec<BigRational> {
    values.iter().map(|&v| rational(v)).collect()
}

/// Row-major rational matrix with row and column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            data,
            row_labels: (0..rows).map(|i| i.to_string()).collect(),
            col_labels: (0..cols).map(|i| i.to_string()).collect(),
        })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flatten().map(|&v| rational(v)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigRational::zero(); rows * cols]).expect("shape")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if row_labels.len() != self.rows || col_labels.len() != self.cols {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        let unique = |v: &[String]| v.iter().enumerate().all(|(i, l)| !v[..i].contains(l));
        if !unique(&row_labels) || !unique(&col_labels) {
            return Err(Error::DimensionMismatch("duplicate labels".into()));
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", self.rows, self.cols)))
        }
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn mat_vec(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mat_mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = other.col_labels.clone();
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Result<RationalMatrix> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        acc.row_labels = self.row_labels.clone();
        acc.col_labels = self.col_labels.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mat_mul(&base)?;
            }
            base = base.mat_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction shapes".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> RationalMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Exact determinant.
    pub fn det(&self) -> Result<BigRational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        // Scale each row to integers, run Bareiss, then undo the scaling.
        let mut scale = BigInt::one();
        let mut a: Vec<BigInt> = Vec::with_capacity(n * n);
        for r in 0..n {
            let row = &self.data[r * n..(r + 1) * n];
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            a.extend(row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()));
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(BigRational::zero());
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        let d = a[n * n - 1].clone() * BigInt::from(sign);
        Ok(BigRational::new(d, scale))
    }

    /// Exact inverse; `NotInvertible` for singular matrices.
    pub fn invert(&self) -> Result<RationalMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::NotInvertible)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.eliminate(r, col, &f);
                inv.eliminate(r, col, &f);
            }
        }
        inv.row_labels = self.col_labels.clone();
        inv.col_labels = self.row_labels.clone();
        Ok(inv)
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[BigRational]) -> Result<Vec<BigRational>> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        self.invert()?.mat_vec(b)
    }

    /// A basis of the right null space, in reduced form.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            let pv = a.get(row, col).clone();
            a.scale_row(row, &pv);
            for r in 0..a.rows {
                if r != row && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.eliminate_with(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (0..a.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![BigRational::zero(); a.cols];
                v[free] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a.get(r, free).clone();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, divisor: &BigRational) {
        for c in 0..self.cols {
            let v = self.get(r, c) / divisor;
            self.set(r, c, v);
        }
    }

    /// row_r -= f · row_col (the pivot row has the same index as the column).
    fn eliminate(&mut self, r: usize, col: usize, f: &BigRational) {
        self.eliminate_with(r, col, f)
    }

    fn eliminate_with(&mut self, r: usize, pivot_row: usize, f: &BigRational) {
        for c in 0..self.cols {
            let v = self.get(r, c) - f * self.get(pivot_row, c);
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells
            .iter()
            .chain(&self.col_labels)
            .chain(&self.row_labels)
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        write!(f, "{:>width$}", "")?;
        for l in &self.col_labels {
            write!(f, " {l:>width$}")?;
        }
        writeln!(f)?;
        for r in 0..self.rows {
            write!(f, "{:>width$}", self.row_labels[r])?;
            for c in 0..self.cols {
                write!(f, " {:>width$}", cells[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A claimed exact eigenpair `M·v = λ·v`.
#[derive(Debug, Clone)]
pub struct EigenpairClaim {
    pub matrix: RationalMatrix,
    pub vector: Vec<BigRational>,
    pub value: BigRational,
}

impl EigenpairClaim {
    pub fn new(matrix: RationalMatrix, vector: Vec<BigRational>, value: BigRational) -> Self {
        EigenpairClaim { matrix, vector, value }
    }
}

/// True iff the claim holds exactly and the vector is non-zero.
pub fn eigencheck(claim: &EigenpairClaim) -> Result<bool> {
    claim.matrix.require_square()?;
    let image = claim.matrix.mat_vec(&claim.vector)?;
    let nonzero = claim.vector.iter().any(|x| !x.is_zero());
    Ok(nonzero && image.iter().zip(&claim.vector).all(|(mv, v)| *mv == &claim.value * v))
}

/// Clears a rational vector to the primitive integer vector with the same direction
/// and a positive first non-zero entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> RationalMatrix {
        RationalMatrix::from_integers(&[
            vec![0, 0, 1, 0],
            vec![1, 1, 0, 1],
            vec![1, 0, 1, 1],
            vec![0, 1, 0, 0],
        ])
        .unwrap()
    }

    #[test]
    fn determinant_examples() {
        let ones = RationalMatrix::from_integers(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.det().unwrap(), rational(0));
        assert_eq!(m2().det().unwrap(), rational(0));
        let a = RationalMatrix::from_integers(&[vec![0, 2, 1], vec![3, 1, 0], vec![1, 1, 1]]).unwrap();
        // 0*(1-0) - 2*(3-0) + 1*(3-1)
        assert_eq!(a.det().unwrap(), rational(-4));
        let h = RationalMatrix::new(2, 2, vec![ratio(1, 2), ratio(1, 3), ratio(1, 3), ratio(1, 4)]).unwrap();
        assert_eq!(h.det().unwrap(), ratio(1, 72));
    }

    #[test]
    fn inverse_examples() {
        let l = RationalMatrix::from_integers(&[vec![1, 1], vec![0, 1]]).unwrap();
        let inv = l.invert().unwrap();
        assert_eq!(inv, RationalMatrix::from_integers(&[vec![1, -1], vec![0, 1]]).unwrap());
        assert_eq!(inv.mat_mul(&l).unwrap(), RationalMatrix::identity(2));
        let ones = RationalMatrix::from_integers(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.invert(), Err(Error::NotInvertible));
        let rect = RationalMatrix::from_integers(&[vec![1, 1, 0]]).unwrap();
        assert!(matches!(rect.det(), Err(Error::DimensionMismatch(_))));
        assert_eq!(rect.solve(&rvec(&[1])), Err(Error::NotInvertible));
    }

    #[test]
    fn paper_eigenpairs_of_block_matrix() {
        let cases = [(vec![1, 2, 2, 1], 2), (vec![1, -1, -1, 1], -1), (vec![1, 0, 0, -1], 0), (vec![1, -1, 1, -1], 1)];
        for (v, l) in cases {
            let claim = EigenpairClaim::new(m2(), rvec(&v), rational(l));
            assert!(eigencheck(&claim).unwrap(), "{v:?} / {l}");
        }
        let claim = EigenpairClaim::new(m2(), rvec(&[1, 0, 0, 0]), rational(2));
        assert!(!eigencheck(&claim).unwrap());
        let zero = EigenpairClaim::new(m2(), rvec(&[0, 0, 0, 0]), rational(5));
        assert!(!eigencheck(&zero).unwrap());
        let bad = EigenpairClaim::new(m2(), rvec(&[1, 0]), rational(0));
        assert!(eigencheck(&bad).is_err());
    }

    #[test]
    fn products() {
        let x = rvec(&[3, -1, 4]);
        assert_eq!(RationalMatrix::identity(3).mat_vec(&x).unwrap(), x);
        assert_eq!(m2().mat_vec(&rvec(&[1, 0, 0, -1])).unwrap(), rvec(&[0, 0, 0, 0]));
        // M² ℓ₂(00) + ℓ₂(11) = ℓ₂(110011)
        let sq = m2().pow(2).unwrap();
        let got: Vec<_> = sq
            .mat_vec(&rvec(&[1, 0, 0, 0]))
            .unwrap()
            .into_iter()
            .zip(rvec(&[0, 0, 0, 1]))
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(got, rvec(&[1, 1, 1, 2]));
        assert!(m2().mat_mul(&RationalMatrix::identity(3)).is_err());
    }

    #[test]
    fn nullspace_of_shifted_block_matrix() {
        let shifted = m2().sub(&RationalMatrix::identity(4).scale(&rational(2))).unwrap();
        let basis = shifted.nullspace();
        assert_eq!(basis.len(), 1);
        assert_eq!(primitive_integer_vector(&basis[0]), [1, 2, 2, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn labelled_display() {
        let m = RationalMatrix::from_integers(&[vec![1, 0], vec![0, 1]])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into()], vec!["a".into(), "b".into()])
            .unwrap();
        assert_eq!(m.to_string(), "  a b\na 1 0\nb 0 1\n");
        assert!(RationalMatrix::identity(2).with_labels(vec!["a".into(), "a".into()], vec!["x".into(), "y".into()]).is_err());
    }
}
