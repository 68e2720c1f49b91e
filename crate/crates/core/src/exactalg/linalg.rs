//! Dense linear algebra over `Q`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rectangular matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(QMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigRational::from(BigInt::from(v))).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let echelon = fraction_free_echelon(self);
        let r = echelon.len();
        let mut m = QMatrix::zeros(r, self.cols);
        let mut pivots = Vec::with_capacity(r);
        for (i, row) in echelon.iter().enumerate() {
            let p = row.iter().position(|v| !v.is_zero()).expect("echelon rows are nonzero");
            pivots.push(p);
            let lead = BigRational::from(row[p].clone());
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from(v.clone()) / &lead);
            }
        }
        for i in (0..r).rev() {
            let p = pivots[i];
            for k in 0..i {
                let f = m.get(k, p).clone();
                if f.is_zero() {
                    continue;
                }
                for j in p..self.cols {
                    let v = m.get(k, j) - &f * m.get(i, j);
                    m.set(k, j, v);
                }
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        fraction_free_echelon(self).len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        kernel_basis(self)
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, BigRational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Solve `self * x = b`; returns one solution or `None`.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                for j in 0..n {
                    let t = m.get(p, j).clone();
                    m.set(p, j, m.get(c, j).clone());
                    m.set(c, j, t);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for r in c + 1..n {
                let f = m.get(r, c) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(r, j) - &f * m.get(c, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }
}

/// Basis of the right kernel of `m` over `Q`; empty when `m` is injective.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<BigRational>> {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); m.cols];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    if ints.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// Row echelon form by integer elimination with row contents removed; zero rows dropped.
fn fraction_free_echelon(m: &QMatrix) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let v = primitive_integer_vector(m.row(i));
            if v.iter().all(Zero::is_zero) {
                Vec::new()
            } else {
                v
            }
        })
        .filter(|r| !r.is_empty())
        .collect();
    let cols = m.cols;
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..cols {
        let Some(pi) = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r[c].is_zero())
            .min_by_key(|(_, r)| r.iter().map(|v| v.bits()).sum::<u64>())
            .map(|(i, _)| i)
        else {
            continue;
        };
        let pivot = rows.swap_remove(pi);
        let pv = pivot[c].clone();
        for r in rows.iter_mut() {
            if r[c].is_zero() {
                continue;
            }
            let f = r[c].clone();
            let g = pv.gcd(&f);
            let (a, b) = (&pv / &g, &f / &g);
            for j in c..cols {
                r[j] = &r[j] * &a - &pivot[j] * &b;
            }
            let rg = r.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !rg.is_zero() && !rg.is_one() {
                for v in r.iter_mut() {
                    *v /= &rg;
                }
            }
        }
        rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        out.push(pivot);
        if rows.is_empty() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn identity_kernel_is_empty() {
        assert!(kernel_basis(&QMatrix::identity(3)).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(kernel_basis(&QMatrix::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = QMatrix::from_int_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = QMatrix::from_int_rows(&[vec![2, 1], vec![7, 4]]).unwrap();
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        let s = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(s.inverse().is_none());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_int_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(m.solve(&[q(3), q(1)]).unwrap(), vec![q(2), q(1)]);
        let s = QMatrix::from_int_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(s.solve(&[q(1), q(3)]).is_none());
    }
}
