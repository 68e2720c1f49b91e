//! Integer matrices: Smith and Hermite normal forms, bounded preimages.

use super::linalg::QMatrix;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rectangular integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(ZMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix::from_rows(
            (0..self.rows).map(|i| self.row(i).iter().map(|v| BigRational::from(v.clone())).collect()).collect(),
        )
        .expect("rectangular")
    }

    pub fn determinant(&self) -> BigInt {
        self.to_q().determinant().to_integer()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Smith normal form: `(U, S, V)` with `U * M * V = S`, `U`, `V` unimodular,
/// `S` diagonal with nonnegative entries each dividing the next.
pub fn smith_normal_form(m: &ZMatrix) -> (ZMatrix, ZMatrix, ZMatrix) {
    let (r, c) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = ZMatrix::identity(r);
    // V is tracked transposed so column operations become row operations.
    let mut vt = ZMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| !s.get(i, j).is_zero())
                .min_by_key(|&(i, j)| s.get(i, j).magnitude().clone());
            let Some((pi, pj)) = pivot else {
                return finish(u, s, vt);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            vt.swap_rows(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                let q = s.get(i, t).div_floor(s.get(t, t));
                if !q.is_zero() {
                    s.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = s.get(t, j).div_floor(s.get(t, t));
                if !q.is_zero() {
                    s.add_col(j, t, &-&q);
                    vt.add_row(j, t, &-&q);
                }
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(s.get(t, t)));
            match bad {
                Some((i, _)) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, s, vt)
}

fn finish(u: ZMatrix, s: ZMatrix, vt: ZMatrix) -> (ZMatrix, ZMatrix, ZMatrix) {
    (u, s, vt.transpose())
}

/// Number of nonzero diagonal entries of a Smith form.
pub fn smith_rank(s: &ZMatrix) -> usize {
    (0..s.rows.min(s.cols)).take_while(|&i| !s.get(i, i).is_zero()).count()
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(m: &ZMatrix) -> ZMatrix {
    let mut a = m.clone();
    let (r, c) = (a.rows, a.cols);
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..c {
        if row == r {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (row..r).filter(|&i| !a.get(i, col).is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&i| a.get(i, col).magnitude().clone()).unwrap();
            a.swap_rows(row, best);
            let mut done = true;
            for i in row + 1..r {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = a.get(i, col).div_floor(a.get(row, col));
                a.add_row(i, row, &-q);
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(row, col).is_zero() {
            continue;
        }
        if a.get(row, col).is_negative() {
            a.negate_row(row);
        }
        for i in 0..row {
            let q = a.get(i, col).div_floor(a.get(row, col));
            if !q.is_zero() {
                a.add_row(i, row, &-q);
            }
        }
        pivots.push(col);
        row += 1;
    }
    ZMatrix::from_rows((0..row).map(|i| a.row(i).to_vec()).collect()).unwrap_or_else(|_| ZMatrix::zeros(0, c))
}

/// Reduce `v` against a Hermite basis to the canonical coset representative.
pub fn hermite_reduce(hnf: &ZMatrix, v: &[BigInt]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for i in 0..hnf.rows {
        let Some(p) = (0..hnf.cols).find(|&j| !hnf.get(i, j).is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(hnf.get(i, p));
        if !q.is_zero() {
            for j in 0..hnf.cols {
                out[j] -= &q * hnf.get(i, j);
            }
        }
    }
    out
}

/// Basis of the integer kernel `{x : M x = 0}` as columns of a returned matrix list.
pub fn integer_kernel(m: &ZMatrix) -> Vec<Vec<BigInt>> {
    let (_, s, v) = smith_normal_form(m);
    let r = smith_rank(&s);
    (r..m.cols).map(|j| v.column(j)).collect()
}

/// Integer solution of `phi * u = v` with SNF-bounded core coordinates,
/// shortened along the kernel with respect to the positive-definite Gram
/// matrix `norm`. Returns `None` when `v` is not in the integer image.
pub fn minimal_preimage(phi: &ZMatrix, v: &[BigInt], norm: &QMatrix) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), phi.rows);
    let (u, s, vmat) = smith_normal_form(phi);
    let w = u.mul_vec(v);
    let r = smith_rank(&s);
    if w[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); phi.cols];
    for i in 0..r {
        let (q, rem) = w[i].div_rem(s.get(i, i));
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let mut sol = vmat.mul_vec(&y);
    let kernel: Vec<Vec<BigInt>> = (r..phi.cols).map(|j| vmat.column(j)).collect();
    reduce_along(&mut sol, &kernel, norm);
    Some(sol)
}

fn quad(norm: &QMatrix, a: &[BigInt], b: &[BigInt]) -> BigRational {
    let av: Vec<BigRational> = a.iter().map(|x| BigRational::from(x.clone())).collect();
    let bv: Vec<BigRational> = b.iter().map(|x| BigRational::from(x.clone())).collect();
    norm.mul_vec(&bv).iter().zip(&av).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Greedy size reduction of `x` by integer combinations of `basis`.
fn reduce_along(x: &mut [BigInt], basis: &[Vec<BigInt>], norm: &QMatrix) {
    if basis.is_empty() {
        return;
    }
    for _ in 0..64 {
        let mut changed = false;
        for b in basis {
            let bb = quad(norm, b, b);
            if bb.is_zero() {
                continue;
            }
            let k = (quad(norm, x, b) / bb).round().to_integer();
            if !k.is_zero() {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= &k * bi;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ZMatrix {
        ZMatrix::from_i64_rows(rows).unwrap()
    }

    fn zv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &ZMatrix) -> ZMatrix {
        let (u, s, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), s);
        assert_eq!(u.determinant().abs(), BigInt::one());
        assert_eq!(v.determinant().abs(), BigInt::one());
        let k = s.rows().min(s.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    assert!(s.get(i, j).is_zero());
                }
            }
        }
        for i in 0..k {
            assert!(!s.get(i, i).is_negative());
            if i + 1 < k && !s.get(i + 1, i + 1).is_zero() {
                assert!(s.get(i + 1, i + 1).is_multiple_of(s.get(i, i)));
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&z(&[vec![2, 0], vec![0, 6]])), z(&[vec![2, 0], vec![0, 6]]));
        assert_eq!(check_snf(&z(&[vec![2, 4], vec![6, 8]])), z(&[vec![2, 0], vec![0, 4]]));
        let (u, s, v) = smith_normal_form(&ZMatrix::zeros(2, 3));
        assert_eq!(s, ZMatrix::zeros(2, 3));
        assert_eq!(u, ZMatrix::identity(2));
        assert_eq!(v, ZMatrix::identity(3));
    }

    #[test]
    fn snf_divisibility_fix() {
        let s = check_snf(&z(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s, z(&[vec![1, 0], vec![0, 6]]));
        check_snf(&z(&[vec![4, 6, 2], vec![10, -4, 8], vec![0, 0, 0]]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&z(&[vec![2, 4], vec![6, 8]]));
        let b = hermite_normal_form(&z(&[vec![6, 8], vec![4, 4], vec![2, 4]]));
        assert_eq!(a, b);
        assert_eq!(hermite_reduce(&a, &zv(&[5, 7])), hermite_reduce(&a, &zv(&[5 - 2, 7 - 4])));
    }

    #[test]
    fn preimage_examples() {
        let n = QMatrix::identity(2);
        let phi = z(&[vec![2, 0], vec![0, 0]]);
        let u = minimal_preimage(&phi, &zv(&[4, 0]), &n).unwrap();
        assert_eq!(phi.mul_vec(&u), zv(&[4, 0]));
        assert_eq!(u, zv(&[2, 0]));
        assert!(minimal_preimage(&phi, &zv(&[3, 0]), &n).is_none());
        let phi = z(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(minimal_preimage(&phi, &zv(&[0, 2]), &n).unwrap(), zv(&[-1, 1]));
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let m = z(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }
}
