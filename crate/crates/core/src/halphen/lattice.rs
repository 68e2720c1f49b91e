use crate::error::{Error, Result};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;

/// Rank of the lattice `Z^{1,9}`.
pub const RANK: usize = 10;

/// Class in `Z^{1,9}` with coordinates in the basis `e0, e1, ..., e9`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NSVector(pub [i64; RANK]);

/// Rational class, used for horosphere points and quotient coordinates.
pub type RationalClass = [BigRational; RANK];

impl fmt::Debug for NSVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl NSVector {
    pub fn zero() -> Self {
        NSVector([0; RANK])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0; RANK];
        v[i] = 1;
        NSVector(v)
    }

    /// The anticanonical class `3e0 - e1 - ... - e9`.
    pub fn xi() -> Self {
        let mut v = [-1; RANK];
        v[0] = 3;
        NSVector(v)
    }

    pub fn coords(&self) -> &[i64; RANK] {
        &self.0
    }

    pub fn checked_add(&self, other: &NSVector) -> Result<NSVector> {
        let mut out = [0; RANK];
        for i in 0..RANK {
            out[i] = self.0[i].checked_add(other.0[i]).ok_or_else(overflow)?;
        }
        Ok(NSVector(out))
    }

    pub fn checked_sub(&self, other: &NSVector) -> Result<NSVector> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    pub fn checked_scale(&self, k: i64) -> Result<NSVector> {
        let mut out = [0; RANK];
        for i in 0..RANK {
            out[i] = self.0[i].checked_mul(k).ok_or_else(overflow)?;
        }
        Ok(NSVector(out))
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn from_big(v: &[BigInt]) -> Result<NSVector> {
        if v.len() != RANK {
            return Err(Error::InvalidInput(format!("class needs {RANK} coordinates")));
        }
        let mut out = [0; RANK];
        for i in 0..RANK {
            out[i] = i64::try_from(&v[i]).map_err(|_| overflow())?;
        }
        Ok(NSVector(out))
    }

    pub fn to_rational(&self) -> RationalClass {
        std::array::from_fn(|i| BigRational::from(BigInt::from(self.0[i])))
    }

    pub fn to_json(&self) -> Value {
        json!(self.0.to_vec())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == RANK)
            .ok_or_else(|| Error::Schema(format!("class must be an array of {RANK} integers")))?;
        let mut out = [0; RANK];
        for (slot, x) in out.iter_mut().zip(arr) {
            *slot = x.as_i64().ok_or_else(|| Error::Schema("class entries must be integers".into()))?;
        }
        Ok(NSVector(out))
    }
}

pub(crate) fn overflow() -> Error {
    Error::InvalidInput("lattice coordinates overflow 64-bit integers".into())
}

/// `u0 v0 - u1 v1 - ... - u9 v9`.
///
/// Panics if the value does not fit in an `i64`.
pub fn intersection(u: &NSVector, v: &NSVector) -> i64 {
    let mut acc = u.0[0] as i128 * v.0[0] as i128;
    for i in 1..RANK {
        acc -= u.0[i] as i128 * v.0[i] as i128;
    }
    i64::try_from(acc).expect("intersection number overflows i64")
}

/// The intersection form on rational classes.
pub fn rational_intersection(u: &RationalClass, v: &RationalClass) -> BigRational {
    let mut acc = &u[0] * &v[0];
    for i in 1..RANK {
        acc -= &u[i] * &v[i];
    }
    acc
}

/// Gram matrix of the basis: `diag(1, -1, ..., -1)`.
pub fn gram_matrix() -> [[i64; RANK]; RANK] {
    let mut g = [[0; RANK]; RANK];
    g[0][0] = 1;
    for (i, row) in g.iter_mut().enumerate().skip(1) {
        row[i] = -1;
    }
    g
}

/// Integer `10 x 10` matrix acting on column coordinate vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct NSIsometry {
    pub matrix: [[i64; RANK]; RANK],
}

impl fmt::Debug for NSIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.matrix.iter()).finish()
    }
}

impl NSIsometry {
    pub fn identity() -> Self {
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        NSIsometry { matrix: m }
    }

    /// Matrix whose `j`-th column is `images[j]`.
    pub fn from_images(images: &[NSVector; RANK]) -> Self {
        let mut m = [[0; RANK]; RANK];
        for (j, img) in images.iter().enumerate() {
            for i in 0..RANK {
                m[i][j] = img.0[i];
            }
        }
        NSIsometry { matrix: m }
    }

    pub fn image(&self, j: usize) -> NSVector {
        NSVector(std::array::from_fn(|i| self.matrix[i][j]))
    }

    /// Isometry induced by the quadratic map based at the points `i, j, k`:
    /// `e0 -> 2e0 - ei - ej - ek` and `ei -> e0 - ej - ek`.
    pub fn quadratic(i: usize, j: usize, k: usize) -> Result<Self> {
        let idx = [i, j, k];
        if idx.iter().any(|&a| a == 0 || a >= RANK) || i == j || j == k || i == k {
            return Err(Error::InvalidInput("quadratic isometry needs three distinct indices in 1..=9".into()));
        }
        let mut images: [NSVector; RANK] = std::array::from_fn(NSVector::basis);
        let mut e0 = NSVector::basis(0).checked_scale(2)?;
        for &a in &idx {
            e0.0[a] = -1;
        }
        images[0] = e0;
        for &a in &idx {
            let mut v = NSVector::basis(0);
            for &b in &idx {
                if b != a {
                    v.0[b] = -1;
                }
            }
            images[a] = v;
        }
        Ok(Self::from_images(&images))
    }

    /// Isometry permuting `e1..e9`: `e_{i+1} -> e_{perm[i]+1}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        if perm.len() != RANK - 1 || perm.iter().copied().sorted().ne(0..RANK - 1) {
            return Err(Error::InvalidInput("expected a permutation of 0..9".into()));
        }
        let mut images: [NSVector; RANK] = std::array::from_fn(NSVector::basis);
        for (i, &p) in perm.iter().enumerate() {
            images[i + 1] = NSVector::basis(p + 1);
        }
        Ok(Self::from_images(&images))
    }

    /// Transvection along `xi` by a class `gamma` orthogonal to it:
    /// `a -> a + (a.xi) gamma - ((a.gamma) + (a.xi) gamma^2 / 2) xi`.
    pub fn translation(gamma: &NSVector) -> Result<Self> {
        let xi = NSVector::xi();
        if intersection(gamma, &xi) != 0 {
            return Err(Error::Precondition("translation vector must be orthogonal to xi".into()));
        }
        let g2 = intersection(gamma, gamma);
        // classes orthogonal to xi have even square
        let half = g2 / 2;
        let images: [NSVector; RANK] = std::array::from_fn(|j| {
            let a = NSVector::basis(j);
            let ax = intersection(&a, &xi);
            let coef = intersection(&a, gamma) + ax * half;
            NSVector(std::array::from_fn(|i| a.0[i] + ax * gamma.0[i] - coef * xi.0[i]))
        });
        Ok(Self::from_images(&images))
    }

    pub fn apply(&self, v: &NSVector) -> Result<NSVector> {
        let mut out = [0i64; RANK];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc: i128 = 0;
            for j in 0..RANK {
                acc += self.matrix[i][j] as i128 * v.0[j] as i128;
            }
            *slot = i64::try_from(acc).map_err(|_| overflow())?;
        }
        Ok(NSVector(out))
    }

    pub fn apply_rational(&self, v: &RationalClass) -> RationalClass {
        std::array::from_fn(|i| {
            (0..RANK)
                .fold(BigRational::zero(), |acc, j| acc + BigRational::from(BigInt::from(self.matrix[i][j])) * &v[j])
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &NSIsometry) -> Result<NSIsometry> {
        let mut cols = [NSVector::zero(); RANK];
        for (j, col) in cols.iter_mut().enumerate() {
            *col = self.apply(&other.image(j))?;
        }
        Ok(Self::from_images(&cols))
    }

    pub fn power(&self, k: u32) -> Result<NSIsometry> {
        let mut out = NSIsometry::identity();
        for _ in 0..k {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// `M^T J M = J`.
    pub fn preserves_form(&self) -> bool {
        (0..RANK).all(|a| {
            (a..RANK).all(|b| {
                let expected = if a != b {
                    0
                } else if a == 0 {
                    1
                } else {
                    -1
                };
                let (u, v) = (self.image(a), self.image(b));
                let mut acc = u.0[0] as i128 * v.0[0] as i128;
                for i in 1..RANK {
                    acc -= u.0[i] as i128 * v.0[i] as i128;
                }
                acc == expected
            })
        })
    }

    /// Inverse of an isometry, `J M^T J`.
    pub fn inverse(&self) -> Result<NSIsometry> {
        if !self.preserves_form() {
            return Err(Error::Precondition("matrix does not preserve the intersection form".into()));
        }
        let sign = |i: usize| if i == 0 { 1 } else { -1 };
        let mut m = [[0; RANK]; RANK];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = sign(i) * self.matrix[j][i] * sign(j);
            }
        }
        Ok(NSIsometry { matrix: m })
    }

    pub fn fixes(&self, v: &NSVector) -> bool {
        self.apply(v).map(|w| w == *v).unwrap_or(false)
    }

    pub fn to_json(&self) -> Value {
        json!(self.matrix.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v
            .as_array()
            .filter(|r| r.len() == RANK)
            .ok_or_else(|| Error::Schema(format!("isometry must be {RANK} rows")))?;
        let mut m = [[0; RANK]; RANK];
        for (slot, row) in m.iter_mut().zip(rows) {
            *slot = NSVector::from_json(row)?.0;
        }
        Ok(NSIsometry { matrix: m })
    }
}

/// Preserves the form and fixes `xi`.
pub fn is_parabolic_isometry(m: &NSIsometry) -> bool {
    m.preserves_form() && m.fixes(&NSVector::xi())
}

/// `e0 . M(e0)`.
pub fn isometry_degree(m: &NSIsometry) -> i64 {
    m.matrix[0][0]
}

/// `e0 + w - (w^2 / 6) xi` for `w` orthogonal to both `e0` and `xi`.
pub fn horosphere_point(w: &RationalClass) -> Result<RationalClass> {
    let xi = NSVector::xi().to_rational();
    if !w[0].is_zero() || !rational_intersection(w, &xi).is_zero() {
        return Err(Error::Precondition("horosphere parameter must be orthogonal to e0 and xi".into()));
    }
    let shift = rational_intersection(w, w) / BigRational::from(BigInt::from(6));
    Ok(std::array::from_fn(|i| {
        let base = if i == 0 { BigRational::from(BigInt::from(1)) } else { BigRational::zero() };
        base + &w[i] - &shift * &xi[i]
    }))
}

/// `-(w1 - w2)^2` for representatives with `w . xi = 3`.
pub fn q_norm(w1: &RationalClass, w2: &RationalClass) -> Result<BigRational> {
    let xi = NSVector::xi().to_rational();
    let three = BigRational::from(BigInt::from(3));
    if rational_intersection(w1, &xi) != three || rational_intersection(w2, &xi) != three {
        return Err(Error::Precondition("points of Q need representatives with w . xi = 3".into()));
    }
    let d: RationalClass = std::array::from_fn(|i| &w1[i] - &w2[i]);
    Ok(-rational_intersection(&d, &d))
}

/// Roots `c^2 = -2`, `c . xi = 0` with `c . e0 = c0`, in lexicographic order.
fn roots_of_degree(c0: i64) -> Vec<NSVector> {
    let mut out = Vec::new();
    let mut tail = [0i64; RANK - 1];
    fill_roots(&mut tail, 0, -3 * c0, c0 * c0 + 2, &mut |t| {
        let mut v = [0; RANK];
        v[0] = c0;
        v[1..].copy_from_slice(t);
        out.push(NSVector(v));
    });
    out.sort();
    out
}

/// Fill `tail[pos..]` with integers of sum `sum` and sum of squares `squares`.
fn fill_roots(tail: &mut [i64; RANK - 1], pos: usize, sum: i64, squares: i64, emit: &mut dyn FnMut(&[i64])) {
    let left = (RANK - 1 - pos) as i64;
    if left == 0 {
        if sum == 0 && squares == 0 {
            emit(tail);
        }
        return;
    }
    // Cauchy-Schwarz and parity prune
    if squares < 0 || sum * sum > left * squares || (squares - sum).rem_euclid(2) != 0 {
        return;
    }
    let r = (squares as f64).sqrt() as i64 + 1;
    for c in -r..=r {
        if c * c <= squares {
            tail[pos] = c;
            fill_roots(tail, pos + 1, sum - c, squares - c * c, emit);
        }
    }
    tail[pos] = 0;
}

/// Classes that may occur in `Irr(X)` for a Halphen surface of index `m`:
/// roots orthogonal to `xi` with `0 <= c . e0 <= degree_bound`, plus `xi` and `m xi`.
///
/// For fixed `c . e0 = d` the conditions read `sum c_i = -3d`, `sum c_i^2 = d^2 + 2`,
/// so the search is finite.
pub fn enumerate_irr_candidates(m: u32, degree_bound: u32) -> Result<Vec<NSVector>> {
    if m == 0 {
        return Err(Error::InvalidInput("index must be at least 1".into()));
    }
    let mut out: Vec<NSVector> = (0..=degree_bound as i64).flat_map(roots_of_degree).collect();
    out.push(NSVector::xi());
    if m > 1 {
        out.push(NSVector::xi().checked_scale(m as i64)?);
    }
    Ok(out)
}

/// One representative per class of roots modulo `xi`, with `c . e0` in `{0, 1, 2}`.
///
/// Adding `xi` raises `c . e0` by three, so every class has exactly one such representative.
pub fn roots_modulo_xi() -> Vec<NSVector> {
    (0..3).flat_map(roots_of_degree).collect()
}

/// Brute-force check of [`roots_modulo_xi`] over the box `[-2, 2]^9`.
pub fn roots_modulo_xi_by_box() -> Vec<NSVector> {
    let xi = NSVector::xi();
    let mut out = Vec::new();
    for c0 in 0..3i64 {
        for tail in (0..RANK - 1).map(|_| -2i64..=2).multi_cartesian_product() {
            let mut v = [0; RANK];
            v[0] = c0;
            v[1..].copy_from_slice(&tail);
            let c = NSVector(v);
            if intersection(&c, &c) == -2 && intersection(&c, &xi) == 0 {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// `3 (v - (v0 / 3) xi)`: integer coordinates of the image of `v` in
/// `xi^perp / xi`, modelled by vectors with vanishing `e0`-coordinate.
pub(crate) fn quotient_times_three(v: &NSVector) -> [i64; RANK] {
    let xi = NSVector::xi();
    std::array::from_fn(|i| 3 * v.0[i] - v.0[0] * xi.0[i])
}

/// `v - (v0 / 3) xi` for a rational class.
pub(crate) fn quotient_rational(v: &RationalClass) -> RationalClass {
    let xi = NSVector::xi().to_rational();
    let t = &v[0] / BigRational::from(BigInt::from(3));
    std::array::from_fn(|i| &v[i] - &t * &xi[i])
}

/// Squared norm on the quotient model: `sum_{i >= 1} w_i^2`.
pub(crate) fn quotient_norm(w: &RationalClass) -> BigRational {
    w.iter().skip(1).fold(BigRational::zero(), |acc, x| acc + x * x)
}
