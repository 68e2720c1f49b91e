use super::lattice::{
    intersection, is_parabolic_isometry, isometry_degree, quotient_norm, quotient_rational, NSIsometry, NSVector,
    RationalClass, RANK,
};
use crate::error::{Error, Result};
use crate::exactalg::{hermite_normal_form, hermite_reduce, QMatrix, ZMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Bound on `|Irr(X)|`: at most 16 fiber components plus `xi` and `m xi`.
pub const DEFAULT_IRR_BOUND: usize = 18;

/// Lattice data of a Halphen surface of index `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalphenModel {
    index: u32,
    irr: Vec<NSVector>,
    r_basis: Vec<NSVector>,
    r_hermite: ZMatrix,
}

impl HalphenModel {
    pub fn new(index: u32, irr: Vec<NSVector>, r_basis: Vec<NSVector>) -> Result<Self> {
        Self::with_bound(index, irr, r_basis, DEFAULT_IRR_BOUND)
    }

    pub fn with_bound(index: u32, mut irr: Vec<NSVector>, r_basis: Vec<NSVector>, irr_bound: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidInput("index must be at least 1".into()));
        }
        let xi = NSVector::xi();
        let m_xi = xi.checked_scale(index as i64)?;
        irr.sort();
        irr.dedup();
        if irr.len() > irr_bound {
            return Err(Error::InvalidInput(format!("{} irreducible classes exceed the bound {irr_bound}", irr.len())));
        }
        for c in &irr {
            if intersection(c, &xi) != 0 {
                return Err(Error::InvalidInput(format!("class {c:?} is not orthogonal to xi")));
            }
            let sq = intersection(c, c);
            let fiber = *c == xi || *c == m_xi;
            if fiber != (sq == 0) || !(sq == 0 || sq == -2) {
                return Err(Error::InvalidInput(format!("class {c:?} has square {sq}")));
            }
            if !fiber && !(0..=3 * index as i64).contains(&c.0[0]) {
                return Err(Error::InvalidInput(format!("class {c:?} has degree outside [0, 3m]")));
            }
        }
        if r_basis.iter().any(|r| intersection(r, &xi) != 0) {
            return Err(Error::InvalidInput("R(X) must lie in the orthogonal of xi".into()));
        }
        let rows: Vec<Vec<BigInt>> = r_basis.iter().map(NSVector::to_big).collect();
        let r_hermite =
            if rows.is_empty() { ZMatrix::zeros(0, RANK) } else { hermite_normal_form(&ZMatrix::from_rows(rows)?) };
        if hermite_reduce(&r_hermite, &xi.to_big()).iter().any(|x| !x.is_zero()) {
            return Err(Error::InvalidInput("xi must lie in R(X)".into()));
        }
        Ok(HalphenModel { index, irr, r_basis, r_hermite })
    }

    /// All fibers irreducible: `Irr = {xi, m xi}` and `R = Z xi`.
    pub fn trivial(index: u32) -> Result<Self> {
        let xi = NSVector::xi();
        let irr = vec![xi, xi.checked_scale(index.max(1) as i64)?];
        Self::new(index, irr, vec![xi])
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn irr(&self) -> &[NSVector] {
        &self.irr
    }

    pub fn r_basis(&self) -> &[NSVector] {
        &self.r_basis
    }

    pub fn contains_in_r(&self, v: &NSVector) -> bool {
        hermite_reduce(&self.r_hermite, &v.to_big()).iter().all(Zero::is_zero)
    }

    /// Canonical representative of `v` modulo `R(X)`.
    pub fn reduce_mod_r(&self, v: &NSVector) -> Result<NSVector> {
        NSVector::from_big(&hermite_reduce(&self.r_hermite, &v.to_big()))
    }

    /// `M` fixes `xi`, preserves the form, maps `R(X)` into itself and permutes `Irr`.
    pub fn preserved_by(&self, m: &NSIsometry) -> bool {
        if !is_parabolic_isometry(m) {
            return false;
        }
        let r_ok = self.r_basis.iter().all(|r| m.apply(r).map(|v| self.contains_in_r(&v)).unwrap_or(false));
        let irr: BTreeSet<NSVector> = self.irr.iter().copied().collect();
        let mapped: Option<BTreeSet<NSVector>> = self.irr.iter().map(|c| m.apply(c).ok()).collect();
        r_ok && mapped == Some(irr)
    }

    /// Basis over `Z` of the classes orthogonal to `xi` and to `R(X)`.
    pub fn translation_lattice(&self) -> Vec<NSVector> {
        let sign = |i: usize| if i == 0 { 1 } else { -1 };
        let mut rows: Vec<Vec<BigInt>> = vec![(0..RANK).map(|i| BigInt::from(sign(i) * NSVector::xi().0[i])).collect()];
        rows.extend(self.r_basis.iter().map(|r| (0..RANK).map(|i| BigInt::from(sign(i) * r.0[i])).collect()));
        let mat = ZMatrix::from_rows(rows).expect("rows of equal length");
        crate::exactalg::integer_kernel(&mat)
            .iter()
            .map(|v| NSVector::from_big(v).expect("kernel basis of a small matrix"))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "irr": self.irr.iter().map(NSVector::to_json).collect::<Vec<_>>(),
            "r_basis": self.r_basis.iter().map(NSVector::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let index = v
            .get("index")
            .and_then(Value::as_u64)
            .and_then(|i| u32::try_from(i).ok())
            .ok_or_else(|| Error::Schema("model needs an integer `index`".into()))?;
        let list = |key: &str| -> Result<Vec<NSVector>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Schema(format!("model needs an array `{key}`")))?
                .iter()
                .map(NSVector::from_json)
                .collect()
        };
        Self::new(index, list("irr")?, list("r_basis")?)
    }
}

/// Class of `alpha + (alpha . xi) gamma` modulo `R(X)`.
pub fn translation_action(gamma: &NSVector, alpha: &NSVector, model: &HalphenModel) -> Result<NSVector> {
    if intersection(gamma, &NSVector::xi()) != 0 {
        return Err(Error::Precondition("translation vector must be orthogonal to xi".into()));
    }
    let k = intersection(alpha, &NSVector::xi());
    model.reduce_mod_r(&alpha.checked_add(&gamma.checked_scale(k)?)?)
}

fn quotient_of(v: &NSVector) -> RationalClass {
    quotient_rational(&v.to_rational())
}

fn dot_quotient(u: &RationalClass, v: &RationalClass) -> BigRational {
    u.iter().zip(v.iter()).skip(1).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

/// `3 a(gamma)`: three times the orthogonal projection of the class of
/// `gamma` in `xi^perp / xi` onto the orthogonal of `R(X)`.
///
/// Vectors are returned in the quotient model with vanishing `e0`-coordinate.
pub fn axis_translation_vector(gamma: &NSVector, model: &HalphenModel) -> Result<RationalClass> {
    if intersection(gamma, &NSVector::xi()) != 0 {
        return Err(Error::Precondition("translation vector must be orthogonal to xi".into()));
    }
    let g = quotient_of(gamma);
    // independent images of R(X) in the quotient
    let images: Vec<Vec<BigRational>> = model.r_basis.iter().map(|r| quotient_of(r).to_vec()).collect();
    let basis: Vec<Vec<BigRational>> = if images.is_empty() {
        Vec::new()
    } else {
        let (rref, pivots) = QMatrix::from_rows(images)?.rref();
        (0..pivots.len()).map(|i| rref.row(i).to_vec()).collect()
    };
    let mut proj: RationalClass = std::array::from_fn(|_| BigRational::zero());
    if !basis.is_empty() {
        let as_class = |v: &Vec<BigRational>| -> RationalClass { std::array::from_fn(|i| v[i].clone()) };
        let classes: Vec<RationalClass> = basis.iter().map(as_class).collect();
        let gram =
            QMatrix::from_rows(classes.iter().map(|a| classes.iter().map(|b| dot_quotient(a, b)).collect()).collect())?;
        let rhs: Vec<BigRational> = classes.iter().map(|a| dot_quotient(a, &g)).collect();
        let coef = gram
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidInput("degenerate model: R(X) is not definite modulo xi".into()))?;
        for (c, v) in coef.iter().zip(&classes) {
            for i in 0..RANK {
                proj[i] += c * &v[i];
            }
        }
    }
    let three = BigRational::from(BigInt::from(3));
    Ok(std::array::from_fn(|i| (&g[i] - &proj[i]) * &three))
}

/// Affine action of a parabolic isometry on `Q` at the origin `e0`:
/// `v -> L v + t`, in the quotient model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationPart {
    /// `8 x 8` matrix in the basis `e_j - e9` of the quotient, `1 <= j <= 8`.
    pub linear: QMatrix,
    /// Translation vector with vanishing `e0`-coordinate.
    pub translation: RationalClass,
}

impl TranslationPart {
    pub fn translation_norm(&self) -> BigRational {
        quotient_norm(&self.translation)
    }

    pub fn linear_is_identity(&self) -> bool {
        self.linear == QMatrix::identity(RANK - 2)
    }

    /// Smallest `k <= max_order` with `L^k = Id`.
    pub fn linear_order(&self, max_order: u32) -> Option<u32> {
        let id = QMatrix::identity(RANK - 2);
        let mut power = self.linear.clone();
        for k in 1..=max_order {
            if power == id {
                return Some(k);
            }
            power = power.mul(&self.linear);
        }
        None
    }

    pub fn to_json(&self) -> Value {
        use crate::exactalg::serial::rational_to_json;
        json!({
            "linear": (0..RANK - 2)
                .map(|i| self.linear.row(i).iter().map(rational_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "translation": self.translation.iter().map(rational_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Decomposition `M_Q(v) = L(v) + t` of the induced affine isometry of `Q`.
pub fn translation_part(m: &NSIsometry, model: &HalphenModel) -> Result<TranslationPart> {
    if !is_parabolic_isometry(m) {
        return Err(Error::Precondition("isometry does not fix xi".into()));
    }
    if !model.r_basis.iter().all(|r| m.apply(r).map(|v| model.contains_in_r(&v)).unwrap_or(false)) {
        return Err(Error::Precondition("isometry does not preserve R(X)".into()));
    }
    let mut rows = vec![vec![BigRational::zero(); RANK - 2]; RANK - 2];
    for j in 1..RANK - 1 {
        let col = quotient_of(&m.image(j).checked_sub(&m.image(RANK - 1))?);
        for i in 1..RANK - 1 {
            rows[i - 1][j - 1] = col[i].clone();
        }
    }
    let moved = m.image(0).checked_sub(&NSVector::basis(0))?;
    Ok(TranslationPart { linear: QMatrix::from_rows(rows)?, translation: quotient_of(&moved) })
}

/// `deg(M) = 1 + |M_Q(e) - e|^2 / 2`.
pub fn verify_degree_identity(m: &NSIsometry, model: &HalphenModel) -> Result<bool> {
    let part = translation_part(m, model)?;
    let rhs = BigRational::one() + part.translation_norm() / BigRational::from(BigInt::from(2));
    Ok(rhs == BigRational::from(BigInt::from(isometry_degree(m))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    fn e(i: usize) -> NSVector {
        NSVector::basis(i)
    }

    fn diff(i: usize, j: usize) -> NSVector {
        e(i).checked_sub(&e(j)).unwrap()
    }

    /// A model with one `I_2` fiber: components `e1 - e2` and `xi - (e1 - e2)`.
    fn two_component_model() -> HalphenModel {
        let c = diff(1, 2);
        let other = NSVector::xi().checked_sub(&c).unwrap();
        HalphenModel::new(1, vec![NSVector::xi(), c, other], vec![NSVector::xi(), c]).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(HalphenModel::trivial(2).is_ok());
        let bad = HalphenModel::new(1, vec![e(1)], vec![NSVector::xi()]);
        assert!(bad.is_err());
        assert!(HalphenModel::new(1, vec![NSVector::xi()], vec![diff(1, 2)]).is_err());
        let model = two_component_model();
        assert_eq!(HalphenModel::from_json(&model.to_json()).unwrap(), model);
        assert_eq!(model.translation_lattice().len(), 8);
    }

    #[test]
    fn action_examples() {
        let model = HalphenModel::trivial(1).unwrap();
        let gamma = NSVector([1, -1, -1, -1, 0, 0, 0, 0, 0, 0]);
        let expected = model.reduce_mod_r(&e(0).checked_add(&gamma.checked_scale(3).unwrap()).unwrap()).unwrap();
        assert_eq!(translation_action(&gamma, &e(0), &model).unwrap(), expected);
        let alpha = NSVector([2, 0, 1, 0, 0, 5, 0, 0, -1, 0]);
        assert_eq!(translation_action(&NSVector::xi(), &alpha, &model).unwrap(), model.reduce_mod_r(&alpha).unwrap());
        let g2 = diff(4, 7);
        let once = translation_action(&gamma, &alpha, &model).unwrap();
        let twice = translation_action(&g2, &once, &model).unwrap();
        assert_eq!(twice, translation_action(&gamma.checked_add(&g2).unwrap(), &alpha, &model).unwrap());
    }

    #[test]
    fn axis_vectors() {
        let trivial = HalphenModel::trivial(1).unwrap();
        assert!(axis_translation_vector(&NSVector::xi(), &trivial).unwrap().iter().all(Zero::is_zero));
        let g = diff(1, 2);
        let out = axis_translation_vector(&g, &trivial).unwrap();
        let expected: RationalClass = std::array::from_fn(|i| ratio(3 * g.0[i], 1));
        assert_eq!(out, expected);
        let model = two_component_model();
        assert!(axis_translation_vector(&g, &model).unwrap().iter().all(Zero::is_zero));
        // e1 + e2 - 2e3 is orthogonal to e1 - e2, so it projects to itself
        let h = NSVector([0, 1, 1, -2, 0, 0, 0, 0, 0, 0]);
        let out = axis_translation_vector(&h, &model).unwrap();
        assert_eq!(out, std::array::from_fn(|i| ratio(3 * h.0[i], 1)));
        // e1 - e3 = (e1 - e2)/2 + (e1 + e2 - 2e3)/2
        let out = axis_translation_vector(&diff(1, 3), &model).unwrap();
        assert_eq!(out, std::array::from_fn(|i| ratio(3 * h.0[i], 2)));
    }

    #[test]
    fn translation_parts() {
        let model = HalphenModel::trivial(1).unwrap();
        let id = translation_part(&NSIsometry::identity(), &model).unwrap();
        assert!(id.linear_is_identity());
        assert!(id.translation.iter().all(Zero::is_zero));
        let g = NSVector([1, -1, -1, -1, 0, 0, 0, 0, 0, 0]);
        let t = translation_part(&NSIsometry::translation(&g).unwrap(), &model).unwrap();
        assert!(t.linear_is_identity());
        assert_eq!(t.translation, axis_translation_vector(&g, &model).unwrap());
        let s = NSIsometry::quadratic(1, 2, 3).unwrap();
        let part = translation_part(&s, &model).unwrap();
        assert_eq!(part.linear_order(12), Some(2));
        assert_eq!(part.translation_norm(), ratio(2, 1));
        let mut scaled = NSIsometry::identity();
        scaled.matrix[0][0] = 2;
        assert!(translation_part(&scaled, &model).is_err());
    }

    #[test]
    fn degree_identity() {
        let model = HalphenModel::trivial(1).unwrap();
        assert!(verify_degree_identity(&NSIsometry::identity(), &model).unwrap());
        assert!(verify_degree_identity(&NSIsometry::quadratic(1, 2, 3).unwrap(), &model).unwrap());
        let t = NSIsometry::translation(&diff(1, 2)).unwrap();
        let u = NSIsometry::translation(&diff(3, 5)).unwrap();
        let step = t.compose(&u).unwrap();
        let mut degrees = Vec::new();
        let mut acc = NSIsometry::identity();
        for _ in 0..5 {
            acc = acc.compose(&step).unwrap();
            assert!(verify_degree_identity(&acc, &model).unwrap());
            degrees.push(isometry_degree(&acc));
        }
        // |t|^2 = 4 * 9 for the sum of two orthogonal roots, so deg = 1 + 18 k^2
        assert_eq!(degrees, vec![19, 73, 163, 289, 451]);
    }
}
