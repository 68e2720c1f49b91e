use crate::error::{Error, Result};
use crate::exactalg::serial::{int_from_json, poly_from_json, poly_to_json};
use crate::exactalg::{gcd_many, kernel_basis, monomial_count, monomials, HomPoly3, Monomial, QMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::fmt;

/// A plane rational map `[P : Q : R]` given by a primitive triple of forms
/// of equal degree.
///
/// The triple is normalized: common factors are removed and the first
/// nonzero component has graded-lex leading coefficient one. Two maps are
/// equal as projective maps iff they are equal as values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneBirationalMap {
    components: [HomPoly3; 3],
}

/// Point of the projective plane with coprime integer coordinates.
pub type IntPoint = [BigInt; 3];

impl PlaneBirationalMap {
    /// Normalize a triple: remove the common factor and fix the scalar.
    pub fn new(components: [HomPoly3; 3]) -> Result<Self> {
        let d = components[0].deg();
        if components.iter().any(|c| c.deg() != d) {
            return Err(Error::DegreeMismatch(format!(
                "components of degrees {}, {}, {}",
                components[0].deg(),
                components[1].deg(),
                components[2].deg()
            )));
        }
        if components.iter().all(HomPoly3::is_zero) {
            return Err(Error::InvalidInput("all components vanish".into()));
        }
        let g = gcd_many(&[&components[0], &components[1], &components[2]])?;
        let reduced: [HomPoly3; 3] = if g.deg() == 0 {
            components
        } else {
            let divide = |c: &HomPoly3| {
                if c.is_zero() {
                    HomPoly3::zero(d - g.deg())
                } else {
                    c.div_exact(&g).expect("gcd divides every component")
                }
            };
            [divide(&components[0]), divide(&components[1]), divide(&components[2])]
        };
        Ok(Self::from_primitive_unchecked(reduced))
    }

    fn from_primitive_unchecked(components: [HomPoly3; 3]) -> Self {
        let lead = components
            .iter()
            .find(|c| !c.is_zero())
            .and_then(HomPoly3::leading)
            .map(|(_, c)| c)
            .expect("some component is nonzero");
        let inv = BigRational::one() / lead;
        PlaneBirationalMap { components: components.map(|c| c.scale(&inv)) }
    }

    pub fn identity() -> Self {
        Self::from_primitive_unchecked([HomPoly3::var(0), HomPoly3::var(1), HomPoly3::var(2)])
    }

    /// Linear map acting on column vectors `(x, y, z)` by the given matrix.
    pub fn linear(matrix: [[BigRational; 3]; 3]) -> Result<Self> {
        let m = QMatrix::from_rows(matrix.iter().map(|r| r.to_vec()).collect())?;
        if m.determinant().is_zero() {
            return Err(Error::InvalidInput("singular linear map".into()));
        }
        let rows = matrix.map(|row| {
            let terms = (0..3)
                .map(|j| {
                    let mut e = [0u32; 3];
                    e[j] = 1;
                    (e, row[j].clone())
                })
                .collect();
            HomPoly3::from_rational_terms(1, terms).expect("linear form")
        });
        Self::new(rows)
    }

    pub fn linear_i64(matrix: [[i64; 3]; 3]) -> Result<Self> {
        Self::linear(matrix.map(|r| r.map(|v| BigRational::from(BigInt::from(v)))))
    }

    /// Diagonal linear map `[a x : b y : c z]`.
    pub fn diagonal(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        let z = BigRational::zero;
        Self::linear([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    /// The standard quadratic involution `[yz : xz : xy]`.
    pub fn standard_involution() -> Self {
        let m = |e: Monomial| HomPoly3::monomial(e, BigRational::one());
        Self::new([m([0, 1, 1]), m([1, 0, 1]), m([1, 1, 0])]).expect("valid map")
    }

    /// The quadratic Hénon-type map `[yz : y^2 - xz : z^2]`.
    pub fn henon_example() -> Self {
        let p = |t: &[(Monomial, i64)]| {
            HomPoly3::from_int_terms(2, t.iter().map(|(e, c)| (*e, BigInt::from(*c))).collect()).expect("form")
        };
        Self::new([p(&[([0, 1, 1], 1)]), p(&[([0, 2, 0], 1), ([1, 0, 1], -1)]), p(&[([0, 0, 2], 1)])])
            .expect("valid map")
    }

    pub fn components(&self) -> &[HomPoly3; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components[0].deg()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `self ∘ other`, reduced to a primitive triple.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let composed = self.compose_unreduced(other)?;
        if composed.iter().all(HomPoly3::is_zero) {
            return Err(Error::InvalidInput("composition is identically zero".into()));
        }
        Self::new(composed)
    }

    /// Component-wise substitution without removing the common factor.
    pub fn compose_unreduced(&self, other: &Self) -> Result<[HomPoly3; 3]> {
        let args = [&other.components[0], &other.components[1], &other.components[2]];
        Ok([self.components[0].compose3(args)?, self.components[1].compose3(args)?, self.components[2].compose3(args)?])
    }

    /// Image of a point; `None` when the point is indeterminate.
    pub fn apply(&self, p: &[BigRational; 3]) -> Option<IntPoint> {
        if p.iter().all(Zero::is_zero) {
            return None;
        }
        let v = [self.components[0].eval(p), self.components[1].eval(p), self.components[2].eval(p)];
        normalize_point(&v)
    }

    /// Image of an integer point.
    pub fn apply_int(&self, p: &IntPoint) -> Option<IntPoint> {
        self.apply(&[BigRational::from(p[0].clone()), BigRational::from(p[1].clone()), BigRational::from(p[2].clone())])
    }

    /// Determinant of the Jacobian matrix.
    pub fn jacobian_determinant(&self) -> HomPoly3 {
        let d: Vec<Vec<HomPoly3>> = self.components.iter().map(|c| (0..3).map(|i| c.derivative(i)).collect()).collect();
        let minor =
            |a: &HomPoly3, b: &HomPoly3, c: &HomPoly3, e: &HomPoly3| a.mul(b).sub(&c.mul(e)).expect("equal degrees");
        let t0 = d[0][0].mul(&minor(&d[1][1], &d[2][2], &d[1][2], &d[2][1]));
        let t1 = d[0][1].mul(&minor(&d[1][0], &d[2][2], &d[1][2], &d[2][0]));
        let t2 = d[0][2].mul(&minor(&d[1][0], &d[2][1], &d[1][1], &d[2][0]));
        t0.sub(&t1).and_then(|s| s.add(&t2)).expect("equal degrees")
    }

    /// Inverse of degree at most `degree_guess`, found by linear algebra and
    /// verified by composing on both sides.
    pub fn invert(&self, degree_guess: u32) -> Option<Self> {
        if degree_guess == 0 {
            return None;
        }
        let k = degree_guess;
        let d = self.degree();
        let basis = monomials(k);
        let n = basis.len();
        let args = [&self.components[0], &self.components[1], &self.components[2]];
        let images: Vec<HomPoly3> = basis
            .iter()
            .map(|e| HomPoly3::monomial(*e, BigRational::one()).compose3(args).expect("equal degrees"))
            .collect();
        let out_deg = k * d + 1;
        let row_index: HashMap<Monomial, usize> =
            monomials(out_deg).into_iter().enumerate().map(|(i, e)| (e, i)).collect();
        let rows_per_eq = monomial_count(out_deg);
        let mut m = QMatrix::zeros(2 * rows_per_eq, 3 * n);
        // eq0: P'(f) y - Q'(f) x = 0 ; eq1: P'(f) z - R'(f) x = 0
        let mut put = |eq: usize, col: usize, img: &HomPoly3, var: usize, sign: i64| {
            for (e, c) in img.terms() {
                let mut e2 = e;
                e2[var] += 1;
                let r = eq * rows_per_eq + row_index[&e2];
                let v = m.get(r, col) + c * BigRational::from(BigInt::from(sign));
                m.set(r, col, v);
            }
        };
        for (j, img) in images.iter().enumerate() {
            put(0, j, img, 1, 1);
            put(1, j, img, 2, 1);
            put(0, n + j, img, 0, -1);
            put(1, 2 * n + j, img, 0, -1);
        }
        let kernel = kernel_basis(&m);
        for v in kernel {
            let comp = |offset: usize| {
                let terms = basis.iter().zip(&v[offset..offset + n]).map(|(e, c)| (*e, c.clone())).collect();
                HomPoly3::from_rational_terms(k, terms).expect("degree k form")
            };
            let Ok(candidate) = Self::new([comp(0), comp(n), comp(2 * n)]) else {
                continue;
            };
            let left = candidate.compose(self).map(|c| c.is_identity()).unwrap_or(false);
            let right = self.compose(&candidate).map(|c| c.is_identity()).unwrap_or(false);
            if left && right {
                return Some(candidate);
            }
        }
        None
    }

    /// Primitive integer triple proportional to this map.
    pub fn integer_triple(&self) -> [Vec<(Monomial, BigInt)>; 3] {
        let den = self
            .components
            .iter()
            .flat_map(|c| c.terms().map(|(_, q)| q.denom().clone()).collect::<Vec<_>>())
            .fold(BigInt::one(), |l, d| l.lcm(&d));
        let ints: Vec<Vec<(Monomial, BigInt)>> = self
            .components
            .iter()
            .map(|c| c.terms().map(|(e, q)| (e, (q * BigRational::from(den.clone())).to_integer())).collect())
            .collect();
        let g = ints.iter().flatten().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        let mut it = ints.into_iter().map(|v| v.into_iter().map(|(e, c)| (e, c / &g)).collect::<Vec<_>>());
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    }

    /// Total decimal digits of all coefficients (approximate).
    pub fn digit_size(&self) -> u64 {
        self.components.iter().map(HomPoly3::digit_size).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree(),
            "components": self.components.iter().map(poly_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .and_then(|d| u32::try_from(d).ok())
            .ok_or_else(|| Error::Schema("map needs an integer `degree`".into()))?;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .filter(|c| c.len() == 3)
            .ok_or_else(|| Error::Schema("map needs three `components`".into()))?;
        let parsed = [
            poly_from_json(&comps[0], degree)?,
            poly_from_json(&comps[1], degree)?,
            poly_from_json(&comps[2], degree)?,
        ];
        Self::new(parsed).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Scale a rational vector to coprime integers with first nonzero entry positive.
pub fn normalize_point(v: &[BigRational; 3]) -> Option<IntPoint> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let den = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if ints.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
        g = -g;
    }
    Some([&ints[0] / &g, &ints[1] / &g, &ints[2] / &g])
}

/// Integer point from small coordinates.
pub fn int_point(x: i64, y: i64, z: i64) -> IntPoint {
    [BigInt::from(x), BigInt::from(y), BigInt::from(z)]
}

/// Projective equality of integer points.
pub fn same_point(a: &IntPoint, b: &IntPoint) -> bool {
    let to_q = |p: &IntPoint| [0, 1, 2].map(|i| BigRational::from(p[i].clone()));
    normalize_point(&to_q(a)) == normalize_point(&to_q(b))
}

pub fn point_to_json(p: &IntPoint) -> Value {
    Value::Array(p.iter().map(crate::exactalg::serial::int_to_json).collect())
}

pub fn point_from_json(v: &Value) -> Result<IntPoint> {
    let a =
        v.as_array().filter(|a| a.len() == 3).ok_or_else(|| Error::Schema("point needs three coordinates".into()))?;
    Ok([int_from_json(&a[0])?, int_from_json(&a[1])?, int_from_json(&a[2])?])
}

impl fmt::Debug for PlaneBirationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.components[0], self.components[1], self.components[2])
    }
}

impl fmt::Display for PlaneBirationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
