use crate::cremona::{IntPoint, PlaneBirationalMap};
use crate::error::{Error, Result};
use crate::exactalg::{monomials, HomPoly3, QMatrix};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Linear conditions on degree-`degree` forms: vanishing to order `mult` at each point.
///
/// Rows are Hasse derivatives of order below the multiplicity; columns follow `monomials(degree)`.
pub fn condition_matrix(degree: u32, conditions: &[(&IntPoint, u32)]) -> QMatrix {
    let basis = monomials(degree);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (point, mult) in conditions {
        for order in 0..*mult {
            for alpha in monomials(order) {
                let row = basis
                    .iter()
                    .map(|e| {
                        if (0..3).any(|i| e[i] < alpha[i]) {
                            return BigRational::zero();
                        }
                        let mut v = BigInt::one();
                        for i in 0..3 {
                            v *= binomial(BigInt::from(e[i]), BigInt::from(alpha[i]));
                            v *= point[i].pow(e[i] - alpha[i]);
                        }
                        BigRational::from(v)
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return QMatrix::zeros(0, basis.len());
    }
    QMatrix::from_rows(rows).expect("rows of equal length")
}

/// Outcome of the genericity test on a Jonquières configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonCheck {
    pub passed: bool,
    /// Order of the violated condition; 1 means three collinear points.
    pub order: u32,
    pub witness: Vec<IntPoint>,
}

impl JonCheck {
    fn pass() -> Self {
        JonCheck { passed: true, order: 0, witness: Vec::new() }
    }
}

fn collinear(a: &IntPoint, b: &IntPoint, c: &IntPoint) -> bool {
    let det = &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0]);
    det.is_zero()
}

/// No three of `q0, points` collinear, and for `2 <= k <= m` no curve of degree `k`
/// with multiplicity `k - 1` at `q0` passes through `2k + 1` of the points.
pub fn check_jon_conditions(q0: &IntPoint, points: &[IntPoint], m: u32) -> JonCheck {
    let all: Vec<&IntPoint> = std::iter::once(q0).chain(points.iter()).collect();
    for triple in all.iter().combinations(3) {
        if collinear(triple[0], triple[1], triple[2]) {
            return JonCheck { passed: false, order: 1, witness: triple.into_iter().map(|p| (*p).clone()).collect() };
        }
    }
    for k in 2..=m {
        for subset in points.iter().combinations(2 * k as usize + 1) {
            let mut conds: Vec<(&IntPoint, u32)> = vec![(q0, k - 1)];
            conds.extend(subset.iter().map(|p| (*p, 1)));
            let mat = condition_matrix(k, &conds);
            if mat.rank() < mat.cols() {
                let mut witness = vec![q0.clone()];
                witness.extend(subset.into_iter().cloned());
                return JonCheck { passed: false, order: k, witness };
            }
        }
    }
    JonCheck::pass()
}

/// Jonquières map of degree `m + 1` with a point of multiplicity `m` at `q0`
/// and simple base points at the `2m` given points, with its inverse.
pub fn build_jonquieres(q0: &IntPoint, points: &[IntPoint]) -> Result<(PlaneBirationalMap, PlaneBirationalMap)> {
    if points.len() % 2 != 0 || points.is_empty() {
        return Err(Error::Precondition("need 2m simple base points with m >= 1".into()));
    }
    let m = (points.len() / 2) as u32;
    let degree = m + 1;
    let mut conds: Vec<(&IntPoint, u32)> = vec![(q0, m)];
    conds.extend(points.iter().map(|p| (p, 1)));
    let kernel = condition_matrix(degree, &conds).kernel_basis();
    if kernel.len() != 3 {
        return Err(Error::Genericity(format!("net has dimension {} instead of 3", kernel.len())));
    }
    let basis = monomials(degree);
    let form = |v: &Vec<BigRational>| {
        HomPoly3::from_rational_terms(degree, basis.iter().copied().zip(v.iter().cloned()).collect())
            .expect("form of the net degree")
    };
    let g = PlaneBirationalMap::new([form(&kernel[0]), form(&kernel[1]), form(&kernel[2])])?;
    if g.degree() != degree {
        return Err(Error::Genericity(format!("net has a fixed component; degree {}", g.degree())));
    }
    let g_inv = g.invert(degree).ok_or_else(|| Error::Genericity("net does not define a birational map".into()))?;
    Ok((g, g_inv))
}

/// Images under `g` of three points on each of a few lines through `q0` are collinear.
pub fn preserves_pencil(g: &PlaneBirationalMap, q0: &IntPoint, directions: &[IntPoint]) -> bool {
    directions.iter().all(|r| {
        let on_line = |t: i64| -> IntPoint { [0, 1, 2].map(|i| &q0[i] + BigInt::from(t) * &r[i]) };
        let images: Vec<IntPoint> = [1, 2, 3].iter().filter_map(|&t| g.apply_int(&on_line(t))).collect();
        images.len() < 3 || collinear(&images[0], &images[1], &images[2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::int_point;

    #[test]
    fn conic_example_net() {
        let q0 = int_point(0, 0, 1);
        let pts = [int_point(1, 1, 1), int_point(1, -1, 1)];
        assert!(check_jon_conditions(&q0, &pts, 1).passed);
        let (g, g_inv) = build_jonquieres(&q0, &pts).unwrap();
        assert_eq!(g.degree(), 2);
        assert!(g.compose(&g_inv).unwrap().is_identity());
        // each component lies in the span of xy - yz, x^2 - xz, y^2 - xz
        let net = condition_matrix(2, &[(&q0, 1), (&pts[0], 1), (&pts[1], 1)]);
        for c in g.components() {
            let v: Vec<BigRational> = monomials(2).iter().map(|e| c.coeff(e)).collect();
            assert!(net.mul_vec(&v).iter().all(Zero::is_zero));
        }
        assert!(preserves_pencil(&g, &q0, &[int_point(1, 3, 0), int_point(2, -5, 1)]));
    }

    #[test]
    fn collinear_triple_is_reported() {
        let q0 = int_point(0, 0, 1);
        let pts = [int_point(1, 1, 1), int_point(2, 2, 1)];
        let c = check_jon_conditions(&q0, &pts, 1);
        assert!(!c.passed);
        assert_eq!(c.order, 1);
        assert_eq!(c.witness.len(), 3);
        assert!(matches!(build_jonquieres(&q0, &pts), Err(Error::Genericity(_))));
    }

    #[test]
    fn five_points_on_a_conic_through_q0() {
        // the conic xy = z^2 passes through q0 and five more points
        let q0 = int_point(1, 1, 1);
        let mut pts: Vec<IntPoint> = [(1, 4, 2), (4, 1, 2), (1, 9, 3), (9, 1, 3), (4, 9, 6)]
            .iter()
            .map(|&(a, b, c)| int_point(a, b, c))
            .collect();
        assert!(pts.iter().chain([&q0]).all(|p| (&p[0] * &p[1] - &p[2] * &p[2]).is_zero()));
        pts.push(int_point(7, -3, 1));
        let c = check_jon_conditions(&q0, &pts, 3);
        assert!(!c.passed);
        assert_eq!(c.order, 2);
        assert_eq!(c.witness.len(), 6);
    }
}
