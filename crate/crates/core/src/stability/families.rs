use crate::cremona::PlaneBirationalMap;
use crate::error::{Error, Result};
use crate::exactalg::{poly_gcd, HomPoly3};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational function of one variable `num(x) / den(x)`, coefficients low to high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniRational {
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn degree_of(v: &[BigRational]) -> usize {
    v.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Binary form in `X, Z` (the `Y` exponent stays zero) homogenized to `degree`.
fn homogenize(coeffs: &[BigRational], degree: u32) -> HomPoly3 {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| ([i as u32, 0, degree - i as u32], c.clone()))
        .collect();
    HomPoly3::from_rational_terms(degree, terms).expect("degree bounds the coefficients")
}

fn dehomogenize(form: &HomPoly3) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); form.deg() as usize + 1];
    for (e, c) in form.terms() {
        out[e[0] as usize] = c;
    }
    trim(out)
}

impl UniRational {
    pub fn new(num: Vec<BigRational>, den: Vec<BigRational>) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.is_empty() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(UniRational { num, den })
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::new(conv(num), conv(den))
    }

    /// Larger of the two polynomial degrees.
    pub fn padded_degree(&self) -> u32 {
        degree_of(&self.num).max(degree_of(&self.den)) as u32
    }

    pub fn is_constant(&self) -> bool {
        // num * den[j] == den * num[j] coefficientwise for all j
        let n = self.num.len().max(self.den.len());
        let at = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
        (0..n).all(|i| (0..n).all(|j| at(&self.num, i) * at(&self.den, j) == at(&self.den, i) * at(&self.num, j)))
    }

    /// Degree after cancelling common factors.
    pub fn reduced_degree(&self) -> u32 {
        let k = self.padded_degree();
        let n = homogenize(&self.num, k);
        let d = homogenize(&self.den, k);
        if n.is_zero() {
            return 0;
        }
        let g = poly_gcd(&n, &d).expect("denominator is nonzero");
        k - g.deg()
    }

    /// `x ↦ q(c x)`.
    pub fn rescale(&self, c: &BigRational) -> Self {
        let scale = |v: &[BigRational]| {
            let mut power = BigRational::one();
            v.iter()
                .map(|a| {
                    let out = a * &power;
                    power = &power * c;
                    out
                })
                .collect()
        };
        UniRational { num: scale(&self.num), den: scale(&self.den) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        UniRational { num: poly_mul(&self.num, &other.num), den: poly_mul(&self.den, &other.den) }
    }

    /// Same function with common factors removed.
    pub fn reduced(&self) -> Self {
        let k = self.padded_degree();
        let n = homogenize(&self.num, k);
        let d = homogenize(&self.den, k);
        if n.is_zero() {
            return UniRational { num: vec![], den: vec![BigRational::one()] };
        }
        let g = poly_gcd(&n, &d).expect("denominator is nonzero");
        let num = dehomogenize(&n.div_exact(&g).expect("gcd divides"));
        let den = dehomogenize(&d.div_exact(&g).expect("gcd divides"));
        let lc = den.last().cloned().expect("nonzero denominator");
        let unit = |v: Vec<BigRational>| v.into_iter().map(|c| c / &lc).collect();
        UniRational { num: unit(num), den: unit(den) }
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let ev = |v: &[BigRational]| v.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        let d = ev(&self.den);
        (!d.is_zero()).then(|| ev(&self.num) / d)
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `(x, y) ↦ (α x, r(x) y)` in the chart `z = 1`.
pub fn skew_product(alpha: &BigRational, r: &UniRational) -> Result<PlaneBirationalMap> {
    let k = r.padded_degree();
    let n = homogenize(&r.num, k);
    let d = homogenize(&r.den, k);
    let x = HomPoly3::var(0).scale(alpha);
    PlaneBirationalMap::new([x.mul(&d), n.mul(&HomPoly3::var(1)), HomPoly3::var(2).mul(&d)])
}

/// `f_a(x, y) = (x + a, y x / (x + 1))`, i.e. `[(x + a z)(x + z) : x y : (x + z) z]`.
pub fn make_family_fa(a: &BigRational) -> PlaneBirationalMap {
    let lin = |cx: BigRational, cz: BigRational| {
        HomPoly3::from_rational_terms(1, vec![([1, 0, 0], cx), ([0, 0, 1], cz)]).expect("linear form")
    };
    let x_plus_z = lin(BigRational::one(), BigRational::one());
    let first = lin(BigRational::one(), a.clone()).mul(&x_plus_z);
    let second = HomPoly3::var(0).mul(&HomPoly3::var(1));
    let third = x_plus_z.mul(&HomPoly3::var(2));
    PlaneBirationalMap::new([first, second, third]).expect("degree-two triple")
}

fn check_alpha(alpha: &BigRational) -> Result<()> {
    if alpha.is_zero() {
        return Err(Error::Precondition("alpha must be nonzero".into()));
    }
    if alpha.numer().abs() == alpha.denom().abs() {
        return Err(Error::Precondition(format!("alpha = {alpha} is a root of unity")));
    }
    Ok(())
}

/// `f_α(x, y) = (α x, q(x) y)`.
pub fn make_family_falpha(alpha: &BigRational, q: &UniRational) -> Result<PlaneBirationalMap> {
    check_alpha(alpha)?;
    if q.is_constant() {
        return Err(Error::Precondition("q must be non-constant".into()));
    }
    skew_product(alpha, q)
}

/// `q_n(x) = ∏_{j<n} q(α^j x)`, so that `f_α^n = (α^n x, q_n(x) y)`.
pub fn falpha_iterate_multiplier(alpha: &BigRational, q: &UniRational, n: u32) -> UniRational {
    let mut acc = UniRational { num: vec![BigRational::one()], den: vec![BigRational::one()] };
    let mut power = BigRational::one();
    for _ in 0..n {
        acc = acc.mul(&q.rescale(&power));
        power = &power * alpha;
    }
    acc
}

/// `s_m(x) = ∏_{i=0..m} (x − α^i)`.
pub fn shift_polynomial(alpha: &BigRational, m: u32) -> Vec<BigRational> {
    let mut s = vec![BigRational::one()];
    let mut power = BigRational::one();
    for _ in 0..=m {
        s = poly_mul(&s, &[-power.clone(), BigRational::one()]);
        power = &power * alpha;
    }
    s
}

/// `(x, s(x) y)`.
pub fn fiber_scaling(s: &[BigRational]) -> Result<PlaneBirationalMap> {
    skew_product(&BigRational::one(), &UniRational::new(s.to_vec(), vec![BigRational::one()])?)
}

/// The conjugate `g_{α,m} = (α x, q(x) s_m(α x) / s_m(x) y)`.
pub fn conjugated_falpha(alpha: &BigRational, q: &UniRational, m: u32) -> Result<PlaneBirationalMap> {
    let s = shift_polynomial(alpha, m);
    let ratio = UniRational::new(s.clone(), s)?.rescale_num(alpha);
    skew_product(alpha, &q.mul(&ratio))
}

/// Closed form of `s_m(α x) / s_m(x)`: `α^m (α x − 1) / (x − α^m)`.
pub fn shift_ratio_closed_form(alpha: &BigRational, m: u32) -> UniRational {
    let am = num_traits::pow(alpha.clone(), m as usize);
    UniRational { num: vec![-am.clone(), &am * alpha], den: vec![-am, BigRational::one()] }
}

impl UniRational {
    fn rescale_num(&self, c: &BigRational) -> Self {
        let scaled = UniRational { num: self.num.clone(), den: vec![BigRational::one()] }.rescale(c);
        UniRational { num: scaled.num, den: self.den.clone() }
    }
}

/// `h ∘ f_α ∘ h⁻¹ = g_{α,m}` for `h = (x, s(x) y)`.
pub fn conjugacy_holds(alpha: &BigRational, q: &UniRational, s: &[BigRational], m: u32) -> Result<bool> {
    let f = make_family_falpha(alpha, q)?;
    let h = fiber_scaling(s)?;
    let h_inv = h.invert(h.degree()).ok_or_else(|| Error::Verification("fiber scaling is not invertible".into()))?;
    let lhs = h.compose(&f.compose(&h_inv)?)?;
    Ok(lhs == conjugated_falpha(alpha, q, m)?)
}

/// Checks the conjugacy between `f_α` and `g_{α,m}` through `h_m = (x, s_m(x) y)`.
pub fn verify_falpha_conjugacy(alpha: &BigRational, q: &UniRational, m: u32) -> Result<bool> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    conjugacy_holds(alpha, q, &shift_polynomial(alpha, m), m)
}

/// `L_t⁻¹ ∘ f ∘ L_t` with `L_t(x, y) = (t x, t y)`.
pub fn renormalize_at_fixed_point(f: &PlaneBirationalMap, t: &BigRational) -> Result<PlaneBirationalMap> {
    if t.is_zero() {
        return Err(Error::Precondition("t must be nonzero".into()));
    }
    let lin = linear_part_at_origin(f)?;
    let det = &lin[0][0] * &lin[1][1] - &lin[0][1] * &lin[1][0];
    if det.is_zero() {
        return Err(Error::Precondition("origin is a degenerate fixed point".into()));
    }
    let one = BigRational::one;
    let l = PlaneBirationalMap::diagonal(t.clone(), t.clone(), one())?;
    let l_inv = PlaneBirationalMap::diagonal(one() / t, one() / t, one())?;
    l_inv.compose(&f.compose(&l)?)
}

/// Jacobian matrix at the origin of the chart `z = 1`; requires `f(0, 0) = (0, 0)`.
pub fn linear_part_at_origin(f: &PlaneBirationalMap) -> Result<[[BigRational; 2]; 2]> {
    let at = |p: &HomPoly3| p.eval(&[BigRational::zero(), BigRational::zero(), BigRational::one()]);
    let [p, q, r] = f.components();
    let r0 = at(r);
    if r0.is_zero() || !at(p).is_zero() || !at(q).is_zero() {
        return Err(Error::Precondition("origin is not a fixed point in the chart".into()));
    }
    let d = |c: &HomPoly3, i: usize| at(&c.derivative(i)) / &r0;
    Ok([[d(p, 0), d(p, 1)], [d(q, 0), d(q, 1)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::degree_sequence;
    use crate::exactalg::{rat, ratio};

    fn example_q() -> UniRational {
        UniRational::from_i64(&[-1, 1], &[-5, 1]).unwrap()
    }

    #[test]
    fn product_formula_second_iterate() {
        let q2 = falpha_iterate_multiplier(&rat(2), &example_q(), 2);
        // ((x - 1)(2x - 1)) / ((x - 5)(2x - 5))
        assert_eq!(q2.num, vec![rat(1), rat(-3), rat(2)]);
        assert_eq!(q2.den, vec![rat(25), rat(-15), rat(2)]);
        assert_eq!(q2.reduced_degree(), 2);
        for n in 1..=6 {
            assert_eq!(falpha_iterate_multiplier(&rat(2), &example_q(), n).reduced_degree(), n);
        }
    }

    #[test]
    fn product_formula_matches_composition() {
        let alpha = rat(2);
        let f = make_family_falpha(&alpha, &example_q()).unwrap();
        let mut it = f.clone();
        for n in 2..=5u32 {
            it = f.compose(&it).unwrap();
            let qn = falpha_iterate_multiplier(&alpha, &example_q(), n);
            let closed = skew_product(&num_traits::pow(alpha.clone(), n as usize), &qn).unwrap();
            assert_eq!(it, closed, "n = {n}");
        }
    }

    #[test]
    fn falpha_preconditions() {
        let constant = UniRational::from_i64(&[2, 4], &[1, 2]).unwrap();
        assert!(make_family_falpha(&rat(2), &constant).is_err());
        assert!(make_family_falpha(&rat(-1), &example_q()).is_err());
        assert!(make_family_falpha(&rat(0), &example_q()).is_err());
    }

    #[test]
    fn conjugacy_identity() {
        for m in 1..=2 {
            assert!(verify_falpha_conjugacy(&rat(2), &example_q(), m).unwrap());
        }
        // dropping the last factor of s_2 breaks the identity
        let s = shift_polynomial(&rat(2), 1);
        assert!(!conjugacy_holds(&rat(2), &example_q(), &s, 2).unwrap());
    }

    #[test]
    fn closed_form_of_shift_ratio() {
        let alpha = ratio(3, 2);
        for m in 1..=3 {
            let s = shift_polynomial(&alpha, m);
            let direct = UniRational::new(s.clone(), s).unwrap().rescale_num(&alpha).reduced();
            assert_eq!(direct, shift_ratio_closed_form(&alpha, m).reduced());
        }
    }

    #[test]
    fn fa_degrees() {
        let degrees = |a: BigRational| degree_sequence(&make_family_fa(&a), 8, None).unwrap().degrees;
        assert_eq!(make_family_fa(&rat(1)).degree(), 2);
        // elliptic exactly when some integer multiple of a equals 1
        for a in [rat(1), ratio(1, 2), ratio(1, 3), rat(-1)] {
            assert!(degrees(a.clone()).iter().all(|&d| d <= 4), "a = {a}");
        }
        // a = 0 fixes x but the fiber multiplier x/(x+1) gives linear growth
        for a in [rat(0), ratio(2, 5), rat(2)] {
            assert_eq!(degrees(a), (1..=9).collect::<Vec<u64>>());
        }
    }

    #[test]
    fn renormalization() {
        let two = HomPoly3::from_rational_terms(2, vec![([1, 0, 1], rat(2)), ([0, 2, 0], rat(1))]).unwrap();
        let three = HomPoly3::from_rational_terms(2, vec![([0, 1, 1], rat(3))]).unwrap();
        let zz = HomPoly3::monomial([0, 0, 2], rat(1));
        let f = PlaneBirationalMap::new([two, three, zz.clone()]).unwrap();
        assert_eq!(renormalize_at_fixed_point(&f, &rat(1)).unwrap(), f);
        let half = renormalize_at_fixed_point(&f, &ratio(1, 2)).unwrap();
        let expected = PlaneBirationalMap::new([
            HomPoly3::from_rational_terms(2, vec![([1, 0, 1], rat(2)), ([0, 2, 0], ratio(1, 2))]).unwrap(),
            HomPoly3::from_rational_terms(2, vec![([0, 1, 1], rat(3))]).unwrap(),
            zz,
        ])
        .unwrap();
        assert_eq!(half, expected);
        let lin = linear_part_at_origin(&f).unwrap();
        assert_eq!(lin, [[rat(2), rat(0)], [rat(0), rat(3)]]);
        assert!(renormalize_at_fixed_point(&PlaneBirationalMap::standard_involution(), &rat(1)).is_err());
    }
}
