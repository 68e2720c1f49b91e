//! Homogeneous polynomials in `x, y, z` with exact rational coefficients.

use super::upoly::UPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exponent triple `(a, b, c)` of `x^a y^b z^c`.
pub type Monomial = [u32; 3];

/// Number of monomials of degree `d` in three variables.
pub fn monomial_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// All monomials of degree `d`, in decreasing graded-lex order.
pub fn monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

#[inline]
fn dense_index(e: &Monomial) -> usize {
    let r = (e[1] + e[2]) as usize;
    r * (r + 1) / 2 + e[2] as usize
}

/// Homogeneous polynomial stored as a rational content times a primitive
/// integer polynomial whose graded-lex leading coefficient is positive.
///
/// Terms are kept sorted by decreasing graded-lex order, so the first term
/// is the leading one. The zero polynomial has no terms and content zero,
/// but still carries its degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly3 {
    deg: u32,
    content: BigRational,
    terms: Vec<(Monomial, BigInt)>,
}

impl HomPoly3 {
    pub fn zero(deg: u32) -> Self {
        HomPoly3 { deg, content: BigRational::zero(), terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_rational_terms(0, vec![([0, 0, 0], c)]).expect("constant is homogeneous")
    }

    /// The coordinate `x` (0), `y` (1) or `z` (2).
    pub fn var(i: usize) -> Self {
        let mut e = [0u32; 3];
        e[i] = 1;
        Self::from_int_terms(1, vec![(e, BigInt::one())]).expect("variable is homogeneous")
    }

    pub fn monomial(e: Monomial, c: BigRational) -> Self {
        Self::from_rational_terms(e.iter().sum(), vec![(e, c)]).expect("monomial is homogeneous")
    }

    /// Build from integer terms; duplicate monomials are summed.
    pub fn from_int_terms(deg: u32, terms: Vec<(Monomial, BigInt)>) -> Result<Self> {
        for (e, _) in &terms {
            if e.iter().sum::<u32>() != deg {
                return Err(Error::DegreeMismatch(format!("monomial {e:?} in a form of degree {deg}")));
            }
        }
        Ok(Self::normalize(deg, BigRational::one(), terms))
    }

    /// Build from rational terms; duplicate monomials are summed.
    pub fn from_rational_terms(deg: u32, terms: Vec<(Monomial, BigRational)>) -> Result<Self> {
        let den = terms.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let ints = terms.into_iter().map(|(e, c)| (e, (c * BigRational::from(den.clone())).to_integer())).collect();
        let mut p = Self::from_int_terms(deg, ints)?;
        p.content /= BigRational::from(den);
        Ok(p)
    }

    fn normalize(deg: u32, scale: BigRational, mut terms: Vec<(Monomial, BigInt)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(Monomial, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        if merged.is_empty() || scale.is_zero() {
            return Self::zero(deg);
        }
        let mut g = BigInt::zero();
        for (_, c) in &merged {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if merged[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in merged.iter_mut() {
                *c /= &g;
            }
        }
        HomPoly3 { deg, content: scale * BigRational::from(g), terms: merged }
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Rational content; the polynomial equals `content * primitive`.
    pub fn content(&self) -> &BigRational {
        &self.content
    }

    /// Primitive integer terms, leading first.
    pub fn primitive_terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    /// Terms with their actual rational coefficients, leading first.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, BigRational)> + '_ {
        self.terms.iter().map(move |(e, c)| (*e, &self.content * BigRational::from(c.clone())))
    }

    pub fn coeff(&self, e: &Monomial) -> BigRational {
        match self.terms.binary_search_by(|t| e.cmp(&t.0)) {
            Ok(i) => &self.content * BigRational::from(self.terms[i].1.clone()),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn leading(&self) -> Option<(Monomial, BigRational)> {
        self.terms().next()
    }

    /// Scalar multiple with graded-lex leading coefficient one.
    pub fn monic(&self) -> Self {
        let mut p = self.clone();
        if !p.is_zero() {
            p.content = BigRational::one();
        }
        p
    }

    /// The primitive integer part as a polynomial with content one.
    pub fn primitive(&self) -> Self {
        self.monic()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero(self.deg);
        }
        let mut p = self.clone();
        p.content *= c;
        p
    }

    pub fn neg(&self) -> Self {
        let mut p = self.clone();
        p.content = -p.content;
        p
    }

    /// Coefficient list scaled to integers, together with the divisor:
    /// `self = terms / den`.
    fn integer_terms_over(&self, den: &BigInt) -> Vec<(Monomial, BigInt)> {
        let factor = (&self.content * BigRational::from(den.clone())).to_integer();
        self.terms.iter().map(|(e, c)| (*e, c * &factor)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.deg != other.deg && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!("adding degree {} and {}", self.deg, other.deg)));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let den = self.content.denom().lcm(other.content.denom());
        let mut terms = self.integer_terms_over(&den);
        terms.extend(other.integer_terms_over(&den));
        Ok(Self::normalize(self.deg, BigRational::new(BigInt::one(), den), terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let deg = self.deg + other.deg;
        if self.is_zero() || other.is_zero() {
            return Self::zero(deg);
        }
        let terms = int_mul(deg, &self.terms, &other.terms);
        let mut p = Self::normalize(deg, BigRational::one(), terms);
        p.content *= &self.content * &other.content;
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = BigRational::from(c.clone());
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += m;
        }
        acc * &self.content
    }

    /// Evaluate at an integer point, returning `primitive(point)`; the true value is this times the content.
    pub fn eval_primitive_int(&self, point: &[BigInt; 3]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += m;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.deg == 0 {
            return Self::zero(0);
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut f = *e;
                f[i] -= 1;
                (f, c * BigInt::from(e[i]))
            })
            .collect();
        Self::normalize(self.deg - 1, self.content.clone(), terms)
    }

    /// Exact quotient `self / other`, or `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() || other.deg > self.deg {
            return None;
        }
        let deg = self.deg - other.deg;
        if self.is_zero() {
            return Some(Self::zero(deg));
        }
        let z_power = |p: &Self| p.terms.iter().map(|(e, _)| e[2]).min().unwrap_or(0);
        if z_power(other) > z_power(self) {
            return None;
        }
        let a = to_nested(&self.terms);
        let b = to_nested(&other.terms);
        let q = super::upoly::Domain::div_exact(&a, &b)?;
        let terms = from_nested(deg, &q);
        let mut p = Self::normalize(deg, BigRational::one(), terms);
        p.content *= &self.content / &other.content;
        Some(p)
    }

    /// Remove the largest monomial factor, returning it as an exponent triple.
    pub fn split_monomial(&self) -> (Monomial, Self) {
        if self.is_zero() {
            return ([0, 0, 0], self.clone());
        }
        let mut m = [u32::MAX; 3];
        for (e, _) in &self.terms {
            for i in 0..3 {
                m[i] = m[i].min(e[i]);
            }
        }
        let terms = self.terms.iter().map(|(e, c)| ([e[0] - m[0], e[1] - m[1], e[2] - m[2]], c.clone())).collect();
        let deg = self.deg - m.iter().sum::<u32>();
        (m, HomPoly3 { deg, content: self.content.clone(), terms })
    }

    /// Total number of decimal digits across all coefficients (approximate).
    pub fn digit_size(&self) -> u64 {
        let bits: u64 = self.terms.iter().map(|(_, c)| c.bits()).sum::<u64>()
            + self.content.numer().bits()
            + self.content.denom().bits();
        bits * 30103 / 100000 + 1
    }

    /// Substitute `(P, Q, R)` for `(x, y, z)`.
    pub fn compose3(&self, args: [&HomPoly3; 3]) -> Result<Self> {
        let d = args[0].deg;
        if args.iter().any(|a| a.deg != d) {
            return Err(Error::DegreeMismatch(format!(
                "substituted forms have degrees {}, {}, {}",
                args[0].deg, args[1].deg, args[2].deg
            )));
        }
        let out_deg = self.deg * d;
        if self.is_zero() {
            return Ok(Self::zero(out_deg));
        }
        // F(cP P', cQ Q', cR R') = sum f_e cP^a cQ^b cR^c P'^a Q'^b R'^c
        let scaled: Vec<(Monomial, BigRational)> = self
            .terms()
            .map(|(e, c)| {
                let mut k = c;
                for (i, &ei) in e.iter().enumerate() {
                    if ei > 0 {
                        k *= num_traits::pow(args[i].content.clone(), ei as usize);
                    }
                }
                (e, k)
            })
            .collect();
        if scaled.iter().all(|(_, c)| c.is_zero()) {
            return Ok(Self::zero(out_deg));
        }
        let outer = Self::from_rational_terms(self.deg, scaled)?;
        let parts = [&args[0].terms, &args[1].terms, &args[2].terms];
        let terms = int_compose(self.deg, &outer.terms, parts, d);
        Ok(Self::normalize(out_deg, outer.content, terms))
    }

    /// Dehomogenize at `z = 1` into `Z[y][x]` (primitive part only).
    pub(crate) fn to_bivariate(&self) -> UPoly<UPoly<BigInt>> {
        to_nested(&self.terms)
    }

    /// Homogenize a polynomial of `Z[y][x]` to the given degree.
    pub(crate) fn from_bivariate(deg: u32, p: &UPoly<UPoly<BigInt>>) -> Result<Self> {
        let mut terms = Vec::new();
        for (a, cy) in p.coeffs().iter().enumerate() {
            for (b, c) in cy.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let s = (a + b) as u32;
                    if s > deg {
                        return Err(Error::DegreeMismatch("homogenization degree too small".into()));
                    }
                    terms.push(([a as u32, b as u32, deg - s], c.clone()));
                }
            }
        }
        Self::from_int_terms(deg, terms)
    }
}

fn to_nested(terms: &[(Monomial, BigInt)]) -> UPoly<UPoly<BigInt>> {
    let max_a = terms.iter().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let mut rows: Vec<Vec<BigInt>> = vec![Vec::new(); max_a + 1];
    for (e, c) in terms {
        let row = &mut rows[e[0] as usize];
        let b = e[1] as usize;
        if row.len() <= b {
            row.resize(b + 1, BigInt::zero());
        }
        row[b] += c;
    }
    UPoly::new(rows.into_iter().map(UPoly::new).collect())
}

/// Rebuild homogeneous terms from a nested polynomial carrying x and y exponents.
fn from_nested(deg: u32, p: &UPoly<UPoly<BigInt>>) -> Vec<(Monomial, BigInt)> {
    let mut terms = Vec::new();
    for (a, cy) in p.coeffs().iter().enumerate() {
        for (b, c) in cy.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push(([a as u32, b as u32, deg - a as u32 - b as u32], c.clone()));
            }
        }
    }
    terms
}

/// Product of integer forms through a dense accumulator.
fn int_mul(deg: u32, a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)]) -> Vec<(Monomial, BigInt)> {
    let mut acc = vec![BigInt::zero(); monomial_count(deg)];
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            acc[dense_index(&e)] += ca * cb;
        }
    }
    collect_dense(deg, acc)
}

fn collect_dense(deg: u32, acc: Vec<BigInt>) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::new();
    for e in monomials(deg) {
        let c = &acc[dense_index(&e)];
        if !c.is_zero() {
            out.push((e, c.clone()));
        }
    }
    out
}

type IntForm = (u32, Vec<(Monomial, BigInt)>);

fn form_mul(a: &IntForm, b: &IntForm) -> IntForm {
    let deg = a.0 + b.0;
    if a.1.is_empty() || b.1.is_empty() {
        return (deg, Vec::new());
    }
    (deg, int_mul(deg, &a.1, &b.1))
}

fn form_add(a: &IntForm, b: &IntForm) -> IntForm {
    debug_assert!(a.1.is_empty() || b.1.is_empty() || a.0 == b.0);
    let deg = a.0.max(b.0);
    let mut acc = vec![BigInt::zero(); monomial_count(deg)];
    for (e, c) in a.1.iter().chain(b.1.iter()) {
        acc[dense_index(e)] += c;
    }
    (deg, collect_dense(deg, acc))
}

fn form_scalar(c: &BigInt) -> IntForm {
    (0, vec![([0, 0, 0], c.clone())])
}

/// Integer substitution `F(P, Q, R)` by nested Horner schemes in `P` then `Q`.
fn int_compose(
    e: u32,
    f: &[(Monomial, BigInt)],
    parts: [&Vec<(Monomial, BigInt)>; 3],
    d: u32,
) -> Vec<(Monomial, BigInt)> {
    let p: IntForm = (d, parts[0].clone());
    let q: IntForm = (d, parts[1].clone());
    let r: IntForm = (d, parts[2].clone());
    let mut r_pows: Vec<IntForm> = vec![form_scalar(&BigInt::one())];
    for _ in 0..e {
        let next = form_mul(r_pows.last().unwrap(), &r);
        r_pows.push(next);
    }
    let coeff = |a: u32, b: u32| -> Option<&BigInt> {
        let c = e - a - b;
        f.binary_search_by(|t| [a, b, c].cmp(&t.0)).ok().map(|i| &f[i].1)
    };
    let mut s: Option<IntForm> = None;
    for a in (0..=e).rev() {
        let k = e - a;
        let has_terms = (0..=k).any(|b| coeff(a, b).is_some());
        let g_a: Option<IntForm> = if has_terms {
            // sum_b f_{a,b} Q^b R^{k-b}, Horner in Q
            let mut h: IntForm = coeff(a, k).map(form_scalar).unwrap_or((0, Vec::new()));
            for i in 1..=k {
                h = form_mul(&h, &q);
                h.0 = d * i;
                if let Some(c) = coeff(a, k - i) {
                    let rp = &r_pows[i as usize];
                    let term: IntForm = (rp.0, rp.1.iter().map(|(m, v)| (*m, v * c)).collect());
                    h = form_add(&h, &term);
                }
            }
            h.0 = d * k;
            Some(h)
        } else {
            None
        };
        s = match (s, g_a) {
            (None, g) => g.or(Some((d * k, Vec::new()))),
            (Some(acc), g) => {
                let mut next = form_mul(&acc, &p);
                next.0 = d * k;
                if let Some(g) = g {
                    next = form_add(&next, &g);
                }
                Some(next)
            }
        };
    }
    s.map(|f| f.1).unwrap_or_default()
}

impl fmt::Debug for HomPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let is_const = e == [0, 0, 0];
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            for (name, k) in ["x", "y", "z"].iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    _ => write!(f, "{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}
