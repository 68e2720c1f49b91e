//! Dense univariate polynomials over a GCD domain, with subresultant GCD.
//!
//! Nesting `UPoly<UPoly<BigInt>>` gives `Z[y][x]`, which is how bivariate
//! GCDs are computed: content in `Z[y]`, primitive part by a subresultant
//! remainder sequence in `x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// Operations needed from a coefficient ring.
pub trait Domain: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient, or `None` when `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Greatest common divisor, unit-normalized.
    fn gcd(&self, other: &Self) -> Self;
    fn is_negative(&self) -> bool;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Domain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        if Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Dense polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Domain> UPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::new(Vec::new());
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    fn shifted_scaled(&self, shift: usize, c: &R) -> Self {
        let mut coeffs = vec![R::zero(); shift];
        coeffs.extend(self.coeffs.iter().map(|a| a.mul(c)));
        Self::new(coeffs)
    }

    pub fn div_exact_scalar(&self, c: &R) -> Option<Self> {
        let coeffs: Option<Vec<R>> = self.coeffs.iter().map(|a| a.div_exact(c)).collect();
        coeffs.map(Self::new)
    }

    /// GCD of the coefficients.
    pub fn content(&self) -> R {
        let mut g = R::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g == R::one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let c = self.content();
        let pp = self.div_exact_scalar(&c).expect("content divides every coefficient");
        pp.unit_normal()
    }

    fn unit_normal(self) -> Self {
        if self.lc().is_negative() {
            Domain::neg(&self)
        } else {
            self
        }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero");
        let Some(da) = self.degree() else {
            return self.clone();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let s = r.lc();
            r = Domain::sub(&r.scale(&lb), &b.shifted_scaled(dr - db, &s));
            e -= 1;
        }
        if e > 0 {
            r = r.scale(&lb.pow(e as u32));
        }
        r
    }

    fn subresultant_primitive_gcd(a: Self, b: Self) -> Self {
        let (mut a, mut b) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
        let mut g = R::one();
        let mut h = R::one();
        loop {
            let delta = (a.degree().unwrap() - b.degree().unwrap()) as u32;
            let r = a.prem(&b);
            match r.degree() {
                None => return b.primitive_part(),
                Some(0) => return Self::constant(R::one()),
                Some(_) => {}
            }
            a = b;
            let divisor = g.mul(&h.pow(delta));
            b = r.div_exact_scalar(&divisor).expect("subresultant division is exact");
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant h update is exact")
            };
        }
    }
}

impl<R: Domain> Domain for UPoly<R> {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        UPoly { coeffs: vec![R::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&Domain::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        let db = other.degree()?;
        let Some(da) = self.degree() else {
            return Some(Self::zero());
        };
        if da < db {
            return None;
        }
        let lb = other.lc();
        let mut r = self.clone();
        let mut q = vec![R::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let c = r.lc().div_exact(&lb)?;
            r = Domain::sub(&r, &other.shifted_scaled(dr - db, &c));
            q[dr - db] = c;
        }
        Some(Self::new(q))
    }
    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone().unit_normal();
        }
        if other.is_zero() {
            return self.clone().unit_normal();
        }
        let c = self.content().gcd(&other.content());
        let pa = self.primitive_part();
        let pb = other.primitive_part();
        let g = Self::subresultant_primitive_gcd(pa, pb);
        g.scale(&c).unit_normal()
    }
    fn is_negative(&self) -> bool {
        self.lc().is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> UPoly<BigInt> {
        UPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn integer_gcd_of_products() {
        // (x+1)(x-2) and (x+1)(x+3)
        let a = zp(&[-2, -1, 1]);
        let b = zp(&[3, 4, 1]);
        assert_eq!(a.gcd(&b), zp(&[1, 1]));
    }

    #[test]
    fn gcd_keeps_integer_content() {
        let a = zp(&[6, 6]);
        let b = zp(&[4, 4]);
        assert_eq!(a.gcd(&b), zp(&[2, 2]));
    }

    #[test]
    fn coprime_gives_one() {
        assert_eq!(zp(&[1, 0, 1]).gcd(&zp(&[0, 1])), zp(&[1]));
    }

    #[test]
    fn exact_division() {
        let a = zp(&[-2, -1, 1]);
        assert_eq!(a.div_exact(&zp(&[1, 1])), Some(zp(&[-2, 1])));
        assert_eq!(a.div_exact(&zp(&[1, 2])), None);
    }

    #[test]
    fn nested_bivariate_gcd() {
        // x^2 - y^2 and x^2 + 2xy + y^2 over Z[y][x]
        let c = |v: &[i64]| zp(v);
        let a = UPoly::new(vec![c(&[0, 0, -1]), c(&[]), c(&[1])]);
        let b = UPoly::new(vec![c(&[0, 0, 1]), c(&[0, 2]), c(&[1])]);
        let g = a.gcd(&b);
        assert_eq!(g, UPoly::new(vec![c(&[0, 1]), c(&[1])]));
    }

    #[test]
    fn prem_matches_definition() {
        let a = zp(&[1, 2, 3]);
        let b = zp(&[1, 2]);
        // 4*(3x^2+2x+1) = (6x+1)(2x+1) + 3
        assert_eq!(a.prem(&b), zp(&[3]));
    }
}
