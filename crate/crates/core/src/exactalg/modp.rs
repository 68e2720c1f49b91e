//! Arithmetic modulo a word-sized prime and restrictions of forms to lines.
//!
//! Used as a certificate: if the restrictions of two integer forms to a line
//! over `F_p` are nonzero and coprime as binary forms, the forms are coprime
//! over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Default prime for modular filters.
pub const DEFAULT_PRIME: u64 = 1_000_003;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod p");
    pow_mod(a, p - 2, p)
}

/// Reduce an integer into `[0, p)`.
pub fn reduce(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// Dense polynomial over `F_p`, coefficients low to high, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyP {
    pub coeffs: Vec<u64>,
}

impl PolyP {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyP { coeffs }
    }

    pub fn zero() -> Self {
        PolyP { coeffs: Vec::new() }
    }

    pub fn constant(c: u64) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| add_mod(self.coeffs.get(i).copied().unwrap_or(0), other.coeffs.get(i).copied().unwrap_or(0), p))
            .collect();
        Self::new(out)
    }

    pub fn scale(&self, c: u64, p: u64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect())
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = (p as u128) * (p as u128);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += a as u128 * b as u128;
                if *slot >= pp {
                    *slot -= pp;
                }
            }
        }
        Self::new(acc.into_iter().map(|v| (v % p as u128) as u64).collect())
    }

    fn rem(&self, b: &Self, p: u64) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let inv = inv_mod(*b.coeffs.last().unwrap(), p);
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let c = mul_mod(r[top], inv, p);
            if c != 0 {
                for (k, &bk) in b.coeffs.iter().enumerate() {
                    let idx = top - db + k;
                    r[idx] = sub_mod(r[idx], mul_mod(c, bk, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic GCD by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.coeffs.last() {
            a = a.scale(inv_mod(lc, p), p);
        }
        a
    }

    pub fn eval(&self, t: u64, p: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, t, p), c, p))
    }
}

/// Interpolate values at `0, 1, …, n-1` (Newton form) into a polynomial of degree < n.
pub fn interpolate_consecutive(values: &[u64], p: u64) -> PolyP {
    let n = values.len();
    assert!((n as u64) < p);
    let mut dd = values.to_vec();
    for j in 1..n {
        let inv = inv_mod(j as u64, p);
        for i in (j..n).rev() {
            dd[i] = mul_mod(sub_mod(dd[i], dd[i - 1], p), inv, p);
        }
    }
    let mut poly = PolyP::zero();
    for i in (0..n).rev() {
        // poly = poly * (t - i) + dd[i]
        let shift = PolyP::new(vec![sub_mod(0, i as u64 % p, p), 1]);
        poly = poly.mul(&shift, p).add(&PolyP::constant(dd[i]), p);
    }
    poly
}

/// Binary form of a formal degree, stored dehomogenized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: usize,
    pub poly: PolyP,
}

impl BinaryForm {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// Degree of the GCD of nonzero binary forms, counting the point at infinity.
/// Returns `None` if any form vanishes identically.
pub fn binary_gcd_degree(forms: &[BinaryForm], p: u64) -> Option<usize> {
    if forms.iter().any(BinaryForm::is_zero) {
        return None;
    }
    let at_infinity = forms.iter().map(|f| f.degree - f.poly.degree().unwrap()).min().unwrap_or(0);
    let mut g = PolyP::zero();
    for f in forms {
        g = g.gcd(&f.poly, p);
        if g.degree() == Some(0) {
            break;
        }
    }
    Some(g.degree().unwrap_or(0) + at_infinity)
}

/// A line `base + t * dir` in `F_p^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineP {
    pub base: [u64; 3],
    pub dir: [u64; 3],
}

impl LineP {
    /// A fixed line with scattered coordinates, derived from a small counter.
    pub fn scattered(k: u64, p: u64) -> Self {
        let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ k.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        let mut next = || {
            state ^= state >> 30;
            state = state.wrapping_mul(0xbf58_476d_1ce4_e5b9);
            state ^= state >> 27;
            state = state.wrapping_mul(0x94d0_49bb_1331_11eb);
            state ^= state >> 31;
            state % p
        };
        LineP { base: [next(), next(), next()], dir: [next(), next(), next()] }
    }

    /// The three coordinate linear forms as polynomials in `t`.
    pub fn coordinate_forms(&self, p: u64) -> [BinaryForm; 3] {
        let f = |i: usize| BinaryForm { degree: 1, poly: PolyP::new(vec![self.base[i] % p, self.dir[i] % p]) };
        [f(0), f(1), f(2)]
    }
}

/// Evaluate an integer form given by `(exponents, coefficient mod p)` terms on a binary-form triple.
pub fn substitute_forms(degree: u32, terms: &[([u32; 3], u64)], args: &[BinaryForm; 3], p: u64) -> BinaryForm {
    let out_degree = degree as usize * args[0].degree;
    debug_assert!(args.iter().all(|a| a.degree == args[0].degree));
    let mut pow_cache: [Vec<PolyP>; 3] = [vec![PolyP::constant(1)], vec![PolyP::constant(1)], vec![PolyP::constant(1)]];
    for (v, cache) in pow_cache.iter_mut().enumerate() {
        for _ in 0..degree {
            let next = cache.last().unwrap().mul(&args[v].poly, p);
            cache.push(next);
        }
    }
    let mut acc = PolyP::zero();
    for (e, c) in terms {
        if *c == 0 {
            continue;
        }
        let m = pow_cache[0][e[0] as usize].mul(&pow_cache[1][e[1] as usize], p).mul(&pow_cache[2][e[2] as usize], p);
        acc = acc.add(&m.scale(*c, p), p);
    }
    BinaryForm { degree: out_degree, poly: acc }
}

/// Restriction of an integer form to a line, computed by evaluation and interpolation.
pub fn restrict_to_line(degree: u32, terms: &[([u32; 3], BigInt)], line: &LineP, p: u64) -> BinaryForm {
    let d = degree as usize;
    let reduced: Vec<([u32; 3], u64)> =
        terms.iter().map(|(e, c)| (*e, reduce(c, p))).filter(|(_, c)| *c != 0).collect();
    let values: Vec<u64> = (0..=d as u64)
        .map(|t| {
            let pt: Vec<u64> = (0..3).map(|i| add_mod(line.base[i] % p, mul_mod(t, line.dir[i] % p, p), p)).collect();
            let pows: Vec<Vec<u64>> = pt
                .iter()
                .map(|&x| {
                    let mut v = Vec::with_capacity(d + 1);
                    let mut acc = 1u64;
                    for _ in 0..=d {
                        v.push(acc);
                        acc = mul_mod(acc, x, p);
                    }
                    v
                })
                .collect();
            reduced.iter().fold(0u64, |acc, (e, c)| {
                let m = mul_mod(mul_mod(pows[0][e[0] as usize], pows[1][e[1] as usize], p), pows[2][e[2] as usize], p);
                add_mod(acc, mul_mod(m, *c, p), p)
            })
        })
        .collect();
    BinaryForm { degree: d, poly: interpolate_consecutive(&values, p) }
}

/// True when integer forms are certified coprime over `Q` by some line over `F_p`.
pub fn certify_coprime(forms: &[(u32, Vec<([u32; 3], BigInt)>)], p: u64, attempts: u64) -> bool {
    if forms.iter().any(|(_, t)| t.iter().all(|(_, c)| (c % BigInt::from(p)).is_zero())) {
        return false;
    }
    for k in 0..attempts {
        let line = LineP::scattered(k, p);
        let restricted: Vec<BinaryForm> = forms.iter().map(|(d, t)| restrict_to_line(*d, t, &line, p)).collect();
        if binary_gcd_degree(&restricted, p) == Some(0) {
            return true;
        }
    }
    false
}
