//! Modular GCD in `Z[y][x]`: images over `F_p` by evaluation in `y`,
//! recombined by Chinese remaindering and confirmed by exact division.

use super::modp::{add_mod, inv_mod, mul_mod, reduce, sub_mod, PolyP};
use super::upoly::{Domain, UPoly};
use num_bigint::BigInt;
use num_integer::Integer;

type Biv = UPoly<UPoly<BigInt>>;

/// GCD of nonzero bivariate polynomials, unit-normalized as in [`Domain::gcd`].
pub fn bivariate_gcd(polys: &[Biv]) -> Biv {
    let contents: Vec<UPoly<BigInt>> = polys.iter().map(UPoly::content).collect();
    let content = contents.iter().fold(UPoly::<BigInt>::zero(), |g, c| g.gcd(c));
    let prims: Vec<Biv> = polys.iter().map(UPoly::primitive_part).collect();
    let prim = primitive_gcd(&prims);
    prim.scale(&content).primitive_part_sign()
}

trait SignNormal {
    fn primitive_part_sign(self) -> Self;
}

impl SignNormal for Biv {
    fn primitive_part_sign(self) -> Self {
        if self.is_negative() {
            Domain::neg(&self)
        } else {
            self
        }
    }
}

/// GCD of polynomials primitive over `Z[y]`.
fn primitive_gcd(prims: &[Biv]) -> Biv {
    let one = <Biv as Domain>::one();
    if prims.iter().any(|f| f.degree() == Some(0)) {
        return one;
    }
    let gamma = prims.iter().fold(UPoly::<BigInt>::zero(), |g, f| g.gcd(&f.lc()));
    let gamma_deg = gamma.degree().unwrap_or(0);
    let y_deg = |f: &Biv| f.coeffs().iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let y_bound = gamma_deg + prims.iter().map(y_deg).min().unwrap_or(0);
    let x_degs: Vec<usize> = prims.iter().map(|f| f.degree().unwrap()).collect();

    let mut primes = PrimeSource::new();
    // accumulated image: x-degree, modulus, coefficients [x][y] as residues
    let mut acc: Option<(usize, BigInt, Vec<Vec<BigInt>>)> = None;
    let mut last_lift: Option<Biv> = None;
    loop {
        let p = primes.next();
        let Some((deg, image)) = image_mod_p(prims, &gamma, gamma_deg, y_bound, &x_degs, p) else {
            continue;
        };
        if deg == 0 {
            return one;
        }
        acc = match acc.take() {
            Some((d, m, coeffs)) if d == deg => Some(crt_combine(m, coeffs, p, &image)),
            Some((d, m, coeffs)) if d < deg => Some((d, m, coeffs)),
            _ => Some((
                deg,
                BigInt::from(p),
                image.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            )),
        };
        let (_, m, coeffs) = acc.as_ref().unwrap();
        let lift = symmetric_lift(m, coeffs);
        if last_lift.as_ref() == Some(&lift) {
            let candidate = lift.primitive_part();
            if prims.iter().all(|f| f.div_exact(&candidate).is_some()) {
                return candidate;
            }
        }
        last_lift = Some(lift);
    }
}

/// `γ(y) · G / lc_x(G)` modulo `p`, or `None` for an unlucky prime.
fn image_mod_p(
    prims: &[Biv],
    gamma: &UPoly<BigInt>,
    gamma_deg: usize,
    y_bound: usize,
    x_degs: &[usize],
    p: u64,
) -> Option<(usize, Vec<Vec<u64>>)> {
    let reduce_y = |c: &UPoly<BigInt>| PolyP::new(c.coeffs().iter().map(|v| reduce(v, p)).collect());
    let gamma_p = reduce_y(gamma);
    if gamma_p.degree() != Some(gamma_deg) {
        return None;
    }
    let reduced: Vec<Vec<PolyP>> = prims.iter().map(|f| f.coeffs().iter().map(reduce_y).collect()).collect();
    if reduced.iter().zip(x_degs).any(|(f, &d)| f[d].is_zero()) {
        return None;
    }
    let mut points: Vec<u64> = Vec::new();
    let mut values: Vec<PolyP> = Vec::new();
    let mut min_deg = usize::MAX;
    let mut b = 0u64;
    while points.len() <= y_bound {
        b += 1;
        if b >= p {
            return None;
        }
        let gb = gamma_p.eval(b, p);
        if gb == 0 || reduced.iter().zip(x_degs).any(|(f, &d)| f[d].eval(b, p) == 0) {
            continue;
        }
        let mut h = PolyP::zero();
        for f in &reduced {
            let at_b = PolyP::new(f.iter().map(|c| c.eval(b, p)).collect());
            h = h.gcd(&at_b, p);
            if h.degree() == Some(0) {
                break;
            }
        }
        let deg = h.degree().unwrap_or(0);
        if deg == 0 {
            return Some((0, vec![vec![1]]));
        }
        if deg > min_deg {
            continue;
        }
        if deg < min_deg {
            min_deg = deg;
            points.clear();
            values.clear();
        }
        points.push(b);
        values.push(h.scale(gb, p));
    }
    let mut image = Vec::with_capacity(min_deg + 1);
    for j in 0..=min_deg {
        let ys: Vec<u64> = values.iter().map(|h| coeff(h, j)).collect();
        image.push(newton_interpolate(&points, &ys, p));
    }
    Some((min_deg, image))
}

fn coeff(h: &PolyP, j: usize) -> u64 {
    h.coeffs.get(j).copied().unwrap_or(0)
}

/// Coefficients, low to high, of the polynomial through `(xs[i], ys[i])`.
fn newton_interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1], p);
            let den = sub_mod(xs[i], xs[i - level], p);
            dd[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    let mut poly = vec![0u64; n];
    for i in (0..n).rev() {
        // poly = poly * (y - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if poly[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add_mod(next[k + 1], poly[k], p);
            }
            next[k] = sub_mod(next[k], mul_mod(poly[k], xs[i] % p, p), p);
        }
        next[0] = add_mod(next[0], dd[i], p);
        poly = next;
    }
    poly
}

fn crt_combine(m: BigInt, coeffs: Vec<Vec<BigInt>>, p: u64, image: &[Vec<u64>]) -> (usize, BigInt, Vec<Vec<BigInt>>) {
    let m_inv = inv_mod(reduce(&m, p), p);
    let out: Vec<Vec<BigInt>> = coeffs
        .into_iter()
        .zip(image)
        .map(|(row, new)| {
            row.into_iter()
                .zip(new)
                .map(|(a, &r)| {
                    let t = mul_mod(sub_mod(r, reduce(&a, p), p), m_inv, p);
                    a + &m * BigInt::from(t)
                })
                .collect()
        })
        .collect();
    let deg = out.len() - 1;
    (deg, m * BigInt::from(p), out)
}

fn symmetric_lift(m: &BigInt, coeffs: &[Vec<BigInt>]) -> Biv {
    let half: BigInt = m >> 1;
    UPoly::new(
        coeffs
            .iter()
            .map(|row| {
                UPoly::new(
                    row.iter()
                        .map(|a| {
                            let a = a.mod_floor(m);
                            if a > half {
                                a - m
                            } else {
                                a
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Primes just below `2^62`, in decreasing order.
struct PrimeSource {
    next_candidate: u64,
}

impl PrimeSource {
    fn new() -> Self {
        PrimeSource { next_candidate: (1u64 << 62) - 1 }
    }

    fn next(&mut self) -> u64 {
        loop {
            let c = self.next_candidate;
            self.next_candidate -= 2;
            if is_prime(c) {
                return c;
            }
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &BASES {
        let mut x = super::modp::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
