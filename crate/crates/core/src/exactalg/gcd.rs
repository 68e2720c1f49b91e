//! GCD of homogeneous forms.

use super::modgcd::bivariate_gcd;
use super::modp::{certify_coprime, DEFAULT_PRIME};
use super::poly::{HomPoly3, Monomial};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Greatest common divisor with graded-lex leading coefficient one.
pub fn poly_gcd(f: &HomPoly3, g: &HomPoly3) -> Result<HomPoly3> {
    gcd_many(&[f, g])
}

/// GCD of several forms. Fails only if all are zero.
pub fn gcd_many(forms: &[&HomPoly3]) -> Result<HomPoly3> {
    let nonzero: Vec<&HomPoly3> = forms.iter().copied().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidInput("gcd of zero polynomials".into()));
    }
    if nonzero.len() == 1 {
        return Ok(nonzero[0].monic());
    }
    let mut common: Monomial = [u32::MAX; 3];
    for f in &nonzero {
        let (m, _) = f.split_monomial();
        for i in 0..3 {
            common[i] = common[i].min(m[i]);
        }
    }
    let mono = HomPoly3::monomial(common, BigRational::one());
    let stripped: Vec<HomPoly3> =
        nonzero.iter().map(|f| f.div_exact(&mono).expect("common monomial divides")).collect();
    if stripped.iter().any(|f| f.deg() == 0) {
        return Ok(mono);
    }
    let inputs: Vec<(u32, Vec<([u32; 3], BigInt)>)> =
        stripped.iter().map(|f| (f.deg(), f.primitive_terms().to_vec())).collect();
    if certify_coprime(&inputs, DEFAULT_PRIME, 2) {
        return Ok(mono);
    }
    let bivariate: Vec<_> = stripped.iter().map(HomPoly3::to_bivariate).collect();
    let acc = bivariate_gcd(&bivariate);
    let total =
        acc.coeffs().iter().enumerate().filter_map(|(a, c)| c.degree().map(|b| (a + b) as u32)).max().unwrap_or(0);
    let g = HomPoly3::from_bivariate(total, &acc)?;
    Ok(g.mul(&mono).monic())
}
