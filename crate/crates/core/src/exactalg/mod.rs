//! Exact arithmetic: homogeneous polynomials in three variables, GCDs,
//! linear algebra over `Q` and normal forms over `Z`.

mod gcd;
mod linalg;
mod modgcd;
pub mod modp;
mod poly;
pub mod serial;
pub mod upoly;
mod zmatrix;

pub use gcd::{gcd_many, poly_gcd};
pub use linalg::{kernel_basis, primitive_integer_vector, QMatrix};
pub use poly::{monomial_count, monomials, HomPoly3, Monomial};
pub use zmatrix::{
    hermite_normal_form, hermite_reduce, integer_kernel, minimal_preimage, smith_normal_form, smith_rank, ZMatrix,
};

use crate::error::Result;
use num_bigint::BigInt;
use num_rational::BigRational;

/// `F(P, Q, R)` as a formal substitution.
pub fn poly_compose3(f: &HomPoly3, triple: (&HomPoly3, &HomPoly3, &HomPoly3)) -> Result<HomPoly3> {
    f.compose3([triple.0, triple.1, triple.2])
}

/// Rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
