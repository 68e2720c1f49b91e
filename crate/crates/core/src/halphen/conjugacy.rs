use super::lattice::{isometry_degree, quotient_times_three, NSIsometry, NSVector, RANK};
use super::model::HalphenModel;
use crate::error::{Error, Result};
use crate::exactalg::{minimal_preimage, smith_normal_form, QMatrix, ZMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

/// Bounded solution of `(L - Id) s = s'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationSolution {
    pub solution: Vec<BigInt>,
    /// `C^2 = |U|_F^2 |V|_F^2` for the Smith decomposition `U (L - Id) V = S`,
    /// so that `|s|^2 <= C^2 |s'|^2`.
    pub bound_constant_sq: BigInt,
}

fn frobenius_sq(m: &ZMatrix) -> BigInt {
    (0..m.rows()).flat_map(|i| m.row(i).iter()).map(|x| x * x).sum()
}

fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

impl TranslationSolution {
    pub fn within_bound(&self, s_prime: &[BigInt]) -> bool {
        norm_sq(&self.solution) <= &self.bound_constant_sq * norm_sq(s_prime)
    }
}

/// Integer solution of `(L_g - Id) s = s'` of small Euclidean norm, or `None`
/// when `s'` is not in the image.
pub fn solve_conjugacy_translation(l_g: &ZMatrix, s_prime: &[BigInt]) -> Result<Option<TranslationSolution>> {
    let n = l_g.rows();
    if l_g.cols() != n || s_prime.len() != n {
        return Err(Error::InvalidInput("linear part must be square and match the vector".into()));
    }
    let mut phi = l_g.clone();
    for i in 0..n {
        let v = phi.get(i, i) - 1;
        phi.set(i, i, v);
    }
    let (u, _, v) = smith_normal_form(&phi);
    let bound_constant_sq = frobenius_sq(&u) * frobenius_sq(&v);
    Ok(minimal_preimage(&phi, s_prime, &QMatrix::identity(n))
        .map(|solution| TranslationSolution { solution, bound_constant_sq }))
}

/// Outcome of [`conjugacy_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyResult {
    pub conjugator: Option<NSIsometry>,
    /// Constant `A` with `deg(h) <= A (deg f + deg g)` for the returned `h`.
    pub degree_constant: Option<f64>,
    pub linear_parts_tried: usize,
}

impl ConjugacyResult {
    pub fn to_json(&self) -> Value {
        json!({
            "found": self.conjugator.is_some(),
            "conjugator": self.conjugator.as_ref().map(NSIsometry::to_json),
            "conjugator_degree": self.conjugator.as_ref().map(isometry_degree),
            "degree_constant": self.degree_constant,
            "linear_parts_tried": self.linear_parts_tried,
        })
    }
}

/// `3 t(M)` in integer quotient coordinates.
fn translation_times_three(m: &NSIsometry) -> Result<[i64; RANK]> {
    Ok(quotient_times_three(&m.image(0).checked_sub(&NSVector::basis(0))?))
}

fn same_linear_part(a: &NSIsometry, b: &NSIsometry) -> bool {
    // the classes e_j - e9 span the quotient
    let last = |m: &NSIsometry, j: usize| m.image(j).checked_sub(&m.image(RANK - 1)).map(|v| quotient_times_three(&v));
    (1..RANK - 1).all(|j| matches!((last(a, j), last(b, j)), (Ok(x), Ok(y)) if x == y))
}

/// Permutations of `e1..e9` preserving the model, generated lazily.
pub fn model_permutations(model: &HalphenModel) -> impl Iterator<Item = NSIsometry> + '_ {
    use itertools::Itertools;
    (0..RANK - 1)
        .permutations(RANK - 1)
        .filter_map(|p| NSIsometry::permutation(&p).ok())
        .filter(move |p| model.preserved_by(p))
}

/// Search for `h = T_gamma ∘ lambda` with `h f h^{-1} = g`, where `lambda` runs
/// over `linear_parts` and `gamma` over the translations preserving the model.
///
/// For each `lambda` whose conjugate of `f` has the linear part of `g`, the
/// translation equation is solved by a Smith-bounded preimage and the result
/// is verified exactly.
pub fn conjugacy_search(
    f: &NSIsometry,
    g: &NSIsometry,
    model: &HalphenModel,
    linear_parts: impl IntoIterator<Item = NSIsometry>,
) -> Result<ConjugacyResult> {
    for (name, m) in [("f", f), ("g", g)] {
        if !model.preserved_by(m) {
            return Err(Error::InvalidInput(format!("{name} does not preserve the model")));
        }
    }
    if f == g {
        return Ok(ConjugacyResult {
            conjugator: Some(NSIsometry::identity()),
            degree_constant: Some(1.0),
            linear_parts_tried: 0,
        });
    }
    let basis = model.translation_lattice();
    let images: Vec<[i64; RANK]> = basis.iter().map(quotient_times_three).collect();
    let k = basis.len();
    let mut gram = vec![vec![BigRational::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let dot: i64 = (1..RANK).map(|i| images[a][i] * images[b][i]).sum();
            gram[a][b] = BigRational::from(BigInt::from(dot));
        }
    }
    let gram = QMatrix::from_rows(gram)?;
    let trace: f64 = (0..k).map(|i| gram.get(i, i).to_f64().unwrap_or(f64::INFINITY)).sum();

    // columns 3 q((g - Id) b)
    let mut phi = ZMatrix::zeros(RANK, k);
    for (col, b) in basis.iter().enumerate() {
        let moved = quotient_times_three(&g.apply(b)?.checked_sub(b)?);
        for (i, x) in moved.iter().enumerate() {
            phi.set(i, col, BigInt::from(3 * x));
        }
    }
    let (u, _, v) = smith_normal_form(&phi);
    let snf_sq = (frobenius_sq(&u) * frobenius_sq(&v)).to_f64().unwrap_or(f64::INFINITY);
    let c = 3.0 * (trace * snf_sq).sqrt();
    let t_g = translation_times_three(g)?;

    let mut tried = 0;
    for lambda in linear_parts {
        tried += 1;
        if !model.preserved_by(&lambda) {
            return Err(Error::InvalidInput("linear part does not preserve the model".into()));
        }
        let lambda_inv = lambda.inverse()?;
        let conj = lambda.compose(f)?.compose(&lambda_inv)?;
        if !same_linear_part(&conj, g) {
            continue;
        }
        let t_conj = translation_times_three(&conj)?;
        let rhs: Vec<BigInt> = (0..RANK).map(|i| BigInt::from(t_conj[i] - t_g[i])).collect();
        let Some(coef) = minimal_preimage(&phi, &rhs, &gram) else {
            continue;
        };
        let mut gamma = NSVector::zero();
        for (ci, b) in coef.iter().zip(&basis) {
            let ci = ci.to_i64().ok_or_else(super::lattice::overflow)?;
            gamma = gamma.checked_add(&b.checked_scale(ci)?)?;
        }
        let h = NSIsometry::translation(&gamma)?.compose(&lambda)?;
        if h.compose(f)?.compose(&h.inverse()?)? != *g {
            return Err(Error::Verification("conjugator failed the exact check".into()));
        }
        let a_sq = 2.0 * (isometry_degree(&lambda) - 1) as f64;
        let constant = (1.0 + a_sq * (1.0 + 2.0 * c).powi(2)) / 2.0 + 4.0 * c * c;
        return Ok(ConjugacyResult { conjugator: Some(h), degree_constant: Some(constant), linear_parts_tried: tried });
    }
    Ok(ConjugacyResult { conjugator: None, degree_constant: None, linear_parts_tried: tried })
}
