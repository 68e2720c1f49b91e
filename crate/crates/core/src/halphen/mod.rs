//! The lattice `Z^{1,9}` of a rational surface obtained by blowing up nine
//! points, with the quotient geometry attached to the fiber class `xi`:
//! horosphere points, root enumeration, translations and conjugacy.

mod conjugacy;
mod lattice;
mod model;

pub use conjugacy::{
    conjugacy_search, model_permutations, solve_conjugacy_translation, ConjugacyResult, TranslationSolution,
};
pub use lattice::{
    enumerate_irr_candidates, gram_matrix, horosphere_point, intersection, is_parabolic_isometry, isometry_degree,
    q_norm, rational_intersection, roots_modulo_xi, roots_modulo_xi_by_box, NSIsometry, NSVector, RationalClass, RANK,
};
pub use model::{
    axis_translation_vector, translation_action, translation_part, verify_degree_identity, HalphenModel,
    TranslationPart, DEFAULT_IRR_BOUND,
};
