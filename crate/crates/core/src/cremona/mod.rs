//! Plane birational maps and the growth of their iterates.

mod degrees;
mod map;

pub use degrees::{
    classify, conjugate_degree_sequence, degree_sequence, degree_sequence_with, dynamical_degree_upper_bounds,
    first_unproved_maximal_step, running_infimum, Certificate, Classification, DegreeOptions, DegreeReport,
    GrowthClass, RootBound, DEFAULT_BUDGET_DIGITS,
};
pub use map::{int_point, normalize_point, point_from_json, point_to_json, same_point, IntPoint, PlaneBirationalMap};
