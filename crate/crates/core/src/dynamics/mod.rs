//! Monomial birational maps of ℙ¹×ℙ¹ and growth classes.

mod bir;
mod monomial;

use serde::Serialize;

use crate::algebra::QuadNumber;

pub use bir::{bir_group_classify, integer_relation, BirClassification, SearchBounds};
pub use monomial::{
    class_action, commutes_with_kummer_involution, degree_sequence, growth_class, invariant_foliations, is_algebraically_stable,
    pullback_action, pullback_log_form, stabilize_conjugate, BigMatrix2, LinearFoliation, MonomialMap,
};

/// Growth of `‖(φⁿ)*‖`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "rate")]
pub enum GrowthClass {
    Bounded,
    Linear,
    Quadratic,
    /// Carries the exact dynamical degree `λ₁ > 1`.
    Exponential(QuadNumber),
}

impl GrowthClass {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthClass::Bounded => "Bounded",
            GrowthClass::Linear => "Linear",
            GrowthClass::Quadratic => "Quadratic",
            GrowthClass::Exponential(_) => "Exponential",
        }
    }
}
