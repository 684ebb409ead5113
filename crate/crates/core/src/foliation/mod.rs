//! Polynomial 1-forms in a chart and their local analysis.

pub mod form;
pub mod local;

pub use form::{parse_one_form, parse_one_form_in, OneForm, Point};
pub use local::{
    camacho_sad_index, classify_singularity, dulac_invariant, is_axis_invariant, tangency_order, z_index, Axis,
    Direction, SeparatrixData, SingularityKind, SingularityReport,
};
