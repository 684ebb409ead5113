//! Blowups, surface models, reduction of singularities and flips.

mod flip;
mod model;
mod monomial;
mod reduce;

pub use flip::{flip, riccati_local_model, FlipSide};
pub use model::{
    BaseAtlas, BlowupRecord, Chart, ChartOrigin, CsCheck, CsContribution, Curve, LocatedReport, Occurrence, Side,
    SurfaceModel, TfDot,
};
pub use monomial::{monomial_pullback, monomial_substitution, Monomial, BLOWUP_CHART_1, BLOWUP_CHART_2};
pub use reduce::{replay, seidenberg_reduce, ReductionTrace, StoredTrace, TraceStep, TRACE_SCHEMA_VERSION};
