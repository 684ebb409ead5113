pub mod algebra;
pub mod error;
pub mod expr;
pub mod foliation;
pub mod blowup;
pub mod dynamics;
pub mod torus;
pub mod liouville;
