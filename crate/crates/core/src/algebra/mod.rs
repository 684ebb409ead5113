//! Exact arithmetic substrate: quadratic-field numbers, sparse bivariate
//! polynomials, univariate polynomials and rational functions, root
//! extraction, and small matrices.

pub mod bipoly;
pub mod birat;
pub mod matrix;
pub mod quad;
pub mod roots;
pub mod unipoly;
pub mod unirat;

pub use bipoly::{BiPoly, LaurentPoly};
pub use birat::BiRat;
pub use matrix::{eigen2, euler_phi, matrix_order, Eigen2, IntMatrix2, MatrixOrder, SquareMatrix};
pub use quad::{QuadNumber, Rational};
pub use roots::{roots_in_tower, Root};
pub use unipoly::UniPoly;
pub use unirat::UniRat;

use num_traits::{Signed, Zero};

/// A signed term for pretty printing: `(is_negative, body)`.
pub(crate) fn format_term(c: &QuadNumber, mono: &str) -> String {
    let (neg, body) = if c.is_rational() {
        let r = c.rational_part();
        let a = r.abs();
        let txt = if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        let body = if mono.is_empty() {
            txt
        } else if a == num_traits::One::one() {
            mono.to_string()
        } else {
            format!("{txt}*{mono}")
        };
        (r.is_negative(), body)
    } else if c.rational_part().is_zero() {
        let neg = c.surd_part().is_negative();
        let a = if neg { -c } else { c.clone() };
        let body = if mono.is_empty() {
            a.to_string()
        } else {
            format!("{a}*{mono}")
        };
        (neg, body)
    } else if mono.is_empty() {
        (false, format!("({c})"))
    } else {
        (false, format!("({c})*{mono}"))
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub(crate) fn join_terms(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
