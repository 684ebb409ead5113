use crate::algebra::{BiPoly, LaurentPoly, QuadNumber};
use crate::error::Result;
use crate::foliation::OneForm;

/// Exponent matrix of a monomial map: `x = u^m[0][0]·v^m[0][1]`,
/// `y = u^m[1][0]·v^m[1][1]`.
pub type Monomial = [[i64; 2]; 2];

/// Standard blowup charts at the origin: `(x, t) ↦ (x, x·t)` and `(s, y) ↦ (s·y, y)`.
pub const BLOWUP_CHART_1: Monomial = [[1, 0], [1, 1]];
pub const BLOWUP_CHART_2: Monomial = [[1, 1], [0, 1]];

/// Pulls back `a·dx + b·dy` along a monomial map and divides by the largest
/// monomial `u^i·v^j` dividing both coefficients (which may be negative
/// before division). Returns the saturated form and `(i, j)`.
pub fn monomial_pullback(f: &OneForm, m: Monomial, vars: (&str, &str)) -> Result<(OneForm, (i64, i64))> {
    let a = LaurentPoly::substitute_monomial(f.a(), m);
    let b = LaurentPoly::substitute_monomial(f.b(), m);
    let x = LaurentPoly::monomial(QuadNumber::from_int(1), m[0][0], m[0][1]);
    let y = LaurentPoly::monomial(QuadNumber::from_int(1), m[1][0], m[1][1]);
    let ax = a.mul(&x);
    let by = b.mul(&y);
    let scaled = |p: &LaurentPoly, c: i64| p.mul(&LaurentPoly::monomial(QuadNumber::from_int(c), 0, 0));
    let p = scaled(&ax, m[0][0]).add(&scaled(&by, m[1][0])).shift(-1, 0);
    let q = scaled(&ax, m[0][1]).add(&scaled(&by, m[1][1])).shift(0, -1);
    let (pi, pj) = p.min_exponents().unwrap_or((i64::MAX, i64::MAX));
    let (qi, qj) = q.min_exponents().unwrap_or((i64::MAX, i64::MAX));
    let (i, j) = (pi.min(qi), pj.min(qj));
    let pa = if p.is_zero() {
        BiPoly::zero()
    } else {
        p.to_bipoly_shifted(i, j)
    };
    let qb = if q.is_zero() {
        BiPoly::zero()
    } else {
        q.to_bipoly_shifted(i, j)
    };
    debug_assert!(!(pa.is_zero() && qb.is_zero()));
    Ok((OneForm::new(pa, qb, vars)?, (i, j)))
}

/// The substitution `(u, v) ↦ (u·vⁿ, v)`, divided by the power of `v` it creates.
pub fn monomial_substitution(f: &OneForm, n: i64) -> Result<OneForm> {
    Ok(monomial_pullback(f, [[1, n], [0, 1]], ("u", "v"))?.0)
}
