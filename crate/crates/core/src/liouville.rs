//! Rational differential forms on ℂ², the Singer integrability criterion
//! and averaging over finite groups of monomial maps.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{BiPoly, BiRat, QuadNumber};
use crate::dynamics::MonomialMap;
use crate::error::{Error, Result};
use crate::expr::parse_form;

/// `P dz + Q dw` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatOneForm {
    pub p: BiRat,
    pub q: BiRat,
    vars: (String, String),
}

/// `R dz ∧ dw`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatTwoForm {
    pub r: BiRat,
}

impl RatTwoForm {
    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }
}

impl RatOneForm {
    pub fn new(p: BiRat, q: BiRat) -> Self {
        Self::with_vars(p, q, ("z", "w"))
    }

    pub fn with_vars(p: BiRat, q: BiRat, vars: (&str, &str)) -> Self {
        RatOneForm {
            p,
            q,
            vars: (vars.0.into(), vars.1.into()),
        }
    }

    pub fn zero() -> Self {
        Self::new(BiRat::zero(), BiRat::zero())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f = parse_form(text, None)?;
        Ok(Self::with_vars(f.p, f.q, (&f.vars.0, &f.vars.1)))
    }

    pub fn parse_in(text: &str, vars: (&str, &str)) -> Result<Self> {
        let f = parse_form(text, Some(vars))?;
        Ok(Self::with_vars(f.p, f.q, vars))
    }

    pub fn vars(&self) -> (&str, &str) {
        (&self.vars.0, &self.vars.1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RatOneForm {
            p: self.p.add(&o.p),
            q: self.q.add(&o.q),
            vars: self.vars.clone(),
        }
    }

    pub fn scale(&self, f: &BiRat) -> Self {
        RatOneForm {
            p: self.p.mul(f),
            q: self.q.mul(f),
            vars: self.vars.clone(),
        }
    }

    /// `df = f_z dz + f_w dw`.
    pub fn differential(f: &BiRat) -> Self {
        Self::new(f.partial_x(), f.partial_y())
    }

    /// `dz/z + dw/w`.
    pub fn log_zw() -> Self {
        let inv = |p: BiPoly| BiRat::one().div(&BiRat::from_poly(p)).expect("nonzero");
        Self::new(inv(BiPoly::x()), inv(BiPoly::y()))
    }

    /// `w dz + α·z dw`.
    pub fn linear(alpha: &QuadNumber) -> Self {
        Self::new(
            BiRat::from_poly(BiPoly::y()),
            BiRat::from_poly(BiPoly::x()).scale(alpha),
        )
    }

    pub fn pretty(&self) -> String {
        let v = self.vars();
        let mut parts = Vec::new();
        for (c, d) in [(&self.p, v.0), (&self.q, v.1)] {
            if c.is_zero() {
                continue;
            }
            let body = c.display_in(v);
            let simple = c.denominator() == &BiPoly::one() && c.numerator().num_terms() == 1;
            parts.push(match body.as_str() {
                "1" => format!("d{d}"),
                "-1" => format!("-d{d}"),
                _ if simple || c.denominator() != &BiPoly::one() => format!("{body} d{d}"),
                _ => format!("({body}) d{d}"),
            });
        }
        crate::algebra::join_terms(&parts)
    }
}

impl fmt::Display for RatOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl Serialize for RatOneForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.pretty())
    }
}

/// `d(P dz + Q dw) = (∂Q/∂z − ∂P/∂w) dz ∧ dw`.
pub fn exterior_derivative(eta: &RatOneForm) -> RatTwoForm {
    RatTwoForm {
        r: eta.q.partial_x().sub(&eta.p.partial_y()),
    }
}

pub fn wedge(eta: &RatOneForm, omega: &RatOneForm) -> RatTwoForm {
    RatTwoForm {
        r: eta.p.mul(&omega.q).sub(&eta.q.mul(&omega.p)),
    }
}

/// `dη = 0` and `dω = η ∧ ω`.
pub fn singer_check(omega: &RatOneForm, eta: &RatOneForm) -> bool {
    exterior_derivative(eta).is_zero() && exterior_derivative(omega) == wedge(eta, omega)
}

/// The closed form `η = dz/z + dw/w` with `d(w dz + α z dw) = η ∧ (w dz + α z dw)`.
pub fn construct_eta_linear(alpha: &QuadNumber) -> Result<RatOneForm> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("α must be nonzero".into()));
    }
    let eta = RatOneForm::log_zw();
    if !singer_check(&RatOneForm::linear(alpha), &eta) {
        return Err(Error::CertificationFailed(format!("Singer identity for α = {alpha}")));
    }
    Ok(eta)
}

/// `p(Z, W)` for rational `Z`, `W`.
fn substitute(p: &BiPoly, z: &BiRat, w: &BiRat) -> Result<BiRat> {
    let mut acc = BiRat::zero();
    for (&(i, j), c) in p.terms() {
        let t = z.pow(i as i64)?.mul(&w.pow(j as i64)?).scale(c);
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn compose(f: &BiRat, z: &BiRat, w: &BiRat) -> Result<BiRat> {
    substitute(f.numerator(), z, w)?.div(&substitute(f.denominator(), z, w)?)
}

/// `g*(P dz + Q dw)` for `g(z, w) = (z^a w^b, z^c w^d)`.
pub fn pullback(form: &RatOneForm, g: &MonomialMap) -> Result<RatOneForm> {
    let m = g.matrix();
    let z = BiRat::from_poly(BiPoly::x());
    let w = BiRat::from_poly(BiPoly::y());
    let gz = z.pow(m.a)?.mul(&w.pow(m.b)?);
    let gw = z.pow(m.c)?.mul(&w.pow(m.d)?);
    let p = compose(&form.p, &gz, &gw)?;
    let q = compose(&form.q, &gz, &gw)?;
    Ok(RatOneForm {
        p: p.mul(&gz.partial_x()).add(&q.mul(&gw.partial_x())),
        q: p.mul(&gz.partial_y()).add(&q.mul(&gw.partial_y())),
        vars: form.vars.clone(),
    })
}

/// `(1/|G|)·Σ g*α` over a finite group of monomial maps.
pub fn group_average(alpha: &RatOneForm, group: &[MonomialMap]) -> Result<RatOneForm> {
    check_group(group)?;
    let mut acc = RatOneForm::with_vars(BiRat::zero(), BiRat::zero(), alpha.vars());
    for g in group {
        acc = acc.add(&pullback(alpha, g)?);
    }
    let inv = BiRat::constant(QuadNumber::from_ratio(1, group.len() as i64));
    let avg = acc.scale(&inv);
    if exterior_derivative(alpha).is_zero() && !exterior_derivative(&avg).is_zero() {
        return Err(Error::CertificationFailed("averaging broke closedness".into()));
    }
    Ok(avg)
}

fn check_group(group: &[MonomialMap]) -> Result<()> {
    let mats: Vec<_> = group.iter().map(|g| *g.matrix()).collect();
    let distinct = mats.iter().enumerate().all(|(i, m)| !mats[..i].contains(m));
    let closed = mats.iter().all(|x| mats.iter().all(|y| mats.contains(&x.mul(y))));
    if group.is_empty() || !distinct || !closed {
        return Err(Error::NotAGroup(format!("{} elements, not closed under composition", group.len())));
    }
    Ok(())
}
