use num_traits::{One, Zero};

use super::quad::QuadNumber;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Reduced univariate rational function `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniRat {
    num: UniPoly,
    den: UniPoly,
}

impl UniRat {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        QuadNumber::join_tower(num.tower()?, den.tower()?)?;
        let g = num.gcd(&den);
        let (mut n, mut d) = if num.is_zero() {
            (UniPoly::zero(), UniPoly::constant(QuadNumber::one()))
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let l = d.lead().unwrap().inv()?;
        n = n.scale(&l);
        d = d.scale(&l);
        Ok(UniRat { num: n, den: d })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        UniRat {
            num: p,
            den: UniPoly::constant(QuadNumber::one()),
        }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    /// Coefficient of `(u − p)⁻¹` in the Laurent expansion at `p`.
    ///
    /// Shifts `p` to the origin, splits `den = uᵐ·D₁` with `D₁(0) ≠ 0`, then
    /// reads the `uᵐ⁻¹` coefficient of the power series `num/D₁`.
    pub fn residue_at(&self, p: &QuadNumber) -> Result<QuadNumber> {
        let tower = QuadNumber::join_tower(self.num.tower()?, self.den.tower()?)?;
        QuadNumber::join_tower(tower, p.tower()).map_err(|_| {
            Error::FieldTowerExceeded(format!(
                "residue at {p} needs a field beyond sqrt({tower})"
            ))
        })?;
        let n = self.num.shift(p);
        let d = self.den.shift(p);
        let m = d.order_at_zero().expect("nonzero denominator");
        if m == 0 {
            return Ok(QuadNumber::zero());
        }
        let d1: Vec<QuadNumber> = d.coeffs()[m..].to_vec();
        let target = m - 1;
        let series = series_divide(n.coeffs(), &d1, target + 1)?;
        Ok(series[target].clone())
    }

    /// Residue at infinity: minus the `u⁻¹` coefficient of the expansion at ∞.
    pub fn residue_at_infinity(&self) -> QuadNumber {
        let (_, r) = self.num.div_rem(&self.den).expect("nonzero denominator");
        let dd = self.den.degree().unwrap();
        match r.degree() {
            Some(k) if dd >= 1 && k == dd - 1 => -(r.lead().unwrap() / self.den.lead().unwrap()),
            _ => QuadNumber::zero(),
        }
    }

    pub fn eval(&self, x: &QuadNumber) -> Result<QuadNumber> {
        let d = self.den.eval(x);
        self.num.eval(x).try_div(&d)
    }
}

/// First `len` coefficients of the power series `num / den` (`den[0] ≠ 0`).
pub fn series_divide(num: &[QuadNumber], den: &[QuadNumber], len: usize) -> Result<Vec<QuadNumber>> {
    let d0 = den.first().ok_or(Error::DivisionByZero)?.inv()?;
    let mut out: Vec<QuadNumber> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = num.get(k).cloned().unwrap_or_else(QuadNumber::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc = acc - &den[j] * &out[k - j];
        }
        out.push(acc * &d0);
    }
    Ok(out)
}
