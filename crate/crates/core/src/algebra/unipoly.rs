use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::quad::QuadNumber;
use crate::error::{Error, Result};

/// Dense univariate polynomial over the quadratic tower, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<QuadNumber>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<QuadNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| QuadNumber::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: QuadNumber) -> Self {
        Self::new(vec![c])
    }

    /// `c·uᵏ`
    pub fn monomial(c: QuadNumber, k: usize) -> Self {
        let mut v = vec![QuadNumber::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `u − p`
    pub fn linear_root(p: &QuadNumber) -> Self {
        Self::new(vec![-p, QuadNumber::one()])
    }

    pub fn coeffs(&self) -> &[QuadNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> QuadNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(QuadNumber::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&QuadNumber> {
        self.coeffs.last()
    }

    pub fn tower(&self) -> Result<i64> {
        self.coeffs
            .iter()
            .try_fold(0, |t, c| QuadNumber::join_tower(t, c.tower()))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn eval(&self, x: &QuadNumber) -> QuadNumber {
        self.coeffs
            .iter()
            .rev()
            .fold(QuadNumber::zero(), |acc, c| &acc * x + c)
    }

    pub fn try_eval(&self, x: &QuadNumber) -> Result<QuadNumber> {
        QuadNumber::join_tower(self.tower()?, x.tower())?;
        Ok(self.eval(x))
    }

    pub fn scale(&self, c: &QuadNumber) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * QuadNumber::from_int(i as i64))
                .collect(),
        )
    }

    /// Lowest exponent with a nonzero coefficient (`None` for zero).
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Vanishing order at `p`.
    pub fn order_at(&self, p: &QuadNumber) -> Option<usize> {
        self.shift(p).order_at_zero()
    }

    /// `q(u) = self(u + c)`
    pub fn shift(&self, c: &QuadNumber) -> Self {
        let mut out = UniPoly::zero();
        let lin = UniPoly::new(vec![c.clone(), QuadNumber::one()]);
        for a in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &UniPoly::constant(a.clone());
        }
        out
    }

    /// Coefficient-wise Galois conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.lead().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![QuadNumber::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Divides out `(u − p)` as often as possible, returning the multiplicity.
    pub fn deflate(&self, p: &QuadNumber) -> (Self, usize) {
        let lin = UniPoly::linear_root(p);
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() && cur.eval(p).is_zero() {
            cur = cur.div_rem(&lin).expect("linear divisor").0;
            m += 1;
        }
        (cur, m)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::constant(QuadNumber::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(super::format_term(c, &mono));
        }
        super::join_terms(&parts)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("u"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![QuadNumber::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }
}
