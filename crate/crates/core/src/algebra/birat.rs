use std::fmt;

use num_traits::Zero;

use super::bipoly::BiPoly;
use super::quad::QuadNumber;
use crate::error::{Error, Result};

/// Reduced bivariate rational function. The denominator has leading
/// coefficient 1, so equal functions have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiRat {
    num: BiPoly,
    den: BiPoly,
}

impl BiRat {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let l = d.lead_coeff().expect("nonzero").inv()?;
        Ok(BiRat {
            num: n.scale(&l),
            den: d.scale(&l),
        })
    }

    pub fn zero() -> Self {
        BiRat {
            num: BiPoly::zero(),
            den: BiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn from_poly(p: BiPoly) -> Self {
        BiRat {
            num: p,
            den: BiPoly::one(),
        }
    }

    pub fn constant(c: QuadNumber) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<QuadNumber> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.constant_term() / self.den.constant_term())
    }

    pub fn tower(&self) -> Result<i64> {
        QuadNumber::join_tower(self.num.tower()?, self.den.tower()?)
    }

    /// Sum of reduced fractions. With `g = gcd(b, d)`, any cancellation in
    /// `a/b + c/d` happens against `g` alone.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        let g = self.den.gcd(&o.den);
        if g.is_constant() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return Self::normalize(num, &self.den * &o.den);
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = o.den.exact_div(&g).expect("gcd divides");
        let t = &(&self.num * &d) + &(&o.num * &b);
        if t.is_zero() {
            return Self::zero();
        }
        let h = t.gcd(&g);
        let (t, g) = if h.is_constant() {
            (t, g)
        } else {
            (t.exact_div(&h).expect("gcd divides"), g.exact_div(&h).expect("gcd divides"))
        };
        Self::normalize(t, &(&b * &d) * &g)
    }

    /// Assembles a fraction already known to be reduced.
    fn normalize(num: BiPoly, den: BiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let l = den.lead_coeff().expect("nonzero").inv().expect("nonzero");
        BiRat {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn neg(&self) -> Self {
        BiRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        // both factors are reduced, so cross-cancelling leaves a reduced product
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let cancel = |p: &BiPoly, g: &BiPoly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.exact_div(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&o.num, &g2);
        let den = &cancel(&o.den, &g1) * &cancel(&self.den, &g2);
        Self::normalize(num, den)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&Self::normalize(o.den.clone(), o.num.clone())))
    }

    pub fn scale(&self, c: &QuadNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { Self::one().div(self)? } else { self.clone() };
        Ok(BiRat {
            num: base.num.pow(e.unsigned_abs() as u32),
            den: base.den.pow(e.unsigned_abs() as u32),
        })
    }

    pub fn partial_x(&self) -> Self {
        self.derivative(self.num.partial_x(), self.den.partial_x())
    }

    pub fn partial_y(&self) -> Self {
        self.derivative(self.num.partial_y(), self.den.partial_y())
    }

    /// `(n'd − nd')/d²` for `n/d` reduced. With `g = gcd(d, d')` the
    /// numerator `(n'd − nd')/g` can only share factors with `g`.
    fn derivative(&self, dn: BiPoly, dd: BiPoly) -> Self {
        if dd.is_zero() {
            return Self::new(dn, self.den.clone()).expect("nonzero");
        }
        let g = self.den.gcd(&dd);
        let d_g = self.den.exact_div(&g).expect("gcd divides");
        let dd_g = dd.exact_div(&g).expect("gcd divides");
        let t = &(&dn * &d_g) - &(&self.num * &dd_g);
        if t.is_zero() {
            return Self::zero();
        }
        let h = t.gcd(&g);
        let (t, den) = if h.is_constant() {
            (t, &self.den * &d_g)
        } else {
            let t = t.exact_div(&h).expect("gcd divides");
            (t, (&self.den * &d_g).exact_div(&h).expect("gcd divides"))
        };
        Self::normalize(t, den)
    }

    pub fn display_in(&self, vars: (&str, &str)) -> String {
        let wrap = |p: &BiPoly| {
            let s = p.display_in(vars);
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den == BiPoly::one() {
            return self.num.display_in(vars);
        }
        let den = self.den.display_in(vars);
        let den = if self.den.num_terms() > 1 || den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        format!("{}/{}", wrap(&self.num), den)
    }
}

impl Default for BiRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(("x", "y")))
    }
}

impl From<BiPoly> for BiRat {
    fn from(p: BiPoly) -> Self {
        Self::from_poly(p)
    }
}
