use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{BiPoly, BiRat, QuadNumber};
use crate::error::{Error, Result};
use crate::expr::{parse_form, ParsedForm};

/// Saturated polynomial 1-form `a·dx + b·dy` in a chart with named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    a: BiPoly,
    b: BiPoly,
    vars: (String, String),
    divided: Option<BiPoly>,
}

/// Point of a chart with coordinates in the quadratic tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point(pub QuadNumber, pub QuadNumber);

impl Point {
    pub fn origin() -> Self {
        Point(QuadNumber::zero(), QuadNumber::zero())
    }

    pub fn new(x: QuadNumber, y: QuadNumber) -> Self {
        Point(x, y)
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point(QuadNumber::from_int(x), QuadNumber::from_int(y))
    }

    pub fn is_origin(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    pub fn tower(&self) -> Result<i64> {
        QuadNumber::join_tower(self.0.tower(), self.1.tower())
    }

    /// Deterministic lexicographic order.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        use crate::algebra::roots::cmp_quad;
        cmp_quad(&self.0, &other.0).then_with(|| cmp_quad(&self.1, &other.1))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl OneForm {
    /// Builds and saturates `a·dx + b·dy`, recording any divided common factor.
    pub fn new(a: BiPoly, b: BiPoly, vars: (&str, &str)) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("the zero form defines no foliation".into()));
        }
        QuadNumber::join_tower(a.tower()?, b.tower()?)?;
        let g = a.gcd(&b);
        let (a, b, divided) = if g.is_constant() {
            (a, b, None)
        } else {
            (a.exact_div(&g)?, b.exact_div(&g)?, Some(g))
        };
        Ok(OneForm {
            a,
            b,
            vars: (vars.0.to_string(), vars.1.to_string()),
            divided,
        })
    }

    pub fn xy(a: BiPoly, b: BiPoly) -> Result<Self> {
        Self::new(a, b, ("x", "y"))
    }

    /// Clears denominators of a parsed form, then saturates.
    pub fn from_parsed(f: &ParsedForm) -> Result<Self> {
        let (dp, dq) = (f.p.denominator(), f.q.denominator());
        let g = dp.gcd(dq);
        let l = (dp * dq).exact_div(&g)?;
        let a = BiRat::from_poly(l.clone()).mul(&f.p);
        let b = BiRat::from_poly(l).mul(&f.q);
        Self::new(
            a.numerator().clone(),
            b.numerator().clone(),
            (&f.vars.0, &f.vars.1),
        )
    }

    pub fn a(&self) -> &BiPoly {
        &self.a
    }

    pub fn b(&self) -> &BiPoly {
        &self.b
    }

    pub fn vars(&self) -> (&str, &str) {
        (&self.vars.0, &self.vars.1)
    }

    /// Common factor removed by saturation, if any.
    pub fn divided_factor(&self) -> Option<&BiPoly> {
        self.divided.as_ref()
    }

    pub fn tower(&self) -> Result<i64> {
        QuadNumber::join_tower(self.a.tower()?, self.b.tower()?)
    }

    /// Saturation is performed on construction; this re-saturates a copy.
    pub fn saturate(&self) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), self.vars())
    }

    pub fn with_vars(&self, vars: (&str, &str)) -> Self {
        OneForm {
            vars: (vars.0.into(), vars.1.into()),
            ..self.clone()
        }
    }

    /// The form in coordinates centred at `p`.
    pub fn translate(&self, p: &Point) -> Self {
        OneForm {
            a: self.a.translate(&p.0, &p.1),
            b: self.b.translate(&p.0, &p.1),
            vars: self.vars.clone(),
            divided: None,
        }
    }

    /// Exchanges the roles of the two coordinates.
    pub fn swap(&self) -> Self {
        OneForm {
            a: self.b.swap_vars(),
            b: self.a.swap_vars(),
            vars: (self.vars.1.clone(), self.vars.0.clone()),
            divided: self.divided.as_ref().map(|g| g.swap_vars()),
        }
    }

    pub fn scale(&self, c: &QuadNumber) -> Self {
        OneForm {
            a: self.a.scale(c),
            b: self.b.scale(c),
            ..self.clone()
        }
    }

    pub fn is_singular_at(&self, p: &Point) -> bool {
        self.a.eval(&p.0, &p.1).is_zero() && self.b.eval(&p.0, &p.1).is_zero()
    }

    /// Vector field `(b, −a)` annihilated by the form.
    pub fn dual_vector_field(&self) -> (BiPoly, BiPoly) {
        (self.b.clone(), -&self.a)
    }

    /// Equality up to a nonzero constant factor.
    pub fn proportional_to(&self, other: &OneForm) -> bool {
        let lhs = &self.a * &other.b;
        let rhs = &self.b * &other.a;
        lhs == rhs && (self.a.is_zero() == other.a.is_zero()) && (self.b.is_zero() == other.b.is_zero())
    }

    /// Re-parseable text such as `2*y*dx + x*dy`.
    pub fn pretty(&self) -> String {
        let vars = self.vars();
        let mut parts = Vec::new();
        for (c, d) in [(&self.a, vars.0), (&self.b, vars.1)] {
            if c.is_zero() {
                continue;
            }
            let body = c.display_in(vars);
            let text = if c.num_terms() == 1 {
                if body == "1" {
                    format!("d{d}")
                } else if body == "-1" {
                    format!("-d{d}")
                } else {
                    format!("{body}*d{d}")
                }
            } else {
                format!("({body})*d{d}")
            };
            parts.push(text);
        }
        crate::algebra::join_terms(&parts)
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

/// Parses and saturates a polynomial 1-form, inferring the chart variables.
pub fn parse_one_form(text: &str) -> Result<OneForm> {
    OneForm::from_parsed(&parse_form(text, None)?)
}

/// Parses a 1-form in the given chart variables.
pub fn parse_one_form_in(text: &str, vars: (&str, &str)) -> Result<OneForm> {
    OneForm::from_parsed(&parse_form(text, Some(vars))?)
}
