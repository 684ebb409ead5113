//! Sparse bivariate polynomials over the quadratic tower.
//!
//! Exponent pairs are `(i, j)` for `xⁱ·yʲ`. The gcd, exact division and
//! resultant routines view a polynomial as an element of `K[x][y]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::quad::QuadNumber;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), QuadNumber>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(QuadNumber::one())
    }

    pub fn constant(c: QuadNumber) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: QuadNumber, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(QuadNumber::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(QuadNumber::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), QuadNumber)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    /// Integer-coefficient shorthand used heavily by fixtures.
    pub fn from_int_terms(ts: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(ts.iter().map(|&(c, i, j)| ((i, j), QuadNumber::from_int(c))))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: QuadNumber) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(QuadNumber::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &QuadNumber)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> QuadNumber {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(QuadNumber::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> QuadNumber {
        self.coeff(0, 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Largest power of `x` dividing the polynomial.
    pub fn x_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    pub fn y_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    /// Lowest total degree of a nonzero term (multiplicity at the origin).
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn tower(&self) -> Result<i64> {
        self.terms
            .values()
            .try_fold(0, |t, c| QuadNumber::join_tower(t, c.tower()))
    }

    pub fn scale(&self, c: &QuadNumber) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, v)| (k, v * c)))
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, v)| (k, v.conj())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &QuadNumber, y: &QuadNumber) -> QuadNumber {
        let mut acc = QuadNumber::zero();
        for (&(i, j), c) in &self.terms {
            acc = acc + c * &x.pow(i) * &y.pow(j);
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * QuadNumber::from_int(i as i64))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * QuadNumber::from_int(j as i64))),
        )
    }

    pub fn swap_vars(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// `p(x + x0, y + y0)`
    pub fn translate(&self, x0: &QuadNumber, y0: &QuadNumber) -> Self {
        if x0.is_zero() && y0.is_zero() {
            return self.clone();
        }
        let xs = &BiPoly::x() + &BiPoly::constant(x0.clone());
        let ys = &BiPoly::y() + &BiPoly::constant(y0.clone());
        self.substitute(&xs, &ys)
    }

    /// Polynomial substitution `p(X(x,y), Y(x,y))`.
    pub fn substitute(&self, xs: &BiPoly, ys: &BiPoly) -> Self {
        let mut xpow: Vec<BiPoly> = vec![BiPoly::one()];
        let mut ypow: Vec<BiPoly> = vec![BiPoly::one()];
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            while xpow.len() <= i as usize {
                let next = xpow.last().unwrap() * xs;
                xpow.push(next);
            }
            while ypow.len() <= j as usize {
                let next = ypow.last().unwrap() * ys;
                ypow.push(next);
            }
            out = &out + &(&xpow[i as usize] * &ypow[j as usize]).scale(c);
        }
        out
    }

    /// Restriction to the line `{y = 0}` as a polynomial in `x`.
    pub fn restrict_y_zero(&self) -> UniPoly {
        let deg = self.degree_x().unwrap_or(0) as usize;
        let mut v = vec![QuadNumber::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                v[i as usize] = c.clone();
            }
        }
        UniPoly::new(v)
    }

    /// Restriction to the line `{x = 0}` as a polynomial in `y`.
    pub fn restrict_x_zero(&self) -> UniPoly {
        self.swap_vars().restrict_y_zero()
    }

    /// Divides by `xᵃ·yᵇ`; the caller guarantees divisibility.
    pub fn div_monomial(&self, a: u32, b: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            assert!(i >= a && j >= b, "monomial does not divide");
            ((i - a, j - b), c.clone())
        }))
    }

    pub fn mul_monomial(&self, a: u32, b: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i + a, j + b), c.clone())))
    }

    /// Coefficient attached to the largest exponent pair (BTreeMap order).
    pub fn lead_coeff(&self) -> Option<&QuadNumber> {
        self.terms.values().next_back()
    }

    /// Scales so that the leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// Coefficients in `y`, each a polynomial in `x`.
    pub fn to_y_coeffs(&self) -> Vec<UniPoly> {
        let dy = match self.degree_y() {
            None => return vec![],
            Some(d) => d as usize,
        };
        let mut rows: Vec<Vec<QuadNumber>> = vec![vec![]; dy + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, QuadNumber::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UniPoly]) -> Self {
        let mut p = BiPoly::zero();
        for (j, u) in cs.iter().enumerate() {
            for (i, c) in u.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, c.clone());
            }
        }
        p
    }

    /// Embeds a polynomial in `x`.
    pub fn from_x_poly(u: &UniPoly) -> Self {
        Self::from_y_coeffs(std::slice::from_ref(u))
    }

    /// Content with respect to `y`: monic gcd of the `y`-coefficients.
    pub fn content_y(&self) -> UniPoly {
        self.to_y_coeffs()
            .iter()
            .fold(UniPoly::zero(), |g, c| g.gcd(c))
    }

    fn div_by_x_poly(&self, u: &UniPoly) -> Result<Self> {
        let cs: Result<Vec<UniPoly>> = self.to_y_coeffs().iter().map(|c| c.exact_div(u)).collect();
        Ok(Self::from_y_coeffs(&cs?))
    }

    pub fn primitive_part_y(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_y();
        self.div_by_x_poly(&c).expect("content divides")
    }

    /// Pseudo-remainder in `y` (a `K[x]`-multiple of the true remainder).
    fn prem_y(f: &BiPoly, g: &BiPoly) -> BiPoly {
        let gc = g.to_y_coeffs();
        let dg = gc.len() - 1;
        let lg = BiPoly::from_x_poly(&gc[dg]);
        let mut r = f.clone();
        while let Some(dr) = r.degree_y() {
            if (dr as usize) < dg || r.is_zero() {
                break;
            }
            let rc = r.to_y_coeffs();
            let lr = BiPoly::from_x_poly(&rc[dr as usize]).mul_monomial(0, dr - dg as u32);
            r = &(&lg * &r) - &(&lr * g);
        }
        r
    }

    /// Smallest `y`-degree of `gcd(f(x₀, y), g(x₀, y))` over a few `x₀` where
    /// the leading `y`-coefficient of `f` survives. A common factor keeps
    /// its `y`-degree at such points, so this bounds the true `y`-degree.
    fn specialized_gcd_degree(f: &BiPoly, g: &BiPoly) -> Option<usize> {
        let (fc, gc) = (f.to_y_coeffs(), g.to_y_coeffs());
        let lead = fc.last().expect("nonzero");
        let at = |cs: &[UniPoly], x0: &QuadNumber| UniPoly::new(cs.iter().map(|c| c.eval(x0)).collect());
        (-6..=6)
            .map(QuadNumber::from_int)
            .filter(|x| !lead.eval(x).is_zero())
            .take(4)
            .map(|x0| at(&fc, &x0).gcd(&at(&gc, &x0)).degree().unwrap_or(0))
            .min()
    }

    /// Greatest common divisor over `K[x, y]`, normalized.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        if self.is_constant() || other.is_constant() {
            return BiPoly::one();
        }
        // a monomial divides exactly its own power of x and y
        for (m, p) in [(self, other), (other, self)] {
            if m.num_terms() == 1 {
                let (&(i, j), _) = m.terms().next().expect("one term");
                let i = i.min(p.x_order().unwrap_or(0));
                let j = j.min(p.y_order().unwrap_or(0));
                return BiPoly::monomial(QuadNumber::one(), i, j);
            }
        }
        let c = self.content_y().gcd(&other.content_y());
        let pa = self.primitive_part_y();
        let pb = other.primitive_part_y();
        // y-primitive polynomials with no common factor of positive y-degree are coprime
        if Self::specialized_gcd_degree(&pa, &pb) == Some(0) {
            return BiPoly::from_x_poly(&c).normalized();
        }
        let (mut f, mut g) = if pa.degree_y() >= pb.degree_y() {
            (pa, pb)
        } else {
            (pb, pa)
        };
        let core = loop {
            if g.degree_y() == Some(0) {
                break BiPoly::one();
            }
            let r = Self::prem_y(&f, &g);
            if r.is_zero() {
                break g.primitive_part_y();
            }
            f = g;
            g = r.primitive_part_y();
        };
        (&BiPoly::from_x_poly(&c) * &core).normalized()
    }

    /// Exact quotient `self / d`; errors when `d` does not divide.
    pub fn exact_div(&self, d: &BiPoly) -> Result<BiPoly> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dc = d.to_y_coeffs();
        let dd = dc.len() - 1;
        let lead = &dc[dd];
        let mut r = self.clone();
        let mut q = BiPoly::zero();
        while let Some(dr) = r.degree_y() {
            if (dr as usize) < dd {
                return Err(Error::InvalidInput("inexact bivariate division".into()));
            }
            let rc = r.to_y_coeffs();
            let t = rc[dr as usize].exact_div(lead)?;
            let term = BiPoly::from_x_poly(&t).mul_monomial(0, dr - dd as u32);
            r = &r - &(&term * d);
            q = &q + &term;
        }
        Ok(q)
    }

    /// Resultant with respect to `y`, a polynomial in `x`.
    pub fn resultant_y(&self, other: &BiPoly) -> UniPoly {
        let a = self.to_y_coeffs();
        let b = other.to_y_coeffs();
        if a.is_empty() || b.is_empty() {
            return UniPoly::zero();
        }
        let m = a.len() - 1;
        let n = b.len() - 1;
        if m == 0 {
            return a[0].pow(n as u32);
        }
        if n == 0 {
            return b[0].pow(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![UniPoly::zero(); size]; size];
        for r in 0..n {
            for (k, c) in a.iter().rev().enumerate() {
                mat[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in b.iter().rev().enumerate() {
                mat[n + r][r + k] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    pub fn display_in(&self, vars: (&str, &str)) -> String {
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (v, e) in [(vars.0, i), (vars.1, j)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            parts.push(super::format_term(c, &mono.join("*")));
        }
        super::join_terms(&parts)
    }
}

/// Fraction-free determinant over `K[x]`.
fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = UniPoly::constant(QuadNumber::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(("x", "y")))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&k, c)| (k, -c)))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(BiPoly);

/// Laurent polynomial in two variables, used for monomial pullbacks where
/// negative exponents appear before denominators are cleared.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), QuadNumber>,
}

impl LaurentPoly {
    pub fn from_bipoly(p: &BiPoly) -> Self {
        let mut l = LaurentPoly::default();
        for (&(i, j), c) in p.terms() {
            l.add_term(i as i64, j as i64, c.clone());
        }
        l
    }

    pub fn monomial(c: QuadNumber, i: i64, j: i64) -> Self {
        let mut l = LaurentPoly::default();
        l.add_term(i, j, c);
        l
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: QuadNumber) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(QuadNumber::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::default();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn shift(&self, di: i64, dj: i64) -> Self {
        let mut out = LaurentPoly::default();
        for (&(i, j), c) in &self.terms {
            out.add_term(i + di, j + dj, c.clone());
        }
        out
    }

    /// Substitutes `x ↦ u^m00 v^m01`, `y ↦ u^m10 v^m11` into a polynomial.
    pub fn substitute_monomial(p: &BiPoly, m: [[i64; 2]; 2]) -> Self {
        let mut out = LaurentPoly::default();
        for (&(i, j), c) in p.terms() {
            let (i, j) = (i as i64, j as i64);
            out.add_term(i * m[0][0] + j * m[1][0], i * m[0][1] + j * m[1][1], c.clone());
        }
        out
    }

    pub fn min_exponents(&self) -> Option<(i64, i64)> {
        let mi = self.terms.keys().map(|&(i, _)| i).min()?;
        let mj = self.terms.keys().map(|&(_, j)| j).min()?;
        Some((mi, mj))
    }

    /// Converts to a polynomial after multiplying by `u^-di v^-dj`.
    pub fn to_bipoly_shifted(&self, di: i64, dj: i64) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            let (a, b) = (i - di, j - dj);
            assert!(a >= 0 && b >= 0, "negative exponent after shift");
            ((a as u32, b as u32), c.clone())
        }))
    }
}
