//! Elements of ℚ or of a single quadratic extension ℚ(√d).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `rational + surd·√radicand` with a squarefree radicand.
///
/// Plain rationals are stored with `radicand == 0` and `surd == 0`, so
/// structural equality is field equality. Negative radicands give the
/// imaginary quadratic fields (`√-1 = i`, `√-3` for the Eisenstein
/// integers).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    rational: Rational,
    surd: Rational,
    radicand: i64,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Splits `n` as `f²·s` with `s` squarefree (sign kept on `s`).
pub fn squarefree_split(n: i64) -> (i64, i64) {
    if n == 0 {
        return (0, 0);
    }
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut f: u64 = 1;
    let mut s: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    s *= m;
    (f as i64, sign * s as i64)
}

impl QuadNumber {
    pub fn new(rational: Rational, surd: Rational, radicand: i64) -> Self {
        let (f, d) = squarefree_split(radicand);
        let mut q = QuadNumber {
            rational,
            surd: surd * int(f),
            radicand: d,
        };
        if q.radicand == 1 {
            q.rational = &q.rational + &q.surd;
            q.surd = Rational::zero();
        }
        q.normalize();
        q
    }

    fn normalize(&mut self) {
        if self.surd.is_zero() || self.radicand == 0 || self.radicand == 1 {
            self.surd = Rational::zero();
            self.radicand = 0;
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        QuadNumber {
            rational: r,
            surd: Rational::zero(),
            radicand: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `√d` for an arbitrary integer `d`.
    pub fn sqrt_int(d: i64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Imaginary unit `√-1`.
    pub fn i() -> Self {
        Self::sqrt_int(-1)
    }

    /// Primitive cube root of unity `j = (-1 + √-3)/2`.
    pub fn j() -> Self {
        Self::new(rat(-1, 2), rat(1, 2), -3)
    }

    /// Exact square root of a rational, landing in ℚ(√d) for the
    /// squarefree part `d` of `num·den`.
    pub fn sqrt_rational(q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let prod = q.numer() * q.denom();
        let prod = prod
            .to_i64()
            .ok_or_else(|| Error::FieldTowerExceeded(format!("radicand {prod} too large")))?;
        // √(n/m) = √(n·m)/m
        let den = Rational::from_integer(q.denom().clone());
        Ok(Self::new(Rational::zero(), Rational::one() / den, prod))
    }

    /// A square root inside the current tower: rational inputs may open a
    /// new extension, irrational ones must have a root in ℚ(√d) itself.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_rational() {
            return Self::sqrt_rational(&self.rational);
        }
        // (u + v√d)² = p + q√d  ⇔  u² + d·v² = p, 2uv = q
        let (p, q, d) = (&self.rational, &self.surd, self.radicand);
        let norm = p * p - q * q * int(d);
        let exceeded = || Error::FieldTowerExceeded(format!("sqrt({self}) is not in Q(sqrt({d}))"));
        let n = rational_sqrt(&norm).ok_or_else(exceeded)?;
        for u2 in [(p + &n) / int(2), (p - &n) / int(2)] {
            if let Some(u) = rational_sqrt(&u2).filter(|u| !u.is_zero()) {
                let v = q / (int(2) * &u);
                return Ok(Self::new(u, v, d));
            }
        }
        Err(exceeded())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    /// Radicand of the smallest field in the tower containing `self` (0 for ℚ).
    pub fn tower(&self) -> i64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn is_real(&self) -> bool {
        self.radicand >= 0
    }

    /// Joins the towers of two numbers, failing on two distinct radicands.
    pub fn join_tower(a: i64, b: i64) -> Result<i64> {
        match (a, b) {
            (0, t) | (t, 0) => Ok(t),
            (s, t) if s == t => Ok(s),
            (s, t) => Err(Error::FieldTowerMismatch(s, t)),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.radicand == 0 && rhs.radicand == 0 {
            return Ok(Self::from_rational(&self.rational + &rhs.rational));
        }
        let d = Self::join_tower(self.radicand, rhs.radicand)?;
        let mut q = QuadNumber {
            rational: &self.rational + &rhs.rational,
            surd: &self.surd + &rhs.surd,
            radicand: d,
        };
        q.normalize();
        Ok(q)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.radicand == 0 && rhs.radicand == 0 {
            return Ok(Self::from_rational(&self.rational * &rhs.rational));
        }
        let d = Self::join_tower(self.radicand, rhs.radicand)?;
        let dr = int(d);
        let mut q = QuadNumber {
            rational: &self.rational * &rhs.rational + &self.surd * &rhs.surd * dr,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
            radicand: d,
        };
        q.normalize();
        Ok(q)
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Self::join_tower(self.radicand, rhs.radicand)?;
        self.try_mul(&rhs.inv()?)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational - &self.surd * &self.surd * int(self.radicand)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let mut q = QuadNumber {
            rational: &self.rational / &n,
            surd: -(&self.surd / &n),
            radicand: self.radicand,
        };
        q.normalize();
        Ok(q)
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Self {
        let mut q = self.clone();
        q.surd = -q.surd;
        q
    }

    /// Complex conjugate: the Galois conjugate on imaginary fields, the
    /// identity on real numbers.
    pub fn complex_conj(&self) -> Self {
        if self.radicand < 0 {
            self.conj()
        } else {
            self.clone()
        }
    }

    /// `|z|²` as an element of the (real) tower.
    pub fn modulus_sq(&self) -> QuadNumber {
        if self.radicand < 0 {
            QuadNumber::from_rational(self.norm())
        } else {
            self * self
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of a real number, decided exactly.
    pub fn signum(&self) -> Result<i32> {
        if self.radicand < 0 {
            return Err(Error::InvalidInput(format!("{self} is not real")));
        }
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.surd);
        if sb == 0 {
            return Ok(sa);
        }
        if sa == 0 || sa == sb {
            return Ok(sb);
        }
        let a2 = &self.rational * &self.rational;
        let b2d = &self.surd * &self.surd * int(self.radicand);
        Ok(match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        })
    }

    /// Exact order on real numbers; `None` if either side is non-real or
    /// the towers differ.
    pub fn cmp_real(&self, other: &Self) -> Option<Ordering> {
        let diff = self.try_sub(other).ok()?;
        diff.signum().ok().map(|s| s.cmp(&0))
    }

    pub fn abs_real(&self) -> Result<Self> {
        Ok(if self.signum()? < 0 { -self } else { self.clone() })
    }

    /// Compares `|self|` with 1 exactly (works on imaginary fields too).
    pub fn modulus_cmp_one(&self) -> Ordering {
        let m = self.modulus_sq();
        m.cmp_real(&QuadNumber::one())
            .expect("modulus squared is real and in the same tower")
    }

    /// Compares moduli `|self|` and `|other|` exactly.
    pub fn modulus_cmp(&self, other: &Self) -> Result<Ordering> {
        let a = self.modulus_sq();
        let b = other.modulus_sq();
        a.cmp_real(&b)
            .ok_or_else(|| Error::FieldTowerMismatch(self.radicand, other.radicand))
    }

    /// Floor of a real number.
    pub fn floor(&self) -> Result<BigInt> {
        if self.radicand < 0 {
            return Err(Error::InvalidInput(format!("{self} is not real")));
        }
        if self.is_rational() {
            return Ok(self.rational.floor().to_integer());
        }
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i64);
        loop {
            let kq = QuadNumber::from_rational(Rational::from_integer(k.clone()));
            if self.cmp_real(&kq) == Some(Ordering::Less) {
                k -= 1;
                continue;
            }
            let k1 = QuadNumber::from_rational(Rational::from_integer(&k + 1));
            if self.cmp_real(&k1) != Some(Ordering::Less) {
                k += 1;
                continue;
            }
            return Ok(k);
        }
    }

    /// Real part approximation (for human-readable output only).
    pub fn to_f64(&self) -> f64 {
        let (re, _) = self.to_complex_f64();
        re
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        if self.radicand >= 0 {
            (a + b * (self.radicand as f64).sqrt(), 0.0)
        } else {
            (a, b * ((-self.radicand) as f64).sqrt())
        }
    }

    /// Decimal rendering, e.g. `2.4142135624` or `0.5+0.8660254038i`.
    pub fn approx_string(&self) -> String {
        let (re, im) = self.to_complex_f64();
        if im == 0.0 {
            format!("{re:.10}")
        } else if im < 0.0 {
            format!("{re:.10}-{:.10}i", -im)
        } else {
            format!("{re:.10}+{im:.10}i")
        }
    }
}

/// `√q` when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let m = q.denom().sqrt();
    (&n * &n == *q.numer() && &m * &m == *q.denom()).then(|| Rational::new(n, m))
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.rational));
        }
        let root = format!("sqrt({})", self.radicand);
        let surd = if self.surd.is_one() {
            root
        } else if (-&self.surd).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", fmt_rational(&self.surd))
        };
        if self.rational.is_zero() {
            write!(f, "{surd}")
        } else if surd.starts_with('-') {
            write!(f, "{}{surd}", fmt_rational(&self.rational))
        } else {
            write!(f, "{}+{surd}", fmt_rational(&self.rational))
        }
    }
}

impl Zero for QuadNumber {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl One for QuadNumber {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -&self
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber {
            rational: -&self.rational,
            surd: -&self.surd,
            radicand: self.radicand,
        }
    }
}

// Operator impls assume a shared tower; towers are validated where data
// enters the library, so a mismatch here is a logic error.
macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                self.$try(rhs).expect(concat!("QuadNumber ", stringify!($method)))
            }
        }
        impl $tr<QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl From<i64> for QuadNumber {
    fn from(n: i64) -> Self {
        QuadNumber::from_int(n)
    }
}

impl From<Rational> for QuadNumber {
    fn from(r: Rational) -> Self {
        QuadNumber::from_rational(r)
    }
}

/// Wire form: exact `(rational, surd, radicand)` triple plus a decimal.
#[derive(Serialize, Deserialize)]
struct QuadTriple {
    rational: String,
    surd: String,
    radicand: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approx: Option<String>,
}

impl Serialize for QuadNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadTriple {
            rational: fmt_rational(&self.rational),
            surd: fmt_rational(&self.surd),
            radicand: self.radicand,
            approx: Some(self.approx_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = QuadTriple::deserialize(d)?;
        let parse = |s: &str| -> std::result::Result<Rational, D::Error> {
            s.trim()
                .parse::<Rational>()
                .map_err(|e| serde::de::Error::custom(format!("bad rational {s:?}: {e}")))
        };
        Ok(QuadNumber::new(parse(&t.rational)?, parse(&t.surd)?, t.radicand))
    }
}

/// Greatest common divisor helper shared by the integer routines.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64) -> QuadNumber {
        QuadNumber::new(int(a), int(b), d)
    }

    #[test]
    fn square_roots_in_tower() {
        let s2 = QuadNumber::sqrt_int(2);
        // (1+√2)² = 3 + 2√2
        let x = QuadNumber::from_int(3) + QuadNumber::from_int(2) * &s2;
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        assert!(s2.sqrt().is_err());
        assert_eq!(QuadNumber::from_int(-4).sqrt().unwrap(), QuadNumber::from_int(2) * QuadNumber::i());
    }

    #[test]
    fn unit_norms() {
        assert_eq!(q(1, 1, 2) * q(1, -1, 2), QuadNumber::from_int(-1));
        assert_eq!(q(1, 1, 2) / q(1, 1, 2), QuadNumber::one());
        assert_eq!(q(3, 2, 2) * q(3, -2, 2), QuadNumber::one());
    }

    #[test]
    fn radicand_is_normalized() {
        let a = QuadNumber::sqrt_int(8);
        assert_eq!(a, q(0, 2, 2));
        assert_eq!(QuadNumber::sqrt_int(9), QuadNumber::from_int(3));
        assert_eq!(QuadNumber::sqrt_int(-4), q(0, 2, -1));
        assert!(QuadNumber::new(int(2), int(0), 5).is_rational());
        assert_eq!(QuadNumber::new(int(2), int(3), 1), QuadNumber::from_int(5));
    }

    #[test]
    fn tower_mismatch_and_zero_division() {
        let e = QuadNumber::sqrt_int(2).try_add(&QuadNumber::sqrt_int(3));
        assert_eq!(e, Err(Error::FieldTowerMismatch(2, 3)));
        assert_eq!(QuadNumber::one().try_div(&QuadNumber::zero()), Err(Error::DivisionByZero));
        // rational side composes with anything
        assert!(QuadNumber::from_ratio(1, 3).try_mul(&QuadNumber::sqrt_int(3)).is_ok());
    }

    #[test]
    fn signs_and_floor() {
        let a = q(1, -1, 2); // 1 - √2 < 0
        assert_eq!(a.signum().unwrap(), -1);
        assert_eq!(q(-1, 1, 2).signum().unwrap(), 1);
        assert_eq!(q(3, -2, 2).signum().unwrap(), 1); // 3 - 2.828
        assert_eq!(q(1, 1, 2).floor().unwrap(), BigInt::from(2));
        assert_eq!(a.floor().unwrap(), BigInt::from(-1));
        assert_eq!(QuadNumber::from_ratio(-7, 2).floor().unwrap(), BigInt::from(-4));
    }

    #[test]
    fn moduli_use_norms() {
        assert_eq!(QuadNumber::i().modulus_cmp_one(), Ordering::Equal);
        assert_eq!(QuadNumber::j().modulus_cmp_one(), Ordering::Equal);
        assert_eq!(q(1, 1, 2).modulus_cmp_one(), Ordering::Greater);
        assert_eq!(q(1, -1, 2).modulus_cmp_one(), Ordering::Less);
        assert_eq!(q(1, 1, -1).modulus_cmp_one(), Ordering::Greater);
    }

    #[test]
    fn sqrt_of_rationals() {
        let s = QuadNumber::sqrt_rational(&rat(1, 2)).unwrap();
        assert_eq!(&s * &s, QuadNumber::from_ratio(1, 2));
        assert_eq!(QuadNumber::sqrt_rational(&rat(4, 9)).unwrap(), QuadNumber::from_ratio(2, 3));
    }

    #[test]
    fn display_and_serde() {
        assert_eq!(q(1, 1, 2).to_string(), "1+sqrt(2)");
        assert_eq!(q(1, -1, 2).to_string(), "1-sqrt(2)");
        assert_eq!(QuadNumber::j().to_string(), "-1/2+1/2*sqrt(-3)");
        let v = serde_json::to_value(q(1, 1, 2)).unwrap();
        assert_eq!(v["radicand"], 2);
        let back: QuadNumber = serde_json::from_value(v).unwrap();
        assert_eq!(back, q(1, 1, 2));
    }
}
