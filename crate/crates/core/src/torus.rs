//! Linear automorphisms of two-dimensional complex tori `ℂ²/Λ`.
//!
//! Only linear parts are modelled; translation parts of affine maps never
//! affect growth, hyperbolicity or commutation of linear parts.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{matrix_order, MatrixOrder, QuadNumber, SquareMatrix, UniPoly};
use crate::dynamics::GrowthClass;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    /// `ℤ[i]²`
    ZiSquare,
    /// `ℤ[j]²`, `j = e^{2πi/3}`
    ZjSquare,
    /// `E × E` for an elliptic curve without complex multiplication.
    ESquare,
    /// `ℤ⁴` with an integer 4×4 model of the linear part.
    GeneralZ4,
}

impl LatticeKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zi" | "zisquare" => Ok(LatticeKind::ZiSquare),
            "zj" | "zjsquare" => Ok(LatticeKind::ZjSquare),
            "e" | "esquare" => Ok(LatticeKind::ESquare),
            "z4" | "generalz4" => Ok(LatticeKind::GeneralZ4),
            _ => Err(Error::InvalidInput(format!("unknown lattice '{s}'"))),
        }
    }

    /// Whether `x` lies in the coefficient ring of the lattice.
    pub fn ring_contains(self, x: &QuadNumber) -> bool {
        let integral = |r: &crate::algebra::Rational| r.is_integer();
        let (r, s) = (x.rational_part(), x.surd_part());
        match (self, x.radicand()) {
            (_, 0) => integral(r),
            (LatticeKind::ZiSquare, -1) => integral(r) && integral(s),
            (LatticeKind::ZjSquare, -3) => {
                // a + b·j = (a − b/2) + (b/2)·√−3
                let two = crate::algebra::Rational::from_integer(2.into());
                let (r2, s2) = (r * &two, s * &two);
                integral(&r2) && integral(&s2) && (r2.to_integer() - s2.to_integer()).is_even()
            }
            _ => false,
        }
    }
}

/// Linear part of a torus automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusAut {
    pub lattice: LatticeKind,
    pub linear: SquareMatrix<QuadNumber>,
}

impl Serialize for SquareMatrix<QuadNumber> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl TorusAut {
    /// Validates that the matrix preserves the lattice: entries in the ring
    /// and a unit determinant.
    pub fn new(lattice: LatticeKind, linear: SquareMatrix<QuadNumber>) -> Result<Self> {
        let n = if lattice == LatticeKind::GeneralZ4 { 4 } else { 2 };
        if linear.size() != n {
            return Err(Error::InvalidInput(format!("{lattice:?} needs a {n}×{n} matrix")));
        }
        for row in linear.rows() {
            for x in row {
                if !lattice.ring_contains(&x) {
                    return Err(Error::InconsistentLattice(format!("{x} is not in the ring of {lattice:?}")));
                }
            }
        }
        let det = determinant(&linear)?;
        if det.modulus_sq() != QuadNumber::one() {
            return Err(Error::InconsistentLattice(format!("determinant {det} is not a unit")));
        }
        Ok(TorusAut { lattice, linear })
    }

    pub fn from_ints(lattice: LatticeKind, rows: &[&[i64]]) -> Result<Self> {
        let m = rows.iter().map(|r| r.iter().map(|&x| QuadNumber::from_int(x)).collect()).collect();
        Self::new(lattice, SquareMatrix::from_rows(m))
    }

    /// `ξ·Id` on a 2-dimensional lattice.
    pub fn homothety(lattice: LatticeKind, xi: &QuadNumber) -> Result<Self> {
        let z = QuadNumber::zero();
        Self::new(lattice, SquareMatrix::from_rows(vec![vec![xi.clone(), z.clone()], vec![z, xi.clone()]]))
    }

    fn is_2d(&self) -> Result<()> {
        if self.linear.size() == 2 {
            Ok(())
        } else {
            Err(Error::InvalidInput("operation needs a 2×2 complex linear part".into()))
        }
    }

    fn order(&self) -> MatrixOrder {
        matrix_order(&self.linear, 60)
    }
}

pub fn determinant(m: &SquareMatrix<QuadNumber>) -> Result<QuadNumber> {
    let c = char_poly(m)?;
    let n = m.size();
    let d = c.coeff(0);
    Ok(if n % 2 == 0 { d } else { -d })
}

/// `det(x·I − M)` by Faddeev–LeVerrier.
pub fn char_poly(m: &SquareMatrix<QuadNumber>) -> Result<UniPoly> {
    let n = m.size();
    let mut coeffs = vec![QuadNumber::zero(); n + 1];
    coeffs[n] = QuadNumber::one();
    let mut mk = SquareMatrix::<QuadNumber>::identity(n).map(|_| QuadNumber::zero());
    let id = SquareMatrix::<QuadNumber>::identity(n);
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        mk = m.mul(&mk).sub(&id.map(|x| -(x * &c_prev)));
        let am = m.mul(&mk);
        let tr = (0..n).fold(QuadNumber::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -(tr.try_div(&QuadNumber::from_int(k as i64))?);
    }
    Ok(UniPoly::new(coeffs))
}

/// Rational polynomial whose roots include every eigenvalue and its
/// complex conjugate.
fn rational_char_poly(a: &TorusAut) -> Result<UniPoly> {
    let p = char_poly(&a.linear)?;
    let q = if p.is_rational() { p } else { &p * &p.conj() };
    if !q.is_rational() {
        return Err(Error::FieldTowerExceeded("characteristic polynomial is not rational".into()));
    }
    Ok(q)
}

/// Squarefree part of `q` with the roots `±1` removed.
fn core_part(q: &UniPoly) -> UniPoly {
    let mut g = q.exact_div(&q.gcd(&q.derivative())).expect("divides");
    let one = QuadNumber::one();
    for r in [one.clone(), -&one] {
        g = g.deflate(&r).0;
    }
    g.monic()
}

fn reversed(q: &UniPoly) -> UniPoly {
    UniPoly::new(q.coeffs().iter().rev().cloned().collect())
}

/// Distinct unit-circle roots of a monic palindromic `g` of degree `2m`:
/// writing `g = x^m·h(x + 1/x)`, they pair up with roots of `h` in `(−2, 2)`.
fn unit_roots_of_palindromic(g: &UniPoly) -> usize {
    let m = g.degree().unwrap_or(0) / 2;
    // D_k(x + 1/x) = x^k + x^{-k}
    let s = UniPoly::from_ints(&[0, 1]);
    let mut d_prev = UniPoly::from_ints(&[2]);
    let mut d_cur = s.clone();
    let mut h = UniPoly::constant(g.coeff(m));
    for k in 1..=m {
        h = &h + &d_cur.scale(&g.coeff(m + k));
        let next = &(&s * &d_cur) - &d_prev;
        d_prev = d_cur;
        d_cur = next;
    }
    2 * sturm_count(&h, &QuadNumber::from_int(-2), &QuadNumber::from_int(2))
}

/// Whether a rational polynomial has a root of modulus 1. Such roots are
/// shared with the reversed polynomial, whose common part is palindromic.
pub fn has_unit_circle_root(q: &UniPoly) -> bool {
    let one = QuadNumber::one();
    if q.eval(&one).is_zero() || q.eval(&-&one).is_zero() {
        return true;
    }
    let g = core_part(&q.gcd(&reversed(q)));
    g.degree().unwrap_or(0) > 0 && unit_roots_of_palindromic(&g) > 0
}

/// Distinct real roots of `p` in `(a, b]`.
fn sturm_count(p: &UniPoly, a: &QuadNumber, b: &QuadNumber) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let (x, y) = (&seq[seq.len() - 2], &seq[seq.len() - 1]);
        let (_, r) = x.div_rem(y).expect("nonzero");
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    let changes = |x: &QuadNumber| {
        let signs: Vec<i32> = seq
            .iter()
            .map(|f| f.eval(x).signum().expect("rational"))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(a).saturating_sub(changes(b))
}

/// No eigenvalue of the linear part has modulus 1.
pub fn anosov_check(a: &TorusAut) -> Result<bool> {
    Ok(!has_unit_circle_root(&rational_char_poly(a)?))
}

/// The two eigenvalues of a 2×2 matrix, when they lie in the tower.
fn eigenvalues2(l: &SquareMatrix<QuadNumber>) -> Result<[QuadNumber; 2]> {
    let t = l.get(0, 0) + l.get(1, 1);
    let d = determinant(l)?;
    let disc = t.try_mul(&t)?.try_sub(&d.try_mul(&QuadNumber::from_int(4))?)?;
    let r = disc.sqrt()?;
    let half = QuadNumber::from_ratio(1, 2);
    Ok([t.try_add(&r)?.try_mul(&half)?, t.try_sub(&r)?.try_mul(&half)?])
}

fn conj_matrix(l: &SquareMatrix<QuadNumber>) -> SquareMatrix<QuadNumber> {
    l.map(|x| x.complex_conj())
}

/// `L ⊗ conj(L)`, the action on `(1,1)`-forms in the frame `dzᵢ ∧ dz̄ⱼ`.
pub fn h11_matrix(a: &TorusAut) -> Result<SquareMatrix<QuadNumber>> {
    a.is_2d()?;
    Ok(a.linear.kron(&conj_matrix(&a.linear)))
}

pub fn h11_growth(a: &TorusAut) -> Result<GrowthClass> {
    let k = h11_matrix(a)?;
    if anosov_check(a)? || !all_on_unit_circle(a)? {
        let ev = eigenvalues2(&a.linear)?;
        let m0 = ev[0].modulus_sq();
        let m1 = ev[1].modulus_sq();
        let rho2 = if m0.cmp_real(&m1) == Some(Ordering::Less) { m1 } else { m0 };
        return Ok(GrowthClass::Exponential(rho2));
    }
    // from here on the entries of Kⁿ grow at most polynomially
    if let MatrixOrder::Finite { .. } = matrix_order(&k, 60) {
        return Ok(GrowthClass::Bounded);
    }
    // quasi-unipotent: Kᵖ − I is nilpotent; a size-3 block shows in its square
    let id = SquareMatrix::<QuadNumber>::identity(4);
    for p in 1..=60 {
        let n = k.pow(p).sub(&id);
        if n.pow(4).is_zero() {
            return Ok(if n.mul(&n).is_zero() {
                GrowthClass::Linear
            } else {
                GrowthClass::Quadratic
            });
        }
    }
    Err(Error::InvalidInput("eigenvalues on the unit circle are not roots of unity".into()))
}

/// Whether every eigenvalue has modulus 1.
fn all_on_unit_circle(a: &TorusAut) -> Result<bool> {
    let g = core_part(&rational_char_poly(a)?);
    let n = g.degree().unwrap_or(0);
    Ok(n == 0 || (reversed(&g).monic() == g && unit_roots_of_palindromic(&g) == n))
}

/// Expanding and contracting eigendirections of an Anosov linear part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slopes {
    pub unstable_eigenvalue: QuadNumber,
    pub unstable: [QuadNumber; 2],
    pub stable_eigenvalue: QuadNumber,
    pub stable: [QuadNumber; 2],
}

pub fn stable_unstable_slopes(a: &TorusAut) -> Result<Slopes> {
    a.is_2d()?;
    if !anosov_check(a)? {
        return Err(Error::InvalidInput("linear part is not Anosov".into()));
    }
    let l = &a.linear;
    let mut ev = eigenvalues2(l)?;
    if ev[0].modulus_cmp_one() == Ordering::Less {
        ev.swap(0, 1);
    }
    let dir = |lam: &QuadNumber| -> Result<[QuadNumber; 2]> {
        let one = QuadNumber::one();
        let v = if !l.get(0, 1).is_zero() {
            [one, lam.try_sub(l.get(0, 0))?.try_div(l.get(0, 1))?]
        } else if !l.get(1, 0).is_zero() {
            let d = lam.try_sub(l.get(0, 0))?;
            if d.is_zero() {
                [lam.try_sub(l.get(1, 1))?.try_div(l.get(1, 0))?, one]
            } else {
                [QuadNumber::zero(), one]
            }
        } else if &l.get(0, 0).clone() == lam {
            [one, QuadNumber::zero()]
        } else {
            [QuadNumber::zero(), one]
        };
        // L·v = λ·v exactly
        for i in 0..2 {
            let lhs = l.get(i, 0).try_mul(&v[0])?.try_add(&l.get(i, 1).try_mul(&v[1])?)?;
            if lhs != lam.try_mul(&v[i])? {
                return Err(Error::CertificationFailed(format!("eigenvector for {lam}")));
            }
        }
        Ok(v)
    };
    Ok(Slopes {
        unstable: dir(&ev[0])?,
        stable: dir(&ev[1])?,
        unstable_eigenvalue: ev[0].clone(),
        stable_eigenvalue: ev[1].clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystallographicReport {
    pub order: u32,
    pub phi: u64,
    pub pass: bool,
    pub diagnostic: Option<String>,
}

/// Orders `m` of lattice symmetries compatible with an Anosov map:
/// `φ(m) ≤ 2`, i.e. `m ∈ {1, 2, 3, 4, 6}`.
pub fn crystallographic_constraint(n: &SquareMatrix<QuadNumber>) -> Result<CrystallographicReport> {
    let MatrixOrder::Finite { order, phi } = matrix_order(n, 60) else {
        return Err(Error::InfiniteOrder);
    };
    let pass = matches!(order, 1 | 2 | 3 | 4 | 6);
    Ok(CrystallographicReport {
        order,
        phi,
        pass,
        diagnostic: (!pass).then(|| {
            format!(
                "order {order} (φ = {phi}) cannot be a ℂ-linear symmetry commuting with an Anosov automorphism of a 2-dimensional torus"
            )
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomothetyReport {
    pub commute: bool,
    /// `ξ` with `M = ξ·Id`, if `M` is a homothety.
    pub homothety: Option<QuadNumber>,
    /// Commuting with the Anosov map forces a homothety.
    pub implication_holds: bool,
    pub translations_dropped: bool,
}

pub fn homothety_and_commutation(m: &TorusAut, phi: &TorusAut) -> Result<HomothetyReport> {
    if m.lattice != phi.lattice {
        return Err(Error::LatticeMismatch(format!("{:?} vs {:?}", m.lattice, phi.lattice)));
    }
    if m.order() == MatrixOrder::Infinite {
        return Err(Error::InfiniteOrder);
    }
    if !anosov_check(phi)? {
        return Err(Error::InvalidInput("second map is not Anosov".into()));
    }
    let commute = m.linear.mul(&phi.linear) == phi.linear.mul(&m.linear);
    let homothety = m.linear.is_scalar();
    Ok(HomothetyReport {
        commute,
        implication_holds: !commute || homothety.is_some(),
        homothety,
        translations_dropped: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientClassification {
    Torus,
    Kummer,
    RationalZi4,
    RationalZj3,
    RationalZj6,
}

/// Quotient of the torus by the cyclic group generated by `ξ·Id`.
pub fn classify_quotient(lattice: LatticeKind, xi: &QuadNumber) -> Result<QuotientClassification> {
    let g = TorusAut::homothety(lattice, xi)?;
    let MatrixOrder::Finite { order, .. } = g.order() else {
        return Err(Error::InfiniteOrder);
    };
    use QuotientClassification::*;
    match (order, lattice) {
        (1, _) => Ok(Torus),
        (2, _) => Ok(Kummer),
        (4, LatticeKind::ZiSquare) => Ok(RationalZi4),
        (3, LatticeKind::ZjSquare) => Ok(RationalZj3),
        (6, LatticeKind::ZjSquare) => Ok(RationalZj6),
        _ => Err(Error::InconsistentLattice(format!("order {order} over {lattice:?}"))),
    }
}
