//! Local invariants at a point: reducedness, Camacho–Sad, Z and Tang indices
//! along coordinate axes, and the Dulac data of saddle-nodes.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::form::{OneForm, Point};
use crate::algebra::{BiPoly, QuadNumber, UniPoly, UniRat};
use crate::error::{Error, Result};

/// A coordinate line through the point under study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axis {
    /// The line `{x = x₀}`.
    #[serde(rename = "x=0")]
    X0,
    /// The line `{y = y₀}`.
    #[serde(rename = "y=0")]
    Y0,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X0 => Axis::Y0,
            Axis::Y0 => Axis::X0,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X0 => "{x=0}",
            Axis::Y0 => "{y=0}",
        })
    }
}

/// Tangent direction of the strong separatrix of a saddle-node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Axis(Axis),
    /// Direction `(1, slope)` not along an axis.
    Slope(QuadNumber),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum SingularityKind {
    Regular,
    NonDegenerate {
        ratio: QuadNumber,
    },
    SaddleNode {
        milnor_order: u32,
        strong_direction: Direction,
        dulac: Option<QuadNumber>,
    },
    NonReduced {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatrixData {
    pub axis: Axis,
    pub cs: QuadNumber,
    pub z: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub point: Point,
    pub kind: SingularityKind,
    pub separatrices: Vec<SeparatrixData>,
}

impl SingularityReport {
    pub fn is_reduced(&self) -> bool {
        matches!(
            self.kind,
            SingularityKind::NonDegenerate { .. } | SingularityKind::SaddleNode { .. }
        )
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.kind, SingularityKind::Regular)
    }

    pub fn cs_along(&self, axis: Axis) -> Option<&QuadNumber> {
        self.separatrices.iter().find(|s| s.axis == axis).map(|s| &s.cs)
    }
}

/// `true` iff the axis through the origin is invariant for the (already
/// translated) form.
fn axis_invariant_at_origin(f: &OneForm, axis: Axis) -> bool {
    match axis {
        Axis::Y0 => f.a().restrict_y_zero().is_zero(),
        Axis::X0 => f.b().restrict_x_zero().is_zero(),
    }
}

pub fn is_axis_invariant(f: &OneForm, axis: Axis, p: &Point) -> bool {
    axis_invariant_at_origin(&f.translate(p), axis)
}

fn describe(axis: Axis, p: &Point) -> String {
    match axis {
        Axis::X0 => format!("{{x = {}}}", p.0),
        Axis::Y0 => format!("{{y = {}}}", p.1),
    }
}

/// Camacho–Sad index of the axis through `p`, as the residue of
/// `−ã(x,0)/b(x,0)` where `a = y·ã` (and symmetrically for `{x=0}`).
pub fn camacho_sad_index(f: &OneForm, axis: Axis, p: &Point) -> Result<QuadNumber> {
    let g = f.translate(p);
    if !axis_invariant_at_origin(&g, axis) {
        return Err(Error::NotInvariant(describe(axis, p)));
    }
    let (num, den) = match axis {
        Axis::Y0 => (g.a().div_monomial(0, 1).restrict_y_zero(), g.b().restrict_y_zero()),
        Axis::X0 => (g.b().div_monomial(1, 0).restrict_x_zero(), g.a().restrict_x_zero()),
    };
    let r = UniRat::new(-&num, den)?;
    r.residue_at(&QuadNumber::zero())
}

/// Vanishing order at `p` of the transverse coefficient restricted to the axis.
pub fn z_index(f: &OneForm, axis: Axis, p: &Point) -> Result<u32> {
    let g = f.translate(p);
    if !axis_invariant_at_origin(&g, axis) {
        return Err(Error::NotInvariant(describe(axis, p)));
    }
    let r = match axis {
        Axis::Y0 => g.b().restrict_y_zero(),
        Axis::X0 => g.a().restrict_x_zero(),
    };
    Ok(r.order_at_zero().expect("saturated form") as u32)
}

/// Order of tangency at `p` between the foliation and a non-invariant axis.
pub fn tangency_order(f: &OneForm, axis: Axis, p: &Point) -> Result<u32> {
    let g = f.translate(p);
    if axis_invariant_at_origin(&g, axis) {
        return Err(Error::IsInvariant(describe(axis, p)));
    }
    let r = match axis {
        Axis::Y0 => g.a().restrict_y_zero(),
        Axis::X0 => g.b().restrict_x_zero(),
    };
    Ok(r.order_at_zero().expect("non-invariant axis") as u32)
}

/// Jacobian `[[∂A/∂x, ∂A/∂y], [∂B/∂x, ∂B/∂y]]` of the dual field at the origin.
fn jacobian_at_origin(g: &OneForm) -> [[QuadNumber; 2]; 2] {
    let (va, vb) = g.dual_vector_field();
    [
        [va.coeff(1, 0), va.coeff(0, 1)],
        [vb.coeff(1, 0), vb.coeff(0, 1)],
    ]
}

/// Evaluates `p(φ(Y), Y)` modulo `Y^{n+1}`.
fn eval_along(p: &BiPoly, phi: &UniPoly, n: usize) -> UniPoly {
    let trunc = |u: UniPoly| UniPoly::new(u.coeffs().iter().take(n + 1).cloned().collect());
    let mut out = UniPoly::zero();
    let dx = p.degree_x().unwrap_or(0) as usize;
    let mut powers = vec![UniPoly::constant(QuadNumber::one())];
    for _ in 0..dx {
        let next = trunc(powers.last().unwrap() * phi);
        powers.push(next);
    }
    for (&(i, j), c) in p.terms() {
        if j as usize > n {
            continue;
        }
        let t = powers[i as usize].scale(c);
        let shifted = UniPoly::new(
            std::iter::repeat(QuadNumber::zero())
                .take(j as usize)
                .chain(t.coeffs().iter().cloned())
                .collect(),
        );
        out = &out + &trunc(shifted);
    }
    out
}

/// Saddle-node data for a translated form whose dual-field linear part has
/// a single nonzero eigenvalue `t`.
fn saddle_node(g: &OneForm, j: &[[QuadNumber; 2]; 2], t: &QuadNumber) -> Result<SingularityKind> {
    // strong eigenvector s (eigenvalue t) and weak eigenvector w (kernel)
    let s = kernel(&[
        [&j[0][0] - t, j[0][1].clone()],
        [j[1][0].clone(), &j[1][1] - t],
    ]);
    let w = kernel(j);
    // new coordinates (X, Y) with (x, y) = X·s + Y·w
    let xs = BiPoly::from_terms([((1, 0), s[0].clone()), ((0, 1), w[0].clone())]);
    let ys = BiPoly::from_terms([((1, 0), s[1].clone()), ((0, 1), w[1].clone())]);
    let (va, vb) = g.dual_vector_field();
    let (pa, pb) = (va.substitute(&xs, &ys), vb.substitute(&xs, &ys));
    // P⁻¹ with P = [s w]
    let det = &s[0] * &w[1] - &w[0] * &s[1];
    let inv = det.inv()?;
    let a2 = (&pa.scale(&w[1]) - &pb.scale(&w[0])).scale(&inv);
    let b2 = (&pb.scale(&s[0]) - &pa.scale(&s[1])).scale(&inv);
    // the curve a2 = 0 is smooth, X = φ(Y); μ = ord_Y b2(φ(Y), Y)
    let tinv = t.inv()?;
    let rest = &a2 - &BiPoly::monomial(t.clone(), 1, 0);
    let mut n = 8;
    let mu = loop {
        let mut phi = UniPoly::zero();
        for _ in 0..=n {
            phi = eval_along(&rest, &phi, n).scale(&(-&tinv));
        }
        let along = eval_along(&b2, &phi, n);
        if let Some(k) = along.order_at_zero() {
            break k;
        }
        n *= 2;
        if n > 512 {
            return Err(Error::InvalidInput("saddle-node of unbounded multiplicity".into()));
        }
    };
    let strong = if s[1].is_zero() {
        Direction::Axis(Axis::Y0)
    } else if s[0].is_zero() {
        Direction::Axis(Axis::X0)
    } else {
        Direction::Slope(&s[1] / &s[0])
    };
    let weak_axis = if w[1].is_zero() {
        Some(Axis::Y0)
    } else if w[0].is_zero() {
        Some(Axis::X0)
    } else {
        None
    };
    let dulac = match weak_axis {
        Some(ax) if axis_invariant_at_origin(g, ax) => {
            Some(camacho_sad_index(g, ax, &Point::origin())?)
        }
        _ => None,
    };
    Ok(SingularityKind::SaddleNode {
        milnor_order: mu.saturating_sub(1) as u32,
        strong_direction: strong,
        dulac,
    })
}

/// Nonzero vector in the kernel of a singular 2×2 matrix, first nonzero entry 1.
fn kernel(m: &[[QuadNumber; 2]; 2]) -> [QuadNumber; 2] {
    for row in m {
        if !row[0].is_zero() || !row[1].is_zero() {
            // row·v = 0 with v = (−row[1], row[0])
            let v = [-&row[1], row[0].clone()];
            return normalize(v);
        }
    }
    [QuadNumber::one(), QuadNumber::zero()]
}

fn normalize(v: [QuadNumber; 2]) -> [QuadNumber; 2] {
    if !v[0].is_zero() {
        let inv = v[0].inv().expect("nonzero");
        [QuadNumber::one(), &v[1] * &inv]
    } else {
        [QuadNumber::zero(), QuadNumber::one()]
    }
}

/// Full local classification of the foliation at `p`.
pub fn classify_singularity(f: &OneForm, p: &Point) -> Result<SingularityReport> {
    QuadNumber::join_tower(f.tower()?, p.tower()?).map_err(|_| {
        Error::FieldTowerExceeded(format!("point {p} lies outside the coefficient field"))
    })?;
    let g = f.translate(p);
    let mut separatrices = Vec::new();
    for axis in [Axis::X0, Axis::Y0] {
        if axis_invariant_at_origin(&g, axis) && g.is_singular_at(&Point::origin()) {
            let cs = camacho_sad_index(&g, axis, &Point::origin())?;
            let z = z_index(&g, axis, &Point::origin())?;
            separatrices.push(SeparatrixData { axis, cs, z });
        }
    }
    let kind = if !g.is_singular_at(&Point::origin()) {
        SingularityKind::Regular
    } else {
        linear_kind(&g)?
    };
    Ok(SingularityReport {
        point: p.clone(),
        kind,
        separatrices,
    })
}

fn linear_kind(g: &OneForm) -> Result<SingularityKind> {
    let j = jacobian_at_origin(g);
    let t = &j[0][0] + &j[1][1];
    let d = &j[0][0] * &j[1][1] - &j[0][1] * &j[1][0];
    if d.is_zero() {
        if t.is_zero() {
            let reason = if j.iter().flatten().all(|c| c.is_zero()) {
                "zero linear part"
            } else {
                "nilpotent linear part"
            };
            return Ok(SingularityKind::NonReduced {
                reason: reason.into(),
            });
        }
        return saddle_node(g, &j, &t);
    }
    // λ₁/λ₂ + λ₂/λ₁ = T²/D − 2; the ratio is a positive rational iff this is
    // a positive rational s with s² − 4 a rational square.
    let s = &(&t * &t) / &d - QuadNumber::from_int(2);
    if let Some(sr) = s.as_rational() {
        if sr > &num_traits::Zero::zero() {
            let disc = sr * sr - crate::algebra::quad::int(4);
            if let Some(root) = crate::algebra::quad::rational_sqrt(&disc) {
                let r = (sr + root) / crate::algebra::quad::int(2);
                return Ok(SingularityKind::NonReduced {
                    reason: format!("eigenvalue ratio {r} is a positive rational"),
                });
            }
        }
    }
    let (l1, l2) = if j[0][1].is_zero() && j[1][0].is_zero() {
        (j[0][0].clone(), j[1][1].clone())
    } else if j[0][1].is_zero() || j[1][0].is_zero() {
        // triangular: eigenvalues on the diagonal
        (j[0][0].clone(), j[1][1].clone())
    } else {
        let disc = &(&t * &t) - &(QuadNumber::from_int(4) * &d);
        let root = disc.sqrt()?;
        QuadNumber::join_tower(root.tower(), t.tower()).map_err(|_| {
            Error::FieldTowerExceeded(format!("eigenvalues need sqrt({disc}) beyond the coefficient field"))
        })?;
        let half = QuadNumber::from_ratio(1, 2);
        ((&t + &root) * &half, (&t - &root) * &half)
    };
    Ok(SingularityKind::NonDegenerate { ratio: l2 / l1 })
}

/// Dulac invariant ν of a saddle-node whose weak separatrix is an invariant axis.
pub fn dulac_invariant(f: &OneForm, p: &Point) -> Result<QuadNumber> {
    match classify_singularity(f, p)?.kind {
        SingularityKind::SaddleNode { dulac: Some(nu), .. } => Ok(nu),
        SingularityKind::SaddleNode { dulac: None, .. } => Err(Error::WeakSeparatrixNotPolynomial),
        other => Err(Error::InvalidInput(format!("{p} is not a saddle-node: {other:?}"))),
    }
}
