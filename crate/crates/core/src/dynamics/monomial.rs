use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::GrowthClass;
use crate::algebra::{eigen2, matrix_order, IntMatrix2, MatrixOrder, QuadNumber};
use crate::error::{Error, Result};

pub type BigMatrix2 = [[BigInt; 2]; 2];

/// `(z, w) ↦ (z^a·w^b, z^c·w^d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMap {
    matrix: IntMatrix2,
}

impl MonomialMap {
    pub fn new(matrix: IntMatrix2) -> Result<Self> {
        match matrix.det() {
            1 | -1 => Ok(MonomialMap { matrix }),
            d => Err(Error::NotUnimodular(d)),
        }
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(IntMatrix2::from_rows(rows))
    }

    pub fn matrix(&self) -> &IntMatrix2 {
        &self.matrix
    }

    /// `self ∘ g`, whose exponent matrix is the product.
    pub fn compose(&self, g: &MonomialMap) -> MonomialMap {
        MonomialMap {
            matrix: self.matrix.mul(&g.matrix),
        }
    }

    /// The Kummer involution `τ(z, w) = (1/z, 1/w)`.
    pub fn kummer_involution() -> MonomialMap {
        MonomialMap {
            matrix: IntMatrix2::identity().neg(),
        }
    }
}

fn abs_transpose(m: &BigMatrix2) -> BigMatrix2 {
    [
        [m[0][0].abs(), m[1][0].abs()],
        [m[0][1].abs(), m[1][1].abs()],
    ]
}

/// Action on `H^{1,1}` in the basis of the two ruling classes: columns
/// `(|a|, |b|)` and `(|c|, |d|)`.
pub fn pullback_action(f: &MonomialMap) -> IntMatrix2 {
    class_action(&f.matrix)
}

/// The same bidegree matrix for any exponent matrix, unimodular or not.
pub fn class_action(m: &IntMatrix2) -> IntMatrix2 {
    IntMatrix2::new(m.a.abs(), m.c.abs(), m.b.abs(), m.d.abs())
}

/// `(φᵏ)*` for `k = 1..=n`, composing exponent matrices first.
pub fn degree_sequence(f: &MonomialMap, n: u32) -> Vec<BigMatrix2> {
    (1..=n).map(|k| abs_transpose(&f.matrix.pow_big(k))).collect()
}

/// Whether `(φⁿ)* = (φ*)ⁿ` for every `n`.
///
/// `(φⁿ)*` is the entrywise absolute value of `Mⁿ` (transposed), so
/// stability means no cancellation in any power. That holds exactly when
/// `ad ≥ 0` and `bc ≥ 0` (then `M` is sign-coherent after inverting one
/// coordinate, which acts trivially on the classes) or `M` is diagonal or
/// anti-diagonal; otherwise `M²` already cancels.
pub fn is_algebraically_stable(f: &MonomialMap) -> bool {
    let m = f.matrix;
    (m.a * m.d >= 0 && m.b * m.c >= 0) || (m.b == 0 && m.c == 0) || (m.a == 0 && m.d == 0)
}

/// A `GL(2, ℤ)` conjugate `P·M·P⁻¹` with all entries `≥ 0` (or `≤ 0` when
/// the trace is negative, as no nonnegative matrix has negative trace),
/// found by breadth-first search over elementary conjugations with entries
/// bounded by `bound`.
pub fn stabilize_conjugate(f: &MonomialMap, bound: i64) -> Result<(IntMatrix2, MonomialMap)> {
    let m = f.matrix;
    let e = eigen2(&m)?;
    if !e.is_real() || !e.expanding() {
        return Err(Error::NotStabilizable(format!("{m} is not hyperbolic")));
    }
    let target = |x: &IntMatrix2| if m.trace() >= 0 { x.is_nonnegative() } else { x.is_nonpositive() };
    let gens = [
        IntMatrix2::new(1, 1, 0, 1),
        IntMatrix2::new(1, -1, 0, 1),
        IntMatrix2::new(1, 0, 1, 1),
        IntMatrix2::new(1, 0, -1, 1),
        IntMatrix2::new(0, 1, 1, 0),
        IntMatrix2::new(1, 0, 0, -1),
    ];
    let cap = bound.max(2 * max_abs(&m)).max(2 * m.trace().abs() + 2);
    let mut seen = HashSet::from([m]);
    let mut queue = VecDeque::from([(m, IntMatrix2::identity())]);
    while let Some((x, p)) = queue.pop_front() {
        if target(&x) {
            return Ok((p, MonomialMap { matrix: x }));
        }
        for g in &gens {
            let gi = g.inverse().expect("unimodular generator");
            let y = g.mul(&x).mul(&gi);
            if max_abs(&y) <= cap && seen.insert(y) {
                queue.push_back((y, g.mul(&p)));
            }
        }
    }
    Err(Error::NotStabilizable(format!("no sign-coherent conjugate of {m} with entries ≤ {cap}")))
}

fn max_abs(m: &IntMatrix2) -> i64 {
    m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs())
}

/// Expanding maps first: otherwise every eigenvalue lies on the unit circle,
/// powers grow at most linearly and the order test cannot overflow.
pub fn growth_class(f: &MonomialMap) -> Result<GrowthClass> {
    let e = eigen2(&f.matrix)?;
    if e.expanding() {
        return Ok(GrowthClass::Exponential(e.spectral_radius));
    }
    Ok(match matrix_order(&f.matrix.to_square(), 12) {
        MatrixOrder::Finite { .. } => GrowthClass::Bounded,
        MatrixOrder::Infinite => GrowthClass::Linear,
    })
}

/// The invariant form `α·w dz + β·z dw`, i.e. `α dz/z + β dw/w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFoliation {
    pub coeffs: [QuadNumber; 2],
    pub eigenvalue: QuadNumber,
}

impl LinearFoliation {
    /// `α` in the normal form `w dz + α·z dw`; `None` for `z dw`.
    pub fn alpha(&self) -> Option<QuadNumber> {
        let [a, b] = &self.coeffs;
        (!a.is_zero()).then(|| b / a)
    }
}

/// Forms whose coefficient vectors are eigenvectors of `ᵗM`.
pub fn invariant_foliations(f: &MonomialMap) -> Result<Vec<LinearFoliation>> {
    let t = f.matrix.transpose();
    let e = eigen2(&t)?;
    if !e.is_real() {
        return Err(Error::ComplexEigenvalues);
    }
    let one = QuadNumber::from_int(1);
    let zero = QuadNumber::zero();
    if e.repeated {
        if t.b == 0 && t.c == 0 {
            return Ok(vec![
                LinearFoliation {
                    coeffs: [one.clone(), zero.clone()],
                    eigenvalue: e.lambda1.clone(),
                },
                LinearFoliation {
                    coeffs: [zero, one],
                    eigenvalue: e.lambda1,
                },
            ]);
        }
        return Ok(vec![LinearFoliation {
            coeffs: e.v1,
            eigenvalue: e.lambda1,
        }]);
    }
    Ok(vec![
        LinearFoliation {
            coeffs: e.v1,
            eigenvalue: e.lambda1,
        },
        LinearFoliation {
            coeffs: e.v2,
            eigenvalue: e.lambda2,
        },
    ])
}

/// Coefficients of `f*(α dz/z + β dw/w)`, namely `ᵗM·(α, β)`.
pub fn pullback_log_form(f: &MonomialMap, coeffs: &[QuadNumber; 2]) -> [QuadNumber; 2] {
    let m = f.matrix;
    let q = QuadNumber::from_int;
    let [al, be] = coeffs;
    [&(al * &q(m.a)) + &(be * &q(m.c)), &(al * &q(m.b)) + &(be * &q(m.d))]
}

/// `τ = −Id` is central, so this holds for every map; checked by composing.
pub fn commutes_with_kummer_involution(f: &MonomialMap) -> bool {
    let t = MonomialMap::kummer_involution();
    f.compose(&t) == t.compose(f)
}
