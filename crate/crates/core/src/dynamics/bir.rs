use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{eigen2, IntMatrix2, QuadNumber};
use crate::error::{Error, Result};

/// Enumeration limits for the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub t: i64,
    pub a: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { t: 10, a: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum BirClassification {
    Fibration,
    InfiniteMonomial {
        witness: IntMatrix2,
        eigenvalue: QuadNumber,
        /// `|tr| > 2`, reported for `det = 1` witnesses.
        trace_criterion: Option<bool>,
        bounds: SearchBounds,
    },
    Finite {
        /// `true` when finiteness is proved rather than a bounded-search verdict.
        certified: bool,
        reason: String,
        bounds: SearchBounds,
    },
}

/// Primitive integer `(A, B, C)` with `A·α² + B·α + C = 0`, `A > 0`.
pub fn integer_relation(alpha: &QuadNumber) -> Result<(i64, i64, i64)> {
    if alpha.is_rational() {
        return Err(Error::InvalidInput("α is rational".into()));
    }
    // (x − r)² − s²·D
    let r = alpha.rational_part();
    let s = alpha.surd_part();
    let d = BigInt::from(alpha.radicand());
    let two = BigInt::from(2);
    let b = -(r * &two);
    let c = r * r - s * s * num_rational::BigRational::from_integer(d);
    let l = b.denom().lcm(c.denom());
    let (bi, ci) = ((b * &l).to_integer(), (c * &l).to_integer());
    let g = l.gcd(&bi).gcd(&ci);
    let conv = |x: BigInt| {
        (x / &g)
            .to_i64()
            .ok_or_else(|| Error::InvalidInput("coefficients of α are too large".into()))
    };
    Ok((conv(l.clone())?, conv(bi)?, conv(ci)?))
}

/// `0, 1, −1, 2, −2, …` up to `n`.
fn by_size(n: i64, positive_first: bool) -> impl Iterator<Item = i64> {
    let s = if positive_first { 1 } else { -1 };
    std::iter::once(0).chain((1..=n).flat_map(move |k| [s * k, -s * k]))
}

/// Trichotomy for the linear foliation `w dz + α·z dw`: a rational
/// fibration, an infinite-order monomial symmetry, or finitely many.
pub fn bir_group_classify(alpha: &QuadNumber, bounds: SearchBounds) -> Result<BirClassification> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("α must be nonzero".into()));
    }
    if alpha.is_rational() {
        return Ok(BirClassification::Fibration);
    }
    let (ra, rb, rc) = integer_relation(alpha)?;
    for t in by_size(bounds.t, true).skip(1) {
        for a in by_size(bounds.a, true) {
            let m = IntMatrix2::new(a, t * ra, -t * rc, a - t * rb);
            if m.det().abs() != 1 {
                continue;
            }
            let e = eigen2(&m)?;
            if !e.is_real() || !e.expanding() {
                continue;
            }
            let lambda = alpha.try_mul(&QuadNumber::from_int(m.b))?.try_add(&QuadNumber::from_int(m.a))?;
            let image_second = alpha.try_mul(&QuadNumber::from_int(m.d))?.try_add(&QuadNumber::from_int(m.c))?;
            if image_second != lambda.try_mul(alpha)? {
                return Err(Error::CertificationFailed(format!("{m} does not fix (1, α)")));
            }
            debug_assert!(lambda == e.lambda1 || lambda == e.lambda2);
            return Ok(BirClassification::InfiniteMonomial {
                witness: m,
                eigenvalue: lambda,
                trace_criterion: (m.det() == 1).then(|| m.trace().abs() > 2),
                bounds,
            });
        }
    }
    if alpha.radicand() < 0 {
        // an eigenvalue a + bα of an integer matrix is an algebraic integer in an
        // imaginary quadratic field with norm ±1, hence a root of unity
        return Ok(BirClassification::Finite {
            certified: true,
            reason: "imaginary quadratic α: eigenvalues are units of norm 1, hence roots of unity".into(),
            bounds,
        });
    }
    Ok(BirClassification::Finite {
        certified: false,
        reason: format!("no witness with |t| ≤ {}, |a| ≤ {}", bounds.t, bounds.a),
        bounds,
    })
}
