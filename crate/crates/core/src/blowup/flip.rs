//! Flips on the local Riccati model `λ·w dz − z dw` near the fibre `{z = 0}`:
//! blow up one of its two singular points, then contract the strict
//! transform of the fibre. The point `w = ∞` (side `p`) shifts `λ` by `+1`,
//! the origin (side `q`) by `−1`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::model::SurfaceModel;
use super::monomial::{monomial_pullback, Monomial, BLOWUP_CHART_2};
use crate::algebra::{BiPoly, QuadNumber};
use crate::error::{Error, Result};
use crate::foliation::{OneForm, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlipSide {
    P,
    Q,
}

impl FlipSide {
    fn shift(self) -> i64 {
        match self {
            FlipSide::P => 1,
            FlipSide::Q => -1,
        }
    }
}

const INVERT_W: Monomial = [[1, 0], [0, -1]];

/// `λ·w dz − z dw` in the variables `(z, w)`.
pub fn riccati_local_model(lambda: &QuadNumber) -> Result<OneForm> {
    let a = BiPoly::monomial(lambda.clone(), 0, 1);
    let b = BiPoly::monomial(QuadNumber::from_int(-1), 1, 0);
    OneForm::new(a, b, ("z", "w"))
}

/// Performs the flip on the local model and returns the new `λ`, after
/// checking the flipped form and the contraction against explicit blowups.
pub fn flip(lambda: &QuadNumber, side: FlipSide) -> Result<QuadNumber> {
    let shifted = lambda.try_add(&QuadNumber::from_int(side.shift()))?;
    if shifted.is_zero() || shifted.as_rational().is_some_and(|r| r.is_positive()) {
        return Err(Error::WouldCreateNonReduced(format!("λ would become {shifted}")));
    }
    let model = riccati_local_model(lambda)?;
    // chart centred at the blown-up point
    let local = match side {
        FlipSide::Q => model.clone(),
        FlipSide::P => monomial_pullback(&model, INVERT_W, ("z", "w"))?.0,
    };
    let blown = SurfaceModel::affine(local)?.blow_up(0, &Point::origin())?;
    let (c1, c2) = blown.log[0].new_charts;
    if blown.log[0].dicritical {
        return Err(Error::CertificationFailed("flip centre is dicritical".into()));
    }
    // after contracting the fibre, chart 1 of the blowup is a chart of the new
    // surface around the new fibre, with the new `w` = `t` or `1/t`
    let chart1 = blown.charts[c1].form.with_vars(("z", "w"));
    let flipped = match side {
        FlipSide::Q => chart1,
        FlipSide::P => monomial_pullback(&chart1, INVERT_W, ("z", "w"))?.0,
    };
    if !flipped.proportional_to(&riccati_local_model(&shifted)?) {
        return Err(Error::CertificationFailed(format!("flipped form {flipped}")));
    }
    // the contracted point is the opposite pole of the new fibre; blowing it
    // up must recover the strict transform of the old fibre
    let at_contracted = match side {
        FlipSide::Q => monomial_pullback(&flipped, INVERT_W, ("z", "w"))?.0,
        FlipSide::P => flipped.clone(),
    };
    let (back, _) = monomial_pullback(&at_contracted, BLOWUP_CHART_2, ("s", "y"))?;
    if !back.swap().proportional_to(&blown.charts[c2].form.with_vars(("y", "s"))) {
        return Err(Error::CertificationFailed("contraction does not invert the blowup".into()));
    }
    Ok(shifted)
}
