use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CxQuad, Field, Mat, QuadExt, Rat};

/// A rational point `x + iy` of the upper half plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Tau {
    x: Rat,
    y: Rat,
}

impl Tau {
    pub fn new(x: Rat, y: Rat) -> Result<Tau> {
        if y.signum() <= 0 {
            return Err(Error::InvalidInput(format!("tau needs positive imaginary part, got {y}")));
        }
        Ok(Tau { x, y })
    }

    pub fn i() -> Tau {
        Tau { x: Rat::zero(), y: Rat::one() }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn point(&self) -> CxQuad {
        CxQuad::from_rats(self.x.clone(), self.y.clone())
    }

    /// `{i, 1 + i, 1/2 + i, 1/3 + 2i}`.
    pub fn default_samples() -> Vec<Tau> {
        [(0, 1, 1), (1, 1, 1), (1, 2, 1), (1, 3, 2)]
            .into_iter()
            .map(|(p, q, y)| Tau::new(Rat::new(p, q), Rat::integer(y)).expect("y > 0"))
            .collect()
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// Parses `x,y` with rational `x` and `y`, e.g. `1/2,1`.
impl FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tau> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("expected x,y for tau, got {s:?}")))?;
        Tau::new(x.trim().parse()?, y.trim().parse()?)
    }
}

/// `J_tau` for a rational point.
pub fn j_tau(tau: &Tau) -> Mat<Rat> {
    let (x, y) = (&tau.x, &tau.y);
    let n = &(x * x) + &(y * y);
    Mat::from_rows(vec![vec![-x, n], vec![Rat::integer(-1), x.clone()]])
        .expect("2x2")
        .scale(&y.recip().expect("y > 0"))
}

/// `J_tau` at a point with real coordinates in `Q(sqrt a)`, e.g. `gamma(tau)`.
pub fn j_tau_at(point: &CxQuad) -> Result<Mat<QuadExt>> {
    let (x, y) = (&point.re, &point.im);
    let inv = y.try_inv().ok_or_else(|| Error::InvalidInput("point on the real axis".into()))?;
    let n = &(x * x) + &(y * y);
    Ok(Mat::from_rows(vec![vec![-x, n], vec![-QuadExt::one(), x.clone()]])?.scale(&inv))
}

/// `alpha (tau, 1)^t` for a `g x 2` matrix `alpha`.
pub fn alpha_tau(alpha: &Mat<QuadExt>, point: &CxQuad) -> Vec<CxQuad> {
    (0..alpha.rows())
        .map(|i| &(&CxQuad::real(alpha[(i, 0)].clone()) * point) + &CxQuad::real(alpha[(i, 1)].clone()))
        .collect()
}

/// Moebius action `(a tau + b) / (c tau + d)` and the factor `c tau + d`.
pub fn mobius(gamma: &Mat<QuadExt>, point: &CxQuad) -> Result<(CxQuad, CxQuad)> {
    let e = |i, j| CxQuad::real(gamma[(i, j)].clone());
    let num = &(&e(0, 0) * point) + &e(0, 1);
    let den = &(&e(1, 0) * point) + &e(1, 1);
    let inv = den.try_inv().ok_or_else(|| Error::InvalidInput("c tau + d vanishes".into()))?;
    Ok((&num * &inv, den))
}
