use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::quad::QuadExtJson;
use super::{Field, QuadExt, Rat, Surd};
use crate::error::Result;

/// Element `re + im * i` of `Q(sqrt a, i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CxQuad {
    pub re: QuadExt,
    pub im: QuadExt,
}

impl CxQuad {
    pub fn new(re: QuadExt, im: QuadExt) -> CxQuad {
        CxQuad { re, im }
    }

    pub fn real(re: QuadExt) -> CxQuad {
        CxQuad { re, im: QuadExt::zero() }
    }

    pub fn from_rats(re: Rat, im: Rat) -> CxQuad {
        CxQuad { re: re.into(), im: im.into() }
    }

    pub fn i() -> CxQuad {
        CxQuad { re: QuadExt::zero(), im: QuadExt::one() }
    }

    pub fn conj(&self) -> CxQuad {
        CxQuad { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|^2`, an element of the real field.
    pub fn abs_sq(&self) -> QuadExt {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, c: &QuadExt) -> CxQuad {
        CxQuad { re: &self.re * c, im: &self.im * c }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Rational integer value, if the element is one.
    pub fn to_integer(&self) -> Option<Rat> {
        if !self.im.is_zero() {
            return None;
        }
        self.re.to_rational().filter(|r| r.is_integer())
    }
}

impl Field for CxQuad {
    fn zero() -> Self {
        CxQuad::real(QuadExt::zero())
    }
    fn one() -> Self {
        CxQuad::real(QuadExt::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.abs_sq().try_inv()?;
        Some(self.conj().scale(&n))
    }
}

impl From<QuadExt> for CxQuad {
    fn from(x: QuadExt) -> CxQuad {
        CxQuad::real(x)
    }
}

impl From<Rat> for CxQuad {
    fn from(x: Rat) -> CxQuad {
        CxQuad::real(x.into())
    }
}

impl Add for &CxQuad {
    type Output = CxQuad;
    fn add(self, rhs: &CxQuad) -> CxQuad {
        CxQuad { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &CxQuad {
    type Output = CxQuad;
    fn sub(self, rhs: &CxQuad) -> CxQuad {
        CxQuad { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &CxQuad {
    type Output = CxQuad;
    fn mul(self, rhs: &CxQuad) -> CxQuad {
        CxQuad {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &CxQuad {
    type Output = CxQuad;
    fn div(self, rhs: &CxQuad) -> CxQuad {
        self * &rhs.try_inv().expect("division by zero")
    }
}

impl Neg for &CxQuad {
    type Output = CxQuad;
    fn neg(self) -> CxQuad {
        CxQuad { re: -&self.re, im: -&self.im }
    }
}

super::forward_owned_ops!(CxQuad);

impl fmt::Display for CxQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl fmt::Debug for CxQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CxQuadJson {
    pub re: QuadExtJson,
    pub im: QuadExtJson,
}

impl CxQuadJson {
    pub fn from_value(z: &CxQuad) -> CxQuadJson {
        CxQuadJson { re: QuadExtJson::from_value(&z.re), im: QuadExtJson::from_value(&z.im) }
    }

    pub fn into_value(self, surd: Option<&Surd>) -> Result<CxQuad> {
        Ok(CxQuad { re: self.re.into_value(surd)?, im: self.im.into_value(surd)? })
    }
}
