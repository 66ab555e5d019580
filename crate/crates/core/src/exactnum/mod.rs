//! Exact arithmetic in `Q`, `Q(sqrt a)` and `Q(sqrt a, i)`, with dense matrices
//! over any of them.

mod complex;
mod matrix;
mod quad;
mod rat;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub use complex::{CxQuad, CxQuadJson};
pub use matrix::{is_positive_definite, Mat};
pub use quad::{exact_sign, QuadExt, QuadExtJson, Surd};
pub use rat::{rat_gcd, Rat};

/// The operations dense linear algebra needs from a scalar type.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
}

macro_rules! forward_owned_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl std::ops::Div for $t {
            type Output = $t;
            fn div(self, rhs: $t) -> $t {
                &self / &rhs
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use forward_owned_ops;

/// Lift a rational matrix into the real quadratic field.
pub fn rat_to_quad(m: &Mat<Rat>) -> Mat<QuadExt> {
    m.map(|x| QuadExt::rational(x.clone()))
}

/// Lift a real matrix into the complex field.
pub fn quad_to_cx(m: &Mat<QuadExt>) -> Mat<CxQuad> {
    m.map(|x| CxQuad::real(x.clone()))
}

/// Rational entries of a real matrix, if all of them are rational.
pub fn quad_to_rat(m: &Mat<QuadExt>) -> Option<Mat<Rat>> {
    let data: Option<Vec<Rat>> = m.entries().iter().map(|x| x.to_rational()).collect();
    Some(Mat::new(m.rows(), m.cols(), data?).expect("same shape"))
}

/// Real and imaginary parts of a complex matrix.
pub fn cx_parts(m: &Mat<CxQuad>) -> (Mat<QuadExt>, Mat<QuadExt>) {
    (m.map(|z| z.re.clone()), m.map(|z| z.im.clone()))
}
