//! Rational quaternion algebras `(a, b / Q)`: arithmetic, local classification,
//! orders and their norm-one units, and the real embedding used for fake
//! elliptic curves.

mod embed;
mod hilbert;
mod order;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Rat};

pub use embed::{find_pure_pair, RealEmbedding};
pub use hilbert::{classify_algebra, hilbert_symbol, prime_factors, Place, RamificationSet};
pub use order::{congruence_subgroup, standard_order, unit_search, QuatOrder};

/// The algebra generated by `x`, `y` with `x^2 = a`, `y^2 = b`, `xy = -yx`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuatAlgebra {
    a: Rat,
    b: Rat,
}

impl QuatAlgebra {
    pub fn new(a: Rat, b: Rat) -> Result<QuatAlgebra> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(QuatAlgebra { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<QuatAlgebra> {
        QuatAlgebra::new(Rat::integer(a), Rat::integer(b))
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn element(&self, c: [Rat; 4]) -> Quat {
        Quat { alg: self.clone(), c }
    }

    pub fn elem(&self, c: [i64; 4]) -> Quat {
        self.element(c.map(Rat::integer))
    }

    pub fn scalar(&self, r: Rat) -> Quat {
        self.element([r, Rat::zero(), Rat::zero(), Rat::zero()])
    }

    pub fn one(&self) -> Quat {
        self.elem([1, 0, 0, 0])
    }

    pub fn x(&self) -> Quat {
        self.elem([0, 1, 0, 0])
    }

    pub fn y(&self) -> Quat {
        self.elem([0, 0, 1, 0])
    }

    pub fn xy(&self) -> Quat {
        self.elem([0, 0, 0, 1])
    }
}

impl fmt::Display for QuatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Quaternion `c0 + c1 x + c2 y + c3 xy`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quat {
    alg: QuatAlgebra,
    c: [Rat; 4],
}

impl Quat {
    pub fn algebra(&self) -> &QuatAlgebra {
        &self.alg
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.c
    }

    /// Product under `x^2 = a`, `y^2 = b`, `xy = -yx`.
    pub fn multiply(&self, rhs: &Quat) -> Result<Quat> {
        if self.alg != rhs.alg {
            return Err(Error::AlgebraMismatch);
        }
        let (a, b) = (&self.alg.a, &self.alg.b);
        let ab = a * b;
        let [p0, p1, p2, p3] = &self.c;
        let [q0, q1, q2, q3] = &rhs.c;
        let c0 = &(&(&(p0 * q0) + &(a * &(p1 * q1))) + &(b * &(p2 * q2))) - &(&ab * &(p3 * q3));
        let c1 = &(&(&(p0 * q1) + &(p1 * q0)) - &(b * &(p2 * q3))) + &(b * &(p3 * q2));
        let c2 = &(&(&(p0 * q2) + &(p2 * q0)) + &(a * &(p1 * q3))) - &(a * &(p3 * q1));
        let c3 = &(&(&(p0 * q3) + &(p3 * q0)) + &(p1 * q2)) - &(p2 * q1);
        Ok(self.alg.element([c0, c1, c2, c3]))
    }

    /// Canonical involution.
    pub fn conj(&self) -> Quat {
        let [c0, c1, c2, c3] = &self.c;
        self.alg.element([c0.clone(), -c1, -c2, -c3])
    }

    pub fn nrd(&self) -> Rat {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let [c0, c1, c2, c3] = &self.c;
        let sq = |x: &Rat| x * x;
        &(&(&sq(c0) - &(a * &sq(c1))) - &(b * &sq(c2))) + &(&(a * b) * &sq(c3))
    }

    pub fn trd(&self) -> Rat {
        &self.c[0] + &self.c[0]
    }

    pub fn reduced_norm_trace(&self) -> (Rat, Rat) {
        (self.nrd(), self.trd())
    }

    pub fn is_pure(&self) -> bool {
        self.c[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Field::is_zero)
    }

    pub fn scale(&self, r: &Rat) -> Quat {
        self.alg.element(self.c.clone().map(|x| &x * r))
    }

    pub fn inverse(&self) -> Option<Quat> {
        let n = self.nrd().recip()?;
        Some(self.conj().scale(&n))
    }

    pub fn pow(&self, e: u32) -> Quat {
        (0..e).fold(self.alg.one(), |acc, _| &acc * self)
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> Rat {
        self.c.iter().map(Rat::abs).max().expect("four coordinates")
    }
}

impl Mul for &Quat {
    type Output = Quat;
    fn mul(self, rhs: &Quat) -> Quat {
        self.multiply(rhs).expect("quaternions from the same algebra")
    }
}

impl Add for &Quat {
    type Output = Quat;
    fn add(self, rhs: &Quat) -> Quat {
        assert_eq!(self.alg, rhs.alg, "quaternions from the same algebra");
        let c = std::array::from_fn(|i| &self.c[i] + &rhs.c[i]);
        self.alg.element(c)
    }
}

impl Sub for &Quat {
    type Output = Quat;
    fn sub(self, rhs: &Quat) -> Quat {
        assert_eq!(self.alg, rhs.alg, "quaternions from the same algebra");
        let c = std::array::from_fn(|i| &self.c[i] - &rhs.c[i]);
        self.alg.element(c)
    }
}

impl Neg for &Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(&Rat::integer(-1))
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.c;
        write!(f, "{c0} + {c1}x + {c2}y + {c3}xy")
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form `{"c0": .., "c1": .., "c2": .., "c3": ..}`; `(a, b)` lives in the enclosing document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatJson {
    pub c0: Rat,
    pub c1: Rat,
    pub c2: Rat,
    pub c3: Rat,
}

impl QuatJson {
    pub fn from_value(q: &Quat) -> QuatJson {
        let [c0, c1, c2, c3] = q.c.clone();
        QuatJson { c0, c1, c2, c3 }
    }

    pub fn into_value(self, alg: &QuatAlgebra) -> Quat {
        alg.element([self.c0, self.c1, self.c2, self.c3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_products() {
        let b = QuatAlgebra::from_ints(2, 3).unwrap();
        assert_eq!(&b.x() * &b.y(), b.xy());
        assert_eq!(&b.y() * &b.x(), -&b.xy());
        assert_eq!(&b.x() * &b.x(), b.elem([2, 0, 0, 0]));
        let u = &b.x() + &b.xy();
        assert_eq!(&u * &u, b.elem([-4, 0, 0, 0]));
    }

    #[test]
    fn conjugation() {
        let b = QuatAlgebra::from_ints(2, 3).unwrap();
        assert_eq!(b.one().conj(), b.one());
        assert_eq!(b.elem([1, 1, 1, 1]).conj(), b.elem([1, -1, -1, -1]));
        let v = &b.x() + &b.y();
        assert_eq!(v.conj(), -&v);
    }

    #[test]
    fn norm_and_trace() {
        let b = QuatAlgebra::from_ints(2, 3).unwrap();
        assert_eq!(b.one().reduced_norm_trace(), (Rat::integer(1), Rat::integer(2)));
        let u = b.elem([1, 1, 1, 1]);
        assert_eq!(u.nrd(), Rat::integer(2));
        // oracle: u u' is the scalar nrd(u)
        assert_eq!(&u * &u.conj(), b.scalar(u.nrd()));
        let c = QuatAlgebra::from_ints(3, -4).unwrap();
        assert_eq!(c.elem([2, 1, 0, 0]).nrd(), Rat::integer(1));
    }

    #[test]
    fn mismatch_and_zero_parameters() {
        let b = QuatAlgebra::from_ints(2, 3).unwrap();
        let c = QuatAlgebra::from_ints(3, -4).unwrap();
        assert_eq!(b.x().multiply(&c.x()), Err(Error::AlgebraMismatch));
        assert_eq!(QuatAlgebra::from_ints(0, 3), Err(Error::ZeroParameter));
    }

    #[test]
    fn inverse_is_conjugate_over_norm() {
        let b = QuatAlgebra::from_ints(3, -4).unwrap();
        let u = b.elem([1, 2, -1, 3]);
        assert_eq!(&u * &u.inverse().unwrap(), b.one());
    }
}
