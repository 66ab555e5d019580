use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{Field, Rat};
use crate::error::{Error, Result};

/// A positive rational that is not a rational square; the `a` of `Q(sqrt a)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Surd(Rat);

impl Surd {
    pub fn new(a: Rat) -> Result<Surd> {
        if a.signum() <= 0 {
            return Err(Error::NonPositiveSurd(a.to_string()));
        }
        if a.is_square() {
            return Err(Error::SplitSurd(a.to_string()));
        }
        Ok(Surd(a))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Element `r + s sqrt(a)` of a real quadratic field.
///
/// Purely rational values (`s == 0`) carry no surd and combine with any field;
/// two irrational operands over different surds panic. Callers that accept
/// external data check surd agreement up front with [`QuadExt::check_surd`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    r: Rat,
    s: Rat,
    surd: Option<Surd>,
}

fn join_surds(a: &Option<Surd>, b: &Option<Surd>) -> Option<Surd> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            assert!(x == y, "mixed surds sqrt({x}) and sqrt({y})");
            Some(x.clone())
        }
    }
}

impl QuadExt {
    pub fn new(r: Rat, s: Rat, surd: &Surd) -> QuadExt {
        QuadExt::normalized(r, s, Some(surd.clone()))
    }

    pub fn rational(r: Rat) -> QuadExt {
        QuadExt { r, s: Rat::zero(), surd: None }
    }

    pub fn int(n: i64) -> QuadExt {
        QuadExt::rational(Rat::integer(n))
    }

    /// `sqrt(a)` itself.
    pub fn sqrt(surd: &Surd) -> QuadExt {
        QuadExt::new(Rat::zero(), Rat::one(), surd)
    }

    fn normalized(r: Rat, s: Rat, surd: Option<Surd>) -> QuadExt {
        if s.is_zero() {
            QuadExt { r, s, surd: None }
        } else {
            assert!(surd.is_some(), "irrational part without a surd");
            QuadExt { r, s, surd }
        }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.r
    }

    pub fn surd_part(&self) -> &Rat {
        &self.s
    }

    pub fn surd(&self) -> Option<&Surd> {
        self.surd.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| self.r.clone())
    }

    /// Errors unless the element is rational or lives over `surd`.
    pub fn check_surd(&self, surd: Option<&Surd>) -> Result<()> {
        match (&self.surd, surd) {
            (None, _) => Ok(()),
            (Some(mine), Some(ctx)) if mine == ctx => Ok(()),
            (Some(mine), Some(ctx)) => Err(Error::MixedSurd(mine.to_string(), ctx.to_string())),
            (Some(mine), None) => Err(Error::MixedSurd(mine.to_string(), "none".into())),
        }
    }

    /// Galois conjugate `r - s sqrt(a)`.
    pub fn conj(&self) -> QuadExt {
        QuadExt::normalized(self.r.clone(), -&self.s, self.surd.clone())
    }

    /// Field norm `r^2 - a s^2`.
    pub fn norm(&self) -> Rat {
        match &self.surd {
            None => &self.r * &self.r,
            Some(a) => &(&self.r * &self.r) - &(&(&self.s * &self.s) * a.value()),
        }
    }

    pub fn scale(&self, c: &Rat) -> QuadExt {
        QuadExt::normalized(&self.r * c, &self.s * c, self.surd.clone())
    }

    pub fn to_f64(&self) -> f64 {
        match &self.surd {
            None => self.r.to_f64(),
            Some(a) => self.r.to_f64() + self.s.to_f64() * a.value().to_f64().sqrt(),
        }
    }
}

/// Exact sign of the real number `r + s sqrt(a)`.
pub fn exact_sign(x: &QuadExt) -> i8 {
    let sr = x.r.signum();
    let ss = x.s.signum();
    if ss == 0 {
        return sr;
    }
    if sr == 0 || sr == ss {
        return ss;
    }
    // opposite signs: compare r^2 with a s^2
    let a = x.surd.as_ref().expect("irrational part carries a surd").value();
    let lhs = &x.r * &x.r;
    let rhs = &(&x.s * &x.s) * a;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sr,
        std::cmp::Ordering::Less => ss,
        std::cmp::Ordering::Equal => unreachable!("sqrt(a) is irrational"),
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rat::zero())
    }
    fn one() -> Self {
        QuadExt::rational(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let inv = n.recip().expect("norm of a nonzero element is nonzero");
        Some(self.conj().scale(&inv))
    }
}

impl From<Rat> for QuadExt {
    fn from(r: Rat) -> QuadExt {
        QuadExt::rational(r)
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let surd = join_surds(&self.surd, &rhs.surd);
        QuadExt::normalized(&self.r + &rhs.r, &self.s + &rhs.s, surd)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let surd = join_surds(&self.surd, &rhs.surd);
        QuadExt::normalized(&self.r - &rhs.r, &self.s - &rhs.s, surd)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let surd = join_surds(&self.surd, &rhs.surd);
        let mut r = &self.r * &rhs.r;
        if let Some(a) = &surd {
            r = &r + &(&(&self.s * &rhs.s) * a.value());
        }
        let s = &(&self.r * &rhs.s) + &(&self.s * &rhs.r);
        QuadExt::normalized(r, s, surd)
    }
}

impl Div for &QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self * &rhs.try_inv().expect("division by zero")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::normalized(-&self.r, -&self.s, self.surd.clone())
    }
}

super::forward_owned_ops!(QuadExt);

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.surd {
            None => write!(f, "{}", self.r),
            Some(a) => write!(f, "{} + {}*sqrt({})", self.r, self.s, a),
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form `{"r": "p/q", "s": "p/q"}`; the surd lives in the enclosing document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExtJson {
    pub r: Rat,
    pub s: Rat,
}

impl QuadExtJson {
    pub fn from_value(x: &QuadExt) -> QuadExtJson {
        QuadExtJson { r: x.r.clone(), s: x.s.clone() }
    }

    pub fn into_value(self, surd: Option<&Surd>) -> Result<QuadExt> {
        if self.s.is_zero() {
            return Ok(QuadExt::rational(self.r));
        }
        match surd {
            Some(a) => Ok(QuadExt::new(self.r, self.s, a)),
            None => Err(Error::InvalidInput(
                "irrational entry in a document without a surd".into(),
            )),
        }
    }
}
