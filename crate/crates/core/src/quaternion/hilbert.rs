use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::QuatAlgebra;
use crate::error::{Error, Result};
use crate::exactnum::{Field, Rat};

/// A place of `Q`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::InvalidInput(format!("bad place {s:?}")))?;
                Place::prime(p)
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

const TRIAL_DIVISION_LIMIT: u64 = 2_000_000;

/// Distinct prime factors of `|n|` by trial division.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    let too_large = || Error::TooLarge(n.to_string());
    let mut m = n.abs().to_u64().ok_or_else(too_large)?;
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let mut d = 2u64;
    while d * d <= m {
        if d > TRIAL_DIVISION_LIMIT {
            return Err(too_large());
        }
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    Ok(out)
}

/// Integer representative of `r` in the same square class (`p/q -> p q`).
fn square_class_integer(r: &Rat) -> BigInt {
    r.numer() * r.denom()
}

/// Splits `n = p^v u` with `p` not dividing `u`.
fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = n.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `(a, b)_v`: `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial solution over `Q_v`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let a = square_class_integer(a);
    let b = square_class_integer(b);
    let p = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(p) => p,
    };
    let pb = BigInt::from(p);
    let (alpha, u) = split_valuation(&a, &pb);
    let (beta, v) = split_valuation(&b, &pb);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().expect("residue mod 8");
        let eps = |x: u32| ((x - 1) / 2) % 2;
        let omega = |x: u32| ((x * x - 1) / 8) % 2;
        let (u8, v8) = (m8(&u), m8(&v));
        let e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if (alpha * beta) % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(&u, &pb);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, &pb);
    }
    Ok(s)
}

/// Places where a quaternion algebra over `Q` stays division.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct RamificationSet {
    pub finite: BTreeSet<u64>,
    pub infinite: bool,
}

impl RamificationSet {
    pub fn is_split(&self) -> bool {
        self.finite.is_empty() && !self.infinite
    }

    pub fn is_division(&self) -> bool {
        !self.is_split()
    }

    /// Split at the real place.
    pub fn is_indefinite(&self) -> bool {
        !self.infinite
    }

    pub fn cardinality(&self) -> usize {
        self.finite.len() + usize::from(self.infinite)
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(u64::to_string).collect();
        if self.infinite {
            parts.push("inf".into());
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Ramification of `(a, b / Q)` from Hilbert symbols at the primes dividing `2ab` and at infinity.
pub fn classify_algebra(alg: &QuatAlgebra) -> Result<RamificationSet> {
    let mut primes: BTreeSet<u64> = BTreeSet::from([2]);
    for r in [alg.a(), alg.b()] {
        primes.extend(prime_factors(r.numer())?);
        primes.extend(prime_factors(r.denom())?);
    }
    let mut set = RamificationSet::default();
    for p in primes {
        if hilbert_symbol(alg.a(), alg.b(), Place::Prime(p))? == -1 {
            set.finite.insert(p);
        }
    }
    set.infinite = hilbert_symbol(alg.a(), alg.b(), Place::Infinity)? == -1;
    if set.cardinality() % 2 != 0 {
        return Err(Error::ReciprocityViolation(format!(
            "odd ramification {set} for {alg}"
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::integer(n)
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(hilbert_symbol(&r(1), &r(7), Place::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&r(1), &r(-3), Place::Infinity).unwrap(), 1);
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(2), &r(3), Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Prime(2)).unwrap(), -1);
    }

    #[test]
    fn symbol_on_rationals_uses_square_class() {
        // 1/2 and 2 differ by the square 1/4
        for p in [Place::Prime(2), Place::Prime(3), Place::Infinity] {
            assert_eq!(
                hilbert_symbol(&Rat::new(1, 2), &r(3), p).unwrap(),
                hilbert_symbol(&r(2), &r(3), p).unwrap()
            );
        }
    }

    #[test]
    fn classification_examples() {
        let split = classify_algebra(&QuatAlgebra::from_ints(1, 1).unwrap()).unwrap();
        assert!(split.is_split());
        let b23 = classify_algebra(&QuatAlgebra::from_ints(2, 3).unwrap()).unwrap();
        assert_eq!(b23.finite, BTreeSet::from([2, 3]));
        assert!(!b23.infinite);
        let ham = classify_algebra(&QuatAlgebra::from_ints(-1, -1).unwrap()).unwrap();
        assert_eq!(ham.finite, BTreeSet::from([2]));
        assert!(ham.infinite);
        let c = classify_algebra(&QuatAlgebra::from_ints(3, -4).unwrap()).unwrap();
        assert_eq!(c, b23);
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(&BigInt::from(-360)).unwrap(), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(1)).unwrap(), Vec::<u64>::new());
        assert_eq!(prime_factors(&BigInt::from(97)).unwrap(), vec![97]);
    }

    #[test]
    fn place_parsing() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("3".parse::<Place>().unwrap(), Place::Prime(3));
        assert!("4".parse::<Place>().is_err());
    }

    #[test]
    fn json_shape() {
        let set = RamificationSet { finite: BTreeSet::from([2, 3]), infinite: false };
        assert_eq!(serde_json::to_string(&set).unwrap(), r#"{"finite":[2,3],"infinite":false}"#);
    }
}
