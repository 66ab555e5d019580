//! Brauer-class bookkeeping for the rational corestriction of a quaternion
//! algebra `A` over a totally real field `F` of degree `d` that splits at
//! exactly one real place.
//!
//! The corestriction itself (dimension `4^d`) is never built; its local
//! invariant at a rational place is the sum of the invariants of `A` at the
//! places above it, each ramified place contributing `1/2`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::RamificationSet;

/// A finite place of `F` above a rational prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePlace {
    pub name: String,
    pub residue_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplitting {
    pub prime: u64,
    pub places: Vec<FinitePlace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotallyRealInput {
    pub d: u32,
    pub prime_splitting: Vec<PrimeSplitting>,
    /// Names of the finite places of `F` where `A` ramifies.
    pub ramified_finite: Vec<String>,
    /// Number of real places where `A` ramifies.
    pub ramified_real: u32,
}

/// Shape of `V_R` as a module over `Cor(A) (x) R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealModuleShape {
    /// `R^{2^d}`: `d` odd, `B` split.
    #[serde(rename = "R^(2^d)")]
    RealVector,
    /// `M_{2^d x 2}(R)`: `d` odd, `B` non-split.
    #[serde(rename = "M_(2^d x 2)(R)")]
    RealMatrix,
    /// `H^{2^(d-1)} = C^{2^d}`: `d` even.
    #[serde(rename = "C^(2^d)")]
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndomorphismAlgebra {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "B")]
    Quaternion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorClass {
    pub b_splits: bool,
    pub g: u64,
    pub lattice_rank: u64,
    pub endomorphism_algebra: EndomorphismAlgebra,
    pub real_module_shape: RealModuleShape,
    /// `B` is split at the real place.
    pub b_indefinite: bool,
    /// Ramification of `B` over `Q` (empty when `B` splits).
    pub b_ramification: RamificationSet,
}

impl TotallyRealInput {
    /// The degree-one case `F = Q`, `A = B`, from the ramification of `B`.
    pub fn from_rational(ram: &RamificationSet) -> TotallyRealInput {
        let prime_splitting = ram
            .finite
            .iter()
            .map(|&p| PrimeSplitting {
                prime: p,
                places: vec![FinitePlace { name: p.to_string(), residue_degree: 1 }],
            })
            .collect();
        TotallyRealInput {
            d: 1,
            prime_splitting,
            ramified_finite: ram.finite.iter().map(u64::to_string).collect(),
            ramified_real: u32::from(ram.infinite),
        }
    }

    /// A real quadratic field of discriminant `disc`; `ramified` lists
    /// `(p, k)` meaning the `k`-th place above `p` in the order produced by
    /// [`real_quadratic_places`].
    pub fn real_quadratic(disc: i64, ramified: &[(u64, usize)], ramified_real: u32) -> Result<TotallyRealInput> {
        let primes: BTreeSet<u64> = ramified.iter().map(|&(p, _)| p).collect();
        let mut prime_splitting = Vec::new();
        let mut ramified_finite = Vec::new();
        for p in primes {
            let places = real_quadratic_places(disc, p)?;
            for &(q, k) in ramified.iter().filter(|(q, _)| *q == p) {
                let place = places.get(k).ok_or_else(|| {
                    Error::InvalidInput(format!("only {} places above {q}", places.len()))
                })?;
                ramified_finite.push(place.name.clone());
            }
            prime_splitting.push(PrimeSplitting { prime: p, places });
        }
        Ok(TotallyRealInput { d: 2, prime_splitting, ramified_finite, ramified_real })
    }
}

/// Places of `Q(sqrt D)` above `p` from the Kronecker symbol `(D/p)`.
pub fn real_quadratic_places(disc: i64, p: u64) -> Result<Vec<FinitePlace>> {
    if disc <= 1 || is_square(disc) {
        return Err(Error::InvalidInput(format!("{disc} is not a real quadratic discriminant")));
    }
    let place = |suffix: &str, f: u32| FinitePlace { name: format!("p{p}{suffix}"), residue_degree: f };
    Ok(match kronecker(disc, p) {
        0 => vec![place("", 1)],
        1 => vec![place("a", 1), place("b", 1)],
        _ => vec![place("", 2)],
    })
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = (n as f64).sqrt().round() as i64;
        (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
    }
}

fn kronecker(d: i64, p: u64) -> i8 {
    if p == 2 {
        return match d.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let pb = BigInt::from(p);
    let r = BigInt::from(d).mod_floor(&pb);
    if r == BigInt::from(0) {
        return 0;
    }
    if r.modpow(&((&pb - 1u32) / 2u32), &pb) == BigInt::from(1) {
        1
    } else {
        -1
    }
}

/// Splitting of `B` in `Cor_{F/Q}(A) = M_{2^(d-1)}(B)` and the resulting fiber shape.
pub fn corestriction_class(input: &TotallyRealInput) -> Result<CorClass> {
    if input.d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if input.ramified_real != input.d - 1 {
        return Err(Error::DecompositionViolation(format!(
            "{} real places ramified, expected d - 1 = {}",
            input.ramified_real,
            input.d - 1
        )));
    }
    let mut prime_of: BTreeMap<&str, u64> = BTreeMap::new();
    for ps in &input.prime_splitting {
        let total: u32 = ps.places.iter().map(|v| v.residue_degree).sum();
        if total > input.d {
            return Err(Error::InvalidInput(format!(
                "residue degrees above {} sum to {total} > d",
                ps.prime
            )));
        }
        for v in &ps.places {
            if prime_of.insert(v.name.as_str(), ps.prime).is_some() {
                return Err(Error::InvalidInput(format!("duplicate place name {}", v.name)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut count_over: BTreeMap<u64, u32> = BTreeMap::new();
    for name in &input.ramified_finite {
        let p = *prime_of
            .get(name.as_str())
            .ok_or_else(|| Error::InvalidInput(format!("unknown place {name}")))?;
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidInput(format!("place {name} listed twice")));
        }
        *count_over.entry(p).or_default() += 1;
    }
    let total = input.ramified_finite.len() as u32 + input.ramified_real;
    if !total.is_multiple_of(2) {
        return Err(Error::ReciprocityViolation(format!(
            "A ramifies at {total} places, an odd number"
        )));
    }
    // local invariants of Cor in (1/2)Z/Z, tracked as parities
    let finite: BTreeSet<u64> =
        count_over.iter().filter(|(_, &c)| c % 2 == 1).map(|(&p, _)| p).collect();
    let infinite = (input.d - 1) % 2 == 1;
    let b_ramification = RamificationSet { finite, infinite };
    if !b_ramification.cardinality().is_multiple_of(2) {
        return Err(Error::ReciprocityViolation("corestriction has odd ramification".into()));
    }
    let b_splits = b_ramification.is_split();
    let (g, lattice_rank) = fiber_dimension(input.d, b_splits);
    let d_odd = input.d % 2 == 1;
    let real_module_shape = match (d_odd, b_splits) {
        (true, true) => RealModuleShape::RealVector,
        (true, false) => RealModuleShape::RealMatrix,
        (false, _) => RealModuleShape::Complex,
    };
    let endomorphism_algebra =
        if b_splits { EndomorphismAlgebra::Rationals } else { EndomorphismAlgebra::Quaternion };
    Ok(CorClass {
        b_splits,
        g,
        lattice_rank,
        endomorphism_algebra,
        real_module_shape,
        b_indefinite: !infinite,
        b_ramification,
    })
}

/// `g = 2^(d-1)` when `B` splits, `2^d` otherwise; the lattice has rank `2g`.
pub fn fiber_dimension(d: u32, b_splits: bool) -> (u64, u64) {
    assert!(d >= 1, "degree must be at least 1");
    let g = if b_splits { 1u64 << (d - 1) } else { 1u64 << d };
    (g, 2 * g)
}
