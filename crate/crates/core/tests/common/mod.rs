#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

use kuga_forge::exactnum::{Field, Mat, Rat};
use kuga_forge::fek::{compile_family, FekRecipe};
use kuga_forge::kuga::{principal_congruence_generators, FamilyData};
use kuga_forge::quaternion::Place;

pub fn r(n: i64) -> Rat {
    Rat::integer(n)
}

pub fn rat_mat(rows: &[&[i64]]) -> Mat<Rat> {
    Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()).unwrap()
}

pub fn elliptic() -> FamilyData {
    FamilyData::elliptic(principal_congruence_generators(3)).unwrap()
}

pub fn fek(a: i64, b: i64, height: u32) -> FamilyData {
    compile_family(&FekRecipe::new(a, b, 3, height)).unwrap()
}

/// The elliptic baseline and the two fake elliptic curve families.
pub fn families() -> Vec<(&'static str, FamilyData)> {
    vec![("elliptic", elliptic()), ("fek(3,-4)", fek(3, -4, 6)), ("fek(2,3)", fek(2, 3, 8))]
}

fn valuation(mut w: i128, p: i128) -> u32 {
    let mut v = 0;
    while w % p == 0 {
        w /= p;
        v += 1;
    }
    v
}

/// Whether `w`, known modulo `p^k`, is a nonzero square in `Q_p`; `None` when
/// the residue does not decide it.
fn padic_square(w: i128, p: i128, k: u32) -> Option<bool> {
    let pk = p.pow(k);
    let w = w.rem_euclid(pk);
    if w == 0 {
        return None;
    }
    let v = valuation(w, p);
    let precision = if p == 2 { 3 } else { 1 };
    if v + precision > k {
        return None;
    }
    if v % 2 == 1 {
        return Some(false);
    }
    let unit = w / p.pow(v);
    if p == 2 {
        Some(unit.rem_euclid(8) == 1)
    } else {
        let u = unit.rem_euclid(p);
        Some((1..p).any(|t| (t * t) % p == u))
    }
}

/// Brute-force Hilbert symbol: search primitive `(x, y)` modulo `p^k` for
/// which `a x^2 + b y^2` is a nonzero square in `Q_p`.
pub fn hilbert_oracle(a: i64, b: i64, place: Place) -> i8 {
    let p = match place {
        Place::Infinity => {
            let positive = [(1i64, 0i64), (0, 1), (1, 1)].iter().any(|&(x, y)| a * x * x + b * y * y > 0);
            return if positive { 1 } else { -1 };
        }
        Place::Prime(p) => p as i128,
    };
    let k: u32 = match p {
        2 => 14,
        3 => 7,
        _ => 4,
    };
    let pk = p.pow(k);
    let (a, b) = (a as i128, b as i128);
    let value = |x: i128, y: i128| (a * x % pk * x + b * y % pk * y).rem_euclid(pk);
    let found = (0..pk).any(|y| padic_square(value(1, y), p, k) == Some(true))
        || (0..pk / p).any(|t| padic_square(value(p * t, 1), p, k) == Some(true));
    if found {
        1
    } else {
        -1
    }
}

/// A random integral alternating matrix of size `n` with nonzero determinant.
pub fn random_alternating(rng: &mut impl Rng, n: usize, bound: i64) -> Mat<Rat> {
    loop {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x = r(rng.gen_range(-bound..=bound));
                m[(j, i)] = -&x;
                m[(i, j)] = x;
            }
        }
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in combinations(n - first - 1, k - 1) {
            for x in rest.iter_mut() {
                *x += first + 1;
            }
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Invariant factors of an integral matrix from gcds of its minors.
pub fn smith_invariants(m: &Mat<Rat>) -> Vec<BigInt> {
    let n = m.rows();
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=n {
        let subsets = combinations(n, k);
        let mut g = BigInt::zero();
        for rows in &subsets {
            for cols in &subsets {
                let minor = Mat::from_fn(k, k, |i, j| m[(rows[i], cols[j])].clone());
                let d = minor.determinant().unwrap();
                g = g.gcd(&d.to_integer().expect("integral matrix"));
            }
        }
        out.push((&g / &prev).abs());
        prev = g;
    }
    out
}
