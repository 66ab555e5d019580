use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::family::{sl2_inverse, FamilyData};
use super::skeleton::Skeleton;
use super::symplectic::j_std;
use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, QuadExt, Rat};

/// A word in the generators; `(k, true)` stands for the inverse of generator `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<(usize, bool)>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(k: usize) -> Word {
        Word(vec![(k, false)])
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(k, inv)| (k, !inv)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `(gamma, rho(gamma))` for the word.
    pub fn evaluate(&self, family: &FamilyData) -> Result<(Mat<QuadExt>, Mat<QuadExt>)> {
        let mut gamma = Mat::identity(2);
        let mut rho = Mat::identity(family.g);
        for &(k, inv) in &self.0 {
            let (gm, r) = match (family.gamma_gens.get(k), family.rho.get(k)) {
                (Some(gm), Some(r)) => (gm, r),
                _ => return Err(Error::InvalidInput(format!("no generator {k}"))),
            };
            if inv {
                gamma = &gamma * &sl2_inverse(gm);
                rho = &rho * &r.inverse()?;
            } else {
                gamma = &gamma * gm;
                rho = &rho * r;
            }
        }
        Ok((gamma, rho))
    }

    /// All words of length `1..=max_len` over generators and their inverses,
    /// without adjacent cancelling letters.
    pub fn all_up_to(generators: usize, max_len: usize) -> Vec<Word> {
        let alphabet: Vec<(usize, bool)> = (0..generators).flat_map(|k| [(k, false), (k, true)]).collect();
        let mut out = Vec::new();
        let mut layer = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &alphabet {
                    if w.0.last() == Some(&(l.0, !l.1)) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn random(generators: usize, len: usize, rng: &mut impl Rng) -> Word {
        let mut v: Vec<(usize, bool)> = Vec::with_capacity(len);
        while v.len() < len {
            let l = (rng.gen_range(0..generators), rng.gen_bool(0.5));
            if v.last() == Some(&(l.0, !l.1)) {
                continue;
            }
            v.push(l);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(k, inv)| if inv { format!("g{k}^-1") } else { format!("g{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// The rational matrix of `alpha -> rho(gamma)^{-1} alpha gamma` in the basis
/// `(lambda, mu')`: `kappa(rho(gamma)^{-1} alpha gamma) = kappa(alpha) sigma(gamma)`.
pub fn sigma_of(skel: &Skeleton, gamma: &Mat<QuadExt>, rho: &Mat<QuadExt>) -> Result<Mat<Rat>> {
    let rho_inv = rho.inverse()?;
    let n = 2 * skel.g();
    let mut sigma = Mat::zeros(n, n);
    for (j, b) in skel.symplectic_vectors().iter().enumerate() {
        let image = &(&rho_inv * b) * gamma;
        let row = skel
            .kappa(&image)
            .ok_or_else(|| Error::NotLatticeStable(format!("image of basis vector {j} leaves the span")))?;
        for (k, x) in row.into_iter().enumerate() {
            sigma[(j, k)] = x;
        }
    }
    Ok(sigma)
}

pub fn sigma_of_gamma(skel: &Skeleton, word: &Word) -> Result<Mat<Rat>> {
    let (gamma, rho) = word.evaluate(&skel.family)?;
    sigma_of(skel, &gamma, &rho)
}

pub fn is_symplectic(sigma: &Mat<Rat>) -> bool {
    let j = j_std(sigma.rows() / 2);
    &(&sigma.transpose() * &j) * sigma == j && (&(sigma * &j) * &sigma.transpose()) == j
}

/// `Lambda_Delta sigma = Lambda_Delta`: `D sigma D^{-1}` is integral and unimodular.
pub fn preserves_lattice(skel: &Skeleton, sigma: &Mat<Rat>) -> bool {
    let d = skel.delta().lattice_matrix();
    let d_inv = d.inverse().expect("positive diagonal");
    let conj = &(&d * sigma) * &d_inv;
    conj.entries().iter().all(Rat::is_integer) && conj.determinant().map(|x| x.abs()) == Ok(Rat::one())
}

#[cfg(test)]
mod tests {
    use super::super::family::principal_congruence_generators;
    use super::*;
    use crate::exactnum::rat_to_quad;

    fn unipotent() -> Mat<Rat> {
        Mat::from_rows(vec![vec![Rat::one(), Rat::one()], vec![Rat::zero(), Rat::one()]]).unwrap()
    }

    #[test]
    fn elliptic_sigma_is_gamma() {
        let f = FamilyData::elliptic(vec![unipotent()]).unwrap();
        let s = Skeleton::new(&f).unwrap();
        let sigma = sigma_of_gamma(&s, &Word::letter(0)).unwrap();
        assert_eq!(sigma, unipotent());
        assert_eq!(sigma_of_gamma(&s, &Word::identity()).unwrap(), Mat::identity(2));
        assert!(is_symplectic(&sigma));
        assert!(preserves_lattice(&s, &sigma));
    }

    #[test]
    fn homomorphism_on_short_words() {
        let f = FamilyData::elliptic(principal_congruence_generators(3)).unwrap();
        let s = Skeleton::new(&f).unwrap();
        let words = Word::all_up_to(3, 2);
        assert_eq!(words.len(), 6 + 6 * 5);
        for w in &words {
            for v in &words {
                let lhs = sigma_of_gamma(&s, &w.concat(v)).unwrap();
                let rhs = &sigma_of_gamma(&s, w).unwrap() * &sigma_of_gamma(&s, v).unwrap();
                assert_eq!(lhs, rhs, "{w} {v}");
            }
        }
    }

    #[test]
    fn unstable_lattice_detected() {
        // Z + (1/2)Z is not stable under [[1, 0], [1, 1]]
        let lower = unipotent().transpose();
        let mut f = FamilyData::elliptic(vec![lower]).unwrap();
        f.lattice[1] = f.lattice[1].scale(&QuadExt::rational(Rat::new(1, 2)));
        let s = Skeleton::new(&f).unwrap();
        let sigma = sigma_of_gamma(&s, &Word::letter(0)).unwrap();
        assert!(!preserves_lattice(&s, &sigma));
        assert!(is_symplectic(&sigma));
        let stable = FamilyData { gamma_gens: vec![rat_to_quad(&unipotent())], ..f };
        let s = Skeleton::new(&stable).unwrap();
        assert!(preserves_lattice(&s, &sigma_of_gamma(&s, &Word::letter(0)).unwrap()));
    }

    #[test]
    fn word_display_and_inverse() {
        let w = Word(vec![(0, false), (1, true)]);
        assert_eq!(w.to_string(), "g0*g1^-1");
        assert_eq!(w.inverse(), Word(vec![(1, false), (0, true)]));
    }
}
