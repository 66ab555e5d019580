use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::family::FamilyData;
use crate::error::{Error, Result};
use crate::exactnum::{rat_gcd, Field, Mat, Rat};

/// Integral Gram matrix of the polarization on the lattice basis.
///
/// The orientation is `M[i][j] = scale * E(lambda_j, lambda_i)`, i.e. the
/// Gram of `E^t(alpha, beta) = E(beta, alpha)`; this is the orientation in
/// which a symplectic basis produces period matrices in the Siegel space
/// while `E(alpha, alpha J_tau^{-1})` stays positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    pub matrix: Mat<Rat>,
    pub scale: Rat,
}

pub fn gram_of_e(family: &FamilyData) -> Result<GramForm> {
    let n = family.rank();
    let mut raw = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = family.form_e(&family.lattice[j], &family.lattice[i]);
            raw[(i, j)] = v
                .to_rational()
                .ok_or_else(|| Error::IrrationalForm(format!("E(lambda_{j}, lambda_{i}) = {v}")))?;
        }
    }
    if raw != -&raw.transpose() {
        return Err(Error::NotAlternating("E is not antisymmetric on the lattice".into()));
    }
    let gcd = raw.entries().iter().fold(Rat::zero(), |acc, x| rat_gcd(&acc, x));
    if gcd.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let scale = gcd.recip().expect("nonzero");
    let matrix = raw.scale(&scale);
    if matrix.determinant()?.is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(GramForm { matrix, scale })
}

/// Elementary divisors `delta_1 | delta_2 | ... | delta_g`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolarizationType(Vec<BigInt>);

impl PolarizationType {
    pub fn new(deltas: Vec<BigInt>) -> Result<PolarizationType> {
        if deltas.is_empty() || deltas.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidInput("polarization type needs positive entries".into()));
        }
        if deltas.windows(2).any(|w| !w[0].is_zero() && !(&w[1] % &w[0]).is_zero()) {
            return Err(Error::InvalidInput("polarization type must satisfy delta_i | delta_{i+1}".into()));
        }
        Ok(PolarizationType(deltas))
    }

    pub fn deltas(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_principal(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    pub fn as_rats(&self) -> Vec<Rat> {
        self.0.iter().cloned().map(Rat::from_bigint).collect()
    }

    /// `diag(1, ..., 1, delta_1, ..., delta_g)`, mapping `Z^{2g}` onto `Lambda_Delta`.
    pub fn lattice_matrix(&self) -> Mat<Rat> {
        let g = self.0.len();
        let mut d = vec![Rat::one(); g];
        d.extend(self.as_rats());
        Mat::diag(&d)
    }
}

impl fmt::Display for PolarizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for PolarizationType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_rats().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolarizationType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Rat>::deserialize(d)?;
        let ints = v
            .iter()
            .map(|r| r.to_integer().ok_or_else(|| serde::de::Error::custom("non-integral delta")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        PolarizationType::new(ints).map_err(serde::de::Error::custom)
    }
}

/// `U` with `U^t M U = [[0, Delta], [-Delta, 0]]`; columns of `U` are the
/// lattice coordinates of `lambda_1..lambda_g, mu_1..mu_g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticBasis {
    #[serde(rename = "U", with = "rat_mat")]
    pub u: Mat<Rat>,
    pub delta: PolarizationType,
}

pub(crate) mod rat_mat {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactnum::{Mat, Rat};

    pub fn serialize<S: Serializer>(m: &Mat<Rat>, s: S) -> Result<S::Ok, S::Error> {
        super::super::family::rat_mat_json(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat<Rat>, D::Error> {
        Mat::from_rows(Vec::<Vec<Rat>>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl SymplecticBasis {
    pub fn g(&self) -> usize {
        self.delta.deltas().len()
    }

    /// The standard form `[[0, Delta], [-Delta, 0]]`.
    pub fn standard_form(&self) -> Mat<Rat> {
        standard_form(&self.delta.as_rats())
    }

    /// Lattice coordinates of `lambda_1..lambda_g, mu'_1..mu'_g` as rows.
    pub fn scaled_rows(&self) -> Vec<Vec<Rat>> {
        let g = self.g();
        let d = self.delta.as_rats();
        (0..2 * g)
            .map(|j| {
                let c = self.u.col(j);
                if j < g {
                    c
                } else {
                    let inv = d[j - g].recip().expect("positive");
                    c.iter().map(|x| x * &inv).collect()
                }
            })
            .collect()
    }
}

pub fn standard_form(deltas: &[Rat]) -> Mat<Rat> {
    let g = deltas.len();
    Mat::from_fn(2 * g, 2 * g, |i, j| {
        if i < g && j == i + g {
            deltas[i].clone()
        } else if i >= g && i == j + g {
            -&deltas[j]
        } else {
            Rat::zero()
        }
    })
}

/// `J_{2g} = [[0, I], [-I, 0]]`.
pub fn j_std(g: usize) -> Mat<Rat> {
    standard_form(&vec![Rat::one(); g])
}

struct Reducer<'a> {
    m: &'a [Vec<BigInt>],
}

impl Reducer<'_> {
    fn b(&self, u: &[BigInt], w: &[BigInt]) -> BigInt {
        let n = u.len();
        let mut acc = BigInt::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for j in 0..n {
                if !w[j].is_zero() {
                    row += &self.m[i][j] * &w[j];
                }
            }
            acc += &u[i] * row;
        }
        acc
    }
}

fn axpy(w: &mut [BigInt], c: &BigInt, v: &[BigInt]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in w.iter_mut().zip(v) {
        *x += c * y;
    }
}

/// Symplectic basis of an integral alternating nondegenerate form.
///
/// Pivots on the entry of least absolute value (lowest `(row, col)` on ties),
/// clears the pivot's span from the remaining vectors and enforces
/// `delta_k | delta_{k+1}` before splitting the pair off.
pub fn frobenius_reduce(m: &Mat<Rat>) -> Result<SymplecticBasis> {
    let n = m.rows();
    if !m.is_square() || !n.is_multiple_of(2) {
        return Err(Error::NotAlternating(format!("{}x{} matrix", m.rows(), m.cols())));
    }
    if *m != -&m.transpose() || (0..n).any(|i| !m[(i, i)].is_zero()) {
        return Err(Error::NotAlternating("matrix is not antisymmetric".into()));
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    m[(i, j)]
                        .to_integer()
                        .ok_or_else(|| Error::NotAlternating(format!("entry {} is not integral", m[(i, j)])))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if m.determinant()?.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let red = Reducer { m: &rows };
    let mut rest: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    let mut deltas = Vec::new();
    while !rest.is_empty() {
        let mut forced: Option<(usize, usize)> = None;
        'restart: loop {
            let k = rest.len();
            let (ei, fi) = match forced.take() {
                Some(p) => p,
                None => {
                    let mut best: Option<(BigInt, usize, usize)> = None;
                    for i in 0..k {
                        for j in i + 1..k {
                            let v = red.b(&rest[i], &rest[j]);
                            if v.is_zero() {
                                continue;
                            }
                            if best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                                best = Some((v.abs(), i, j));
                            }
                        }
                    }
                    let (_, i, j) = best.ok_or(Error::DegenerateForm)?;
                    if red.b(&rest[i], &rest[j]).is_positive() {
                        (i, j)
                    } else {
                        (j, i)
                    }
                }
            };
            let e = rest[ei].clone();
            let f = rest[fi].clone();
            let d = red.b(&e, &f);
            for w in 0..k {
                if w == ei || w == fi {
                    continue;
                }
                let r1 = red.b(&e, &rest[w]);
                let r2 = red.b(&f, &rest[w]);
                let (q1, s1) = r1.div_mod_floor(&d);
                let (q2, s2) = r2.div_mod_floor(&d);
                if s1.is_zero() && s2.is_zero() {
                    // w + (r2/d) e - (r1/d) f is orthogonal to e and f
                    axpy(&mut rest[w], &q2, &e);
                    axpy(&mut rest[w], &-q1, &f);
                } else if !s1.is_zero() {
                    axpy(&mut rest[w], &-q1, &f);
                    continue 'restart;
                } else {
                    axpy(&mut rest[w], &q2, &e);
                    continue 'restart;
                }
            }
            let others: Vec<usize> = (0..k).filter(|&w| w != ei && w != fi).collect();
            for (a, &w1) in others.iter().enumerate() {
                for &w2 in &others[a + 1..] {
                    if !(red.b(&rest[w1], &rest[w2]) % &d).is_zero() {
                        // e + w1 pairs with w2 to a value not divisible by d
                        let add = rest[w1].clone();
                        axpy(&mut rest[ei], &BigInt::one(), &add);
                        forced = Some((ei, fi));
                        continue 'restart;
                    }
                }
            }
            es.push(e);
            fs.push(f);
            deltas.push(d);
            let (hi, lo) = (ei.max(fi), ei.min(fi));
            rest.remove(hi);
            rest.remove(lo);
            break;
        }
    }
    let cols: Vec<&Vec<BigInt>> = es.iter().chain(fs.iter()).collect();
    let u = Mat::from_fn(n, n, |r, c| Rat::from_bigint(cols[c][r].clone()));
    let basis = SymplecticBasis { u, delta: PolarizationType::new(deltas)? };
    debug_assert_eq!(&(&basis.u.transpose() * m) * &basis.u, basis.standard_form());
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_mat(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::integer(x)).collect()).collect()).unwrap()
    }

    fn check(m: &Mat<Rat>) -> SymplecticBasis {
        let b = frobenius_reduce(m).unwrap();
        assert_eq!(&(&b.u.transpose() * m) * &b.u, b.standard_form());
        assert_eq!(b.u.determinant().unwrap().abs(), Rat::one());
        b
    }

    #[test]
    fn already_standard() {
        let b = check(&int_mat(&[&[0, 1], &[-1, 0]]));
        assert_eq!(b.u, Mat::identity(2));
        assert!(b.delta.is_principal());
        let b = check(&int_mat(&[&[0, 2], &[-2, 0]]));
        assert_eq!(b.delta.deltas(), &[BigInt::from(2)]);
    }

    #[test]
    fn orientation_swapped() {
        let b = check(&int_mat(&[&[0, -3], &[3, 0]]));
        assert_eq!(b.delta.deltas(), &[BigInt::from(3)]);
        assert_eq!(b.u, int_mat(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn divisibility_enforced() {
        // diag blocks 2 and 3 must become (1, 6)
        let m = int_mat(&[&[0, 0, 2, 0], &[0, 0, 0, 3], &[-2, 0, 0, 0], &[0, -3, 0, 0]]);
        let b = check(&m);
        assert_eq!(b.delta.deltas(), &[BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn non_integral_and_degenerate() {
        let half = Mat::from_rows(vec![vec![Rat::zero(), Rat::new(1, 2)], vec![Rat::new(-1, 2), Rat::zero()]]).unwrap();
        assert!(matches!(frobenius_reduce(&half), Err(Error::NotAlternating(_))));
        let zero: Mat<Rat> = Mat::zeros(2, 2);
        assert_eq!(frobenius_reduce(&zero), Err(Error::DegenerateForm));
        assert!(frobenius_reduce(&int_mat(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn elliptic_gram() {
        let f = FamilyData::elliptic(vec![]).unwrap();
        let g = gram_of_e(&f).unwrap();
        assert_eq!(g.matrix, int_mat(&[&[0, 1], &[-1, 0]]));
        assert_eq!(g.scale, Rat::one());
    }

    #[test]
    fn polarization_type_json() {
        let p = PolarizationType::new(vec![BigInt::from(1), BigInt::from(4)]).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!(["1", "4"]));
        assert_eq!(serde_json::from_value::<PolarizationType>(v).unwrap(), p);
        assert!(PolarizationType::new(vec![BigInt::from(2), BigInt::from(3)]).is_err());
    }
}
