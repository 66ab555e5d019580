use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{is_positive_definite, Field, Mat, QuadExt, QuadExtJson, Rat, Surd};
use crate::SCHEMA;

/// Data of a Kuga family: Fuchsian generators, their image under an
/// orthogonal representation, a lattice in `M_{g x 2}(R)` and the form `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyData {
    pub g: usize,
    pub surd: Option<Surd>,
    pub gamma_gens: Vec<Mat<QuadExt>>,
    pub rho: Vec<Mat<QuadExt>>,
    pub lattice: Vec<Mat<QuadExt>>,
    pub s: Mat<QuadExt>,
    pub origin: Option<serde_json::Value>,
}

pub fn j2() -> Mat<QuadExt> {
    Mat::from_rows(vec![vec![QuadExt::zero(), QuadExt::one()], vec![-QuadExt::one(), QuadExt::zero()]])
        .expect("2x2")
}

/// Inverse of a determinant-one `2 x 2` matrix.
pub fn sl2_inverse(m: &Mat<QuadExt>) -> Mat<QuadExt> {
    Mat::from_rows(vec![
        vec![m[(1, 1)].clone(), -&m[(0, 1)]],
        vec![-&m[(1, 0)], m[(0, 0)].clone()],
    ])
    .expect("2x2")
}

impl FamilyData {
    /// Checks shapes, surds and the rank of the lattice; the remaining
    /// invariants are reported by verification rather than rejected.
    pub fn validate_shapes(&self) -> Result<()> {
        let g = self.g;
        if g == 0 {
            return Err(Error::InvalidFamily("g must be positive".into()));
        }
        if self.gamma_gens.len() != self.rho.len() {
            return Err(Error::InvalidFamily(format!(
                "{} generators but {} rho images",
                self.gamma_gens.len(),
                self.rho.len()
            )));
        }
        for m in &self.gamma_gens {
            if (m.rows(), m.cols()) != (2, 2) {
                return Err(Error::InvalidFamily("generators must be 2x2".into()));
            }
        }
        for m in &self.rho {
            if (m.rows(), m.cols()) != (g, g) {
                return Err(Error::InvalidFamily(format!("rho images must be {g}x{g}")));
            }
            if m.determinant()?.is_zero() {
                return Err(Error::InvalidFamily("rho image is singular".into()));
            }
        }
        if self.lattice.len() != 2 * g {
            return Err(Error::InvalidFamily(format!(
                "lattice needs {} basis elements, got {}",
                2 * g,
                self.lattice.len()
            )));
        }
        for m in &self.lattice {
            if (m.rows(), m.cols()) != (g, 2) {
                return Err(Error::InvalidFamily(format!("lattice elements must be {g}x2")));
            }
        }
        if (self.s.rows(), self.s.cols()) != (g, g) {
            return Err(Error::InvalidFamily(format!("S must be {g}x{g}")));
        }
        let all = self
            .gamma_gens
            .iter()
            .chain(&self.rho)
            .chain(&self.lattice)
            .chain(std::iter::once(&self.s));
        for m in all {
            for x in m.entries() {
                x.check_surd(self.surd.as_ref())?;
            }
        }
        LatticeCoords::new(&self.lattice)?;
        Ok(())
    }

    /// `rho(gamma)^t S rho(gamma) = S`, `det gamma = 1`, `S` symmetric positive definite.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.s.is_symmetric() {
            out.push("S is not symmetric".to_string());
        } else if !is_positive_definite(&self.s).unwrap_or(false) {
            out.push("S is not positive definite".to_string());
        }
        for (k, (gm, r)) in self.gamma_gens.iter().zip(&self.rho).enumerate() {
            if gm.determinant().ok() != Some(QuadExt::one()) {
                out.push(format!("generator {k} does not have determinant 1"));
            }
            if &(&r.transpose() * &self.s) * r != self.s {
                out.push(format!("S is not invariant under rho of generator {k}"));
            }
        }
        out
    }

    /// `E(alpha, beta) = tr(alpha^t S beta J_2)`.
    pub fn form_e(&self, alpha: &Mat<QuadExt>, beta: &Mat<QuadExt>) -> QuadExt {
        form_e(&self.s, alpha, beta)
    }

    /// `gamma . alpha = rho(gamma) alpha gamma^{-1}`.
    pub fn act(&self, k: usize, alpha: &Mat<QuadExt>) -> Mat<QuadExt> {
        &(&self.rho[k] * alpha) * &sl2_inverse(&self.gamma_gens[k])
    }

    pub fn rank(&self) -> usize {
        2 * self.g
    }
}

pub fn form_e(s: &Mat<QuadExt>, alpha: &Mat<QuadExt>, beta: &Mat<QuadExt>) -> QuadExt {
    (&(&(&alpha.transpose() * s) * beta) * &j2()).trace().expect("square")
}

/// Rational coordinates with respect to a `Q`-linearly independent family of
/// matrices over `Q(sqrt a)`.
#[derive(Clone, Debug)]
pub struct LatticeCoords {
    basis: Vec<Mat<QuadExt>>,
    // indices into the flattened rational vector that determine the coordinates
    rows: Vec<usize>,
    inv: Mat<Rat>,
}

fn flatten(m: &Mat<QuadExt>) -> Vec<Rat> {
    m.entries()
        .iter()
        .flat_map(|x| [x.rational_part().clone(), x.surd_part().clone()])
        .collect()
}

impl LatticeCoords {
    pub fn new(basis: &[Mat<QuadExt>]) -> Result<LatticeCoords> {
        let n = basis.len();
        let flat: Vec<Vec<Rat>> = basis.iter().map(flatten).collect();
        let len = flat.first().map_or(0, Vec::len);
        if n == 0 || len < n {
            return Err(Error::InvalidFamily("lattice basis too large for its ambient space".into()));
        }
        // rows of `m` are flattened coordinates, columns are basis elements
        let m = Mat::from_fn(len, n, |i, j| flat[j][i].clone());
        let (_, pivots) = m.transpose().rref();
        if pivots.len() < n {
            return Err(Error::InvalidFamily("lattice basis is linearly dependent over Q".into()));
        }
        let sub = Mat::from_fn(n, n, |i, j| m[(pivots[i], j)].clone());
        let inv = sub.inverse()?;
        Ok(LatticeCoords { basis: basis.to_vec(), rows: pivots, inv })
    }

    pub fn basis(&self) -> &[Mat<QuadExt>] {
        &self.basis
    }

    /// Coordinates of `alpha`, or `None` if it is outside the rational span.
    pub fn coords(&self, alpha: &Mat<QuadExt>) -> Option<Vec<Rat>> {
        let flat = flatten(alpha);
        let rhs: Vec<Rat> = self.rows.iter().map(|&i| flat[i].clone()).collect();
        let c = self.inv.apply(&rhs).expect("square");
        (self.combine(&c) == *alpha).then_some(c)
    }

    pub fn combine(&self, c: &[Rat]) -> Mat<QuadExt> {
        let first = &self.basis[0];
        let zero = Mat::zeros(first.rows(), first.cols());
        self.basis
            .iter()
            .zip(c)
            .fold(zero, |acc, (b, x)| &acc + &b.map(|e| e.scale(x)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    #[serde(default = "schema")]
    pub schema: String,
    pub g: usize,
    #[serde(default)]
    pub surd: Option<Rat>,
    pub gamma_gens: Vec<Vec<Vec<QuadExtJson>>>,
    pub rho: Vec<Vec<Vec<QuadExtJson>>>,
    pub lattice: Vec<Vec<Vec<QuadExtJson>>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<QuadExtJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<serde_json::Value>,
}

fn schema() -> String {
    SCHEMA.to_string()
}

pub fn quad_mat_json(m: &Mat<QuadExt>) -> Vec<Vec<QuadExtJson>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(QuadExtJson::from_value).collect()).collect()
}

pub fn quad_mat_from_json(rows: Vec<Vec<QuadExtJson>>, surd: Option<&Surd>) -> Result<Mat<QuadExt>> {
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.into_value(surd)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows)
}

pub fn rat_mat_json(m: &Mat<Rat>) -> Vec<Vec<Rat>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

impl FamilyJson {
    pub fn from_value(f: &FamilyData) -> FamilyJson {
        FamilyJson {
            schema: schema(),
            g: f.g,
            surd: f.surd.as_ref().map(|s| s.value().clone()),
            gamma_gens: f.gamma_gens.iter().map(quad_mat_json).collect(),
            rho: f.rho.iter().map(quad_mat_json).collect(),
            lattice: f.lattice.iter().map(quad_mat_json).collect(),
            s: quad_mat_json(&f.s),
            origin: f.origin.clone(),
        }
    }

    pub fn into_value(self) -> Result<FamilyData> {
        if self.schema != SCHEMA {
            return Err(Error::InvalidInput(format!("unsupported schema {:?}", self.schema)));
        }
        let surd = self.surd.map(Surd::new).transpose()?;
        let s = surd.as_ref();
        let list = |v: Vec<Vec<Vec<QuadExtJson>>>| {
            v.into_iter().map(|m| quad_mat_from_json(m, s)).collect::<Result<Vec<_>>>()
        };
        let family = FamilyData {
            g: self.g,
            gamma_gens: list(self.gamma_gens)?,
            rho: list(self.rho)?,
            lattice: list(self.lattice)?,
            s: quad_mat_from_json(self.s, s)?,
            surd,
            origin: self.origin,
        };
        family.validate_shapes()?;
        Ok(family)
    }
}

impl FamilyData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FamilyJson::from_value(self)).expect("serializable")
    }

    pub fn from_json(v: serde_json::Value) -> Result<FamilyData> {
        serde_json::from_value::<FamilyJson>(v)?.into_value()
    }

    /// The modular family of elliptic curves: `g = 1`, `Lambda = Z^2`,
    /// `rho` trivial, `S = (1)`, and the given generators.
    pub fn elliptic(gamma_gens: Vec<Mat<Rat>>) -> Result<FamilyData> {
        let e = |i: i64, j: i64| Mat::from_rows(vec![vec![QuadExt::int(i), QuadExt::int(j)]]);
        let rho = vec![Mat::identity(1); gamma_gens.len()];
        let family = FamilyData {
            g: 1,
            surd: None,
            gamma_gens: gamma_gens.iter().map(crate::exactnum::rat_to_quad).collect(),
            rho,
            lattice: vec![e(1, 0)?, e(0, 1)?],
            s: Mat::identity(1),
            origin: None,
        };
        family.validate_shapes()?;
        Ok(family)
    }
}

/// Generators `[[1, N], [0, 1]]`, `[[1, 0], [N, 1]]` and `[[1 - N, -N], [N, 1 + N]]` of
/// level-`N` congruence type.
pub fn principal_congruence_generators(level: i64) -> Vec<Mat<Rat>> {
    let m = |rows: [[i64; 2]; 2]| {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::integer(x)).collect()).collect())
            .expect("2x2")
    };
    let n = level;
    vec![m([[1, n], [0, 1]]), m([[1, 0], [n, 1]]), m([[1 - n, -n], [n, 1 + n]])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> FamilyData {
        FamilyData::elliptic(principal_congruence_generators(3)).unwrap()
    }

    #[test]
    fn elliptic_is_valid() {
        let f = baseline();
        assert!(f.invariant_failures().is_empty());
        let e = &f.lattice;
        // E(e1, e2) = tr([[0, 1], [0, 0]] J_2) = -1
        assert_eq!(f.form_e(&e[0], &e[1]), QuadExt::int(-1));
        assert_eq!(f.form_e(&e[1], &e[0]), QuadExt::int(1));
    }

    #[test]
    fn json_round_trip() {
        let f = baseline();
        let v = f.to_json();
        assert_eq!(v["surd"], serde_json::Value::Null);
        let back = FamilyData::from_json(v.clone()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), v);
    }

    #[test]
    fn coordinates_detect_span() {
        let f = baseline();
        let lc = LatticeCoords::new(&f.lattice).unwrap();
        let a = Mat::from_rows(vec![vec![QuadExt::rational(Rat::new(1, 2)), QuadExt::int(3)]]).unwrap();
        assert_eq!(lc.coords(&a).unwrap(), vec![Rat::new(1, 2), Rat::integer(3)]);
        let s5 = Surd::new(Rat::integer(5)).unwrap();
        let b = Mat::from_rows(vec![vec![QuadExt::sqrt(&s5), QuadExt::int(0)]]).unwrap();
        assert!(lc.coords(&b).is_none());
    }

    #[test]
    fn dependent_lattice_rejected() {
        let mut f = baseline();
        f.lattice[1] = f.lattice[0].clone();
        assert!(matches!(f.validate_shapes(), Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn congruence_generators_have_determinant_one() {
        for n in 3..6 {
            for m in principal_congruence_generators(n) {
                assert_eq!(m.determinant().unwrap(), Rat::one());
            }
        }
    }
}
