use serde::{Deserialize, Serialize};

use super::family::{FamilyData, LatticeCoords};
use super::symplectic::{frobenius_reduce, gram_of_e, GramForm, PolarizationType, SymplecticBasis};
use super::tau::{alpha_tau, mobius};
use crate::error::{Error, Result};
use crate::exactnum::{cx_parts, is_positive_definite, CxQuad, CxQuadJson, Field, Mat, QuadExt, Rat};

/// A family together with its Gram form, symplectic basis and the coordinate
/// map `kappa` onto `R^{2g}`.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub family: FamilyData,
    pub gram: GramForm,
    pub basis: SymplecticBasis,
    lattice: LatticeCoords,
    // lambda_1..lambda_g, mu'_1..mu'_g
    kappa: LatticeCoords,
}

impl Skeleton {
    pub fn new(family: &FamilyData) -> Result<Skeleton> {
        family.validate_shapes()?;
        let gram = gram_of_e(family)?;
        let basis = frobenius_reduce(&gram.matrix)?;
        Skeleton::with_basis(family, gram, basis)
    }

    pub fn with_basis(family: &FamilyData, gram: GramForm, basis: SymplecticBasis) -> Result<Skeleton> {
        let lattice = LatticeCoords::new(&family.lattice)?;
        let b: Vec<Mat<QuadExt>> = basis.scaled_rows().iter().map(|c| lattice.combine(c)).collect();
        let kappa = LatticeCoords::new(&b)?;
        Ok(Skeleton { family: family.clone(), gram, basis, lattice, kappa })
    }

    pub fn g(&self) -> usize {
        self.family.g
    }

    pub fn delta(&self) -> &PolarizationType {
        &self.basis.delta
    }

    pub fn lattice_coords(&self) -> &LatticeCoords {
        &self.lattice
    }

    /// `lambda_1..lambda_g, mu'_1..mu'_g`.
    pub fn symplectic_vectors(&self) -> &[Mat<QuadExt>] {
        self.kappa.basis()
    }

    /// `kappa(alpha)`, the row of coordinates in the basis `(lambda, mu')`.
    pub fn kappa(&self, alpha: &Mat<QuadExt>) -> Option<Vec<Rat>> {
        self.kappa.coords(alpha)
    }

    /// `(Pi_1(tau), Pi'_2(tau))` as one `g x 2g` matrix.
    pub fn period_pair(&self, point: &CxQuad) -> Mat<CxQuad> {
        let g = self.g();
        let cols: Vec<Vec<CxQuad>> = self.symplectic_vectors().iter().map(|b| alpha_tau(b, point)).collect();
        Mat::from_fn(g, 2 * g, |i, j| cols[j][i].clone())
    }

    pub fn period_matrices(&self, point: &CxQuad) -> Result<PeriodData> {
        let g = self.g();
        let p = self.period_pair(point);
        let pi1 = p.submatrix(0..g, 0..g);
        let pi2 = p.submatrix(0..g, g..2 * g);
        let inv = pi2.inverse().map_err(|_| Error::SingularPi2(point.to_string()))?;
        let pi = &inv * &pi1;
        let data = PeriodData { pi1, pi2prime: pi2, pi, delta: self.delta().clone() };
        data.check_siegel()?;
        Ok(data)
    }

    /// `(Pi'_2(tau)^{-1} z, Pi(tau))`.
    pub fn moduli_map(&self, z: &[CxQuad], point: &CxQuad) -> Result<(Vec<CxQuad>, Mat<CxQuad>)> {
        let data = self.period_matrices(point)?;
        let w = data.pi2prime.inverse()?.apply(z)?;
        Ok((w, data.pi))
    }

    /// `phi(gamma)/(c tau + d)` together with the integral unimodular `T`
    /// with `lambda_{i, gamma tau} = sum_j T_ij (M lambda_{j, tau})`.
    pub fn fiber_isomorphism(
        &self,
        gamma: &Mat<QuadExt>,
        rho: &Mat<QuadExt>,
        point: &CxQuad,
    ) -> Result<(Mat<CxQuad>, Mat<Rat>)> {
        let g = self.g();
        let (image, factor) = mobius(gamma, point)?;
        let inv = factor.try_inv().expect("nonzero factor");
        let m = rho.map(|x| &CxQuad::real(x.clone()) * &inv);
        let basis = self.lattice.basis();
        let n = basis.len();
        // realified columns M lambda_{j, tau}
        let realify = |v: &[CxQuad]| -> Vec<QuadExt> {
            v.iter().map(|z| z.re.clone()).chain(v.iter().map(|z| z.im.clone())).collect()
        };
        let moved: Vec<Vec<QuadExt>> =
            basis.iter().map(|b| realify(&m.apply(&alpha_tau(b, point)).expect("g x g"))).collect();
        let a = Mat::from_fn(2 * g, n, |i, j| moved[j][i].clone());
        let mut t = Mat::zeros(n, n);
        for (i, b) in basis.iter().enumerate() {
            let target = realify(&alpha_tau(b, &image));
            let x = a
                .solve_unique(&target)?
                .ok_or_else(|| Error::NotLatticeStable(format!("lambda_{i} at gamma(tau) not in the image")))?;
            for (j, c) in x.iter().enumerate() {
                let c = c.to_rational().filter(Rat::is_integer).ok_or_else(|| {
                    Error::NotLatticeStable(format!("coordinate {c} of lambda_{i} at gamma(tau)"))
                })?;
                t[(i, j)] = c;
            }
        }
        if t.determinant()?.abs() != Rat::one() {
            return Err(Error::NotLatticeStable("fiber map is not unimodular on the lattice".into()));
        }
        Ok((m, t))
    }
}

/// Period data at one point of the upper half plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodData {
    pub pi1: Mat<CxQuad>,
    pub pi2prime: Mat<CxQuad>,
    pub pi: Mat<CxQuad>,
    pub delta: PolarizationType,
}

impl PeriodData {
    /// `Pi` symmetric with positive definite imaginary part.
    pub fn check_siegel(&self) -> Result<()> {
        check_siegel(&self.pi)
    }
}

pub fn check_siegel(pi: &Mat<CxQuad>) -> Result<()> {
    if !pi.is_symmetric() {
        return Err(Error::RiemannViolation("Pi is not symmetric".into()));
    }
    let (_, im) = cx_parts(pi);
    if !is_positive_definite(&im)? {
        return Err(Error::RiemannViolation("Im Pi is not positive definite".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodJson {
    pub tau: super::Tau,
    #[serde(rename = "Pi1")]
    pub pi1: Vec<Vec<CxQuadJson>>,
    #[serde(rename = "Pi2prime")]
    pub pi2prime: Vec<Vec<CxQuadJson>>,
    #[serde(rename = "Pi")]
    pub pi: Vec<Vec<CxQuadJson>>,
    pub delta: PolarizationType,
}

pub fn cx_mat_json(m: &Mat<CxQuad>) -> Vec<Vec<CxQuadJson>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(CxQuadJson::from_value).collect()).collect()
}

impl PeriodJson {
    pub fn new(tau: &super::Tau, data: &PeriodData) -> PeriodJson {
        PeriodJson {
            tau: tau.clone(),
            pi1: cx_mat_json(&data.pi1),
            pi2prime: cx_mat_json(&data.pi2prime),
            pi: cx_mat_json(&data.pi),
            delta: data.delta.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::family::principal_congruence_generators;
    use super::super::Tau;
    use super::*;

    fn baseline() -> Skeleton {
        Skeleton::new(&FamilyData::elliptic(principal_congruence_generators(3)).unwrap()).unwrap()
    }

    #[test]
    fn elliptic_period_is_tau() {
        let s = baseline();
        assert!(s.delta().is_principal());
        for t in Tau::default_samples() {
            let p = s.period_matrices(&t.point()).unwrap();
            assert_eq!(p.pi1[(0, 0)], t.point());
            assert_eq!(p.pi2prime[(0, 0)], CxQuad::one());
            assert_eq!(p.pi[(0, 0)], t.point());
        }
    }

    #[test]
    fn elliptic_moduli_map() {
        let s = baseline();
        let t = Tau::new(Rat::new(1, 3), Rat::integer(2)).unwrap();
        let (w, pi) = s.moduli_map(&[CxQuad::zero()], &t.point()).unwrap();
        assert_eq!(w, vec![CxQuad::zero()]);
        assert_eq!(pi[(0, 0)], t.point());
    }

    #[test]
    fn s_inversion_fiber_map() {
        // gamma = [[0, -1], [1, 0]] at tau = i: the map is 1/i = -i
        let s = baseline();
        let gamma = crate::exactnum::rat_to_quad(
            &Mat::from_rows(vec![vec![Rat::zero(), Rat::integer(-1)], vec![Rat::one(), Rat::zero()]]).unwrap(),
        );
        let (m, t) = s.fiber_isomorphism(&gamma, &Mat::identity(1), &CxQuad::i()).unwrap();
        assert_eq!(m[(0, 0)], -CxQuad::i());
        assert_eq!(t.determinant().unwrap().abs(), Rat::one());
    }

    #[test]
    fn negative_s_leaves_siegel_space() {
        let mut f = FamilyData::elliptic(vec![]).unwrap();
        f.s = -&f.s;
        let s = Skeleton::new(&f).unwrap();
        let err = s.period_matrices(&CxQuad::i()).unwrap_err();
        assert!(matches!(err, Error::RiemannViolation(_)));
    }
}
