use super::skeleton::Skeleton;
use super::tau::{alpha_tau, mobius};
use crate::error::{Error, Result};
use crate::exactnum::{CxQuad, Field, Mat, QuadExt, Rat};

/// An element `sigma_{lambda}` of `Lambda_Delta x| Sp_{2g}(Q)`, with
/// `lambda = (m, n Delta)` a row vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSp {
    pub sigma: Mat<Rat>,
    pub lambda: Vec<Rat>,
}

impl AffineSp {
    pub fn identity(g: usize) -> AffineSp {
        AffineSp { sigma: Mat::identity(2 * g), lambda: vec![Rat::zero(); 2 * g] }
    }

    pub fn translation(lambda: Vec<Rat>) -> AffineSp {
        AffineSp { sigma: Mat::identity(lambda.len()), lambda }
    }

    pub fn g(&self) -> usize {
        self.sigma.rows() / 2
    }

    /// Product of block matrices `[[1, l1], [0, s1]] [[1, l2], [0, s2]]`.
    pub fn compose(&self, other: &AffineSp) -> AffineSp {
        let l1s2 = other.sigma.transpose().apply(&self.lambda).expect("same size");
        let lambda = other.lambda.iter().zip(&l1s2).map(|(a, b)| a + b).collect();
        AffineSp { sigma: &self.sigma * &other.sigma, lambda }
    }

    fn blocks(&self) -> [Mat<CxQuad>; 4] {
        let g = self.g();
        let s = self.sigma.map(|x| CxQuad::from(x.clone()));
        [
            s.submatrix(0..g, 0..g),
            s.submatrix(0..g, g..2 * g),
            s.submatrix(g..2 * g, 0..g),
            s.submatrix(g..2 * g, g..2 * g),
        ]
    }

    fn m(&self) -> Vec<CxQuad> {
        self.lambda[..self.g()].iter().cloned().map(CxQuad::from).collect()
    }

    fn n_delta(&self) -> Vec<CxQuad> {
        self.lambda[self.g()..].iter().cloned().map(CxQuad::from).collect()
    }

    /// `z + m Pi + n Delta` and `(C Pi + D)^{-1}`.
    fn shifted(&self, z: &[CxQuad], pi: &Mat<CxQuad>) -> Result<(Vec<CxQuad>, Mat<CxQuad>)> {
        let [_, _, c, d] = self.blocks();
        let cpd = &(&c * pi) + &d;
        let inv = cpd.inverse().map_err(|_| Error::SingularBlock)?;
        let m_pi = row_times(&self.m(), pi);
        let v = z.iter().zip(&m_pi).zip(self.n_delta()).map(|((a, b), c)| &(a + b) + &c).collect();
        Ok((v, inv))
    }
}

/// Row vector times matrix.
pub fn row_times(v: &[CxQuad], m: &Mat<CxQuad>) -> Vec<CxQuad> {
    m.transpose().apply(v).expect("matching length")
}

fn dot(u: &[CxQuad], v: &[CxQuad]) -> CxQuad {
    u.iter().zip(v).fold(CxQuad::zero(), |acc, (a, b)| &acc + &(a * b))
}

/// `((z + m Pi + n Delta)(C Pi + D)^{-1}, (A Pi + B)(C Pi + D)^{-1})`.
pub fn grassmann_action(el: &AffineSp, z: &[CxQuad], pi: &Mat<CxQuad>) -> Result<(Vec<CxQuad>, Mat<CxQuad>)> {
    let [a, b, _, _] = el.blocks();
    let (v, inv) = el.shifted(z, pi)?;
    let z1 = row_times(&v, &inv);
    let pi1 = &(&(&a * pi) + &b) * &inv;
    Ok((z1, pi1))
}

/// `m Pi m^t + 2 z m^t + (z + m Pi + n Delta)(C Pi + D)^{-1} C (z + m Pi + n Delta)^t`.
pub fn automorphy_exponent(el: &AffineSp, z: &[CxQuad], pi: &Mat<CxQuad>) -> Result<CxQuad> {
    let [_, _, c, _] = el.blocks();
    let m = el.m();
    let (v, inv) = el.shifted(z, pi)?;
    let two = CxQuad::from(Rat::integer(2));
    let t1 = dot(&row_times(&m, pi), &m);
    let t2 = &two * &dot(z, &m);
    let t3 = dot(&row_times(&row_times(&v, &inv), &c), &v);
    Ok(&(&t1 + &t2) + &t3)
}

/// `e(g1 g2, x) - e(g1, g2 x) - e(g2, x)`.
pub fn cocycle_defect(g1: &AffineSp, g2: &AffineSp, z: &[CxQuad], pi: &Mat<CxQuad>) -> Result<CxQuad> {
    let whole = automorphy_exponent(&g1.compose(g2), z, pi)?;
    let (z2, pi2) = grassmann_action(g2, z, pi)?;
    let first = automorphy_exponent(g1, &z2, &pi2)?;
    let second = automorphy_exponent(g2, z, pi)?;
    Ok(&(&whole - &first) - &second)
}

/// `(rho(gamma)(z + lambda_tau)/(c tau + d), gamma tau)` for `gamma_lambda` in `Gamma_Lambda`.
pub fn gamma_lambda_action(
    gamma: &Mat<QuadExt>,
    rho: &Mat<QuadExt>,
    lambda: &Mat<QuadExt>,
    z: &[CxQuad],
    point: &CxQuad,
) -> Result<(Vec<CxQuad>, CxQuad)> {
    let (image, factor) = mobius(gamma, point)?;
    let inv = factor.try_inv().expect("nonzero factor");
    let shifted: Vec<CxQuad> = z.iter().zip(alpha_tau(lambda, point)).map(|(a, b)| a + &b).collect();
    let r = rho.map(|x| CxQuad::real(x.clone()));
    let z1 = r.apply(&shifted)?.iter().map(|x| x * &inv).collect();
    Ok((z1, image))
}

/// Checks that the moduli map carries `gamma_lambda (z, tau)` to the
/// Grassmannian action of `sigma(gamma)_{kappa(lambda)}` on the image of `(z, tau)`.
pub fn check_moduli_equivariance(
    skel: &Skeleton,
    gamma: &Mat<QuadExt>,
    rho: &Mat<QuadExt>,
    sigma: &Mat<Rat>,
    lambda: &Mat<QuadExt>,
    z: &[CxQuad],
    point: &CxQuad,
) -> Result<bool> {
    let kl = skel
        .kappa(lambda)
        .ok_or_else(|| Error::NotLatticeStable("translation outside the lattice span".into()))?;
    let (z1, tau1) = gamma_lambda_action(gamma, rho, lambda, z, point)?;
    let (w_lhs, pi_lhs) = skel.moduli_map(&z1, &tau1)?;
    let (w, pi) = skel.moduli_map(z, point)?;
    let el = AffineSp { sigma: sigma.clone(), lambda: kl };
    let (w_rhs, pi_rhs) = grassmann_action(&el, &w, &pi)?;
    Ok(w_lhs == w_rhs && pi_lhs == pi_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi_i(g: usize) -> Mat<CxQuad> {
        Mat::identity(g).scale(&CxQuad::i())
    }

    fn cx(re: i64, im: i64) -> CxQuad {
        CxQuad::from_rats(Rat::integer(re), Rat::integer(im))
    }

    #[test]
    fn identity_action() {
        let z = vec![cx(1, 2), cx(0, -1)];
        let pi = pi_i(2);
        let (z1, p1) = grassmann_action(&AffineSp::identity(2), &z, &pi).unwrap();
        assert_eq!((z1, p1), (z.clone(), pi.clone()));
        assert_eq!(automorphy_exponent(&AffineSp::identity(2), &z, &pi).unwrap(), CxQuad::zero());
    }

    #[test]
    fn pure_translation() {
        let pi = Mat::from_rows(vec![vec![cx(0, 2), cx(1, 0)], vec![cx(1, 0), cx(0, 3)]]).unwrap();
        let z = vec![cx(1, 1), cx(2, 0)];
        let lambda: Vec<Rat> = [1, -1, 2, 0].into_iter().map(Rat::integer).collect();
        let el = AffineSp::translation(lambda);
        let m = vec![cx(1, 0), cx(-1, 0)];
        let (z1, p1) = grassmann_action(&el, &z, &pi).unwrap();
        let m_pi = row_times(&m, &pi);
        let expect: Vec<CxQuad> =
            vec![&(&z[0] + &m_pi[0]) + &cx(2, 0), &z[1] + &m_pi[1]];
        assert_eq!(z1, expect);
        assert_eq!(p1, pi);
        let e = automorphy_exponent(&el, &z, &pi).unwrap();
        assert_eq!(e, &dot(&m_pi, &m) + &(&cx(2, 0) * &dot(&z, &m)));
    }

    #[test]
    fn symplectic_keeps_siegel_space() {
        // [[A, B], [C, D]] = [[1, 1], [-1, 0]] on g = 1 sends i to (i + 1)/(-i) = -1 + i
        let s = Mat::from_rows(vec![vec![Rat::one(), Rat::one()], vec![Rat::integer(-1), Rat::zero()]]).unwrap();
        let el = AffineSp { sigma: s, lambda: vec![Rat::zero(); 2] };
        let (_, p1) = grassmann_action(&el, &[CxQuad::zero()], &pi_i(1)).unwrap();
        assert_eq!(p1[(0, 0)], cx(-1, 1));
        super::super::skeleton::check_siegel(&p1).unwrap();
    }

    #[test]
    fn singular_block() {
        // C = D = 0
        let s = Mat::from_rows(vec![vec![Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::zero()]]).unwrap();
        let el = AffineSp { sigma: s, lambda: vec![Rat::zero(); 2] };
        assert_eq!(grassmann_action(&el, &[CxQuad::zero()], &pi_i(1)), Err(Error::SingularBlock));
    }

    #[test]
    fn translations_close_the_cocycle() {
        let pi = Mat::from_rows(vec![vec![cx(0, 2), cx(1, 0)], vec![cx(1, 0), cx(0, 3)]]).unwrap();
        let z = vec![cx(1, 1), cx(2, 0)];
        let t = |v: [i64; 4]| AffineSp::translation(v.into_iter().map(Rat::integer).collect());
        let d = cocycle_defect(&t([1, 0, 0, 1]), &t([0, 2, 1, 0]), &z, &pi).unwrap();
        assert!(d.to_integer().is_some(), "{d}");
    }
}
