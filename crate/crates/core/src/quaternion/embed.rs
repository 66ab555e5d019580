use super::{classify_algebra, Quat, QuatAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, QuadExt, Rat, Surd};

/// An adapted presentation `X, Y` of an indefinite division algebra:
/// both pure, `X^2 > 0`, `Y^2 < 0`, `XY = -YX`.
///
/// When the given presentation is already adapted it is returned as is
/// (`(x, y)` or `(y, x)`). Otherwise both `a, b > 0`; then `X = y` and `Y` is
/// searched in the span of `x, xy` (everything there anticommutes with `y`),
/// smallest height first, then smallest `|Y^2|`.
pub fn find_pure_pair(alg: &QuatAlgebra, height_bound: u32) -> Result<(Quat, Quat)> {
    let ram = classify_algebra(alg)?;
    if ram.is_split() {
        return Err(Error::NotIndefinite(format!("{alg} is split")));
    }
    if !ram.is_indefinite() {
        return Err(Error::NotIndefinite(format!("{alg} is definite")));
    }
    let (sa, sb) = (alg.a().signum(), alg.b().signum());
    if sa > 0 && sb < 0 {
        return Ok((alg.x(), alg.y()));
    }
    if sa < 0 && sb > 0 {
        return Ok((alg.y(), alg.x()));
    }
    // a, b > 0: search Y = c1 x + c3 xy with Y^2 = a (c1^2 - b c3^2) < 0
    let h = height_bound as i64;
    for height in 1..=h {
        let mut best: Option<(Rat, Quat)> = None;
        for c1 in signed_order(height) {
            for c3 in signed_order(height) {
                if c1.abs().max(c3.abs()) != height {
                    continue;
                }
                let cand = alg.elem([0, c1, 0, c3]);
                let sq = (&cand * &cand).coords()[0].clone();
                if sq.signum() >= 0 {
                    continue;
                }
                let size = sq.abs();
                if best.as_ref().is_none_or(|(s, _)| size < *s) {
                    best = Some((size, cand));
                }
            }
        }
        if let Some((_, y)) = best {
            return Ok((alg.y(), y));
        }
    }
    Err(Error::SearchExhausted(height_bound))
}

// 0, 1, -1, 2, -2, ..., h, -h
fn signed_order(h: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=h).flat_map(|k| [k, -k]))
}

/// The embedding `B -> M_2(R)` with `X -> diag(sqrt a', -sqrt a')`, `Y -> [[0, b'], [1, 0]]`.
#[derive(Clone, Debug)]
pub struct RealEmbedding {
    alg: QuatAlgebra,
    x: Quat,
    y: Quat,
    a_new: Rat,
    b_new: Rat,
    surd: Surd,
    // row vector of algebra coordinates times this = coordinates in (1, X, Y, XY)
    to_adapted: Mat<Rat>,
}

impl RealEmbedding {
    pub fn new(x: Quat, y: Quat) -> Result<RealEmbedding> {
        let alg = x.algebra().clone();
        if *y.algebra() != alg {
            return Err(Error::AlgebraMismatch);
        }
        if !x.is_pure() || !y.is_pure() {
            return Err(Error::InvalidInput("adapted pair must be pure".into()));
        }
        let xy = &x * &y;
        if xy != -&(&y * &x) {
            return Err(Error::InvalidInput("adapted pair does not anticommute".into()));
        }
        let a_new = (&x * &x).coords()[0].clone();
        let b_new = (&y * &y).coords()[0].clone();
        let surd = Surd::new(a_new.clone())?;
        let rows = [alg.one(), x.clone(), y.clone(), xy];
        let m = Mat::from_fn(4, 4, |i, j| rows[i].coords()[j].clone());
        let to_adapted = m
            .inverse()
            .map_err(|_| Error::InvalidInput("adapted pair does not generate the algebra".into()))?;
        Ok(RealEmbedding { alg, x, y, a_new, b_new, surd, to_adapted })
    }

    pub fn algebra(&self) -> &QuatAlgebra {
        &self.alg
    }

    pub fn pair(&self) -> (&Quat, &Quat) {
        (&self.x, &self.y)
    }

    /// `X^2`, the surd of the target field.
    pub fn a_new(&self) -> &Rat {
        &self.a_new
    }

    /// `Y^2`.
    pub fn b_new(&self) -> &Rat {
        &self.b_new
    }

    pub fn surd(&self) -> &Surd {
        &self.surd
    }

    /// Coordinates of `q` in the basis `1, X, Y, XY`.
    pub fn adapted_coordinates(&self, q: &Quat) -> [Rat; 4] {
        let c = q.coords();
        std::array::from_fn(|j| {
            (0..4).fold(Rat::zero(), |acc, i| acc + c[i].clone() * self.to_adapted[(i, j)].clone())
        })
    }

    pub fn apply(&self, q: &Quat) -> Result<Mat<QuadExt>> {
        if *q.algebra() != self.alg {
            return Err(Error::AlgebraMismatch);
        }
        let [t0, t1, t2, t3] = self.adapted_coordinates(q);
        let s = &self.surd;
        let b = &self.b_new;
        // 1 -> I, X -> diag(r, -r), Y -> [[0, b], [1, 0]], XY -> [[0, b r], [-r, 0]]
        let e00 = QuadExt::new(t0.clone(), t1.clone(), s);
        let e11 = QuadExt::new(t0, -&t1, s);
        let e01 = QuadExt::new(&t2 * b, &t3 * b, s);
        let e10 = QuadExt::new(t2, -&t3, s);
        Mat::from_rows(vec![vec![e00, e01], vec![e10, e11]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_to_quad;

    fn r(n: i64) -> Rat {
        Rat::integer(n)
    }

    #[test]
    fn adapted_presentation_returned_directly() {
        let alg = QuatAlgebra::from_ints(3, -4).unwrap();
        assert_eq!(find_pure_pair(&alg, 3).unwrap(), (alg.x(), alg.y()));
    }

    #[test]
    fn search_for_two_three() {
        let alg = QuatAlgebra::from_ints(2, 3).unwrap();
        let (x, y) = find_pure_pair(&alg, 3).unwrap();
        assert_eq!(x, alg.y());
        assert_eq!(y, &alg.x() + &alg.xy());
        // oracle: squares and anticommutation by direct multiplication
        assert_eq!(&x * &x, alg.scalar(r(3)));
        assert_eq!(&y * &y, alg.scalar(r(-4)));
        assert_eq!(&x * &y, -&(&y * &x));
        assert_eq!(find_pure_pair(&alg, 0), Err(Error::SearchExhausted(0)));
    }

    #[test]
    fn split_and_definite_rejected() {
        let split = QuatAlgebra::from_ints(5, 1).unwrap();
        assert!(matches!(find_pure_pair(&split, 3), Err(Error::NotIndefinite(_))));
        let ham = QuatAlgebra::from_ints(-1, -1).unwrap();
        assert!(matches!(find_pure_pair(&ham, 3), Err(Error::NotIndefinite(_))));
    }

    #[test]
    fn embedding_images() {
        let alg = QuatAlgebra::from_ints(3, -4).unwrap();
        let e = RealEmbedding::new(alg.x(), alg.y()).unwrap();
        assert_eq!(e.apply(&alg.one()).unwrap(), Mat::identity(2));
        let y_img = rat_to_quad(&Mat::from_rows(vec![vec![r(0), r(-4)], vec![r(1), r(0)]]).unwrap());
        assert_eq!(e.apply(&alg.y()).unwrap(), y_img);
        let u = e.apply(&alg.elem([2, 1, 0, 0])).unwrap();
        let s = e.surd();
        assert_eq!(u[(0, 0)], QuadExt::new(r(2), r(1), s));
        assert_eq!(u[(1, 1)], QuadExt::new(r(2), r(-1), s));
        assert!(u[(0, 1)].is_zero() && u[(1, 0)].is_zero());
        assert_eq!(u.determinant().unwrap(), QuadExt::one());
    }

    #[test]
    fn square_surd_rerouted() {
        // (4, 3): x^2 = 4 is a square, the algebra splits
        let alg = QuatAlgebra::from_ints(4, 3).unwrap();
        let err = RealEmbedding::new(alg.x(), alg.y()).unwrap_err();
        assert_eq!(err, Error::SplitSurd("4".into()));
    }

    #[test]
    fn embedding_is_a_ring_map_with_norm_and_trace() {
        for (a, b) in [(3, -4), (2, 3), (-1, 3), (7, -5)] {
            let alg = QuatAlgebra::from_ints(a, b).unwrap();
            let (x, y) = find_pure_pair(&alg, 4).unwrap();
            let e = RealEmbedding::new(x, y).unwrap();
            let elems: Vec<Quat> = (0..6)
                .map(|k| alg.elem([k - 2, (k * 7) % 5 - 2, (k * 3) % 4 - 1, (k * 5) % 3 - 1]))
                .collect();
            for u in &elems {
                let m = e.apply(u).unwrap();
                assert_eq!(m.determinant().unwrap(), QuadExt::rational(u.nrd()));
                assert_eq!(m.trace().unwrap(), QuadExt::rational(u.trd()));
                for v in &elems {
                    let lhs = e.apply(&(u * v)).unwrap();
                    assert_eq!(lhs, &m * &e.apply(v).unwrap());
                }
            }
        }
    }
}
