use rayon::prelude::*;

use super::{Quat, QuatAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::{Field, Mat, Rat};

/// A full-rank lattice in a quaternion algebra that contains 1 and is closed
/// under multiplication and conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatOrder {
    basis: [Quat; 4],
    // row i holds the algebra coordinates of basis[i]; inverse maps back
    to_basis: Mat<Rat>,
}

impl QuatOrder {
    pub fn new(basis: [Quat; 4]) -> Result<QuatOrder> {
        let alg = basis[0].algebra().clone();
        if basis.iter().any(|b| *b.algebra() != alg) {
            return Err(Error::AlgebraMismatch);
        }
        let m = Mat::from_fn(4, 4, |i, j| basis[i].coords()[j].clone());
        let to_basis = m.inverse().map_err(|_| Error::NotAnOrder("basis has rank < 4".into()))?;
        let order = QuatOrder { basis, to_basis };
        let integral = |q: &Quat| order.coordinates(q).iter().all(Rat::is_integer);
        if !integral(&alg.one()) {
            return Err(Error::NotAnOrder("does not contain 1".into()));
        }
        for u in &order.basis {
            if !integral(&u.conj()) {
                return Err(Error::NotAnOrder(format!("conjugate of {u} escapes")));
            }
            for v in &order.basis {
                if !integral(&(u * v)) {
                    return Err(Error::NotAnOrder(format!("product {u} * {v} escapes")));
                }
            }
        }
        Ok(order)
    }

    pub fn basis(&self) -> &[Quat; 4] {
        &self.basis
    }

    pub fn algebra(&self) -> &QuatAlgebra {
        self.basis[0].algebra()
    }

    /// Coordinates of `q` in the order basis (rational in general).
    pub fn coordinates(&self, q: &Quat) -> [Rat; 4] {
        let c = q.coords();
        std::array::from_fn(|j| {
            (0..4).fold(Rat::zero(), |acc, i| acc + c[i].clone() * self.to_basis[(i, j)].clone())
        })
    }

    pub fn contains(&self, q: &Quat) -> bool {
        self.coordinates(q).iter().all(Rat::is_integer)
    }

    pub fn combination(&self, t: &[i64; 4]) -> Quat {
        let alg = self.algebra();
        (0..4).fold(alg.scalar(Rat::zero()), |acc, i| {
            &acc + &self.basis[i].scale(&Rat::integer(t[i]))
        })
    }
}

/// The `Z`-span of `1, x, y, xy`, which is an order when `a` and `b` are integers.
pub fn standard_order(alg: &QuatAlgebra) -> Result<QuatOrder> {
    if !alg.a().is_integer() || !alg.b().is_integer() {
        return Err(Error::NonIntegralParameters(alg.a().to_string(), alg.b().to_string()));
    }
    QuatOrder::new([alg.one(), alg.x(), alg.y(), alg.xy()])
}

/// All elements of reduced norm 1 whose order coordinates lie in `[-h, h]`,
/// sorted by coordinate height and then lexicographically.
pub fn unit_search(order: &QuatOrder, height_bound: u32) -> Vec<Quat> {
    let h = height_bound as i64;
    // the norm form in order coordinates: nrd(sum t_i b_i) = sum_ij t_i t_j g_ij
    let basis = order.basis();
    let gram: Vec<Vec<Rat>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let s = &basis[i] * &basis[j].conj();
                    s.trd() * Rat::new(1, 2)
                })
                .collect()
        })
        .collect();
    let mut found: Vec<(i64, [i64; 4])> = (-h..=h)
        .into_par_iter()
        .flat_map_iter(|t0| {
            let gram = &gram;
            let mut local = Vec::new();
            for t1 in -h..=h {
                for t2 in -h..=h {
                    for t3 in -h..=h {
                        let t = [t0, t1, t2, t3];
                        let mut n = Rat::zero();
                        for i in 0..4 {
                            if t[i] == 0 {
                                continue;
                            }
                            for j in 0..4 {
                                if t[j] != 0 {
                                    n = n + gram[i][j].clone() * Rat::integer(t[i] * t[j]);
                                }
                            }
                        }
                        if n == Rat::one() {
                            let height = t.iter().map(|x| x.abs()).max().unwrap_or(0);
                            local.push((height, t));
                        }
                    }
                }
            }
            local.into_iter()
        })
        .collect();
    found.sort();
    found.into_iter().map(|(_, t)| order.combination(&t)).collect()
}

/// Elements congruent to 1 modulo `level * O`, coordinatewise in the order basis.
pub fn congruence_subgroup(units: &[Quat], order: &QuatOrder, level: u32) -> Result<Vec<Quat>> {
    if level < 3 {
        return Err(Error::LevelTooSmall(level));
    }
    let n = Rat::integer(level as i64);
    let one = order.algebra().one();
    Ok(units
        .iter()
        .filter(|u| {
            order
                .coordinates(&(*u - &one))
                .iter()
                .all(|c| (c / &n).is_integer())
        })
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders_are_closed() {
        for (a, b) in [(2, 3), (3, -4), (-1, -1), (5, 7)] {
            let alg = QuatAlgebra::from_ints(a, b).unwrap();
            let o = standard_order(&alg).unwrap();
            // closure oracle: every basis product has integral coordinates
            for u in o.basis() {
                for v in o.basis() {
                    assert!((u * v).coords().iter().all(Rat::is_integer));
                }
            }
        }
    }

    #[test]
    fn non_integral_parameters() {
        let alg = QuatAlgebra::new(Rat::new(1, 2), Rat::integer(3)).unwrap();
        assert!(matches!(standard_order(&alg), Err(Error::NonIntegralParameters(..))));
    }

    #[test]
    fn non_order_rejected() {
        let alg = QuatAlgebra::from_ints(2, 3).unwrap();
        let half = alg.x().scale(&Rat::new(1, 2));
        let r = QuatOrder::new([alg.one(), half, alg.y(), alg.xy()]);
        assert!(matches!(r, Err(Error::NotAnOrder(_))));
    }

    #[test]
    fn units_small_bounds() {
        let alg = QuatAlgebra::from_ints(3, -4).unwrap();
        let o = standard_order(&alg).unwrap();
        let u0 = unit_search(&o, 0);
        assert!(u0.is_empty());
        let u1 = unit_search(&o, 1);
        assert!(u1.contains(&alg.one()));
        assert!(u1.contains(&-&alg.one()));
        let u2 = unit_search(&o, 2);
        assert!(u2.contains(&alg.elem([2, 1, 0, 0])));
    }

    #[test]
    fn units_agree_with_enumeration_oracle() {
        let alg = QuatAlgebra::from_ints(2, 3).unwrap();
        let o = standard_order(&alg).unwrap();
        let found = unit_search(&o, 2);
        let mut oracle = Vec::new();
        for c0 in -2..=2 {
            for c1 in -2..=2 {
                for c2 in -2..=2 {
                    for c3 in -2..=2 {
                        let q = alg.elem([c0, c1, c2, c3]);
                        if q.nrd() == Rat::one() {
                            oracle.push(q);
                        }
                    }
                }
            }
        }
        assert_eq!(found.len(), oracle.len());
        for q in &oracle {
            assert!(found.contains(q));
        }
        // 1 + x + xy: nrd = 1 - 2 + 6 = 5, not a unit
        assert!(!found.contains(&alg.elem([1, 1, 0, 1])));
        for u in &found {
            assert_eq!(u.nrd(), Rat::one());
            assert!(found.contains(&u.conj()));
        }
    }

    #[test]
    fn congruence_filter() {
        let alg = QuatAlgebra::from_ints(3, -4).unwrap();
        let o = standard_order(&alg).unwrap();
        let units = vec![alg.one(), -&alg.one(), alg.elem([2, 1, 0, 0])];
        assert_eq!(congruence_subgroup(&units, &o, 3).unwrap(), vec![alg.one()]);
        assert_eq!(congruence_subgroup(&[alg.one()], &o, 7).unwrap(), vec![alg.one()]);
        assert_eq!(congruence_subgroup(&units, &o, 2), Err(Error::LevelTooSmall(2)));
    }
}
