mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{elliptic, fek, r};
use kuga_forge::exactnum::{rat_to_quad, Field, Mat, QuadExt, Rat};
use kuga_forge::fek::{shimura_s, verify_shimura_identity};
use kuga_forge::kuga::{
    frobenius_reduce, is_symplectic, j_tau, j_tau_at, mobius, preserves_lattice, sigma_of_gamma, sl2_inverse,
    FamilyData, Skeleton, Tau, Word,
};
use kuga_forge::quaternion::{hilbert_symbol, Place, QuatAlgebra};

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

fn nonzero_int() -> impl Strategy<Value = i64> {
    (-60i64..=60).prop_filter("nonzero", |x| *x != 0)
}

fn rat_mat(n: usize, m: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(rat(), n * m).prop_map(move |v| Mat::new(n, m, v).unwrap())
}

fn place() -> impl Strategy<Value = Place> {
    prop::sample::select(vec![
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Prime(13),
        Place::Infinity,
    ])
}

fn tau() -> impl Strategy<Value = Tau> {
    (rat(), (1i64..=20, 1i64..=9)).prop_map(|(x, (n, d))| Tau::new(x, Rat::new(n, d)).unwrap())
}

fn sl2z_word() -> impl Strategy<Value = Mat<Rat>> {
    let t = common::rat_mat(&[&[1, 1], &[0, 1]]);
    let s = common::rat_mat(&[&[0, -1], &[1, 0]]);
    prop::collection::vec(prop::bool::ANY, 0..6).prop_map(move |bits| {
        bits.iter().fold(Mat::identity(2), |acc, &b| &acc * if b { &t } else { &s })
    })
}

fn skeletons() -> &'static [(FamilyData, Skeleton)] {
    use std::sync::OnceLock;
    static CELL: OnceLock<Vec<(FamilyData, Skeleton)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [elliptic(), fek(3, -4, 6)]
            .into_iter()
            .map(|f| {
                let s = Skeleton::new(&f).unwrap();
                (f, s)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rational_field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!((&a + &b) * c.clone(), &a * &c + &b * &c);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), Rat::one());
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in rat_mat(3, 3), b in rat_mat(3, 3)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        if !a.determinant().unwrap().is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), Mat::identity(3));
        }
    }

    #[test]
    fn hilbert_symbol_laws(a in nonzero_int(), b in nonzero_int(), c in nonzero_int(), v in place()) {
        let h = |x: i64, y: i64| hilbert_symbol(&r(x), &r(y), v).unwrap();
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
        prop_assert_eq!(h(a, -a), 1);
        if a != 1 {
            prop_assert_eq!(h(a, 1 - a), 1);
        }
        prop_assert_eq!(h(a, b * b), 1);
    }

    #[test]
    fn reduced_norm_is_multiplicative(
        a in nonzero_int(), b in nonzero_int(),
        p in prop::array::uniform4(-5i64..=5), q in prop::array::uniform4(-5i64..=5),
    ) {
        let alg = QuatAlgebra::from_ints(a, b).unwrap();
        let (x, y) = (alg.elem(p), alg.elem(q));
        prop_assert_eq!((&x * &y).nrd(), x.nrd() * y.nrd());
        prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
    }

    #[test]
    fn frobenius_reduction(seed in any::<u64>(), half in 1usize..=4) {
        let m = common::random_alternating(&mut ChaCha8Rng::seed_from_u64(seed), 2 * half, 9);
        let b = frobenius_reduce(&m).unwrap();
        prop_assert_eq!(&(&b.u.transpose() * &m) * &b.u, b.standard_form());
        prop_assert_eq!(b.u.determinant().unwrap().abs(), Rat::one());
    }

    #[test]
    fn complex_structure_transforms(t in tau(), g in sl2z_word()) {
        let j = j_tau(&t);
        prop_assert_eq!(&j * &j, -&Mat::identity(2));
        let gq = rat_to_quad(&g);
        let (image, _) = mobius(&gq, &t.point()).unwrap();
        let moved = j_tau_at(&image).unwrap();
        prop_assert_eq!(moved, &(&gq * &rat_to_quad(&j)) * &sl2_inverse(&gq));
    }

    #[test]
    fn shimura_identity_on_random_matrices(a in rat_mat(2, 2), b in rat_mat(2, 2), n in 1i64..=9) {
        let y = rat_to_quad(&common::rat_mat(&[&[0, -n], &[1, 0]]));
        let s = shimura_s(&y).unwrap();
        prop_assert_eq!(s.clone(), common::rat_mat(&[&[1, 0], &[0, n]]));
        prop_assert_eq!(verify_shimura_identity(&s, &y, &[(rat_to_quad(&a), rat_to_quad(&b))]), Ok(()));
    }

    #[test]
    fn sigma_is_a_homomorphism(seed in any::<u64>(), la in 0usize..=3, lb in 0usize..=3, which in 0usize..2) {
        let (f, skel) = &skeletons()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = f.gamma_gens.len();
        let (u, v) = (Word::random(n, la, &mut rng), Word::random(n, lb, &mut rng));
        let su = sigma_of_gamma(skel, &u).unwrap();
        let sv = sigma_of_gamma(skel, &v).unwrap();
        let suv = sigma_of_gamma(skel, &u.concat(&v)).unwrap();
        prop_assert_eq!(suv.clone(), &su * &sv);
        prop_assert!(is_symplectic(&suv));
        prop_assert!(preserves_lattice(skel, &suv));
        prop_assert_eq!(&su * &sigma_of_gamma(skel, &u.inverse()).unwrap(), Mat::identity(2 * skel.g()));
    }

    #[test]
    fn form_is_invariant_under_generators(
        which in 0usize..2,
        ca in prop::collection::vec(-3i64..=3, 4),
        cb in prop::collection::vec(-3i64..=3, 4),
    ) {
        let (f, skel) = &skeletons()[which];
        let k = f.rank();
        let combo = |c: &[i64]| skel.lattice_coords().combine(&c[..k].iter().map(|&x| r(x)).collect::<Vec<_>>());
        let (a, b) = (combo(&ca), combo(&cb));
        for g in 0..f.gamma_gens.len() {
            prop_assert_eq!(f.form_e(&f.act(g, &a), &f.act(g, &b)), f.form_e(&a, &b));
        }
        let e = f.form_e(&a, &b);
        prop_assert!(e.to_rational().is_some());
        prop_assert_eq!(e.clone() + f.form_e(&b, &a), QuadExt::zero());
    }

    #[test]
    fn rational_json_round_trip(a in rat()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: Rat = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }
}
