//! Modular families of fake elliptic curves from an indefinite division
//! quaternion algebra over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactnum::{is_positive_definite, quad_to_rat, rat_to_quad, Field, Mat, QuadExt, Rat};
use crate::kuga::{form_e, FamilyData};
use crate::quaternion::{
    congruence_subgroup, find_pure_pair, standard_order, unit_search, Quat, QuatAlgebra, QuatJson, QuatOrder,
    RealEmbedding,
};

fn default_max_generators() -> usize {
    3
}

fn default_pair_height() -> u32 {
    8
}

/// Recipe document: `{"a", "b", "level", "unit_height"}` plus optional
/// `max_generators` and `pair_height`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FekRecipe {
    pub a: i64,
    pub b: i64,
    pub level: u32,
    pub unit_height: u32,
    #[serde(default = "default_max_generators")]
    pub max_generators: usize,
    #[serde(default = "default_pair_height")]
    pub pair_height: u32,
}

impl FekRecipe {
    pub fn new(a: i64, b: i64, level: u32, unit_height: u32) -> FekRecipe {
        FekRecipe {
            a,
            b,
            level,
            unit_height,
            max_generators: default_max_generators(),
            pair_height: default_pair_height(),
        }
    }
}

fn j2_rat() -> Mat<Rat> {
    Mat::from_rows(vec![vec![Rat::zero(), Rat::one()], vec![Rat::integer(-1), Rat::zero()]]).expect("2x2")
}

/// `S = J_2 Y`, required symmetric and positive definite.
pub fn shimura_s(y_emb: &Mat<QuadExt>) -> Result<Mat<Rat>> {
    if (y_emb.rows(), y_emb.cols()) != (2, 2) {
        return Err(Error::DimensionMismatch("Y must be 2x2".into()));
    }
    let y = quad_to_rat(y_emb).ok_or_else(|| Error::InvalidInput("Y must have rational entries".into()))?;
    let s = &j2_rat() * &y;
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !is_positive_definite(&rat_to_quad(&s))? {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(s)
}

/// Checks `tr(a^t S b J_2) = tr(Y a J_2^{-1} b^t J_2)` on every sample.
/// The error carries the index of the first failing sample.
pub fn verify_shimura_identity(
    s: &Mat<Rat>,
    y_emb: &Mat<QuadExt>,
    samples: &[(Mat<QuadExt>, Mat<QuadExt>)],
) -> std::result::Result<(), usize> {
    let s = rat_to_quad(s);
    let j = rat_to_quad(&j2_rat());
    let j_inv = -&j;
    for (k, (a, b)) in samples.iter().enumerate() {
        let lhs = form_e(&s, a, b);
        let conj = &(&j_inv * &b.transpose()) * &j;
        let rhs = (&(y_emb * a) * &conj).trace().map_err(|_| k)?;
        if lhs != rhs {
            return Err(k);
        }
    }
    Ok(())
}

fn is_congruent(order: &QuatOrder, q: &Quat, target: &Quat, level: u32) -> bool {
    let n = Rat::integer(level as i64);
    order.coordinates(&(q - target)).iter().all(|c| (c / &n).is_integer())
}

/// Elements of the level-`N` congruence subgroup of the norm-one units: for
/// every unit `u != +-1` of height at most `unit_height`, the power `+-u^k`
/// with `k` minimal such that `u^k = +-1 mod N O`. Inverse pairs are merged
/// and the result sorted by height.
pub fn congruence_generators(order: &QuatOrder, level: u32, unit_height: u32, max: usize) -> Result<Vec<Quat>> {
    let alg = order.algebra();
    let one = alg.one();
    let minus_one = -&one;
    let units = unit_search(order, unit_height);
    // (O/NO)^x has fewer than N^4 elements
    let bound = (level as u64).pow(4);
    let mut found: Vec<Quat> = Vec::new();
    for u in units.iter().filter(|u| **u != one && **u != minus_one) {
        let mut p = u.clone();
        for _ in 0..bound {
            if is_congruent(order, &p, &one, level) {
                found.push(p);
                break;
            }
            if is_congruent(order, &p, &minus_one, level) {
                found.push(-&p);
                break;
            }
            p = &p * u;
        }
    }
    let mut found = congruence_subgroup(&found, order, level)?;
    found.retain(|q| *q != one);
    found.sort_by(|x, y| x.height().cmp(&y.height()).then_with(|| x.coords().cmp(y.coords())));
    let mut out: Vec<Quat> = Vec::new();
    for q in found {
        if !out.contains(&q) && !out.contains(&q.conj()) {
            out.push(q);
        }
    }
    out.truncate(max);
    Ok(out)
}

fn lcm_of_denominators(values: &[Rat]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Compiles a recipe into a `g = 2` family with trivial `rho`, lattice the
/// image of the standard order and `S` scaled so that `E` is integral on it.
pub fn compile_family(recipe: &FekRecipe) -> Result<FamilyData> {
    let alg = QuatAlgebra::from_ints(recipe.a, recipe.b)?;
    let (x, y) = find_pure_pair(&alg, recipe.pair_height)?;
    let emb = RealEmbedding::new(x, y)?;
    let order = standard_order(&alg)?;
    let y_emb = emb.apply(&emb.pair().1.clone())?;
    let s0 = shimura_s(&y_emb)?;

    let lattice = order.basis().iter().map(|q| emb.apply(q)).collect::<Result<Vec<_>>>()?;
    let s0q = rat_to_quad(&s0);
    let mut gram = Vec::with_capacity(16);
    for a in &lattice {
        for b in &lattice {
            let e = form_e(&s0q, a, b);
            gram.push(e.to_rational().ok_or_else(|| Error::IrrationalForm(e.to_string()))?);
        }
    }
    let scale = Rat::from_bigint(lcm_of_denominators(&gram));
    let s = s0.scale(&scale);

    let units = congruence_generators(&order, recipe.level, recipe.unit_height, recipe.max_generators)?;
    if units.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let gamma_gens = units.iter().map(|u| emb.apply(u)).collect::<Result<Vec<_>>>()?;
    let rho = vec![Mat::identity(2); gamma_gens.len()];

    let origin = json!({
        "kind": "fake-elliptic",
        "recipe": recipe,
        "adapted_pair": [QuatJson::from_value(emb.pair().0), QuatJson::from_value(emb.pair().1)],
        "a_new": emb.a_new(),
        "b_new": emb.b_new(),
        "scale": scale,
        "units": units.iter().map(QuatJson::from_value).collect::<Vec<_>>(),
    });
    let family = FamilyData {
        g: 2,
        surd: Some(emb.surd().clone()),
        gamma_gens,
        rho,
        lattice,
        s: rat_to_quad(&s),
        origin: Some(origin),
    };
    family.validate_shapes()?;
    Ok(family)
}
