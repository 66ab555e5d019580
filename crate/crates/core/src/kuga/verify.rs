use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::{sl2_inverse, FamilyData, LatticeCoords};
use super::moduli::{check_moduli_equivariance, cocycle_defect, AffineSp};
use super::report::{CheckStatus, VerificationReport};
use super::sigma::{is_symplectic, preserves_lattice, sigma_of, Word};
use super::skeleton::Skeleton;
use super::symplectic::{GramForm, PolarizationType};
use super::tau::{alpha_tau, j_tau, j_tau_at, mobius, Tau};
use crate::error::Result;
use crate::exactnum::{is_positive_definite, rat_to_quad, CxQuad, Field, Mat, QuadExt, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub taus: Vec<Tau>,
    pub seed: u64,
    /// Seeded samples for the moduli and automorphy checks.
    pub samples: usize,
    /// Seeded words of length 3 for the homomorphism check.
    pub random_words: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { taus: Tau::default_samples(), seed: 0, samples: 20, random_words: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub g: usize,
    pub generators: usize,
    pub taus: Vec<Tau>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<PolarizationType>,
    pub words: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub report: VerificationReport,
    pub summary: VerifySummary,
}

type Finding = (&'static str, CheckStatus, String);

fn pass(id: &'static str) -> Finding {
    (id, CheckStatus::Pass, String::new())
}

fn fail(id: &'static str, w: impl Into<String>) -> Finding {
    (id, CheckStatus::Fail, w.into())
}

fn verdict(id: &'static str, ok: bool, w: impl FnOnce() -> String) -> Finding {
    if ok {
        pass(id)
    } else {
        fail(id, w())
    }
}

fn record_all(report: &mut VerificationReport, findings: impl IntoIterator<Item = Finding>) {
    for (id, status, w) in findings {
        report.record(id, status, w);
    }
}

/// Lattice stability under `alpha -> rho(gamma) alpha gamma^{-1}` and invariance of `E`.
pub fn verify_stability(family: &FamilyData) -> VerificationReport {
    let mut report = VerificationReport::default();
    report.record("stability.lattice", CheckStatus::Pass, "");
    report.record("stability.form", CheckStatus::Pass, "");
    let coords = match LatticeCoords::new(&family.lattice) {
        Ok(c) => c,
        Err(e) => {
            report.record("stability.lattice", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    let n = family.lattice.len();
    for k in 0..family.gamma_gens.len() {
        let moved: Vec<Mat<QuadExt>> = family.lattice.iter().map(|b| family.act(k, b)).collect();
        let mut t = Mat::zeros(n, n);
        let mut ok = true;
        for (i, m) in moved.iter().enumerate() {
            match coords.coords(m) {
                Some(c) if c.iter().all(Rat::is_integer) => {
                    for (j, x) in c.into_iter().enumerate() {
                        t[(i, j)] = x;
                    }
                }
                Some(c) => {
                    let bad = c.iter().find(|x| !x.is_integer()).expect("non-integral");
                    report.record(
                        "stability.lattice",
                        CheckStatus::Fail,
                        format!("generator {k}: image of lambda_{i} has coordinate {bad}"),
                    );
                    ok = false;
                }
                None => {
                    report.record(
                        "stability.lattice",
                        CheckStatus::Fail,
                        format!("generator {k}: image of lambda_{i} leaves the lattice span"),
                    );
                    ok = false;
                }
            }
        }
        if ok {
            let unimodular = t.determinant().map(|d| d.abs()) == Ok(Rat::one());
            report.check("stability.lattice", unimodular, || format!("generator {k} is not onto the lattice"));
        }
        for i in 0..n {
            for j in 0..n {
                let before = family.form_e(&family.lattice[i], &family.lattice[j]);
                let after = family.form_e(&moved[i], &moved[j]);
                if before != after {
                    report.record(
                        "stability.form",
                        CheckStatus::Fail,
                        format!("generator {k}: E(lambda_{i}, lambda_{j}) = {before} becomes {after}"),
                    );
                }
            }
        }
    }
    report
}

/// `E(alpha J^{-1}, beta J^{-1}) = E(alpha, beta)` and positivity of `E(alpha, beta J^{-1})`.
pub fn verify_riemann(family: &FamilyData, taus: &[Tau]) -> VerificationReport {
    let mut report = VerificationReport::default();
    let findings: Vec<Vec<Finding>> = taus
        .par_iter()
        .map(|t| {
            let mut out = Vec::new();
            let j_inv = rat_to_quad(&j_tau(t).inverse().expect("det 1"));
            let basis = &family.lattice;
            let n = basis.len();
            let moved: Vec<Mat<QuadExt>> = basis.iter().map(|b| b * &j_inv).collect();
            let mut inv_ok = None;
            for i in 0..n {
                for j in 0..n {
                    if inv_ok.is_none() && family.form_e(&moved[i], &moved[j]) != family.form_e(&basis[i], &basis[j]) {
                        inv_ok = Some(format!("tau = {t}: E(lambda_{i} J^-1, lambda_{j} J^-1) differs"));
                    }
                }
            }
            out.push(match inv_ok {
                None => pass("riemann.invariance"),
                Some(w) => fail("riemann.invariance", w),
            });
            let h = Mat::from_fn(n, n, |i, j| family.form_e(&basis[i], &moved[j]));
            let positive = h.is_symmetric() && is_positive_definite(&h).unwrap_or(false);
            out.push(verdict("riemann.positivity", positive, || {
                if h.is_symmetric() {
                    format!("tau = {t}: E(alpha, beta J^-1) is not positive definite")
                } else {
                    format!("tau = {t}: E(alpha, beta J^-1) is not symmetric")
                }
            }));
            out
        })
        .collect();
    record_all(&mut report, findings.into_iter().flatten());
    report
}

fn rational_test_elements() -> Vec<Mat<QuadExt>> {
    [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 1], [1, 1]]]
        .iter()
        .map(|r| {
            rat_to_quad(
                &Mat::from_rows(r.iter().map(|row| row.iter().map(|&x| Rat::integer(x)).collect()).collect())
                    .expect("2x2"),
            )
        })
        .collect()
}

fn complex_structure(family: &FamilyData, taus: &[Tau]) -> Vec<Finding> {
    let mut out = Vec::new();
    let elements: Vec<Mat<QuadExt>> = family.gamma_gens.iter().cloned().chain(rational_test_elements()).collect();
    for t in taus {
        let j = j_tau(t);
        let ok = &j * &j == -&Mat::identity(2) && j.determinant().ok() == Some(Rat::one());
        out.push(verdict("complex_structure.jtau", ok, || format!("tau = {t}: J^2 != -1 or det J != 1")));
        let jq = rat_to_quad(&j);
        for (k, gm) in elements.iter().enumerate() {
            let ok = match mobius(gm, &t.point()).and_then(|(p, _)| j_tau_at(&p)) {
                Ok(moved) => moved == &(gm * &jq) * &sl2_inverse(gm),
                Err(_) => false,
            };
            out.push(verdict("complex_structure.jtau", ok, || {
                format!("tau = {t}: J at gamma_{k}(tau) is not gamma J gamma^-1")
            }));
        }
        let j_inv = rat_to_quad(&j.inverse().expect("det 1"));
        let p = t.point();
        for (i, b) in family.lattice.iter().enumerate() {
            let lhs: Vec<CxQuad> = alpha_tau(b, &p).iter().map(|z| z * &CxQuad::i()).collect();
            let rhs = alpha_tau(&(b * &j_inv), &p);
            out.push(verdict("complex_structure.intertwine", lhs == rhs, || {
                format!("tau = {t}: i lambda_{i} != (lambda_{i} J^-1)")
            }));
        }
    }
    out
}

struct Sample {
    word: Word,
    coeffs: Vec<i64>,
    z: Vec<CxQuad>,
    tau: Tau,
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn draw_sample(rng: &mut ChaCha8Rng, gens: usize, g: usize, rank: usize, taus: &[Tau]) -> Sample {
    let len = rng.gen_range(1..=2);
    let word = if gens == 0 { Word::identity() } else { Word::random(gens, len, rng) };
    let coeffs = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
    let z = (0..g).map(|_| CxQuad::from_rats(small_rat(rng), small_rat(rng))).collect();
    let tau = taus[rng.gen_range(0..taus.len())].clone();
    Sample { word, coeffs, z, tau }
}

fn lattice_vector(skel: &Skeleton, coeffs: &[i64]) -> Mat<QuadExt> {
    let c: Vec<Rat> = coeffs.iter().map(|&x| Rat::integer(x)).collect();
    skel.lattice_coords().combine(&c)
}

/// Equivariance of `(Pi_1, Pi'_2)` and the fiber isomorphism for one element.
pub fn verify_equivariance(skel: &Skeleton, word: &Word, tau: &Tau) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    record_all(&mut report, equivariance_findings(skel, word, tau)?);
    Ok(report)
}

fn equivariance_findings(skel: &Skeleton, word: &Word, tau: &Tau) -> Result<Vec<Finding>> {
    let (gamma, rho) = word.evaluate(&skel.family)?;
    let sigma = sigma_of(skel, &gamma, &rho)?;
    let p = tau.point();
    let (image, factor) = mobius(&gamma, &p)?;
    let inv = factor.try_inv().expect("nonzero");
    let lhs = skel.period_pair(&image);
    let r = rho.map(|x| CxQuad::real(x.clone()).scale(&QuadExt::one()));
    let s_t = sigma.transpose().map(|x| CxQuad::from(x.clone()));
    let rhs = (&(&r * &skel.period_pair(&p)) * &s_t).map(|x| x * &inv);
    let mut out = vec![verdict("equivariance.period", lhs == rhs, || {
        format!("{word} at tau = {t}", t = tau)
    })];
    out.push(match skel.fiber_isomorphism(&gamma, &rho, &p) {
        Ok(_) => pass("equivariance.fiber"),
        Err(e) => fail("equivariance.fiber", format!("{word} at tau = {tau}: {e}")),
    });
    Ok(out)
}

/// Runs every check on a family.
pub fn verify_family(family: &FamilyData, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    family.validate_shapes()?;
    let mut report = VerificationReport::default();
    let gens = family.gamma_gens.len();
    let mut summary = VerifySummary {
        g: family.g,
        generators: gens,
        taus: opts.taus.clone(),
        seed: opts.seed,
        scale: None,
        delta: None,
        words: 0,
    };

    let failures = family.invariant_failures();
    report.check("family.invariants", failures.is_empty(), || failures.join("; "));
    for id in ["group.discreteness", "group.torsion_free"] {
        report.record(id, CheckStatus::Skipped, "guaranteed by the arithmetic construction");
    }
    report.merge(verify_stability(family));
    report.merge(verify_riemann(family, &opts.taus));
    record_all(&mut report, complex_structure(family, &opts.taus));

    let dependent = [
        "reduce.symplectic",
        "period.riemann",
        "sigma.symplectic",
        "sigma.lattice",
        "sigma.homomorphism",
        "equivariance.period",
        "equivariance.fiber",
        "moduli.equivariance",
        "automorphy.cocycle",
    ];
    let gram = match super::symplectic::gram_of_e(family) {
        Ok(g) => {
            report.pass("gram.integral");
            g
        }
        Err(e) => {
            report.record("gram.integral", CheckStatus::Fail, e.to_string());
            for id in dependent {
                report.record(id, CheckStatus::Fail, format!("unavailable: {e}"));
            }
            return Ok(VerifyOutcome { report, summary });
        }
    };
    summary.scale = Some(gram.scale.clone());
    let skel = match reduce(family, gram) {
        Ok(s) => s,
        Err(e) => {
            for id in dependent {
                report.record(id, CheckStatus::Fail, format!("unavailable: {e}"));
            }
            return Ok(VerifyOutcome { report, summary });
        }
    };
    let b = &skel.basis;
    let ok = &(&b.u.transpose() * &skel.gram.matrix) * &b.u == b.standard_form()
        && b.u.determinant().map(|d| d.abs()) == Ok(Rat::one());
    report.check("reduce.symplectic", ok, || "U^t M U is not the standard form".into());
    summary.delta = Some(skel.delta().clone());

    let periods: Vec<Finding> = opts
        .taus
        .par_iter()
        .map(|t| match skel.period_matrices(&t.point()) {
            Ok(_) => pass("period.riemann"),
            Err(e) => fail("period.riemann", format!("tau = {t}: {e}")),
        })
        .collect();
    record_all(&mut report, periods);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut words = if gens == 0 { vec![Word::identity()] } else { Word::all_up_to(gens, 2) };
    if gens > 0 {
        words.extend((0..opts.random_words).map(|_| Word::random(gens, 3, &mut rng)));
    }
    summary.words = words.len();
    record_all(&mut report, sigma_findings(&skel, &words));

    let letters: Vec<Word> = (0..gens).flat_map(|k| [Word::letter(k), Word(vec![(k, true)])]).collect();
    let letters = if letters.is_empty() { vec![Word::identity()] } else { letters };
    let jobs: Vec<(&Word, &Tau)> = letters.iter().flat_map(|w| opts.taus.iter().map(move |t| (w, t))).collect();
    let eq: Vec<Vec<Finding>> = jobs
        .par_iter()
        .map(|(w, t)| {
            equivariance_findings(&skel, w, t).unwrap_or_else(|e| {
                vec![
                    fail("equivariance.period", format!("{w} at tau = {t}: {e}")),
                    fail("equivariance.fiber", format!("{w} at tau = {t}: {e}")),
                ]
            })
        })
        .collect();
    record_all(&mut report, eq.into_iter().flatten());

    if opts.taus.is_empty() {
        for id in ["moduli.equivariance", "automorphy.cocycle"] {
            report.record(id, CheckStatus::Fail, "no tau samples");
        }
    } else {
        let rank = family.rank();
        let samples: Vec<(Sample, Sample)> = (0..opts.samples)
            .map(|_| {
                let a = draw_sample(&mut rng, gens, family.g, rank, &opts.taus);
                let b = draw_sample(&mut rng, gens, family.g, rank, &opts.taus);
                (a, b)
            })
            .collect();
        let found: Vec<Vec<Finding>> =
            samples.par_iter().enumerate().map(|(i, (a, b))| moduli_findings(&skel, i, a, b)).collect();
        record_all(&mut report, found.into_iter().flatten());
    }
    report.mark_advisory("automorphy.cocycle");
    Ok(VerifyOutcome { report, summary })
}

fn reduce(family: &FamilyData, gram: GramForm) -> Result<Skeleton> {
    let basis = super::symplectic::frobenius_reduce(&gram.matrix)?;
    Skeleton::with_basis(family, gram, basis)
}

fn sigma_findings(skel: &Skeleton, words: &[Word]) -> Vec<Finding> {
    let gens = skel.family.gamma_gens.len();
    let letters: Vec<Word> = (0..gens).flat_map(|k| [Word::letter(k), Word(vec![(k, true)])]).collect();
    let letter_sigma: Vec<Result<Mat<Rat>>> = letters
        .par_iter()
        .map(|w| {
            let (gm, r) = w.evaluate(&skel.family)?;
            sigma_of(skel, &gm, &r)
        })
        .collect();
    let per_word: Vec<Vec<Finding>> = words
        .par_iter()
        .map(|w| {
            let mut out = Vec::new();
            let direct = match w.evaluate(&skel.family).and_then(|(gm, r)| sigma_of(skel, &gm, &r)) {
                Ok(s) => s,
                Err(e) => {
                    for id in ["sigma.symplectic", "sigma.lattice", "sigma.homomorphism"] {
                        out.push(fail(id, format!("{w}: {e}")));
                    }
                    return out;
                }
            };
            out.push(verdict("sigma.symplectic", is_symplectic(&direct), || format!("{w}")));
            out.push(verdict("sigma.lattice", preserves_lattice(skel, &direct), || format!("{w}")));
            let mut product: Mat<Rat> = Mat::identity(2 * skel.g());
            for &(k, inv) in w.letters() {
                match &letter_sigma[2 * k + usize::from(inv)] {
                    Ok(s) => product = &product * s,
                    Err(e) => {
                        out.push(fail("sigma.homomorphism", format!("{w}: {e}")));
                        return out;
                    }
                }
            }
            out.push(verdict("sigma.homomorphism", product == direct, || format!("{w}")));
            out
        })
        .collect();
    per_word.into_iter().flatten().collect()
}

fn moduli_findings(skel: &Skeleton, i: usize, a: &Sample, b: &Sample) -> Vec<Finding> {
    let mut out = Vec::new();
    let run = |s: &Sample| -> Result<(AffineSp, bool)> {
        let (gamma, rho) = s.word.evaluate(&skel.family)?;
        let sigma = sigma_of(skel, &gamma, &rho)?;
        let lambda = lattice_vector(skel, &s.coeffs);
        let ok = check_moduli_equivariance(skel, &gamma, &rho, &sigma, &lambda, &s.z, &s.tau.point())?;
        let kl = skel.kappa(&lambda).expect("lattice vector");
        Ok((AffineSp { sigma, lambda: kl }, ok))
    };
    let (ea, eb) = match (run(a), run(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            out.push(fail("moduli.equivariance", format!("sample {i}: {e}")));
            out.push(fail("automorphy.cocycle", format!("sample {i}: {e}")));
            return out;
        }
    };
    out.push(verdict("moduli.equivariance", ea.1, || {
        format!("sample {i}: {} with translation {:?} at tau = {}", a.word, a.coeffs, a.tau)
    }));
    let cocycle = skel
        .moduli_map(&a.z, &a.tau.point())
        .and_then(|(w, pi)| cocycle_defect(&ea.0, &eb.0, &w, &pi));
    out.push(match cocycle {
        Ok(d) if d.to_integer().is_some() => pass("automorphy.cocycle"),
        Ok(d) => fail("automorphy.cocycle", format!("sample {i}: defect {d} is not an integer")),
        Err(e) => fail("automorphy.cocycle", format!("sample {i}: {e}")),
    });
    out
}
