//! Kuga fiber spaces over arithmetic quotients of the upper half plane.

mod family;
mod moduli;
mod replicate;
mod report;
mod sigma;
mod skeleton;
mod symplectic;
mod tau;
mod verify;

pub use family::{
    form_e, principal_congruence_generators, quad_mat_from_json, quad_mat_json, rat_mat_json, sl2_inverse, FamilyData,
    FamilyJson, LatticeCoords,
};
pub use moduli::{
    automorphy_exponent, check_moduli_equivariance, cocycle_defect, gamma_lambda_action, grassmann_action, AffineSp,
};
pub use replicate::replicate_family;
pub use report::{CheckEntry, CheckStatus, VerificationReport};
pub use sigma::{is_symplectic, preserves_lattice, sigma_of, sigma_of_gamma, Word};
pub use skeleton::{check_siegel, cx_mat_json, PeriodData, PeriodJson, Skeleton};
pub use symplectic::{frobenius_reduce, gram_of_e, j_std, standard_form, GramForm, PolarizationType, SymplecticBasis};
pub use tau::{alpha_tau, j_tau, j_tau_at, mobius, Tau};
pub use verify::{verify_equivariance, verify_family, verify_riemann, verify_stability, VerifyOptions, VerifyOutcome, VerifySummary};
