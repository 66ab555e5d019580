//! Numeric identities satisfied by manifolds with a holomorphic normal
//! projective connection, checked on model data.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::kuga::{CheckStatus, VerificationReport};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Checks `c_r = C(m+1, r) / (m+1)^r * c_1^r` on `P_m`, where `c_r = C(m+1, r) h^r`
/// and `c_1 = (m+1) h`, as an identity of coefficients of `h^r`.
///
/// For `r = 2` also checks the equivalent form `2 (m+1) c_2 = m c_1^2`.
pub fn chern_identity(m: u64, r: u64) -> Result<bool> {
    if r > m {
        return Err(Error::InvalidInput(format!("need 0 <= r <= m, got r = {r}, m = {m}")));
    }
    let c_r = Rat::from_bigint(binomial(m + 1, r));
    let c1 = Rat::from_bigint(BigInt::from(m + 1));
    let coeff = &c_r / &c1.pow(r as u32);
    let rhs = &coeff * &c1.pow(r as u32);
    let mut ok = c_r == rhs;
    if r == 2 {
        let lhs = &(&Rat::integer(2) * &c1) * &c_r;
        let rhs = &Rat::from_bigint(BigInt::from(m)) * &c1.pow(2);
        ok &= lhs == rhs;
    }
    Ok(ok)
}

/// Data of a fibration `f: M_m -> N_n` with Hodge bundle `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationMeta {
    pub m: u64,
    pub n: u64,
    /// Genus of the base curve when `n = 1`.
    #[serde(default)]
    pub genus: Option<u64>,
    #[serde(rename = "deg_E")]
    pub deg_e: Rat,
    #[serde(rename = "rank_E", default, skip_serializing_if = "Option::is_none")]
    pub rank_e: Option<u64>,
}

impl FibrationMeta {
    pub fn validate(&self) -> Result<()> {
        if !(0 < self.n && self.n < self.m) {
            return Err(Error::InvalidInput(format!("need 0 < n < m, got n = {}, m = {}", self.n, self.m)));
        }
        if let Some(r) = self.rank_e {
            if r != self.m - self.n {
                return Err(Error::InvalidInput(format!("rank_E = {r} differs from m - n")));
            }
        }
        if self.n == 1 {
            match self.genus {
                Some(g) if g >= 2 => {}
                _ => return Err(Error::InvalidInput("a curve base needs genus >= 2".into())),
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> u64 {
        self.m - self.n
    }
}

/// Proportionality and Arakelov-equality checks, each as an exact rational identity.
pub fn fibration_identities(meta: &FibrationMeta) -> Result<VerificationReport> {
    meta.validate()?;
    let mut report = VerificationReport::default();
    let (m, n) = (Rat::from_bigint(meta.m.into()), Rat::from_bigint(meta.n.into()));
    let one = Rat::integer(1);
    let lhs = &(&(&m - &n) / &(&n + &one)) + &one;
    let rhs = &(&m + &one) / &(&n + &one);
    report.record(
        "checks.proportionality",
        CheckStatus::from_bool(lhs == rhs),
        format!("(m-n)/(n+1) + 1 = {lhs}, (m+1)/(n+1) = {rhs}"),
    );
    if meta.n == 1 {
        let g = Rat::from_bigint(meta.genus.expect("validated").into());
        let rank = Rat::from_bigint(meta.rank().into());
        let arakelov_l = &Rat::integer(2) * &meta.deg_e;
        let arakelov_r = &(&m - &one) * &(&(&Rat::integer(2) * &g) - &Rat::integer(2));
        let arakelov = arakelov_l == arakelov_r;
        report.record(
            "checks.arakelov",
            CheckStatus::from_bool(arakelov),
            format!("2 deg E = {arakelov_l}, (m-1)(2g-2) = {arakelov_r}"),
        );
        let hodge_r = &rank * &(&g - &one);
        let hodge = meta.deg_e == hodge_r;
        report.record(
            "checks.hodge_degree",
            CheckStatus::from_bool(hodge),
            format!("deg E = {}, rank E (g-1) = {hodge_r}", meta.deg_e),
        );
        report.record(
            "checks.arakelov_hodge_equivalence",
            CheckStatus::from_bool(arakelov == hodge),
            "Arakelov equality holds iff deg E = rank E (g - 1)".to_string(),
        );
    } else {
        for id in ["checks.arakelov", "checks.hodge_degree", "checks.arakelov_hodge_equivalence"] {
            report.record(id, CheckStatus::Skipped, "base is not a curve".to_string());
        }
    }
    Ok(report)
}
