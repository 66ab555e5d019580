use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    #[serde(rename = "skipped-by-construction")]
    Skipped,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> CheckStatus {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

/// One named check, possibly evaluated on many samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub status: CheckStatus,
    /// Number of samples evaluated.
    pub samples: u64,
    /// First failing sample, or the reason for a skip.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Advisory checks are reported but never decide the verdict.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
}

/// Pass/fail record keyed by stable check identifiers, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, CheckEntry>,
}

impl VerificationReport {
    /// Adds one sample to `id`. A failure sticks and keeps the first witness.
    pub fn record(&mut self, id: &str, status: CheckStatus, detail: impl Into<String>) {
        let entry = self.checks.entry(id.to_string()).or_insert(CheckEntry {
            status,
            samples: 0,
            witness: None,
            advisory: false,
        });
        if status != CheckStatus::Skipped {
            entry.samples += 1;
        }
        match status {
            CheckStatus::Fail if entry.status != CheckStatus::Fail || entry.witness.is_none() => {
                entry.status = CheckStatus::Fail;
                entry.witness = Some(detail.into());
            }
            CheckStatus::Skipped if entry.witness.is_none() => entry.witness = Some(detail.into()),
            CheckStatus::Pass if entry.status == CheckStatus::Skipped => entry.status = CheckStatus::Pass,
            _ => {}
        }
    }

    pub fn pass(&mut self, id: &str) {
        self.record(id, CheckStatus::Pass, "");
    }

    pub fn check(&mut self, id: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(id);
        } else {
            self.record(id, CheckStatus::Fail, witness());
        }
    }

    pub fn mark_advisory(&mut self, id: &str) {
        if let Some(e) = self.checks.get_mut(id) {
            e.advisory = true;
        }
    }

    pub fn status(&self, id: &str) -> Option<CheckStatus> {
        self.checks.get(id).map(|e| e.status)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for (id, e) in other.checks {
            match self.checks.get_mut(&id) {
                None => {
                    self.checks.insert(id, e);
                }
                Some(mine) => {
                    mine.samples += e.samples;
                    mine.advisory |= e.advisory;
                    if e.status == CheckStatus::Fail && mine.status != CheckStatus::Fail {
                        mine.status = CheckStatus::Fail;
                        mine.witness = e.witness;
                    } else if mine.status == CheckStatus::Skipped && e.status == CheckStatus::Pass {
                        mine.status = CheckStatus::Pass;
                    }
                }
            }
        }
    }

    /// True when no non-advisory check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|e| e.advisory || e.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, e)| !e.advisory && e.status == CheckStatus::Fail)
            .map(|(id, _)| id.as_str())
            .collect()
    }
}
