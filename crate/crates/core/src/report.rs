//! Run configuration and the JSON envelope shared by every CLI report.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::covers::DEFAULT_COSET_CAP;
use crate::error::{Error, Result};
use crate::projspace::DEFAULT_ENUMERATION_BUDGET;

/// Bumped whenever report layouts change, so input hashes change with them.
pub const REPORT_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub variant: Option<u8>,
    pub q: u32,
    pub coset_cap: usize,
    pub enumeration_budget: u64,
    /// Not part of the input hash.
    pub output: Option<String>,
}

impl RunConfig {
    pub fn new(command: &str, variant: Option<u8>, q: u32) -> Self {
        RunConfig {
            command: command.to_string(),
            variant,
            q,
            coset_cap: DEFAULT_COSET_CAP,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || !self.q.is_power_of_two() {
            return Err(Error::Config(format!(
                "q = {} is not a power of 2 (only characteristic 2 is supported)",
                self.q
            )));
        }
        if let Some(v) = self.variant {
            if v > 3 {
                return Err(Error::Config(format!("unknown geometry variant {v}")));
            }
        }
        if self.coset_cap == 0 {
            return Err(Error::Config("coset cap must be positive".into()));
        }
        if self.enumeration_budget == 0 {
            return Err(Error::Config("enumeration budget must be positive".into()));
        }
        Ok(())
    }

    /// SHA-256 over the report format, the configuration without the output
    /// path, and any extra input bytes (such as an input file).
    pub fn input_hash(&self, extra: &[u8]) -> String {
        let mut h = Sha256::new();
        let key = serde_json::json!({
            "format": REPORT_FORMAT,
            "command": self.command,
            "variant": self.variant,
            "q": self.q,
            "coset_cap": self.coset_cap,
            "enumeration_budget": self.enumeration_budget,
        });
        h.update(key.to_string().as_bytes());
        h.update(extra);
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A report body together with its configuration, input hash and the claim
/// it checks. Body fields are flattened into the top level.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub claim: String,
    #[serde(flatten)]
    pub body: T,
    pub config: RunConfig,
    pub input_hash: String,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: &RunConfig, claim: &str, body: T, extra: &[u8]) -> Self {
        Report { claim: claim.to_string(), body, input_hash: config.input_hash(extra), config: config.clone() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RunConfig::new("build", Some(2), 2).validate().is_ok());
        assert!(matches!(RunConfig::new("build", Some(1), 3).validate(), Err(Error::Config(_))));
        assert!(matches!(RunConfig::new("build", Some(4), 2).validate(), Err(Error::Config(_))));
        let mut c = RunConfig::new("pi1", Some(1), 2);
        c.coset_cap = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn hash_ignores_output_but_not_inputs() {
        let a = RunConfig::new("pi1", Some(1), 2);
        let mut b = a.clone();
        b.output = Some("x.json".into());
        assert_eq!(a.input_hash(b""), b.input_hash(b""));
        b.coset_cap = 10;
        assert_ne!(a.input_hash(b""), b.input_hash(b""));
        assert_ne!(a.input_hash(b""), a.input_hash(b"file"));
        assert_eq!(a.input_hash(b"").len(), 64);
    }

    #[test]
    fn body_is_flattened() {
        #[derive(Serialize)]
        struct B {
            pi1_order: Option<u64>,
        }
        let r = Report::new(&RunConfig::new("pi1", Some(1), 2), "c", B { pi1_order: Some(3) }, b"");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["pi1_order"], 3);
        assert_eq!(v["config"]["q"], 2);
    }
}
