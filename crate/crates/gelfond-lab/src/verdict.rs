//! Three-valued rigorous verdicts and machine-checkable certificates.
//!
//! A claim of the form `lhs <= rhs` is checked with interval enclosures of
//! both sides. `Holds` requires `sup(lhs) <= inf(rhs)`, `Fails` requires
//! `inf(lhs) > sup(rhs)`; everything else triggers precision escalation,
//! and `Undecided` is reported only once the precision cap is reached.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::interval::{rational_to_decimal, RealInterval, DEFAULT_BITS_CAP, DEFAULT_START_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "HOLDS")]
    Holds,
    #[serde(rename = "FAILS")]
    Fails,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Outcome::Holds => "HOLDS",
            Outcome::Fails => "FAILS",
            Outcome::Undecided => "UNDECIDED",
        };
        write!(f, "{s}")
    }
}

/// Outcome of a single inequality check, with the enclosures that decided it.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub claim: String,
    pub outcome: Outcome,
    pub lhs: RealInterval,
    pub rhs: RealInterval,
    pub precision_bits: u32,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    /// Decide `lhs <= rhs` from enclosures computed at escalating
    /// precision. `eval` receives the working precision in bits and returns
    /// the pair of enclosures.
    pub fn decide<F>(claim: impl Into<String>, start_bits: u32, bits_cap: u32, mut eval: F) -> Verdict
    where
        F: FnMut(u32) -> (RealInterval, RealInterval),
    {
        let claim = claim.into();
        let mut bits = start_bits.max(2);
        loop {
            let (lhs, rhs) = eval(bits);
            if lhs.certainly_le(&rhs) {
                return Verdict { claim, outcome: Outcome::Holds, lhs, rhs, precision_bits: bits };
            }
            if lhs.certainly_gt(&rhs) {
                return Verdict { claim, outcome: Outcome::Fails, lhs, rhs, precision_bits: bits };
            }
            if bits >= bits_cap {
                return Verdict { claim, outcome: Outcome::Undecided, lhs, rhs, precision_bits: bits };
            }
            bits = (bits * 2).min(bits_cap);
        }
    }

    /// Same with the default precision policy.
    pub fn decide_default<F>(claim: impl Into<String>, eval: F) -> Verdict
    where
        F: FnMut(u32) -> (RealInterval, RealInterval),
    {
        Self::decide(claim, DEFAULT_START_BITS, DEFAULT_BITS_CAP, eval)
    }

    /// A verdict for an exact rational comparison; never undecided.
    pub fn exact(claim: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Verdict {
        let outcome = if lhs <= rhs { Outcome::Holds } else { Outcome::Fails };
        Verdict {
            claim: claim.into(),
            outcome,
            lhs: RealInterval::point(lhs),
            rhs: RealInterval::point(rhs),
            precision_bits: 0,
        }
    }

    /// Conjunction: HOLDS only if all hold, FAILS if any fails.
    pub fn all(claim: impl Into<String>, parts: &[Verdict]) -> Verdict {
        let mut outcome = Outcome::Holds;
        for p in parts {
            match p.outcome {
                Outcome::Fails => {
                    outcome = Outcome::Fails;
                    break;
                }
                Outcome::Undecided => outcome = Outcome::Undecided,
                Outcome::Holds => {}
            }
        }
        let bits = parts.iter().map(|p| p.precision_bits).max().unwrap_or(0);
        Verdict {
            claim: claim.into(),
            outcome,
            lhs: RealInterval::zero(),
            rhs: RealInterval::zero(),
            precision_bits: bits,
        }
    }

    pub fn certificate(&self, inputs_digest: &str, params: serde_json::Value) -> Certificate {
        Certificate {
            claim: self.claim.clone(),
            inputs_digest: inputs_digest.to_string(),
            params,
            lhs: IntervalRecord::from(&self.lhs),
            rhs: IntervalRecord::from(&self.rhs),
            verdict: self.outcome,
            precision_bits: self.precision_bits,
        }
    }
}

/// Serialized interval endpoints: decimal strings plus exact rationals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
    pub lo_exact: String,
    pub hi_exact: String,
}

impl From<&RealInterval> for IntervalRecord {
    fn from(iv: &RealInterval) -> Self {
        IntervalRecord {
            lo: rational_to_decimal(&iv.lo, 30),
            hi: rational_to_decimal(&iv.hi, 30),
            lo_exact: iv.lo.to_string(),
            hi_exact: iv.hi.to_string(),
        }
    }
}

/// The common certificate schema emitted by every verifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub inputs_digest: String,
    pub params: serde_json::Value,
    pub lhs: IntervalRecord,
    pub rhs: IntervalRecord,
    pub verdict: Outcome,
    pub precision_bits: u32,
}

/// SHA-256 digest of a canonical input rendering, hex-encoded.
pub fn digest_inputs(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
