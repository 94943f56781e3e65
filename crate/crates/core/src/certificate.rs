//! Depth-stamped verdicts.
//!
//! Every claim about an infinite pro-object is checked on a finite window.
//! A verdict therefore always carries the depth at which its finitely many
//! constituent equalities were examined.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Undetermined,
    Exhausted,
}

impl Verdict {
    /// Combines verdicts of independent sub-checks; the worst one wins.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Exhausted, _) | (_, Exhausted) => Exhausted,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Certified,
        }
    }

    pub fn is_certified(self) -> bool {
        self == Verdict::Certified
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Undetermined => "undetermined",
            Verdict::Exhausted => "exhausted",
        };
        f.write_str(s)
    }
}

/// One named check with its verdict, depth and the witnesses that justify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub depth: usize,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, depth: usize) -> Self {
        Check {
            name: name.into(),
            verdict,
            depth,
            witnesses: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn certified(name: impl Into<String>, depth: usize) -> Self {
        Check::new(name, Verdict::Certified, depth)
    }
}

/// An ordered collection of checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Certificate) {
        self.checks.extend(other.checks);
    }

    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .fold(Verdict::Certified, |acc, c| acc.and(c.verdict))
    }

    pub fn all_certified(&self) -> bool {
        self.verdict().is_certified()
    }
}
