use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::exprlang::ExtReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Refuted,
    Inconclusive,
}

impl Status {
    /// Certified only if all are; refuted if any is.
    pub fn all<I: IntoIterator<Item = Status>>(items: I) -> Status {
        let mut out = Status::Certified;
        for s in items {
            match s {
                Status::Refuted => return Status::Refuted,
                Status::Inconclusive => out = Status::Inconclusive,
                Status::Certified => {}
            }
        }
        out
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// One observation backing a verdict, with named numeric witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub description: String,
    pub values: BTreeMap<String, ExtReal>,
}

impl Evidence {
    pub fn new(description: impl Into<String>) -> Self {
        Evidence {
            description: description.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<ExtReal>) -> Self {
        self.values.insert(name.to_string(), value.into());
        self
    }

    pub fn get(&self, name: &str) -> Option<ExtReal> {
        self.values.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    pub fn certified(evidence: Evidence) -> Self {
        Verdict {
            status: Status::Certified,
            evidence: vec![evidence],
        }
    }

    pub fn refuted(witness: Evidence) -> Self {
        Verdict {
            status: Status::Refuted,
            evidence: vec![witness],
        }
    }

    pub fn inconclusive(evidence: Evidence) -> Self {
        Verdict {
            status: Status::Inconclusive,
            evidence: vec![evidence],
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn witness(&self) -> Option<&Evidence> {
        self.evidence.first()
    }
}
