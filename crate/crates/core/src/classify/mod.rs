//! Equivalence of rank-metric codes, isotopy and isomorphism of quasifields,
//! canonical forms, and exhaustive classification of small cases.
//!
//! Every search runs over the compact kernel in [`crate::small`], so codes are
//! limited to at most 16 matrix entries over fields of order at most 256.

mod engine;
mod enumerate;
mod equivalence;
mod isotopy;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::matgf::MatGF;

pub use enumerate::{enumerate_semifields, enumerate_semifields_with, SemifieldCensus, SemifieldClass};
pub use equivalence::{apply_isometry, are_equivalent, canonical_form};
pub use isotopy::{are_isomorphic, are_isotopic, Isotopism};
pub use search::{classify_codes, classify_codes_with};

/// Which isometries an equivalence may use.
///
/// `Linear` allows `A ↦ X·A·Y` and `A ↦ X·Aᵗ·Y`. `Semilinear` adds a field
/// automorphism `σ` applied entrywise. `Additive` is the full isometry group:
/// it adds a translation `Z`, which is only searched when a code is not
/// closed under addition (for additive codes it coincides with `Semilinear`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceMode {
    Linear,
    Additive,
    Semilinear,
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceMode::Linear => "linear",
            EquivalenceMode::Additive => "additive",
            EquivalenceMode::Semilinear => "semilinear",
        })
    }
}

impl FromStr for EquivalenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(EquivalenceMode::Linear),
            "additive" => Ok(EquivalenceMode::Additive),
            "semilinear" => Ok(EquivalenceMode::Semilinear),
            other => Err(Error::InvalidParameters(format!("unknown equivalence mode {other:?}"))),
        }
    }
}

/// An isometry `A ↦ X·A^σ·Y + Z`, or `A ↦ X·(Aᵗ)^σ·Y + Z` when `transposed`.
///
/// `sigma` is the exponent `s` of the automorphism `x ↦ x^(p^s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub x: MatGF,
    pub y: MatGF,
    pub sigma: u32,
    pub transposed: bool,
    pub z: MatGF,
    /// Set only after the image of the source code was recomputed and compared.
    pub verified: bool,
}

/// Opaque checkpoint of an interrupted classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResumeToken {
    pub stage: String,
    pub params: Vec<u64>,
    pub cursor: Vec<u64>,
    pub data: Vec<Vec<u64>>,
}

/// What was found before a search budget ran out.
///
/// `representatives` holds the classes completed at the deepest finished
/// level (empty while the semifield enumeration itself is unfinished).
#[derive(Clone, Debug)]
pub struct PartialClassification {
    pub representatives: Vec<RankCode>,
    pub token: ResumeToken,
}

/// Budget and checkpoint control for the long searches.
#[derive(Clone, Debug, Default)]
pub struct SearchControl {
    /// Stop with [`Error::BudgetExceeded`] once this many search nodes were expanded.
    pub max_nodes: Option<u64>,
    pub resume: Option<ResumeToken>,
}

impl SearchControl {
    pub fn unlimited() -> SearchControl {
        SearchControl::default()
    }

    pub fn with_budget(max_nodes: u64) -> SearchControl {
        SearchControl { max_nodes: Some(max_nodes), resume: None }
    }

    pub fn resume(token: ResumeToken) -> SearchControl {
        SearchControl { max_nodes: None, resume: Some(token) }
    }
}
