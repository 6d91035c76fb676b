//! Seeded scenarios, their execution, and verification ledgers.
//!
//! A [`Scenario`] is a self-contained JSON document: the generator draws
//! every random object from a ChaCha8 stream seeded with the scenario seed
//! and stores the result, so replaying a file never touches the generator.

mod generate;
mod ledger;
mod run;

pub use generate::{generate, random_unit, random_zero};
pub use ledger::{read_ledger, report, write_ledger, Report, ReportFormat, TheoremSummary};
pub use run::{run, run_suite, Check, LedgerRecord, Outcome};

use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::codec::MatrixRecord;
use crate::error::{LabError, Result};
use crate::hardy::{FrameDescriptor, WoldVector, DEFAULT_TAYLOR_DEGREE};
use crate::linspace::Subspace;
use crate::structure::ACCEPTANCE_TOL;

pub const SCHEMA_VERSION: u32 = 1;

pub const MAX_L: usize = 3;
pub const MAX_LP: usize = 5;
pub const MAX_M: usize = 3;
pub const MAX_BLOCKS: usize = 10;
pub const MAX_ZERO_MODULUS: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    Thm32,
    Thm36,
    Thm37,
    Thm310,
    Lemma39,
    Lemma36,
    Thm313,
    Thm42,
    Thm44,
    Thm45,
    C0decay,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Thm32,
        TheoremId::Thm36,
        TheoremId::Thm37,
        TheoremId::Thm310,
        TheoremId::Lemma39,
        TheoremId::Lemma36,
        TheoremId::Thm313,
        TheoremId::Thm42,
        TheoremId::Thm44,
        TheoremId::Thm45,
        TheoremId::C0decay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm32 => "thm32",
            TheoremId::Thm36 => "thm36",
            TheoremId::Thm37 => "thm37",
            TheoremId::Thm310 => "thm310",
            TheoremId::Lemma39 => "lemma39",
            TheoremId::Lemma36 => "lemma36",
            TheoremId::Thm313 => "thm313",
            TheoremId::Thm42 => "thm42",
            TheoremId::Thm44 => "thm44",
            TheoremId::Thm45 => "thm45",
            TheoremId::C0decay => "c0decay",
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| LabError::Parameter(format!("unknown theorem id `{s}`")))
    }
}

/// Upper limits for the random draws of a scenario. Each drawn value lies
/// between 1 and its limit (`lp` and `k` may also be 0 where meaningful).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges {
    pub l: usize,
    pub lp: usize,
    pub m: usize,
    /// Number of perturbation pairs, or the defect `n`.
    pub k: usize,
    pub blocks: usize,
    pub taylor_degree: usize,
    /// Blocks left free at the top for forward-shift scenarios.
    pub guard: usize,
    pub max_zero_modulus: f64,
    /// Put every zero of `B` at the origin.
    pub exact: bool,
    pub tol: f64,
}

impl Default for ParamRanges {
    fn default() -> Self {
        ParamRanges {
            l: MAX_L,
            lp: 3,
            m: MAX_M,
            k: 3,
            blocks: MAX_BLOCKS,
            taylor_degree: DEFAULT_TAYLOR_DEGREE,
            guard: 2,
            max_zero_modulus: MAX_ZERO_MODULUS,
            exact: false,
            tol: ACCEPTANCE_TOL,
        }
    }
}

impl ParamRanges {
    /// The smallest ranges: `B = z`, scalar fiber, one pair, four blocks.
    pub fn minimal() -> Self {
        ParamRanges {
            l: 1,
            lp: 1,
            m: 1,
            k: 1,
            blocks: 4,
            guard: 1,
            ..ParamRanges::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(LabError::Parameter(what));
        if self.l == 0 || self.l > MAX_L {
            return fail(format!("l = {} outside 1..={MAX_L}", self.l));
        }
        if self.lp > MAX_LP {
            return fail(format!("l' = {} exceeds {MAX_LP}", self.lp));
        }
        if self.m == 0 || self.m > MAX_M {
            return fail(format!("m = {} outside 1..={MAX_M}", self.m));
        }
        if self.blocks < 2 || self.blocks > MAX_BLOCKS {
            return fail(format!("N = {} outside 2..={MAX_BLOCKS}", self.blocks));
        }
        if !(0.0..=MAX_ZERO_MODULUS).contains(&self.max_zero_modulus) {
            return fail(format!("zero modulus {} exceeds {MAX_ZERO_MODULUS}", self.max_zero_modulus));
        }
        if self.guard >= self.blocks {
            return fail(format!("guard {} leaves no room in {} blocks", self.guard, self.blocks));
        }
        if self.taylor_degree < self.l.max(self.lp) || self.taylor_degree > 4000 {
            return fail(format!("Taylor degree {} out of range", self.taylor_degree));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return fail(format!("tolerance {} must be positive", self.tol));
        }
        Ok(())
    }
}

/// The values actually drawn for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub l: usize,
    pub lp: usize,
    pub m: usize,
    pub k: usize,
    pub blocks: usize,
    pub taylor_degree: usize,
    pub guard: usize,
    pub tol: f64,
}

/// Generated objects. Which fields are present depends on the theorem.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Payload {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<BlaschkeProduct>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bp: Option<BlaschkeProduct>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub frame: Option<FrameDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m_space: Option<Subspace>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub us: Vec<WoldVector>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub vs: Vec<WoldVector>,
    /// Wandering vectors `G` as columns.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<MatrixRecord>,
    /// Defect vectors `J` as columns.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub js: Option<MatrixRecord>,
    /// Model subspace `K` (or `N` for the nearly invariant round trip).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_space: Option<Subspace>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub probes: Vec<WoldVector>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<WoldVector>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub schema_version: u32,
    pub id: String,
    pub seed: u64,
    pub theorem: TheoremId,
    pub params: Params,
    pub payload: Payload,
}

impl Scenario {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        match v.get("schema_version").and_then(|x| x.as_u64()) {
            Some(x) if x == SCHEMA_VERSION as u64 => {}
            Some(x) => return Err(LabError::Schema(format!("unsupported schema version {x}"))),
            None => return Err(LabError::Schema("missing schema_version".into())),
        }
        Ok(serde_json::from_value(v)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
