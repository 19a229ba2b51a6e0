//! The versioned JSON report written by `classify`.

use serde::{Deserialize, Serialize};

use crate::cli::config::NormConfig;
use crate::degeneracy::{ClassificationReport, SearchBudget};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "circumnorm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub norm: NormConfig,
    pub seed: u64,
    pub budget: SearchBudget,
    pub margin: f64,
    pub report: ClassificationReport,
}

impl ReportDocument {
    pub fn new(
        norm: NormConfig,
        budget: SearchBudget,
        margin: f64,
        report: ClassificationReport,
    ) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            norm,
            seed: budget.seed,
            budget,
            margin,
            report,
        }
    }

    /// Pretty-printed JSON with a trailing newline. Field order is the
    /// declaration order, so parse followed by `to_json` reproduces the
    /// input byte for byte.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
