//! JSON function files.
//!
//! ```json
//! {"domain":{"kind":"grid","n":6,"d":2},"repr":{"kind":"table","bits":"<hex>"}}
//! {"domain":{"kind":"cube","d":8},"repr":{"kind":"generator","name":"anti_parity","params":{},"seed":7}}
//! ```
//!
//! Table bits use [`TruthTable::to_hex`] layout. Generators are resolved by the
//! adversaries crate; this module only carries them.

use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{KmtError, Result};
use crate::table::TruthTable;

/// Representation of a function inside a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Repr {
    /// Explicit truth table in little-endian hex.
    Table { bits: String },
    /// A named generator with parameters and seed.
    Generator {
        name: String,
        #[serde(default)]
        params: serde_json::Value,
        #[serde(default)]
        seed: u64,
    },
}

/// A Boolean function file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub domain: DomainSpec,
    pub repr: Repr,
}

impl FunctionFile {
    /// File holding an explicit table.
    pub fn from_table(t: &TruthTable) -> Self {
        FunctionFile { domain: t.domain().spec(), repr: Repr::Table { bits: t.to_hex() } }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| KmtError::Parse(format!("function file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function files always serialize")
    }

    /// The explicit table, if this file holds one.
    pub fn table(&self) -> Result<TruthTable> {
        let domain = self.domain.to_domain()?;
        match &self.repr {
            Repr::Table { bits } => TruthTable::from_hex(domain, bits),
            Repr::Generator { name, .. } => Err(KmtError::Parse(format!(
                "file holds generator `{name}`; resolve it through the generator registry"
            ))),
        }
    }
}

/// A real-valued function file: values are `"p/q"` strings in point-index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealFunctionFile {
    pub domain: DomainSpec,
    pub values: Vec<String>,
}
