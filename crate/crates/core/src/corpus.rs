//! JSON-lines corpus of parametrised curves.
//!
//! One object per line:
//! `{"name": "...", "P": "x - y^3", "k": "0", "param_p": "t^3", "param_q": "t", "tags": [...]}`.
//! Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::poly::{BiPoly, Rat, UniPoly};
use crate::reduce::{implicitize_check, PolyParam};

const BUILTIN: &str = include_str!("../data/curves.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(rename = "P")]
    pub p: BiPoly,
    pub k: Rat,
    pub param_p: UniPoly,
    pub param_q: UniPoly,
    #[serde(default)]
    pub tags: Vec<String>,
}

impl CorpusEntry {
    pub fn spec(&self) -> CurveSpec {
        CurveSpec {
            p: self.p.clone(),
            k: self.k.clone(),
        }
    }

    pub fn param(&self) -> PolyParam {
        PolyParam::new(self.param_p.clone(), self.param_q.clone())
    }
}

/// Parses corpus text and checks that every parametrisation lies on its
/// curve.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry: CorpusEntry = serde_json::from_str(line)
            .map_err(|e| Error::InvalidInput(format!("corpus line {}: {e}", i + 1)))?;
        if entry.p.is_constant() {
            return Err(Error::InvalidInput(format!("corpus line {}: constant curve", i + 1)));
        }
        if !implicitize_check(&entry.p, &entry.k, &entry.param()) {
            return Err(Error::InvalidInput(format!(
                "corpus line {}: parametrisation of {:?} does not lie on the curve",
                i + 1,
                entry.name
            )));
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_corpus(&text)
}

/// The curve corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN).expect("bundled corpus is valid")
}
