//! JSON certificate transcripts and their replay.
//!
//! A transcript records the library version, checksums of every input, the
//! parameters, the verdict and the certificate body. Nothing time- or
//! machine-dependent goes in, so re-running a pipeline reproduces the file
//! byte for byte; [`replay`] does exactly that and compares.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::constructions::appendix::{verify_appendix, Appendix, APPENDIX_MATRICES};
use crate::constructions::data;
use crate::constructions::layered::{layered_pipeline, DEFAULT_K_BOUND};
use crate::constructions::prop_usc::{verify_log_hadamard, verify_prop_usc, LogHadamardMatrix, PropUsc, PROP_USC_MATRICES};
use crate::error::{Error, Result};
use crate::group::{Group, PointSet};
use crate::tiling::enumerate_complements;

pub const SCHEMA_VERSION: u32 = 1;

pub fn library_version() -> String {
    format!("fuglede-core {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accepted,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Accepted => 0,
            Verdict::Refuted => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema_version: u32,
    pub library: String,
    pub kind: String,
    /// Input name to SHA-256.
    pub inputs: BTreeMap<String, String>,
    pub parameters: Value,
    pub verdict: Verdict,
    pub certificate: Value,
}

impl Transcript {
    fn new(kind: &str, inputs: BTreeMap<String, String>, parameters: Value) -> Self {
        Transcript {
            schema_version: SCHEMA_VERSION,
            library: library_version(),
            kind: kind.into(),
            inputs,
            parameters,
            verdict: Verdict::Inconclusive,
            certificate: Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// A refutation becomes a `refuted` transcript; other errors pass through.
    fn settle<T: Serialize>(mut self, outcome: Result<T>) -> Result<Self> {
        match outcome {
            Ok(c) => {
                self.verdict = Verdict::Accepted;
                self.certificate = to_value(&c);
            }
            Err(Error::Verification(reason)) => {
                self.verdict = Verdict::Refuted;
                self.certificate = json!({ "reason": reason });
            }
            Err(e) => return Err(e),
        }
        Ok(self)
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn builtin_checksums(names: &[&str]) -> Result<BTreeMap<String, String>> {
    data::builtin()?.checksums(names)
}

fn set_checksum(s: &PointSet) -> String {
    let mut h = Sha256::new();
    h.update(crate::io::set_to_json(s).as_bytes());
    hex::encode(h.finalize())
}

pub fn hadamard() -> Result<Transcript> {
    let t = Transcript::new("hadamard", builtin_checksums(&["K"])?, json!({}));
    let k = LogHadamardMatrix::builtin()?;
    let v = verify_log_hadamard(&k);
    let outcome = if v.accepted() {
        Ok(v)
    } else {
        Err(Error::Verification(format!("{} of {} row pairs fail", v.failures.len(), v.pairs_checked)))
    };
    t.settle(outcome)
}

pub fn prop_usc() -> Result<(Transcript, Option<PropUsc>)> {
    let t = Transcript::new("prop-usc", builtin_checksums(&PROP_USC_MATRICES)?, json!({}));
    match verify_prop_usc() {
        Ok(p) => Ok((t.settle(Ok(&p.certificate))?, Some(p))),
        Err(e) => Ok((t.settle::<()>(Err(e))?, None)),
    }
}

pub fn appendix() -> Result<(Transcript, Option<Appendix>)> {
    let t = Transcript::new("appendix", builtin_checksums(&APPENDIX_MATRICES)?, json!({}));
    match verify_appendix() {
        Ok(a) => Ok((t.settle(Ok(&a.certificate))?, Some(a))),
        Err(e) => Ok((t.settle::<()>(Err(e))?, None)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredParams {
    pub moduli: Vec<u32>,
    pub tile: Vec<Vec<i64>>,
    /// Use only the first `n` complements found; all of them when absent.
    pub complements: Option<usize>,
    pub limit: usize,
    pub budget: u64,
    pub k_bound: u64,
}

impl LayeredParams {
    pub fn new(tile: &PointSet) -> Self {
        LayeredParams {
            moduli: tile.group().moduli().to_vec(),
            tile: tile.coords_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
            complements: None,
            limit: 10_000,
            budget: crate::spectral::DEFAULT_BUDGET,
            k_bound: DEFAULT_K_BOUND,
        }
    }

    pub fn tile(&self) -> Result<PointSet> {
        PointSet::from_coords(&Group::new(&self.moduli)?, &self.tile)
    }
}

pub fn layered(params: &LayeredParams) -> Result<Transcript> {
    let tile = params.tile()?;
    let inputs = BTreeMap::from([("tile".to_string(), set_checksum(&tile))]);
    let mut t = Transcript::new("layered", inputs, to_value(params));
    let found = enumerate_complements(&tile, params.limit)?;
    let mut complements = found.complements;
    if let Some(n) = params.complements {
        complements.truncate(n);
    } else if !found.exhausted {
        t.verdict = Verdict::Inconclusive;
        t.certificate = json!({ "reason": format!("complement limit {} reached", params.limit) });
        return Ok(t);
    }
    if complements.is_empty() {
        return t.settle::<()>(Err(Error::Verification("the tile has no complement".into())));
    }
    let report = layered_pipeline(&tile, &complements, None, params.budget, params.k_bound);
    t.settle(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub kind: String,
    pub verdict: Verdict,
    pub regenerated: Verdict,
    pub identical: bool,
}

/// Re-runs the pipeline named by the transcript and compares the regenerated
/// file with `text` byte for byte.
pub fn replay(text: &str) -> Result<ReplayReport> {
    let original: Transcript = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if original.schema_version != SCHEMA_VERSION {
        return Err(Error::Precondition(format!("schema version {} is not supported", original.schema_version)));
    }
    let fresh = match original.kind.as_str() {
        "hadamard" => hadamard()?,
        "prop-usc" => prop_usc()?.0,
        "appendix" => appendix()?.0,
        "layered" => {
            let params: LayeredParams = serde_json::from_value(original.parameters.clone())
                .map_err(|e| Error::Parse { line: 0, column: 0, message: format!("layered parameters: {e}") })?;
            layered(&params)?
        }
        other => return Err(Error::Precondition(format!("unknown transcript kind {other:?}"))),
    };
    Ok(ReplayReport {
        kind: original.kind.clone(),
        verdict: original.verdict,
        regenerated: fresh.verdict,
        identical: fresh.to_json() == text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_round_trip() {
        let t = hadamard().unwrap();
        assert_eq!(t.verdict, Verdict::Accepted);
        let text = t.to_json();
        let r = replay(&text).unwrap();
        assert!(r.identical);
        let tampered = text.replacen("\"pairs_checked\": 15", "\"pairs_checked\": 14", 1);
        assert_ne!(tampered, text);
        assert!(!replay(&tampered).unwrap().identical);
    }

    #[test]
    fn layered_toy_round_trip() {
        let g = Group::cyclic(6).unwrap();
        let mut p = LayeredParams::new(&PointSet::new(&g, [0, 3]));
        p.complements = Some(2);
        let t = layered(&p).unwrap();
        assert_eq!(t.verdict, Verdict::Accepted);
        assert!(replay(&t.to_json()).unwrap().identical);
    }

    #[test]
    fn replay_rejects_garbage() {
        assert!(matches!(replay("{"), Err(Error::Parse { .. })));
        let mut t = hadamard().unwrap();
        t.kind = "nope".into();
        assert!(replay(&t.to_json()).is_err());
    }
}
