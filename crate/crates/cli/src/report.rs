use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Result of a cross-run against the naive oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRun {
    /// `None` when the oracle is out of its cap or has nothing to compare.
    pub agrees: Option<bool>,
    pub note: String,
}

/// One command's outcome. Field order is fixed so identical runs print
/// identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub inputs: Vec<String>,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRun>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(check: &str, inputs: &[String]) -> Self {
        Report {
            check: check.to_string(),
            inputs: inputs.to_vec(),
            status: Status::Pass,
            summary: String::new(),
            witness: None,
            counts: BTreeMap::new(),
            details: Value::Null,
            oracle: None,
            timing_ms: None,
        }
    }

    pub fn count(&mut self, key: &str, v: usize) -> &mut Self {
        self.counts.insert(key.to_string(), v);
        self
    }

    pub fn fail(&mut self, witness: impl Serialize) -> &mut Self {
        self.status = Status::Fail;
        self.witness = Some(to_value(witness));
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        writeln!(out, "{text}")
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "error",
        };
        writeln!(out, "{} [{}]: {status}", self.check, self.inputs.join(", "))?;
        if !self.summary.is_empty() {
            writeln!(out, "  {}", self.summary)?;
        }
        if let Some(w) = &self.witness {
            writeln!(out, "  witness: {w}")?;
        }
        if let Some(o) = &self.oracle {
            let verdict = match o.agrees {
                Some(true) => "agrees",
                Some(false) => "DISAGREES",
                None => "skipped",
            };
            writeln!(out, "  oracle: {verdict} ({})", o.note)?;
        }
        if let Some(ms) = self.timing_ms {
            writeln!(out, "  time: {ms:.3} ms")?;
        }
        Ok(())
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}
