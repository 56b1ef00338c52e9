//! Run reports, emitted as JSON or as plain text.
//!
//! Every value is stored as a string so reports compare exactly after a
//! JSON round trip. The text form leaves out the timing, which makes it
//! byte-identical across runs on the same inputs and flags.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// The command produced an answer checked in exact arithmetic.
    Definitive,
    /// No answer either way, or one resting on floating point only.
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Definitive => 0,
            Self::Inconclusive => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Self::Definitive => "definitive",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub path: String,
    pub content: String,
}

/// A named block of text, e.g. a graph, a combination or a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub title: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputEcho>,
    /// Effective settings, in a fixed order.
    pub settings: Vec<(String, String)>,
    pub outcome: Outcome,
    pub summary: String,
    pub facts: Vec<(String, String)>,
    pub witnesses: Vec<Witness>,
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, outcome: Outcome, summary: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: Vec::new(),
            settings: Vec::new(),
            outcome,
            summary: summary.into(),
            facts: Vec::new(),
            witnesses: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.facts.push((key.into(), value.to_string()));
        self
    }

    pub fn witness(&mut self, title: impl Into<String>, body: impl Into<String>) -> &mut Self {
        self.witnesses.push(Witness { title: title.into(), body: body.into() });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "input: {}", input.path);
            push_indented(&mut out, &input.content);
        }
        for (k, v) in &self.settings {
            let _ = writeln!(out, "setting {k}: {v}");
        }
        let _ = writeln!(out, "outcome: {}", self.outcome.as_str());
        let _ = writeln!(out, "summary: {}", self.summary);
        for (k, v) in &self.facts {
            let _ = writeln!(out, "{k}: {v}");
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness: {}", w.title);
            push_indented(&mut out, &w.body);
        }
        out
    }
}

fn push_indented(out: &mut String, body: &str) {
    for line in body.lines() {
        let _ = writeln!(out, "    {line}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_omits_timing() {
        let mut r = RunReport::new("glue", Outcome::Definitive, "done");
        r.fact("terms", 2).witness("product", "1 * g1\n");
        let mut timed = r.clone();
        timed.timing_ms = Some(12);
        assert_eq!(r.to_text(), timed.to_text());
        assert_eq!(RunReport::from_json(&timed.to_json()).unwrap(), timed);
        assert!(r.to_text().contains("witness: product\n    1 * g1\n"));
    }
}
