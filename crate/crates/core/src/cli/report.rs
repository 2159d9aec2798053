use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::perfect::ClassifyReport;

pub const SCHEMA: &str = "subcodes.report/v1";

/// Certificate elements printed in text mode.
const SHOWN: usize = 12;

/// A classification report as written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: String,
    pub command: String,
    #[serde(flatten)]
    pub report: ClassifyReport,
    pub caps: Caps,
    #[serde(default)]
    pub cached: bool,
}

impl ReportEnvelope {
    pub fn new(command: &str, report: ClassifyReport, caps: Caps) -> Self {
        ReportEnvelope {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            report,
            caps,
            cached: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn human(&self) -> String {
        let r = &self.report;
        let mut out = String::new();
        let gens = if r.generators.is_empty() {
            "e".to_string()
        } else {
            r.generators.join("; ")
        };
        out.push_str(&format!("H = <{gens}> in S_{}, order {}\n", r.n, r.order));
        out.push_str(&format!("verdict: {}\n", r.verdict));
        out.push_str(&format!(
            "provenance: {}\n",
            serde_json::to_string(&r.provenance).expect("serialises")
        ));
        out.push_str("rule trace:\n");
        for (i, s) in r.rule_trace.iter().enumerate() {
            out.push_str(&format!("  {}. {:?}: {} -> {}\n", i + 1, s.rule, s.inputs, s.outcome));
        }
        match &r.certificate {
            Some(c) if c.data.len() > SHOWN => out.push_str(&format!(
                "certificate: {} of {} elements [{}, ...] (--json for all)\n",
                c.kind,
                c.data.len(),
                c.data[..SHOWN].join(", ")
            )),
            Some(c) => out.push_str(&format!("certificate: {} [{}]\n", c.kind, c.data.join(", "))),
            None => out.push_str("certificate: none\n"),
        }
        if r.discrepancies.is_empty() {
            out.push_str("discrepancies: none\n");
        } else {
            for d in &r.discrepancies {
                out.push_str(&format!(
                    "discrepancy: {:?} predicted {}, oracle {}\n",
                    d.rule, d.predicted, d.oracle
                ));
            }
        }
        if self.cached {
            out.push_str("(served from cache)\n");
        }
        out.push_str(&format!("time: {} ms\n", r.timing_ms));
        out
    }
}

/// Output of the `transversal` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalReport {
    pub schema: String,
    pub n: usize,
    pub generators: Vec<String>,
    pub order: u64,
    pub transversal: Option<Vec<String>>,
    pub timing_ms: u64,
    pub caps: Caps,
}
