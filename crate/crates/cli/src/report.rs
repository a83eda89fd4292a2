//! Run reports: a deterministic content part plus wall-clock timings kept
//! apart so that reports can be compared byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub content: ReportContent,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportContent {
    pub name: String,
    pub query: String,
    pub outcome: Outcome,
    pub order: String,
    pub variables: Vec<String>,
    pub result: QueryResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// A computation without a yes/no answer finished.
    Success,
    Holds,
    Fails,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success | Outcome::Holds => 0,
            Outcome::Fails => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub dim_v: usize,
    pub j_generators: usize,
    pub j_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QueryResult {
    Post {
        template_parameters: usize,
        radical_mode: String,
        mode_exact: bool,
        weakest_precondition: bool,
        iterations: usize,
        dim_v: usize,
        trace: Vec<TraceStep>,
        /// `Σ bᵢ·(pᵢ)` over the basis instances `pᵢ`.
        result_template: String,
        invariants: Vec<String>,
        j_basis: Vec<String>,
        precondition_basis: Vec<String>,
    },
    Pre {
        iterations: usize,
        generator_counts: Vec<usize>,
        ideal_basis: Vec<String>,
        derivative_closure: Vec<String>,
    },
    Check {
        postcondition: Vec<String>,
        mode_exact: bool,
        iterations: usize,
        dim_v: usize,
        trace: Vec<TraceStep>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessReport>,
    },
    Invariant {
        invariant: bool,
        basis: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub point: Vec<String>,
    pub polynomial: String,
    /// Order of the first Lie derivative that is nonzero at `point`.
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub horizon: f64,
    pub step: f64,
    pub tolerance: f64,
    pub points: Vec<Vec<String>>,
    pub polynomials: usize,
    /// Trajectories that left the escape bound before the horizon.
    pub truncated: usize,
    pub failures: Vec<NumericFailure>,
    /// Set when no initial point could be produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl NumericReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericFailure {
    pub polynomial: String,
    pub point: Vec<String>,
    pub time: f64,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    /// Milliseconds per phase.
    pub phases_ms: BTreeMap<String, f64>,
}

impl RunReport {
    /// Exit status: the outcome's code, or 1 if the numeric cross-check of
    /// an otherwise successful run found a violation.
    pub fn exit_code(&self) -> i32 {
        let base = self.content.outcome.exit_code();
        match &self.content.numeric {
            Some(n) if base == 0 && !n.passed() => 1,
            _ => base,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        self.content.to_text()
    }
}

impl ReportContent {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} [{}] {}", self.name, self.query, self.outcome.as_str());
        let list = |s: &mut String, title: &str, items: &[String]| {
            let _ = writeln!(s, "{title}:");
            if items.is_empty() {
                let _ = writeln!(s, "  (none)");
            }
            for p in items {
                let _ = writeln!(s, "  {p}");
            }
        };
        match &self.result {
            QueryResult::Post {
                template_parameters,
                radical_mode,
                mode_exact,
                iterations,
                dim_v,
                trace,
                result_template,
                invariants,
                j_basis,
                ..
            } => {
                let dims: Vec<String> = trace.iter().map(|t| t.dim_v.to_string()).collect();
                let _ = writeln!(s, "parameters {template_parameters}, dim V = {dim_v}, m = {iterations}");
                let _ = writeln!(s, "radical mode {radical_mode} (exact: {mode_exact})");
                let _ = writeln!(s, "dim V chain: {}", dims.join(" > "));
                let _ = writeln!(s, "result template: {result_template}");
                list(&mut s, "invariants", invariants);
                list(&mut s, "Groebner basis of J", j_basis);
            }
            QueryResult::Pre { iterations, ideal_basis, .. } => {
                let _ = writeln!(s, "m = {iterations}");
                list(&mut s, "Groebner basis of the precondition ideal", ideal_basis);
            }
            QueryResult::Check { postcondition, mode_exact, iterations, dim_v, witness, .. } => {
                let _ = writeln!(
                    s,
                    "postcondition parameters {}, dim V = {dim_v}, m = {iterations}, exact: {mode_exact}",
                    postcondition.len()
                );
                if let Some(w) = witness {
                    let _ = writeln!(
                        s,
                        "witness: from ({}) the Lie derivative of order {} of {} is nonzero",
                        w.point.join(", "),
                        w.order,
                        w.polynomial
                    );
                }
            }
            QueryResult::Invariant { invariant, basis } => {
                let _ = writeln!(s, "invariant ideal: {invariant}");
                list(&mut s, "Groebner basis", basis);
            }
        }
        if let Some(n) = &self.numeric {
            let _ = writeln!(
                s,
                "numeric check: {} polynomials from {} points, {} truncated, {}",
                n.polynomials,
                n.points.len(),
                n.truncated,
                if n.passed() { "pass".to_string() } else { format!("{} failures", n.failures.len()) }
            );
            for f in &n.failures {
                let _ = writeln!(s, "  {} from ({}) at t = {}: |{}| > {}", f.polynomial, f.point.join(", "), f.time, f.value, f.bound);
            }
            if let Some(note) = &n.note {
                let _ = writeln!(s, "  {note}");
            }
        }
        s
    }
}
