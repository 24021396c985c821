//! Check reports and their JSON, Markdown and DOT renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tyurin_core::degen::FlopGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not checkable from the catalog data; does not fail the report.
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub id: String,
    /// `lattice`, `fibrations`, `toric`, `flops`, or a model name.
    pub scope: String,
    /// Table rows (`Γ` labels) the check bears on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<String>,
    pub status: Status,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(scope: &str, id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            scope: scope.to_owned(),
            rows: Vec::new(),
            status,
            detail: detail.into(),
        }
    }

    pub fn with_rows(mut self, rows: &[String]) -> Self {
        self.rows = rows.to_vec();
        self
    }

    pub fn line(&self) -> String {
        format!("[{}] {} {}: {}", self.status.tag(), self.scope, self.id, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphNode {
    pub gamma: String,
    pub k_squared: [i64; 2],
}

/// The flop graph without the underlying surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSummary {
    pub reflection_quotient: bool,
    pub truncated: bool,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphSummary {
    pub fn from_graph(g: &FlopGraph) -> Self {
        GraphSummary {
            reflection_quotient: g.reflection_quotient,
            truncated: g.truncated,
            nodes: g
                .nodes
                .iter()
                .map(|n| {
                    let (a, b) = n.state.k_squared();
                    GraphNode {
                        gamma: n.gamma_text(),
                        k_squared: [a, b],
                    }
                })
                .collect(),
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flops {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let [a, b] = n.k_squared;
            let _ = writeln!(s, "  n{i} [label=\"{}\\n({a},{b})\"];", n.gamma);
        }
        for [a, b] in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    /// Seconds since the Unix epoch; omitted in deterministic mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub overall: Status,
    /// Table rows in catalog order, used to lay out the Markdown report.
    #[serde(default)]
    pub rows: Vec<String>,
    pub records: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flop_graph: Option<GraphSummary>,
}

impl CheckReport {
    pub fn new(records: Vec<CheckRecord>) -> Self {
        let overall = overall_of(&records);
        CheckReport {
            generated_at: None,
            overall,
            rows: Vec::new(),
            records,
            flop_graph: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall != Status::Fail
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn stamp_now(&mut self) {
        self.generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
}

pub fn overall_of(records: &[CheckRecord]) -> Status {
    Status::from_bool(records.iter().all(|r| r.status != Status::Fail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
    Dot,
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("the report carries no flop graph to render as DOT")]
    NoGraph,
    #[error("unknown report format `{0}` (expected json, markdown or dot)")]
    UnknownFormat(String),
}

impl std::str::FromStr for Format {
    type Err = EmitError;

    fn from_str(s: &str) -> Result<Self, EmitError> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            "dot" => Ok(Format::Dot),
            other => Err(EmitError::UnknownFormat(other.to_owned())),
        }
    }
}

pub fn emit_report(report: &CheckReport, format: Format) -> Result<String, EmitError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n"),
        Format::Markdown => Ok(markdown(report)),
        Format::Dot => report
            .flop_graph
            .as_ref()
            .map(GraphSummary::to_dot)
            .ok_or(EmitError::NoGraph),
    }
}

pub fn load_report(text: &str) -> Result<CheckReport, serde_json::Error> {
    serde_json::from_str(text)
}

fn table(out: &mut String, records: &[&CheckRecord]) {
    out.push_str("| status | scope | check | detail |\n|---|---|---|---|\n");
    for r in records {
        let detail = r.detail.replace('|', "\\|").replace('\n', " ");
        let _ = writeln!(out, "| {} | {} | `{}` | {} |", r.status.tag(), r.scope, r.id, detail);
    }
    out.push('\n');
}

fn markdown(report: &CheckReport) -> String {
    let mut out = String::from("# Verification report\n\n");
    let _ = writeln!(
        out,
        "Overall: **{}** ({} passed, {} failed, {} skipped)\n",
        report.overall.tag(),
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped)
    );
    if let Some(t) = report.generated_at {
        let _ = writeln!(out, "Generated at Unix time {t}.\n");
    }
    let global: Vec<&CheckRecord> = report.records.iter().filter(|r| r.rows.is_empty()).collect();
    if !global.is_empty() {
        out.push_str("Global checks:\n\n");
        table(&mut out, &global);
    }
    for row in &report.rows {
        let _ = writeln!(out, "## {row}\n");
        let own: Vec<&CheckRecord> = report.records.iter().filter(|r| r.rows.contains(row)).collect();
        if own.is_empty() {
            out.push_str("No checks.\n\n");
        } else {
            table(&mut out, &own);
        }
    }
    out
}
