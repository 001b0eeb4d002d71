//! Report model shared by text and structured output.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    /// The identity checked, written out.
    pub anchor: String,
    pub count: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, count: usize, failures: usize) -> Self {
        CheckLine { name: name.into(), anchor: anchor.into(), count, failures, detail: None }
    }

    pub fn flag(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(name, anchor, 1, usize::from(!ok))
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub suite: String,
    pub subject: String,
    pub checks: Vec<CheckLine>,
    #[serde(default)]
    pub tables: Vec<Table>,
    pub millis: f64,
}

impl Section {
    pub fn new(suite: &str, subject: &str) -> Self {
        Section { suite: suite.into(), subject: subject.into(), checks: Vec::new(), tables: Vec::new(), millis: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckLine::passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub inputs: Vec<String>,
    pub sections: Vec<Section>,
    pub status: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.sections.iter().all(Section::passed)
    }

    /// The same report with every timing zeroed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for s in &mut r.sections {
            s.millis = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "chowmot {} (seed {}, samples {})", self.command, self.seed, self.samples);
        if !self.inputs.is_empty() {
            let _ = writeln!(out, "inputs: {}", self.inputs.join(" "));
        }
        for s in &self.sections {
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "\n[{verdict}] {} on {} ({:.1} ms)", s.suite, s.subject, s.millis);
            for c in &s.checks {
                let mark = if c.passed() { "ok  " } else { "FAIL" };
                let _ = write!(out, "  {mark} {}: {} [{} checked", c.name, c.anchor, c.count);
                if c.failures > 0 {
                    let _ = write!(out, ", {} failed", c.failures);
                }
                let _ = writeln!(out, "]");
                if let Some(d) = &c.detail {
                    let _ = writeln!(out, "       {d}");
                }
            }
            for t in &s.tables {
                render_table(&mut out, t);
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "\nerror: {e}");
        }
        let _ = writeln!(out, "\n{}", self.summary());
        out
    }

    /// One-line tally, independent of timings.
    pub fn summary(&self) -> String {
        let total = self.sections.len();
        let passed = self.sections.iter().filter(|s| s.passed()).count();
        let checks: usize = self.sections.iter().flat_map(|s| &s.checks).map(|c| c.count).sum();
        let failed: usize = self.sections.iter().flat_map(|s| &s.checks).map(|c| c.failures).sum();
        format!("{passed}/{total} sections passed, {checks} checks, {failed} failures, exit {}", self.status)
    }
}

fn render_table(out: &mut String, t: &Table) {
    let cols = t.header.len();
    let mut width = vec![0; cols];
    for row in std::iter::once(&t.header).chain(&t.rows) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let _ = writeln!(out, "  {}", t.title);
    for row in std::iter::once(&t.header).chain(&t.rows) {
        let cells: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "    {}", cells.join("  "));
    }
}
