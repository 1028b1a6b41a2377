//! Versioned JSON reports and their plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rootdata::{GroupType, Weight};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub weight: Vec<i64>,
    pub mult: i64,
}

pub fn terms(v: &[(Weight, i64)]) -> Vec<Term> {
    v.iter()
        .map(|(w, m)| Term {
            weight: w.0.clone(),
            mult: *m,
        })
        .collect()
}

/// What the published tables say, for `--diff-tables`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr_dim: Option<i64>,
    #[serde(default)]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub group: GroupType,
    pub p: u64,
    pub weight: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GroupType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_dim: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr_dim: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl Report {
    pub fn new(command: &str, group: GroupType, p: u64, weight: &Weight) -> Self {
        Report {
            version: SCHEMA_VERSION.into(),
            command: command.into(),
            group,
            p,
            weight: weight.0.clone(),
            source: None,
            truncate: None,
            weyl_dim: None,
            irr_dim: None,
            character: None,
            chi: None,
            factors: None,
            radical: None,
            expected: None,
            matches: None,
            error: None,
            flags: Vec::new(),
        }
    }

    /// A disagreement with the tables that no flag explains.
    pub fn is_unflagged_mismatch(&self) -> bool {
        self.error.is_some() || (self.matches == Some(false) && self.flags.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub version: String,
    pub code: String,
    pub message: String,
}

impl ErrorReport {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        ErrorReport {
            version: SCHEMA_VERSION.into(),
            code: code.into(),
            message: message.into(),
        }
    }
}

/// One `tables` output file: everything computed for a single `(family, n, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub version: String,
    pub group: GroupType,
    pub p: u64,
    pub structure: Vec<Report>,
    pub branching: Vec<Report>,
    pub mismatches: usize,
}

fn fmt_weight(w: &[i64]) -> String {
    let c: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", c.join(","))
}

fn fmt_terms(t: &[Term]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = t
        .iter()
        .map(|t| {
            if t.mult == 1 {
                fmt_weight(&t.weight)
            } else {
                format!("{}*{}", t.mult, fmt_weight(&t.weight))
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = write!(s, "{} {} p={} weight={}", r.command, r.group, r.p, fmt_weight(&r.weight));
    if let Some(src) = r.source {
        let _ = write!(s, " source={src}");
    }
    s.push('\n');
    if let Some(t) = &r.truncate {
        let _ = writeln!(s, "  truncate: {}", fmt_weight(t));
    }
    if let Some(d) = r.weyl_dim {
        let _ = writeln!(s, "  weyl_dim: {d}");
    }
    if let Some(d) = r.irr_dim {
        let _ = writeln!(s, "  irr_dim: {d}");
    }
    for (name, v) in [
        ("character", &r.character),
        ("chi", &r.chi),
        ("factors", &r.factors),
        ("radical", &r.radical),
    ] {
        if let Some(t) = v {
            let _ = writeln!(s, "  {name}: {}", fmt_terms(t));
        }
    }
    if let Some(e) = &r.expected {
        let _ = write!(s, "  expected [{}]:", e.label);
        if let Some(t) = &e.factors {
            let _ = write!(s, " factors {}", fmt_terms(t));
        }
        if let Some(t) = &e.radical {
            let _ = write!(s, " radical {}", fmt_terms(t));
        }
        if let Some(d) = e.irr_dim {
            let _ = write!(s, " irr_dim {d}");
        }
        s.push('\n');
    }
    if let Some(m) = r.matches {
        let _ = writeln!(s, "  matches: {m}");
    }
    if let Some(e) = &r.error {
        let _ = writeln!(s, "  error [{}]: {}", e.code, e.message);
    }
    if !r.flags.is_empty() {
        let _ = writeln!(s, "  flags: {}", r.flags.join(", "));
    }
    s
}

pub fn render_tables_text(t: &TablesReport) -> String {
    let mut s = format!("{} p={}: {} unflagged mismatches\n", t.group, t.p, t.mismatches);
    for r in t.structure.iter().chain(&t.branching) {
        s.push_str(&render_text(r));
    }
    s
}
