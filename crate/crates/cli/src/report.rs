//! Run reports and their two renderings.

use serde::Serialize;

use relfix::verify::{Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Input = 2,
    NonConvergence = 3,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictRow {
    pub hypothesis: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerdictRow {
    pub fn new(
        hypothesis: &str,
        status: Status,
        witness: Option<String>,
        note: Option<String>,
    ) -> Self {
        VerdictRow {
            hypothesis: hypothesis.to_string(),
            status: status.as_str(),
            witness,
            note,
        }
    }
}

impl From<&Verdict> for VerdictRow {
    fn from(v: &Verdict) -> Self {
        VerdictRow::new(
            v.hypothesis.id(),
            v.status,
            v.witness.clone(),
            v.note.clone(),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateRow {
    pub kind: &'static str,
    pub point: String,
    pub residual: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub x: String,
    pub gx: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    /// sha256 of the canonical instance JSON.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateRow>,
    /// Free-form `key: value` lines.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        RunReport {
            command,
            ..RunReport::default()
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.push((key.to_string(), value.to_string()));
    }

    pub fn finish(mut self, exit: Exit) -> (Self, Exit) {
        self.exit_status = exit as i32;
        (self, exit)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(path) = &self.instance {
            out.push_str(&format!("instance: {path}\n"));
        }
        if let Some(d) = &self.digest {
            out.push_str(&format!("digest: {d}\n"));
        }
        if !self.verdicts.is_empty() {
            let width = self
                .verdicts
                .iter()
                .map(|v| v.hypothesis.len())
                .max()
                .unwrap_or(0);
            for v in &self.verdicts {
                out.push_str(&format!("{:<width$}  {:<16}", v.hypothesis, v.status));
                if let Some(w) = &v.witness {
                    out.push_str(&format!("  {w}"));
                }
                if let Some(n) = &v.note {
                    out.push_str(&format!("  [{n}]"));
                }
                out.push('\n');
            }
        }
        if let Some(rank) = self.rank {
            out.push_str(&format!("rank: {rank}\n"));
        }
        if !self.trace.is_empty() {
            out.push_str("n  x  gx  residual\n");
            for row in &self.trace {
                out.push_str(&format!(
                    "{}  {}  {}  {:e}\n",
                    row.n, row.x, row.gx, row.residual
                ));
            }
        }
        for c in &self.certificates {
            out.push_str(&format!(
                "{}: {} (residual {:e}; {})\n",
                c.kind, c.point, c.residual, c.note
            ));
        }
        for (k, v) in &self.facts {
            out.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }

    pub fn render_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
