//! CSV and JSON emission. Every file starts with `#` comment lines naming
//! the tool version, the resolved configuration and the conventions in
//! force; nothing in them depends on the worker count.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = concat!("ponds ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub conventions: Vec<&'static str>,
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(command: &'static str, config: Value) -> Self {
        Provenance {
            tool: TOOL,
            command,
            config,
            conventions: vec!["p-open means tau(e) < p", "p_c = 1/2"],
            notes: Vec::new(),
        }
    }

    pub fn convention(mut self, c: &'static str) -> Self {
        self.conventions.push(c);
        self
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# {}", self.tool),
            format!("# command: {}", self.command),
        ];
        lines.push(format!("# config: {}", self.config));
        lines.extend(
            self.conventions
                .iter()
                .map(|c| format!("# convention: {c}")),
        );
        lines.extend(self.notes.iter().map(|n| format!("# {n}")));
        lines
    }
}

/// Writes rows as CSV to `path` (stdout when `None`). With `append`, an
/// existing nonempty file keeps its header and gains a new comment block
/// followed by the rows.
pub fn write_csv<S: Serialize>(
    path: Option<&Path>,
    prov: &Provenance,
    rows: &[S],
    append: bool,
) -> Result<()> {
    let existing =
        append && path.is_some_and(|p| p.metadata().map(|m| m.len() > 0).unwrap_or(false));
    let mut sink: Box<dyn Write> = match path {
        None => Box::new(io::stdout().lock()),
        Some(p) if existing => Box::new(
            OpenOptions::new()
                .append(true)
                .open(p)
                .with_context(|| format!("opening {}", p.display()))?,
        ),
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
    };
    for line in prov.comment_lines() {
        writeln!(sink, "{line}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(!existing)
        .from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<S: Serialize>(path: &Path, prov: &Provenance, report: &S) -> Result<()> {
    let doc = json!({ "provenance": prov, "report": report });
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, &doc)?;
    writeln!(f)?;
    Ok(())
}
