//! Text and JSON rendering of classification reports.

use std::fmt::Write as _;

use crate::classify::{ClassificationReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn render_report(reports: &[ClassificationReport], format: Format) -> String {
    match format {
        Format::Json => render_json(reports),
        Format::Text => render_text(reports),
    }
}

pub fn render_json(reports: &[ClassificationReport]) -> String {
    let mut out = serde_json::to_string_pretty(reports).expect("reports serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> serde_json::Result<Vec<ClassificationReport>> {
    serde_json::from_str(text)
}

pub fn render_text(reports: &[ClassificationReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_block(&mut out, r);
    }
    out
}

fn write_block(out: &mut String, r: &ClassificationReport) {
    let _ = writeln!(out, "{} / {}", r.client, r.advisory_id);
    let verdict = match r.verdict {
        Verdict::NotListed => "NotListed (package neither declared nor imported; outside the four-way classification)".to_string(),
        Verdict::NoData => match r.no_data_reason() {
            Some(reason) => format!("NoData ({reason})"),
            None => "NoData".to_string(),
        },
        v => v.to_string(),
    };
    let _ = writeln!(out, "  verdict:  {verdict}");
    let exposure = match r.version_affected {
        Some(true) => "affected version",
        Some(false) => "not affected",
        None => "unknown",
    };
    let _ = writeln!(out, "  exposure: {exposure}");
    let _ = writeln!(out, "  imports:  {}", r.imports_found);
    if r.elapsed > 0.0 {
        let _ = writeln!(out, "  elapsed:  {:.3} s", r.elapsed);
    }
    if !r.call_sites.is_empty() {
        let _ = writeln!(out, "  call sites:");
        for site in &r.call_sites {
            let _ = writeln!(out, "    {}:{}:{}  {}", site.file, site.line, site.column, site.snippet);
        }
    }
    if !r.parse_failures.is_empty() {
        let _ = writeln!(out, "  parse failures:");
        for path in &r.parse_failures {
            let _ = writeln!(out, "    {path}");
        }
    }
    let other: Vec<&String> = r
        .warnings
        .iter()
        .filter(|w| !w.starts_with(crate::classify::NO_DATA_PREFIX))
        .collect();
    if !other.is_empty() {
        let _ = writeln!(out, "  warnings:");
        for w in other {
            let _ = writeln!(out, "    {w}");
        }
    }
}
