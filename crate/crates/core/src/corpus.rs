//! Batch runs over a corpus of (client, advisory) pairs, verdict statistics
//! and evaluation against ground-truth labels.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::advisory::AdvisoryStore;
use crate::analyze::{analyze_pair, AnalyzeOptions};
use crate::classify::{ClassificationReport, Verdict};
use crate::report::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Reached,
    NotReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    /// As written in the manifest; used as the report's client name.
    pub client_path: String,
    /// `client_path` resolved against the manifest's directory.
    pub location: PathBuf,
    pub advisory_id: String,
    pub label: Option<Label>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed corpus manifest: {0}")]
    Csv(#[from] csv::Error),
    #[error("corpus manifest header must be `client_path,advisory_id,label`, found `{0}`")]
    Header(String),
    #[error("corpus manifest row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("corpus manifest row {row}: unknown advisory `{id}`")]
    UnknownAdvisory { row: usize, id: String },
    #[error("labeled entry {client} / {advisory} has no report")]
    MissingReport { client: String, advisory: String },
    #[error("no labeled entries to evaluate")]
    NoLabels,
}

const HEADER: [&str; 3] = ["client_path", "advisory_id", "label"];

pub fn load_manifest(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base)
}

/// Parses manifest CSV text. Relative client paths are resolved against
/// `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CorpusError::Header(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut entries = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        let client_path = record.get(0).unwrap_or_default().to_string();
        let advisory_id = record.get(1).unwrap_or_default().to_string();
        if client_path.is_empty() || advisory_id.is_empty() {
            return Err(CorpusError::Row {
                row,
                message: "client_path and advisory_id are required".to_string(),
            });
        }
        let label = match record.get(2).unwrap_or_default() {
            "" => None,
            "reached" => Some(Label::Reached),
            "not-reached" => Some(Label::NotReached),
            other => {
                return Err(CorpusError::Row {
                    row,
                    message: format!("label must be `reached`, `not-reached` or empty, found `{other}`"),
                })
            }
        };
        entries.push(CorpusEntry {
            location: base.join(&client_path),
            client_path,
            advisory_id,
            label,
        });
    }
    Ok(entries)
}

pub fn check_advisories(entries: &[CorpusEntry], store: &AdvisoryStore) -> Result<(), CorpusError> {
    for (i, entry) in entries.iter().enumerate() {
        if store.get(&entry.advisory_id).is_none() {
            return Err(CorpusError::UnknownAdvisory {
                row: i + 2,
                id: entry.advisory_id.clone(),
            });
        }
    }
    Ok(())
}

/// One report per entry, in manifest order.
pub fn run_corpus(
    entries: &[CorpusEntry],
    store: &AdvisoryStore,
    jobs: usize,
    timings: bool,
) -> Result<Vec<ClassificationReport>, CorpusError> {
    check_advisories(entries, store)?;
    let options = AnalyzeOptions { jobs: 1, timings };
    let run = |entry: &CorpusEntry| {
        let advisory = store.get(&entry.advisory_id).expect("checked above");
        analyze_pair(&entry.location, &entry.client_path, advisory, options)
    };
    let reports = if jobs > 1 && entries.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| entries.par_iter().map(run).collect()),
            Err(_) => entries.iter().map(run).collect(),
        }
    } else {
        entries.iter().map(run).collect()
    };
    Ok(reports)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    #[serde(rename = "Reached")]
    pub reached: usize,
    #[serde(rename = "Clean")]
    pub clean: usize,
    #[serde(rename = "ListedOnly")]
    pub listed_only: usize,
    #[serde(rename = "NoData")]
    pub no_data: usize,
    #[serde(rename = "NotListed")]
    pub not_listed: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, verdict: Verdict) {
        *self.slot(verdict) += 1;
    }

    pub fn get(&self, verdict: Verdict) -> usize {
        match verdict {
            Verdict::Reached => self.reached,
            Verdict::Clean => self.clean,
            Verdict::ListedOnly => self.listed_only,
            Verdict::NoData => self.no_data,
            Verdict::NotListed => self.not_listed,
        }
    }

    fn slot(&mut self, verdict: Verdict) -> &mut usize {
        match verdict {
            Verdict::Reached => &mut self.reached,
            Verdict::Clean => &mut self.clean,
            Verdict::ListedOnly => &mut self.listed_only,
            Verdict::NoData => &mut self.no_data,
            Verdict::NotListed => &mut self.not_listed,
        }
    }

    pub fn total(&self) -> usize {
        Verdict::ALL.iter().map(|&v| self.get(v)).sum()
    }

    pub fn from_verdicts(verdicts: impl IntoIterator<Item = Verdict>) -> Self {
        let mut counts = VerdictCounts::default();
        for v in verdicts {
            counts.add(v);
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VulnerabilitySummary {
    pub advisory: String,
    pub counts: VerdictCounts,
    /// Clean / (Clean + Reached) as a percentage; absent when no client
    /// imports the package.
    pub clean_percent: Option<f64>,
}

impl VulnerabilitySummary {
    pub fn reached_percent(&self) -> Option<f64> {
        let denominator = self.counts.clean + self.counts.reached;
        (denominator > 0).then(|| self.counts.reached as f64 * 100.0 / denominator as f64)
    }
}

fn clean_percent(counts: &VerdictCounts) -> Option<f64> {
    let denominator = counts.clean + counts.reached;
    (denominator > 0).then(|| counts.clean as f64 * 100.0 / denominator as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub n: usize,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub accuracy: f64,
    pub miss_rate: f64,
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fnr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub totals: VerdictCounts,
    pub per_advisory: Vec<VulnerabilitySummary>,
    pub median_clean_percent: Option<f64>,
    pub confusion: Option<ConfusionMatrix>,
    pub rates: Option<Rates>,
}

pub fn summarize(reports: &[ClassificationReport]) -> Summary {
    let totals = VerdictCounts::from_verdicts(reports.iter().map(|r| r.verdict));
    let mut by_advisory: std::collections::BTreeMap<&str, VerdictCounts> = Default::default();
    for r in reports {
        by_advisory.entry(r.advisory_id.as_str()).or_default().add(r.verdict);
    }
    let per_advisory: Vec<VulnerabilitySummary> = by_advisory
        .into_iter()
        .map(|(advisory, counts)| VulnerabilitySummary {
            advisory: advisory.to_string(),
            clean_percent: clean_percent(&counts),
            counts,
        })
        .collect();
    let percents: Vec<f64> = per_advisory.iter().filter_map(|s| s.clean_percent).collect();
    Summary {
        totals,
        median_clean_percent: median(&percents),
        per_advisory,
        confusion: None,
        rates: None,
    }
}

/// Median; the mean of the two middle values for an even count.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

/// Confusion counts over labeled entries, with Reached as the positive class.
pub fn confusion(reports: &[ClassificationReport], entries: &[CorpusEntry]) -> Result<ConfusionMatrix, CorpusError> {
    let mut m = ConfusionMatrix::default();
    for entry in entries {
        let Some(label) = entry.label else { continue };
        let report = reports
            .iter()
            .find(|r| r.client == entry.client_path && r.advisory_id == entry.advisory_id)
            .ok_or_else(|| CorpusError::MissingReport {
                client: entry.client_path.clone(),
                advisory: entry.advisory_id.clone(),
            })?;
        let predicted = report.verdict == Verdict::Reached;
        match (predicted, label) {
            (true, Label::Reached) => m.tp += 1,
            (false, Label::Reached) => m.fn_ += 1,
            (true, Label::NotReached) => m.fp += 1,
            (false, Label::NotReached) => m.tn += 1,
        }
        m.n += 1;
    }
    Ok(m)
}

pub fn metrics(m: &ConfusionMatrix) -> Result<Rates, CorpusError> {
    if m.n == 0 {
        return Err(CorpusError::NoLabels);
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    let n = m.n as f64;
    Ok(Rates {
        accuracy: (m.tn + m.tp) as f64 / n,
        miss_rate: (m.fp + m.fn_) as f64 / n,
        tpr: ratio(m.tp, m.fn_ + m.tp),
        fpr: ratio(m.fp, m.tn + m.fp),
        tnr: ratio(m.tn, m.tn + m.fp),
        fnr: ratio(m.fn_, m.fn_ + m.tp),
    })
}

/// A rate rounded to three decimals without trailing zeros: 0.833, 0, 1.
pub fn display_rate(value: f64) -> String {
    let text = format!("{value:.3}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_string()
    } else {
        text.to_string()
    }
}

fn display_optional_rate(value: Option<f64>) -> String {
    value.map_or_else(|| "n/a".to_string(), display_rate)
}

fn display_percent(value: Option<f64>) -> String {
    value.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}%"))
}

pub fn render_summary(summary: &Summary, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(summary).expect("summary serializes");
            out.push('\n');
            out
        }
        Format::Text => render_summary_text(summary),
    }
}

fn render_summary_text(s: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Verdicts");
    for v in Verdict::ALL {
        let _ = writeln!(out, "  {:<11} {}", v.as_str(), s.totals.get(v));
    }
    let _ = writeln!(out, "  {:<11} {}", "Total", s.totals.total());
    if !s.per_advisory.is_empty() {
        let _ = writeln!(out, "\nPer advisory (clean % of clients that import the package)");
        for a in &s.per_advisory {
            let c = &a.counts;
            let _ = writeln!(
                out,
                "  {}  reached {}  clean {}  listed-only {}  no-data {}  not-listed {}  clean {}",
                a.advisory,
                c.reached,
                c.clean,
                c.listed_only,
                c.no_data,
                c.not_listed,
                display_percent(a.clean_percent)
            );
        }
        let _ = writeln!(out, "  median clean: {}", display_percent(s.median_clean_percent));
    }
    if let Some(m) = &s.confusion {
        let _ = writeln!(out, "\nConfusion (positive = Reached)");
        let _ = writeln!(out, "  n {}  tp {}  fp {}  tn {}  fn {}", m.n, m.tp, m.fp, m.tn, m.fn_);
    }
    if let Some(r) = &s.rates {
        let _ = writeln!(out, "\nMetrics");
        let _ = writeln!(out, "  accuracy   {}", display_rate(r.accuracy));
        let _ = writeln!(out, "  miss rate  {}", display_rate(r.miss_rate));
        let _ = writeln!(out, "  TP rate    {}", display_optional_rate(r.tpr));
        let _ = writeln!(out, "  FP rate    {}", display_optional_rate(r.fpr));
        let _ = writeln!(out, "  TN rate    {}", display_optional_rate(r.tnr));
        let _ = writeln!(out, "  FN rate    {}", display_optional_rate(r.fnr));
    }
    out
}
