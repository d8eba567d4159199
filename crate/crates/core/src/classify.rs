//! Client classification: does a project reach an advisory's symbols, and
//! is the version it uses affected?

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::advisory::Advisory;
use crate::extract::{CallSite, ProjectScan};
use crate::project::DependencyResolution;
use crate::semver::ranges_intersect;

/// Prefix of the warning that carries a NoData verdict's reason.
pub const NO_DATA_PREFIX: &str = "no data: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Reached,
    Clean,
    ListedOnly,
    NoData,
    /// The project neither declares nor imports the package. Not part of
    /// the four-way classification; reported for arbitrary projects.
    NotListed,
}

impl Verdict {
    pub const ALL: [Verdict; 5] = [
        Verdict::Reached,
        Verdict::Clean,
        Verdict::ListedOnly,
        Verdict::NoData,
        Verdict::NotListed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Reached => "Reached",
            Verdict::Clean => "Clean",
            Verdict::ListedOnly => "ListedOnly",
            Verdict::NoData => "NoData",
            Verdict::NotListed => "NotListed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub client: String,
    #[serde(rename = "advisory")]
    pub advisory_id: String,
    pub verdict: Verdict,
    pub version_affected: Option<bool>,
    pub imports_found: usize,
    pub call_sites: Vec<CallSite>,
    pub warnings: Vec<String>,
    pub parse_failures: Vec<String>,
    #[serde(rename = "elapsed_seconds")]
    pub elapsed: f64,
}

impl ClassificationReport {
    /// Reason recorded for a NoData verdict.
    pub fn no_data_reason(&self) -> Option<&str> {
        self.warnings.iter().find_map(|w| w.strip_prefix(NO_DATA_PREFIX))
    }
}

/// The facts the verdict depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evidence {
    pub manifest_present: bool,
    pub declared: bool,
    pub imports: bool,
    pub calls: bool,
    /// No source file could be parsed (vacuously true with no sources).
    pub all_parse_failed: bool,
}

pub fn decide(e: Evidence) -> Verdict {
    if !e.manifest_present || (e.declared && e.all_parse_failed) {
        Verdict::NoData
    } else if !e.declared && !e.imports {
        Verdict::NotListed
    } else if e.calls {
        Verdict::Reached
    } else if e.imports {
        Verdict::Clean
    } else {
        Verdict::ListedOnly
    }
}

/// Whether the version the project uses falls in the affected range: the
/// installed version if known, otherwise the declared range.
pub fn exposure(resolution: &DependencyResolution, advisory: &Advisory) -> Option<bool> {
    if let Some(installed) = &resolution.installed_version {
        return Some(advisory.affects(installed));
    }
    resolution
        .declared_range
        .as_ref()
        .map(|declared| ranges_intersect(declared, &advisory.affected))
}

/// Manifest state of the project being classified.
#[derive(Debug, Clone, Copy)]
pub enum ManifestState<'a> {
    Absent { diagnostic: &'a str },
    Present(&'a DependencyResolution),
}

/// Files the scan never saw: `(path, reason)` pairs from source discovery.
pub type Skipped<'a> = &'a [(String, String)];

pub fn classify(
    client: &str,
    advisory: &Advisory,
    manifest: ManifestState<'_>,
    scan: &ProjectScan,
    skipped: Skipped<'_>,
) -> ClassificationReport {
    let (resolution, manifest_diagnostic) = match manifest {
        ManifestState::Present(r) => (Some(r), None),
        ManifestState::Absent { diagnostic } => (None, Some(diagnostic)),
    };
    let declared = resolution.is_some_and(DependencyResolution::is_declared);
    let imports_found = scan.import_sites();
    let mut call_sites: Vec<CallSite> = scan.call_sites().cloned().collect();
    let evidence = Evidence {
        manifest_present: resolution.is_some(),
        declared,
        imports: imports_found > 0,
        calls: !call_sites.is_empty(),
        all_parse_failed: scan.parsed_files() == 0,
    };
    let verdict = decide(evidence);

    let mut warnings = Vec::new();
    if verdict == Verdict::NoData {
        let reason = match manifest_diagnostic {
            Some(d) => d.to_string(),
            None if scan.parse_failures.is_empty() && skipped.is_empty() => "no JavaScript sources found".to_string(),
            None => "no source file could be parsed".to_string(),
        };
        warnings.push(format!("{NO_DATA_PREFIX}{reason}"));
    }
    if verdict != Verdict::Reached && !call_sites.is_empty() {
        warnings.push(format!("{} call site(s) discarded because the verdict is {verdict}", call_sites.len()));
        call_sites.clear();
    }
    if let Some(r) = resolution {
        if let (Some(spec), None) = (&r.declared_specifier, &r.declared_range) {
            warnings.push(format!("declared specifier `{spec}` for {} is not a semver range", r.package));
        }
    }
    warnings.extend(scan.warnings().map(ToString::to_string));
    warnings.extend(
        scan.parse_failures
            .iter()
            .map(|f| format!("{}:{}:{}: parse failure: {}", f.path, f.line, f.column, f.message)),
    );
    warnings.extend(skipped.iter().map(|(path, reason)| format!("{path}: skipped ({reason})")));

    let mut parse_failures: Vec<String> = scan.parse_failures.iter().map(|f| f.path.clone()).collect();
    parse_failures.extend(
        skipped
            .iter()
            .filter(|(_, reason)| reason.starts_with("invalid UTF-8") || reason.starts_with("unreadable"))
            .map(|(path, _)| path.clone()),
    );
    parse_failures.sort();
    parse_failures.dedup();

    ClassificationReport {
        client: client.to_string(),
        advisory_id: advisory.id.clone(),
        verdict,
        version_affected: resolution.and_then(|r| exposure(r, advisory)),
        imports_found,
        call_sites,
        warnings,
        parse_failures,
        elapsed: 0.0,
    }
}
