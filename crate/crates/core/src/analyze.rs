//! End-to-end analysis of one project directory.

use std::path::Path;
use std::time::Instant;

use crate::advisory::{Advisory, AdvisoryStore};
use crate::classify::{classify, ClassificationReport, ManifestState, Verdict};
use crate::extract::{scan_project_multi, ProjectScan};
use crate::project::{discover_sources, read_manifest, resolve_package, DiscoverError, ManifestOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Worker threads for per-file parsing; 1 runs on the calling thread.
    pub jobs: usize,
    /// Record wall-clock time in reports. Off by default so that output
    /// bytes depend only on the inputs.
    pub timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { jobs: 1, timings: false }
    }
}

/// Reports for every advisory in `store` whose package the project declares
/// or imports, sorted by advisory id. A project without a readable
/// `package.json` gets a NoData report for every advisory.
pub fn analyze_project(
    root: &Path,
    client: &str,
    store: &AdvisoryStore,
    options: AnalyzeOptions,
) -> Result<Vec<ClassificationReport>, DiscoverError> {
    let sources = discover_sources(root)?;
    let manifest = read_manifest(root);
    let candidates: Vec<&Advisory> = match manifest.manifest() {
        None => store.advisories().iter().collect(),
        Some(m) => store
            .advisories()
            .iter()
            .filter(|a| m.declares(&a.package) || sources.files.iter().any(|f| f.text.contains(a.package.as_str())))
            .collect(),
    };
    let mut reports = run(client, &manifest, &sources, &candidates, options);
    reports.retain(|r| r.verdict != Verdict::NotListed);
    reports.sort_by(|a, b| a.advisory_id.cmp(&b.advisory_id));
    Ok(reports)
}

/// The report for one (project, advisory) pair. A missing or unreadable
/// project directory yields NoData rather than an error.
pub fn analyze_pair(root: &Path, client: &str, advisory: &Advisory, options: AnalyzeOptions) -> ClassificationReport {
    match discover_sources(root) {
        Ok(sources) => {
            let manifest = read_manifest(root);
            run(client, &manifest, &sources, &[advisory], options)
                .pop()
                .expect("one report per advisory")
        }
        Err(e) => {
            let diagnostic = e.to_string();
            classify(
                client,
                advisory,
                ManifestState::Absent { diagnostic: &diagnostic },
                &ProjectScan::default(),
                &[],
            )
        }
    }
}

fn run(
    client: &str,
    manifest: &ManifestOutcome,
    sources: &crate::project::SourceSet,
    advisories: &[&Advisory],
    options: AnalyzeOptions,
) -> Vec<ClassificationReport> {
    let started = Instant::now();
    let report = |advisory: &Advisory, state: ManifestState<'_>, scan: &ProjectScan| {
        classify(client, advisory, state, scan, &sources.skipped)
    };
    let mut reports: Vec<ClassificationReport> = match manifest {
        ManifestOutcome::Absent { diagnostic } => advisories
            .iter()
            .map(|a| report(a, ManifestState::Absent { diagnostic }, &ProjectScan::default()))
            .collect(),
        ManifestOutcome::Present(m) => {
            let scans = scan_project_multi(sources, advisories, options.jobs.max(1));
            advisories
                .iter()
                .zip(&scans)
                .map(|(a, scan)| {
                    let resolution = resolve_package(m, &a.package);
                    report(a, ManifestState::Present(&resolution), scan)
                })
                .collect()
        }
    };
    if options.timings {
        let elapsed = started.elapsed().as_secs_f64();
        for r in &mut reports {
            r.elapsed = elapsed;
        }
    }
    reports
}
