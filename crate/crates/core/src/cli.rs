//! Command-line interface.

use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::advisory::{load_advisories, AdvisoryStore, Strictness};
use crate::analyze::{analyze_project, AnalyzeOptions};
use crate::classify::Verdict;
use crate::corpus::{confusion, load_manifest, metrics, render_summary, run_corpus, summarize};
use crate::report::{render_json, render_report, Format};

/// Exit status when no Reached verdict was produced.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REACHED: i32 = 2;
pub const EXIT_ALL_NO_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "depreach", version, about = "Checks whether JavaScript projects call the vulnerable functions of their dependencies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one project against an advisory file.
    Analyze(AnalyzeArgs),
    /// Run every (client, advisory) pair of a corpus manifest and summarize.
    Batch(BatchArgs),
    /// Evaluate verdicts against the labels of a corpus manifest.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Advisory JSON file.
    #[arg(long)]
    pub advisories: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Ignore unknown fields in advisory objects instead of rejecting them.
    #[arg(long)]
    pub lenient_advisories: bool,
    /// Record elapsed wall-clock time in reports.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Project root containing package.json.
    #[arg(long)]
    pub project: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parallel workers for file parsing.
    #[arg(long, default_value = "1")]
    pub jobs: NonZeroUsize,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// CSV with header `client_path,advisory_id,label`.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parallel workers across corpus entries.
    #[arg(long, default_value = "1")]
    pub jobs: NonZeroUsize,
    /// Also write the per-entry reports as JSON to this file.
    #[arg(long)]
    pub reports: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// CSV with header `client_path,advisory_id,label`; needs labels.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "1")]
    pub jobs: NonZeroUsize,
}

/// Exit status of a completed run given its verdicts.
pub fn exit_code(verdicts: &[Verdict]) -> i32 {
    if verdicts.contains(&Verdict::Reached) {
        EXIT_REACHED
    } else if !verdicts.is_empty() && verdicts.iter().all(|&v| v == Verdict::NoData) {
        EXIT_ALL_NO_DATA
    } else {
        EXIT_OK
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Analyze(args) => {
            let store = load_store(&args.common, stderr)?;
            let options = AnalyzeOptions {
                jobs: args.jobs.get(),
                timings: args.common.timings,
            };
            let client = args.project.display().to_string();
            let reports = analyze_project(&args.project, &client, &store, options)?;
            emit(&args.common.output, &render_report(&reports, args.common.format), stdout)?;
            let verdicts: Vec<Verdict> = reports.iter().map(|r| r.verdict).collect();
            Ok(exit_code(&verdicts))
        }
        Command::Batch(args) => {
            let store = load_store(&args.common, stderr)?;
            let entries = load_manifest(&args.manifest)?;
            let reports = run_corpus(&entries, &store, args.jobs.get(), args.common.timings)?;
            if let Some(path) = &args.reports {
                write_file(path, &render_json(&reports))?;
            }
            let mut summary = summarize(&reports);
            if entries.iter().any(|e| e.label.is_some()) {
                let m = confusion(&reports, &entries)?;
                summary.rates = Some(metrics(&m)?);
                summary.confusion = Some(m);
            }
            emit(&args.common.output, &render_summary(&summary, args.common.format), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Metrics(args) => {
            let store = load_store(&args.common, stderr)?;
            let entries = load_manifest(&args.manifest)?;
            let labeled: Vec<_> = entries.into_iter().filter(|e| e.label.is_some()).collect();
            let reports = run_corpus(&labeled, &store, args.jobs.get(), args.common.timings)?;
            let m = confusion(&reports, &labeled)?;
            let rates = metrics(&m)?;
            let mut summary = summarize(&reports);
            summary.confusion = Some(m);
            summary.rates = Some(rates);
            emit(&args.common.output, &render_summary(&summary, args.common.format), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

fn load_store(common: &CommonArgs, stderr: &mut dyn Write) -> Result<AdvisoryStore> {
    let strictness = if common.lenient_advisories {
        Strictness::Lenient
    } else {
        Strictness::Strict
    };
    let file = fs::File::open(&common.advisories)
        .with_context(|| format!("cannot open advisory file {}", common.advisories.display()))?;
    let store = load_advisories(std::io::BufReader::new(file), strictness)
        .with_context(|| format!("invalid advisory file {}", common.advisories.display()))?;
    for warning in store.warnings() {
        let _ = writeln!(stderr, "warning: {warning}");
    }
    Ok(store)
}

fn emit(output: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => write_file(path, text),
        None => stdout.write_all(text.as_bytes()).context("cannot write to standard output"),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
