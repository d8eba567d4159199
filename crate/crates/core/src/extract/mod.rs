//! Call extraction: which call expressions in a JavaScript file reach an
//! advisory symbol.
//!
//! Each file is walked three times. The first walk records declarations per
//! lexical scope, the second binds local names to the package's exports, and
//! the third resolves callees through those bindings.

mod bindings;
mod calls;
mod lines;
mod resolve;
mod scope;

use std::fmt;

use oxc_ast::ast::Program;
use oxc_parser::Parser;
use oxc_span::SourceType;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::advisory::{Advisory, ExportPath};
use crate::project::SourceSet;

pub use lines::LineIndex;
pub use oxc_allocator::Allocator;
pub use scope::{ScopeId, ScopeTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingKind {
    CjsRequire,
    EsmDefault,
    EsmNamed,
    EsmNamespace,
    Alias,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportBinding {
    pub local_name: String,
    pub package: String,
    pub path: ExportPath,
    pub kind: BindingKind,
    pub declaring_scope: ScopeId,
    pub file: String,
    pub line: u32,
    /// `import * as ns`: the namespace object itself is not callable.
    pub namespace_object: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CallSite {
    pub file: String,
    pub line: u32,
    pub column: u32,
    #[serde(rename = "path", serialize_with = "path_to_str")]
    pub resolved_path: ExportPath,
    /// Always equal to `resolved_path`; not serialized.
    #[serde(skip)]
    pub matched_symbol: ExportPath,
    pub snippet: String,
}

fn path_to_str<S: serde::Serializer>(path: &ExportPath, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(path)
}

impl<'de> Deserialize<'de> for CallSite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            file: String,
            line: u32,
            column: u32,
            path: String,
            snippet: String,
        }
        let raw = Raw::deserialize(d)?;
        let path = ExportPath::parse(&raw.path)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid export path `{}`", raw.path)))?;
        Ok(CallSite {
            file: raw.file,
            line: raw.line,
            column: raw.column,
            resolved_path: path.clone(),
            matched_symbol: path,
            snippet: raw.snippet,
        })
    }
}

/// A located diagnostic about something the analysis did not follow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Warning {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.file, self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path, self.line, self.column, self.message)
    }
}

/// Bindings of one package in one file.
#[derive(Debug, Clone, Default)]
pub struct FileBindings {
    pub bindings: Vec<ImportBinding>,
    /// Syntactic imports of the package, including binding-less ones.
    pub import_sites: usize,
    pub warnings: Vec<Warning>,
}

pub struct ParsedModule<'a> {
    pub program: Program<'a>,
    pub source: &'a str,
    pub path: String,
    pub scopes: ScopeTree,
    pub lines: LineIndex,
}

impl ParsedModule<'_> {
    pub fn line_col(&self, offset: u32) -> (u32, u32) {
        self.lines.line_col(self.source, offset)
    }

    fn warning(&self, offset: u32, message: String) -> Warning {
        let (line, column) = self.line_col(offset);
        Warning {
            file: self.path.clone(),
            line,
            column,
            message,
        }
    }
}

/// Parses `text` as the module at `path`. `.mjs` is parsed as ESM, `.cjs`
/// as CommonJS; anything else as ESM or script depending on its contents,
/// falling back to CommonJS.
pub fn parse_module<'a>(alloc: &'a Allocator, path: &str, text: &'a str) -> Result<ParsedModule<'a>, ParseFailure> {
    let lines = LineIndex::new(text);
    let attempts: &[SourceType] = if path.ends_with(".mjs") {
        &[SourceType::mjs()]
    } else if path.ends_with(".cjs") {
        &[SourceType::cjs()]
    } else {
        &[SourceType::unambiguous(), SourceType::cjs()]
    };
    let mut first_error = None;
    for &source_type in attempts {
        let ret = Parser::new(alloc, text, source_type).parse();
        if !ret.fatal_error && ret.diagnostics.is_empty() {
            let scopes = ScopeTree::build(&ret.program);
            return Ok(ParsedModule {
                program: ret.program,
                source: text,
                path: path.to_string(),
                scopes,
                lines,
            });
        }
        if first_error.is_none() {
            let (offset, message) = match ret.diagnostics.first() {
                Some(d) => (d.labels.first().map_or(0, |l| l.offset()), d.message.to_string()),
                None => (0, "parser gave up".to_string()),
            };
            first_error = Some((offset, message));
        }
    }
    let (offset, message) = first_error.unwrap_or((0, "parser gave up".to_string()));
    let (line, column) = lines.line_col(text, offset);
    Err(ParseFailure {
        path: path.to_string(),
        line,
        column,
        message,
    })
}

pub fn extract_bindings(module: &ParsedModule<'_>, package: &str) -> FileBindings {
    let mut result = bindings::collect(module, package);
    result.warnings.sort();
    result.warnings.dedup();
    result
}

pub fn extract_calls(module: &ParsedModule<'_>, bindings: &FileBindings, advisory: &Advisory) -> (Vec<CallSite>, Vec<Warning>) {
    let (mut sites, mut warnings) = calls::collect(module, bindings, advisory);
    sites.sort_by_key(|s| (s.line, s.column));
    sites.dedup();
    warnings.sort();
    warnings.dedup();
    (sites, warnings)
}

/// One file's results for one advisory.
#[derive(Debug, Clone, Default)]
pub struct FileScan {
    pub path: String,
    pub bindings: Vec<ImportBinding>,
    pub import_sites: usize,
    pub calls: Vec<CallSite>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Default)]
pub struct ProjectScan {
    /// Successfully parsed files, in source-set order.
    pub files: Vec<FileScan>,
    pub parse_failures: Vec<ParseFailure>,
}

impl ProjectScan {
    pub fn call_sites(&self) -> impl Iterator<Item = &CallSite> {
        self.files.iter().flat_map(|f| f.calls.iter())
    }

    pub fn bindings(&self) -> impl Iterator<Item = &ImportBinding> {
        self.files.iter().flat_map(|f| f.bindings.iter())
    }

    pub fn import_sites(&self) -> usize {
        self.files.iter().map(|f| f.import_sites).sum()
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Warning> {
        self.files.iter().flat_map(|f| f.warnings.iter())
    }

    pub fn parsed_files(&self) -> usize {
        self.files.len()
    }
}

enum FileOutcome {
    Parsed(Vec<FileScan>),
    Failed(ParseFailure),
}

fn scan_file(path: &str, text: &str, advisories: &[&Advisory]) -> FileOutcome {
    let alloc = Allocator::default();
    let module = match parse_module(&alloc, path, text) {
        Ok(module) => module,
        Err(failure) => return FileOutcome::Failed(failure),
    };
    let mut by_package: Vec<(&str, FileBindings)> = Vec::new();
    let scans = advisories
        .iter()
        .map(|advisory| {
            let package = advisory.package.as_str();
            let index = match by_package.iter().position(|(p, _)| *p == package) {
                Some(i) => i,
                None => {
                    // Files that never mention the package cannot import it.
                    let bindings = if text.contains(package) {
                        extract_bindings(&module, package)
                    } else {
                        FileBindings::default()
                    };
                    by_package.push((package, bindings));
                    by_package.len() - 1
                }
            };
            let bindings = &by_package[index].1;
            let (calls, call_warnings) = if bindings.bindings.is_empty() && bindings.import_sites == 0 {
                (Vec::new(), Vec::new())
            } else {
                extract_calls(&module, bindings, advisory)
            };
            let mut warnings = bindings.warnings.clone();
            warnings.extend(call_warnings);
            warnings.sort();
            warnings.dedup();
            FileScan {
                path: path.to_string(),
                bindings: bindings.bindings.clone(),
                import_sites: bindings.import_sites,
                calls,
                warnings,
            }
        })
        .collect();
    FileOutcome::Parsed(scans)
}

/// Scans every file of `sources` for each advisory, parsing each file once.
/// Results come back in advisory order; within each, files keep source-set
/// order regardless of `jobs`.
pub fn scan_project_multi(sources: &SourceSet, advisories: &[&Advisory], jobs: usize) -> Vec<ProjectScan> {
    let scan = |file: &crate::project::SourceFile| scan_file(&file.path, &file.text, advisories);
    let outcomes: Vec<FileOutcome> = if jobs > 1 && sources.files.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| sources.files.par_iter().map(scan).collect()),
            Err(_) => sources.files.iter().map(scan).collect(),
        }
    } else {
        sources.files.iter().map(scan).collect()
    };
    let mut scans = vec![ProjectScan::default(); advisories.len()];
    for outcome in outcomes {
        match outcome {
            FileOutcome::Parsed(per_advisory) => {
                for (scan, file) in scans.iter_mut().zip(per_advisory) {
                    scan.files.push(file);
                }
            }
            FileOutcome::Failed(failure) => {
                for scan in &mut scans {
                    scan.parse_failures.push(failure.clone());
                }
            }
        }
    }
    scans
}

pub fn scan_project(sources: &SourceSet, advisory: &Advisory, jobs: usize) -> ProjectScan {
    scan_project_multi(sources, &[advisory], jobs).pop().unwrap_or_default()
}
