//! Helpers shared by the integration test targets.
#![allow(dead_code)]

pub mod exposure;
pub mod fixtures;
pub mod semver_universe;

use std::fs;
use std::path::Path;

use depreach::advisory::{Advisory, ExportPath};
use depreach::classify::{Evidence, Verdict};
use depreach::extract::{extract_bindings, extract_calls, parse_module, Allocator, CallSite, FileBindings};
use depreach::semver::VersionRange;

use fixtures::Fixture;

pub fn advisory(id: &str, package: &str, affected: &str, symbols: &[&str]) -> Advisory {
    Advisory {
        id: id.to_string(),
        package: package.to_string(),
        affected: VersionRange::parse(affected).expect("fixture range"),
        affected_text: affected.to_string(),
        symbols: symbols.iter().map(|s| ExportPath::parse(s).expect("fixture symbol")).collect(),
        fixed: None,
    }
}

/// Bindings and call sites the extractor reports for a fixture.
pub fn run_fixture(f: &Fixture) -> (FileBindings, Vec<CallSite>) {
    let alloc = Allocator::default();
    let module = parse_module(&alloc, f.file, f.source).unwrap_or_else(|e| panic!("{}: {e}", f.name));
    let bindings = extract_bindings(&module, f.package);
    let (calls, _) = extract_calls(&module, &bindings, &advisory("FIXTURE", f.package, "*", f.symbols));
    (bindings, calls)
}

/// Compares a fixture's call sites with its annotation; `Err` describes
/// the first mismatch.
pub fn check_fixture(f: &Fixture) -> Result<(), String> {
    let (_, calls) = run_fixture(f);
    let got: Vec<(u32, String)> = calls.iter().map(|c| (c.line, c.resolved_path.to_string())).collect();
    let want: Vec<(u32, String)> = f.expected.iter().map(|&(l, p)| (l, p.to_string())).collect();
    if got != want {
        return Err(format!("{}: expected {want:?}, got {got:?}", f.name));
    }
    for c in &calls {
        if c.resolved_path != c.matched_symbol {
            return Err(format!("{}: resolved path differs from matched symbol", f.name));
        }
        let line = f.source.lines().nth(c.line as usize - 1).unwrap_or_default();
        let rest: String = line.chars().skip(c.column as usize - 1).collect();
        if !rest.starts_with(&c.snippet) {
            return Err(format!("{}: column {} does not point at `{}`", f.name, c.column, c.snippet));
        }
    }
    Ok(())
}

/// Verdict expected for each evidence combination, written out as a table
/// rather than derived from the decision order.
pub fn truth_table_oracle(e: Evidence) -> Verdict {
    match (e.manifest_present, e.declared, e.imports, e.calls, e.all_parse_failed) {
        (false, _, _, _, _) => Verdict::NoData,
        (true, true, _, _, true) => Verdict::NoData,
        (true, false, false, _, _) => Verdict::NotListed,
        (true, true, _, true, false) => Verdict::Reached,
        (true, false, true, true, _) => Verdict::Reached,
        (true, true, true, false, false) => Verdict::Clean,
        (true, false, true, false, _) => Verdict::Clean,
        (true, true, false, false, false) => Verdict::ListedOnly,
    }
}

pub fn all_evidence() -> Vec<Evidence> {
    let mut out = Vec::new();
    for bits in 0u8..32 {
        let bit = |i: u8| bits & (1 << i) != 0;
        out.push(Evidence {
            manifest_present: bit(0),
            declared: bit(1),
            imports: bit(2),
            calls: bit(3),
            all_parse_failed: bit(4),
        });
    }
    out
}

pub fn write(root: &Path, rel: &str, contents: &str) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().expect("has parent")).expect("create dirs");
    fs::write(path, contents).expect("write fixture file");
}

/// A project declaring `package` at `spec`, with an optional installed
/// version under node_modules.
pub fn project(root: &Path, package: &str, spec: &str, installed: Option<&str>) {
    write(
        root,
        "package.json",
        &format!(r#"{{"name":"fixture","dependencies":{{"{package}":"{spec}"}}}}"#),
    );
    if let Some(v) = installed {
        write(root, &format!("node_modules/{package}/package.json"), &format!(r#"{{"name":"{package}","version":"{v}"}}"#));
    }
}

/// Writes `files` JavaScript modules of roughly `bytes_per_file` bytes each,
/// mixing CommonJS and ESM imports of lodash, calls to several exports, and
/// unrelated code.
pub fn synthetic_project(root: &Path, files: usize, bytes_per_file: usize) {
    project(root, "lodash", "^4.17.0", Some("4.17.4"));
    for i in 0..files {
        let mut text = String::new();
        if i % 2 == 0 {
            text.push_str("const _ = require('lodash');\nconst { merge: m } = require('lodash');\n");
        } else {
            text.push_str("import _ from 'lodash';\nimport { merge as m } from 'lodash';\n");
        }
        let mut n = 0;
        while text.len() < bytes_per_file {
            text.push_str(&format!(
                concat!(
                    "function handler{n}(req, res) {{\n",
                    "  const body = req.body || {{}};\n",
                    "  const out = _.map(body.items, (x) => x * {n});\n",
                    "  if (body.deep) {{ return m({{}}, body, {{ n: {n} }}); }}\n",
                    "  // _.merge(ignored)\n",
                    "  return res.send(_.pick(out, ['a', 'b']), \"label {n}\");\n",
                    "}}\n",
                ),
                n = n
            ));
            n += 1;
        }
        if i % 2 == 0 {
            write(root, &format!("src/mod{i:04}.js"), &text);
        } else {
            write(root, &format!("src/mod{i:04}.mjs"), &text);
        }
    }
}

/// Prints one acceptance line and records the outcome.
pub struct Gate {
    failures: Vec<String>,
}

impl Gate {
    pub fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    pub fn record(&mut self, number: u32, name: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("PASS criterion {number} ({name}): {detail}"),
            Err(detail) => {
                println!("FAIL criterion {number} ({name}): {detail}");
                self.failures.push(format!("{number} {name}"));
            }
        }
    }

    pub fn finish(self) {
        assert!(self.failures.is_empty(), "failed criteria: {:?}", self.failures);
    }
}
