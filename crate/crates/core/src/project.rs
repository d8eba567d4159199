//! Client project inspection: manifest, installed dependency versions and
//! the set of JavaScript sources to scan.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;
use walkdir::WalkDir;

use crate::advisory::Advisory;
use crate::semver::{parse_range, parse_version, Version, VersionRange};

/// Files above this size are not parsed.
pub const MAX_SOURCE_BYTES: u64 = 2 * 1024 * 1024;

const SOURCE_EXTENSIONS: [&str; 3] = ["js", "mjs", "cjs"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectManifest {
    pub name: String,
    /// `dependencies` merged over `devDependencies`, keys lowercased.
    pub declared_dependencies: BTreeMap<String, String>,
    pub root: PathBuf,
}

impl ProjectManifest {
    pub fn declares(&self, package: &str) -> bool {
        self.declared_dependencies.contains_key(&package.to_lowercase())
    }
}

/// Result of looking for `package.json`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestOutcome {
    Present(ProjectManifest),
    Absent { diagnostic: String },
}

impl ManifestOutcome {
    pub fn manifest(&self) -> Option<&ProjectManifest> {
        match self {
            ManifestOutcome::Present(m) => Some(m),
            ManifestOutcome::Absent { .. } => None,
        }
    }
}

pub fn read_manifest(root: &Path) -> ManifestOutcome {
    let path = root.join("package.json");
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return ManifestOutcome::Absent {
                diagnostic: format!("no package.json at {}", root.display()),
            }
        }
        Err(e) => {
            return ManifestOutcome::Absent {
                diagnostic: format!("unreadable package.json at {}: {e}", root.display()),
            }
        }
    };
    let document: Value = match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Value::Object(map),
        Ok(_) => {
            return ManifestOutcome::Absent {
                diagnostic: format!("package.json at {} is not a JSON object", root.display()),
            }
        }
        Err(e) => {
            return ManifestOutcome::Absent {
                diagnostic: format!("unparseable package.json at {}: {e}", root.display()),
            }
        }
    };

    let mut declared = BTreeMap::new();
    // Later inserts win, so `dependencies` goes last.
    for section in ["devDependencies", "dependencies"] {
        if let Some(Value::Object(deps)) = document.get(section) {
            for (name, spec) in deps {
                if let Value::String(spec) = spec {
                    declared.insert(name.to_lowercase(), spec.clone());
                }
            }
        }
    }
    let name = document
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    ManifestOutcome::Present(ProjectManifest {
        name,
        declared_dependencies: declared,
        root: root.to_path_buf(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyResolution {
    pub package: String,
    pub declared_specifier: Option<String>,
    pub declared_range: Option<VersionRange>,
    pub installed_version: Option<Version>,
    pub resolvable: bool,
    pub unresolvable_reason: Option<String>,
}

impl DependencyResolution {
    pub fn is_declared(&self) -> bool {
        self.declared_specifier.is_some()
    }
}

pub fn resolve_dependency(manifest: &ProjectManifest, package: &str, _advisory: &Advisory) -> DependencyResolution {
    resolve_package(manifest, package)
}

/// Resolution for a package independent of any advisory.
pub fn resolve_package(manifest: &ProjectManifest, package: &str) -> DependencyResolution {
    let package = package.to_lowercase();
    let declared_specifier = manifest.declared_dependencies.get(&package).cloned();
    let (declared_range, unresolvable_reason) = match &declared_specifier {
        None => (None, Some("not declared".to_string())),
        Some(spec) => match parse_range(spec.trim()) {
            Ok(range) => (Some(range), None),
            Err(_) => (None, Some("non-semver specifier".to_string())),
        },
    };
    DependencyResolution {
        installed_version: installed_version(&manifest.root, &package),
        resolvable: declared_range.is_some(),
        package,
        declared_specifier,
        declared_range,
        unresolvable_reason,
    }
}

/// `version` from `<root>/node_modules/<package>/package.json`, if that
/// file exists, parses, and holds a valid version.
pub fn installed_version(root: &Path, package: &str) -> Option<Version> {
    let mut path = root.join("node_modules");
    for part in package.split('/') {
        path.push(part);
    }
    path.push("package.json");
    let text = fs::read_to_string(path).ok()?;
    let document: Value = serde_json::from_str(&text).ok()?;
    parse_version(document.get("version")?.as_str()?).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Relative to the project root, `/`-separated.
    pub path: String,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceSet {
    pub files: Vec<SourceFile>,
    pub skipped: Vec<(String, String)>,
}

impl SourceSet {
    pub fn paths(&self) -> Vec<&str> {
        self.files.iter().map(|f| f.path.as_str()).collect()
    }

    /// Skipped entries whose reason is a read or decode failure.
    pub fn decode_failures(&self) -> impl Iterator<Item = &(String, String)> {
        self.skipped.iter().filter(|(_, reason)| reason != SIZE_LIMIT)
    }
}

pub const SIZE_LIMIT: &str = "size limit";

#[derive(Debug, thiserror::Error)]
#[error("cannot read project root {path}: {source}")]
pub struct DiscoverError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn excluded_dir(name: &str, depth: usize) -> bool {
    name == "node_modules" || name == ".git" || (depth == 1 && (name == "dist" || name == "build"))
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

pub fn discover_sources(root: &Path) -> Result<SourceSet, DiscoverError> {
    let meta = fs::metadata(root).map_err(|source| DiscoverError {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(DiscoverError {
            path: root.to_path_buf(),
            source: io::Error::new(io::ErrorKind::NotADirectory, "not a directory"),
        });
    }
    fs::read_dir(root).map_err(|source| DiscoverError {
        path: root.to_path_buf(),
        source,
    })?;

    let mut set = SourceSet::default();
    let walker = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| {
            !(e.depth() > 0 && e.file_type().is_dir() && excluded_dir(&e.file_name().to_string_lossy(), e.depth()))
        });
    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(e) => {
                let path = e.path().map(|p| relative(root, p)).unwrap_or_default();
                set.skipped.push((path, format!("unreadable: {e}")));
                continue;
            }
        };
        let path = entry.path();
        let is_source = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| SOURCE_EXTENSIONS.contains(&e));
        if !is_source || entry.file_type().is_dir() {
            continue;
        }
        let rel = relative(root, path);
        if entry.file_type().is_symlink() {
            set.skipped.push((rel, "symlink not followed".to_string()));
            continue;
        }
        match entry.metadata() {
            Ok(m) if m.len() > MAX_SOURCE_BYTES => {
                set.skipped.push((rel, SIZE_LIMIT.to_string()));
                continue;
            }
            Ok(_) => {}
            Err(e) => {
                set.skipped.push((rel, format!("unreadable: {e}")));
                continue;
            }
        }
        match fs::read(path) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => set.files.push(SourceFile { path: rel, text }),
                Err(_) => set.skipped.push((rel, "invalid UTF-8".to_string())),
            },
            Err(e) => set.skipped.push((rel, format!("unreadable: {e}"))),
        }
    }
    set.files.sort_by(|a, b| a.path.cmp(&b.path));
    set.skipped.sort();
    Ok(set)
}
