//! Curated advisories: which package, which versions, which exported
//! functions.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::semver::{parse_range, parse_version, satisfies, Version, VersionRange};

/// Property path from a package's root export to a function. The empty
/// path is the root export itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExportPath {
    segments: Vec<String>,
}

impl ExportPath {
    pub fn root() -> Self {
        ExportPath::default()
    }

    /// Panics if a segment is empty or contains a `.`.
    pub fn new<S: Into<String>>(segments: impl IntoIterator<Item = S>) -> Self {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        for s in &segments {
            assert!(!s.is_empty() && !s.contains('.'), "invalid export path segment {s:?}");
        }
        ExportPath { segments }
    }

    /// Surface syntax: `"."` is the root, otherwise dot-separated names.
    pub fn parse(text: &str) -> Option<Self> {
        if text == "." {
            return Some(ExportPath::root());
        }
        let segments: Vec<String> = text.split('.').map(str::to_string).collect();
        if segments.iter().any(|s| s.is_empty() || s.chars().any(char::is_whitespace)) {
            return None;
        }
        Some(ExportPath { segments })
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn is_root(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn child(&self, segment: &str) -> Self {
        let mut segments = self.segments.clone();
        segments.push(segment.to_string());
        ExportPath { segments }
    }

    pub fn join(&self, tail: &[String]) -> Self {
        let mut segments = self.segments.clone();
        segments.extend(tail.iter().cloned());
        ExportPath { segments }
    }
}

impl fmt::Display for ExportPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            f.write_str(".")
        } else {
            f.write_str(&self.segments.join("."))
        }
    }
}

impl Serialize for ExportPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Advisory {
    pub id: String,
    pub package: String,
    pub affected: VersionRange,
    /// Range text as written in the source document.
    pub affected_text: String,
    pub symbols: Vec<ExportPath>,
    pub fixed: Option<Version>,
}

impl Advisory {
    pub fn affects(&self, version: &Version) -> bool {
        satisfies(version, &self.affected)
    }
}

impl Serialize for Advisory {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let fields = if self.fixed.is_some() { 5 } else { 4 };
        let mut s = serializer.serialize_struct("Advisory", fields)?;
        s.serialize_field("id", &self.id)?;
        s.serialize_field("package", &self.package)?;
        s.serialize_field("affected", &self.affected_text)?;
        s.serialize_field("symbols", &self.symbols)?;
        if let Some(fixed) = &self.fixed {
            s.serialize_field("fixed", &fixed.to_string())?;
        }
        s.end()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AdvisoryError {
    #[error("advisory document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("failed to read advisory document: {0}")]
    Io(#[from] std::io::Error),
    #[error("advisory document must be an object or an array of objects")]
    TopLevel,
    #[error("advisory {id}: field `{field}`: {message}")]
    Field { id: String, field: String, message: String },
    #[error("duplicate advisory id `{0}`")]
    DuplicateId(String),
}

/// How unknown fields in advisory objects are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

const KNOWN_FIELDS: [&str; 5] = ["id", "package", "affected", "symbols", "fixed"];

/// Loaded and validated advisories, ordered by id.
#[derive(Debug, Clone, Default)]
pub struct AdvisoryStore {
    advisories: Vec<Advisory>,
    warnings: Vec<String>,
}

impl AdvisoryStore {
    pub fn new(mut advisories: Vec<Advisory>) -> Self {
        advisories.sort_by(|a, b| a.id.cmp(&b.id));
        AdvisoryStore {
            advisories,
            warnings: Vec::new(),
        }
    }

    pub fn advisories(&self) -> &[Advisory] {
        &self.advisories
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn get(&self, id: &str) -> Option<&Advisory> {
        self.advisories
            .binary_search_by(|a| a.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.advisories[i])
    }

    pub fn find_advisories_for(&self, package: &str) -> Vec<&Advisory> {
        find_advisories_for(package, self)
    }

    /// Distinct package names, sorted.
    pub fn packages(&self) -> BTreeSet<&str> {
        self.advisories.iter().map(|a| a.package.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.advisories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.advisories.is_empty()
    }

    /// The store as an advisory JSON document (array form).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.advisories).expect("advisories serialize")
    }
}

pub fn find_advisories_for<'s>(package: &str, store: &'s AdvisoryStore) -> Vec<&'s Advisory> {
    let wanted = package.to_lowercase();
    store.advisories.iter().filter(|a| a.package == wanted).collect()
}

pub fn load_advisories<R: Read>(mut source: R, strictness: Strictness) -> Result<AdvisoryStore, AdvisoryError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_advisories(&text, strictness)
}

pub fn parse_advisories(text: &str, strictness: Strictness) -> Result<AdvisoryStore, AdvisoryError> {
    let document: Value = serde_json::from_str(text)?;
    let objects = match document {
        Value::Array(items) => items,
        obj @ Value::Object(_) => vec![obj],
        _ => return Err(AdvisoryError::TopLevel),
    };

    let mut advisories = Vec::with_capacity(objects.len());
    let mut warnings = Vec::new();
    let mut seen = BTreeSet::new();
    for (index, value) in objects.into_iter().enumerate() {
        let Value::Object(object) = value else {
            return Err(AdvisoryError::TopLevel);
        };
        let advisory = parse_one(index, &object, strictness, &mut warnings)?;
        if !seen.insert(advisory.id.clone()) {
            return Err(AdvisoryError::DuplicateId(advisory.id));
        }
        advisories.push(advisory);
    }

    let mut store = AdvisoryStore::new(advisories);
    store.warnings = warnings;
    Ok(store)
}

fn field_error(id: &str, field: &str, message: impl Into<String>) -> AdvisoryError {
    AdvisoryError::Field {
        id: id.to_string(),
        field: field.to_string(),
        message: message.into(),
    }
}

fn required_str<'v>(object: &'v Map<String, Value>, id: &str, field: &str) -> Result<&'v str, AdvisoryError> {
    match object.get(field) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(field_error(id, field, "expected a string")),
        None => Err(field_error(id, field, "missing required field")),
    }
}

fn parse_one(
    index: usize,
    object: &Map<String, Value>,
    strictness: Strictness,
    warnings: &mut Vec<String>,
) -> Result<Advisory, AdvisoryError> {
    let placeholder = format!("#{index}");
    let id = required_str(object, &placeholder, "id")?.to_string();
    if id.trim().is_empty() {
        return Err(field_error(&placeholder, "id", "must not be empty"));
    }

    for key in object.keys() {
        if KNOWN_FIELDS.contains(&key.as_str()) {
            continue;
        }
        match strictness {
            Strictness::Strict => return Err(field_error(&id, key, "unknown field")),
            Strictness::Lenient => warnings.push(format!("advisory {id}: ignoring unknown field `{key}`")),
        }
    }

    let raw_package = required_str(object, &id, "package")?;
    validate_package_name(raw_package).map_err(|m| field_error(&id, "package", m))?;
    let package = raw_package.to_lowercase();
    if package != raw_package {
        warnings.push(format!("advisory {id}: package name `{raw_package}` lowercased to `{package}`"));
    }

    let affected_text = required_str(object, &id, "affected")?.to_string();
    let affected = parse_range(&affected_text).map_err(|e| field_error(&id, "affected", e.to_string()))?;

    let symbols = match object.get("symbols") {
        Some(Value::Array(items)) => {
            let mut symbols: Vec<ExportPath> = Vec::with_capacity(items.len());
            for item in items {
                let Value::String(text) = item else {
                    return Err(field_error(&id, "symbols", "expected an array of strings"));
                };
                let path = ExportPath::parse(text)
                    .ok_or_else(|| field_error(&id, "symbols", format!("malformed symbol `{text}`")))?;
                if !symbols.contains(&path) {
                    symbols.push(path);
                }
            }
            symbols
        }
        Some(_) => return Err(field_error(&id, "symbols", "expected an array of strings")),
        None => return Err(field_error(&id, "symbols", "missing required field")),
    };
    if symbols.is_empty() {
        return Err(field_error(&id, "symbols", "at least one symbol is required"));
    }

    let fixed = match object.get("fixed") {
        None | Some(Value::Null) => None,
        Some(Value::String(text)) => {
            let version = parse_version(text).map_err(|e| field_error(&id, "fixed", e.to_string()))?;
            if satisfies(&version, &affected) {
                return Err(field_error(
                    &id,
                    "fixed",
                    format!("fixed version {version} lies inside the affected range `{affected_text}`"),
                ));
            }
            Some(version)
        }
        Some(_) => return Err(field_error(&id, "fixed", "expected a string")),
    };

    Ok(Advisory {
        id,
        package,
        affected,
        affected_text,
        symbols,
        fixed,
    })
}

/// npm package names: `name` or `@scope/name`, no whitespace.
pub fn validate_package_name(name: &str) -> Result<(), String> {
    if name.is_empty() {
        return Err("package name must not be empty".into());
    }
    if name.chars().any(|c| c.is_whitespace() || c.is_control()) {
        return Err(format!("package name `{name}` contains whitespace"));
    }
    let parts: Vec<&str> = name.split('/').collect();
    let ok = match parts.as_slice() {
        [single] => !single.starts_with('@') && !single.starts_with('.'),
        [scope, bare] => scope.len() > 1 && scope.starts_with('@') && !bare.is_empty() && !bare.starts_with('.'),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("`{name}` is not a valid npm package name"))
    }
}
