use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::SemverError;

/// One dot-separated prerelease identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Identifier {
    Numeric(u64),
    AlphaNumeric(String),
}

impl Ord for Identifier {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Identifier::Numeric(a), Identifier::Numeric(b)) => a.cmp(b),
            (Identifier::Numeric(_), Identifier::AlphaNumeric(_)) => Ordering::Less,
            (Identifier::AlphaNumeric(_), Identifier::Numeric(_)) => Ordering::Greater,
            (Identifier::AlphaNumeric(a), Identifier::AlphaNumeric(b)) => a.as_bytes().cmp(b.as_bytes()),
        }
    }
}

impl PartialOrd for Identifier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identifier::Numeric(n) => write!(f, "{n}"),
            Identifier::AlphaNumeric(s) => f.write_str(s),
        }
    }
}

/// A concrete semantic version.
///
/// Equality and ordering follow SemVer precedence, so two versions that
/// differ only in build metadata compare equal.
#[derive(Debug, Clone)]
pub struct Version {
    pub major: u64,
    pub minor: u64,
    pub patch: u64,
    pub prerelease: Vec<Identifier>,
    pub build: Vec<String>,
}

impl Version {
    pub const fn new(major: u64, minor: u64, patch: u64) -> Self {
        Version {
            major,
            minor,
            patch,
            prerelease: Vec::new(),
            build: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, SemverError> {
        parse_version(text)
    }

    pub fn is_prerelease(&self) -> bool {
        !self.prerelease.is_empty()
    }

    /// The `(major, minor, patch)` triple.
    pub fn core(&self) -> (u64, u64, u64) {
        (self.major, self.minor, self.patch)
    }

    pub(crate) fn with_prerelease(mut self, prerelease: Vec<Identifier>) -> Self {
        self.prerelease = prerelease;
        self
    }
}

/// SemVer precedence.
pub fn compare(a: &Version, b: &Version) -> Ordering {
    a.core().cmp(&b.core()).then_with(|| {
        match (a.prerelease.is_empty(), b.prerelease.is_empty()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            // Slice ordering is lexicographic with a shorter prefix sorting first.
            (false, false) => a.prerelease.as_slice().cmp(b.prerelease.as_slice()),
        }
    })
}

impl PartialEq for Version {
    fn eq(&self, other: &Self) -> bool {
        compare(self, other) == Ordering::Equal
    }
}

impl Eq for Version {}

impl Ord for Version {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for Version {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Version {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.core().hash(state);
        self.prerelease.hash(state);
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.major, self.minor, self.patch)?;
        if !self.prerelease.is_empty() {
            f.write_str("-")?;
            write_dotted(f, &self.prerelease)?;
        }
        if !self.build.is_empty() {
            f.write_str("+")?;
            write_dotted(f, &self.build)?;
        }
        Ok(())
    }
}

fn write_dotted<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl FromStr for Version {
    type Err = SemverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_version(s)
    }
}

/// Parses a concrete version. One leading `v` or `=` is tolerated.
pub fn parse_version(text: &str) -> Result<Version, SemverError> {
    let mut cursor = Cursor::new(text);
    if matches!(cursor.peek(), Some('v' | '=')) {
        cursor.bump();
    }
    let version = cursor.version()?;
    cursor.expect_end()?;
    Ok(version)
}

/// Byte-position scanner shared by the version and range parsers.
pub(crate) struct Cursor<'s> {
    text: &'s str,
    pos: usize,
}

impl<'s> Cursor<'s> {
    pub(crate) fn new(text: &'s str) -> Self {
        Cursor { text, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn rewind(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub(crate) fn text(&self) -> &'s str {
        self.text
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn peek_str(&self, s: &str) -> bool {
        self.text[self.pos..].starts_with(s)
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.pos > start
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SemverError {
        SemverError::new(self.text, self.pos, message)
    }

    pub(crate) fn expect_end(&self) -> Result<(), SemverError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
        }
    }

    /// A numeric component without leading zeros.
    pub(crate) fn number(&mut self) -> Result<u64, SemverError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.text[start..self.pos];
        if digits.is_empty() {
            self.pos = start;
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected a number, found `{c}`")),
                None => self.error("expected a number, found end of input"),
            });
        }
        if digits.len() > 1 && digits.starts_with('0') {
            self.pos = start;
            return Err(self.error("leading zero in numeric component"));
        }
        digits
            .parse()
            .map_err(|_| SemverError::new(self.text, start, "numeric component overflows u64"))
    }

    pub(crate) fn version(&mut self) -> Result<Version, SemverError> {
        let major = self.number()?;
        self.dot()?;
        let minor = self.number()?;
        self.dot()?;
        let patch = self.number()?;
        let (prerelease, build) = self.qualifiers()?;
        Ok(Version {
            major,
            minor,
            patch,
            prerelease,
            build,
        })
    }

    fn dot(&mut self) -> Result<(), SemverError> {
        if self.eat(".") {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(c) => self.error(format!("expected `.`, found `{c}`")),
                None => self.error("expected `.`, found end of input"),
            })
        }
    }

    /// Optional `-prerelease` and `+build` suffixes.
    pub(crate) fn qualifiers(&mut self) -> Result<(Vec<Identifier>, Vec<String>), SemverError> {
        let mut prerelease = Vec::new();
        let mut build = Vec::new();
        if self.eat("-") {
            loop {
                prerelease.push(self.prerelease_identifier()?);
                if !self.eat(".") {
                    break;
                }
            }
        }
        if self.eat("+") {
            loop {
                build.push(self.raw_identifier()?.to_string());
                if !self.eat(".") {
                    break;
                }
            }
        }
        Ok((prerelease, build))
    }

    fn raw_identifier(&mut self) -> Result<&'s str, SemverError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected an identifier, found `{c}`")),
                None => self.error("expected an identifier, found end of input"),
            });
        }
        Ok(&self.text[start..self.pos])
    }

    fn prerelease_identifier(&mut self) -> Result<Identifier, SemverError> {
        let start = self.pos;
        let raw = self.raw_identifier()?;
        if raw.bytes().all(|b| b.is_ascii_digit()) {
            if raw.len() > 1 && raw.starts_with('0') {
                return Err(SemverError::new(self.text, start, "leading zero in numeric prerelease identifier"));
            }
            raw.parse()
                .map(Identifier::Numeric)
                .map_err(|_| SemverError::new(self.text, start, "numeric prerelease identifier overflows u64"))
        } else {
            Ok(Identifier::AlphaNumeric(raw.to_string()))
        }
    }
}
