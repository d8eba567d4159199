use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::version::{Cursor, Identifier, Version};
use super::SemverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::Eq => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Comparator {
    pub op: Op,
    pub version: Version,
}

impl Comparator {
    pub fn new(op: Op, version: Version) -> Self {
        Comparator { op, version }
    }

    pub fn matches(&self, v: &Version) -> bool {
        let ord = v.cmp(&self.version);
        match self.op {
            Op::Lt => ord.is_lt(),
            Op::Le => ord.is_le(),
            Op::Gt => ord.is_gt(),
            Op::Ge => ord.is_ge(),
            Op::Eq => ord.is_eq(),
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.op.symbol(), self.version)
    }
}

/// A conjunction of comparators. Empty means "any release version".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ComparatorSet {
    pub comparators: Vec<Comparator>,
}

impl ComparatorSet {
    pub fn new(comparators: Vec<Comparator>) -> Self {
        ComparatorSet { comparators }
    }

    /// npm matching: every comparator holds, and a prerelease version is
    /// only admitted when some comparator names a prerelease of the same
    /// `major.minor.patch`.
    pub fn matches(&self, v: &Version) -> bool {
        if !self.comparators.iter().all(|c| c.matches(v)) {
            return false;
        }
        if !v.is_prerelease() {
            return true;
        }
        self.comparators
            .iter()
            .any(|c| c.version.is_prerelease() && c.version.core() == v.core())
    }

    fn prerelease_cores(&self) -> BTreeSet<(u64, u64, u64)> {
        self.comparators
            .iter()
            .filter(|c| c.version.is_prerelease())
            .map(|c| c.version.core())
            .collect()
    }
}

impl fmt::Display for ComparatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comparators.is_empty() {
            return f.write_str("*");
        }
        for (i, c) in self.comparators.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A disjunction of comparator sets.
///
/// `Display` prints the normalized form, which parses back to an
/// equivalent range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VersionRange {
    pub sets: Vec<ComparatorSet>,
}

impl VersionRange {
    pub fn parse(text: &str) -> Result<Self, SemverError> {
        parse_range(text)
    }

    /// The range that admits exactly one version.
    pub fn exact(version: Version) -> Self {
        VersionRange {
            sets: vec![ComparatorSet::new(vec![Comparator::new(Op::Eq, version)])],
        }
    }

    pub fn satisfied_by(&self, v: &Version) -> bool {
        satisfies(v, self)
    }

    pub fn intersects(&self, other: &VersionRange) -> bool {
        ranges_intersect(self, other)
    }
}

impl fmt::Display for VersionRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, set) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(" || ")?;
            }
            write!(f, "{set}")?;
        }
        Ok(())
    }
}

impl FromStr for VersionRange {
    type Err = SemverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_range(s)
    }
}

pub fn satisfies(v: &Version, range: &VersionRange) -> bool {
    range.sets.iter().any(|set| set.matches(v))
}

/// True iff some version satisfies both ranges.
pub fn ranges_intersect(a: &VersionRange, b: &VersionRange) -> bool {
    a.sets
        .iter()
        .any(|sa| b.sets.iter().any(|sb| sets_intersect(sa, sb)))
}

#[derive(Debug, Clone)]
struct Bound {
    version: Version,
    inclusive: bool,
}

/// Interval of the combined comparators of two sets.
#[derive(Debug, Default)]
struct Interval {
    lower: Option<Bound>,
    upper: Option<Bound>,
}

impl Interval {
    fn raise_lower(&mut self, version: &Version, inclusive: bool) {
        match &mut self.lower {
            Some(b) if *version < b.version => {}
            Some(b) if *version == b.version => b.inclusive &= inclusive,
            _ => {
                self.lower = Some(Bound {
                    version: version.clone(),
                    inclusive,
                })
            }
        }
    }

    fn drop_upper(&mut self, version: &Version, inclusive: bool) {
        match &mut self.upper {
            Some(b) if *version > b.version => {}
            Some(b) if *version == b.version => b.inclusive &= inclusive,
            _ => {
                self.upper = Some(Bound {
                    version: version.clone(),
                    inclusive,
                })
            }
        }
    }

    fn below_upper(&self, v: &Version) -> bool {
        match &self.upper {
            None => true,
            Some(b) => *v < b.version || (b.inclusive && *v == b.version),
        }
    }

    /// Least release version not excluded by the lower bound.
    fn least_release(&self) -> Option<Version> {
        match &self.lower {
            None => Some(Version::new(0, 0, 0)),
            Some(b) if b.version.is_prerelease() => {
                let (major, minor, patch) = b.version.core();
                Some(Version::new(major, minor, patch))
            }
            Some(b) if b.inclusive => Some(Version::new(b.version.major, b.version.minor, b.version.patch)),
            Some(b) => b
                .version
                .patch
                .checked_add(1)
                .map(|patch| Version::new(b.version.major, b.version.minor, patch)),
        }
    }

    /// Least prerelease of `core` not excluded by the lower bound.
    fn least_prerelease_of(&self, core: (u64, u64, u64)) -> Option<Version> {
        let floor = Version::new(core.0, core.1, core.2).with_prerelease(vec![Identifier::Numeric(0)]);
        let Some(b) = &self.lower else {
            return Some(floor);
        };
        if b.version < floor {
            return Some(floor);
        }
        if b.version.core() != core || !b.version.is_prerelease() {
            return None;
        }
        if b.inclusive {
            return Some(b.version.clone());
        }
        // Appending `.0` yields the immediate successor in prerelease order.
        let mut next = b.version.prerelease.clone();
        next.push(Identifier::Numeric(0));
        Some(Version::new(core.0, core.1, core.2).with_prerelease(next))
    }
}

fn sets_intersect(a: &ComparatorSet, b: &ComparatorSet) -> bool {
    let mut interval = Interval::default();
    for c in a.comparators.iter().chain(&b.comparators) {
        match c.op {
            Op::Gt => interval.raise_lower(&c.version, false),
            Op::Ge => interval.raise_lower(&c.version, true),
            Op::Lt => interval.drop_upper(&c.version, false),
            Op::Le => interval.drop_upper(&c.version, true),
            Op::Eq => {
                interval.raise_lower(&c.version, true);
                interval.drop_upper(&c.version, true);
            }
        }
    }

    if let Some(v) = interval.least_release() {
        if interval.below_upper(&v) {
            return true;
        }
    }

    // A prerelease witness must be admitted by both sets' prerelease rule.
    let shared = &a.prerelease_cores() & &b.prerelease_cores();
    shared.into_iter().any(|core| {
        interval
            .least_prerelease_of(core)
            .is_some_and(|v| interval.below_upper(&v))
    })
}

/// A possibly partial version as written in a range: missing or wildcard
/// components are `None`.
#[derive(Debug, Clone)]
struct Partial {
    major: Option<u64>,
    minor: Option<u64>,
    patch: Option<u64>,
    prerelease: Vec<Identifier>,
}

impl Partial {
    fn floor(&self) -> Version {
        Version::new(self.major.unwrap_or(0), self.minor.unwrap_or(0), self.patch.unwrap_or(0))
            .with_prerelease(self.prerelease.clone())
    }
}

fn bump(n: u64, cursor: &Cursor<'_>) -> Result<u64, SemverError> {
    n.checked_add(1)
        .ok_or_else(|| cursor.error("version component overflows when computing range bound"))
}

/// `<0.0.0`: nothing satisfies it.
fn match_nothing() -> Vec<Comparator> {
    vec![Comparator::new(Op::Lt, Version::new(0, 0, 0))]
}

/// First version past everything matched by the partial's wildcard, e.g.
/// `1.2` -> `1.3.0`, `1` -> `2.0.0`. `None` for a full version.
fn wildcard_ceiling(p: &Partial, cursor: &Cursor<'_>) -> Result<Option<Version>, SemverError> {
    Ok(match (p.major, p.minor, p.patch) {
        (Some(major), None, _) => Some(Version::new(bump(major, cursor)?, 0, 0)),
        (Some(major), Some(minor), None) => Some(Version::new(major, bump(minor, cursor)?, 0)),
        _ => None,
    })
}

fn desugar_primitive(op: Option<&str>, p: &Partial, cursor: &Cursor<'_>) -> Result<Vec<Comparator>, SemverError> {
    use Op::*;
    let Some(major) = p.major else {
        return Ok(match op {
            Some(">") | Some("<") => match_nothing(),
            _ => Vec::new(),
        });
    };
    let ceiling = wildcard_ceiling(p, cursor)?;
    Ok(match op {
        None | Some("=") => match ceiling {
            Some(ceiling) => vec![Comparator::new(Ge, p.floor()), Comparator::new(Lt, ceiling)],
            None => vec![Comparator::new(Eq, p.floor())],
        },
        Some(">") => match ceiling {
            Some(ceiling) => vec![Comparator::new(Ge, ceiling)],
            None => vec![Comparator::new(Gt, p.floor())],
        },
        Some(">=") => vec![Comparator::new(Ge, p.floor())],
        Some("<") => vec![Comparator::new(Lt, p.floor())],
        Some("<=") => match ceiling {
            Some(ceiling) => vec![Comparator::new(Lt, ceiling)],
            None => vec![Comparator::new(Le, p.floor())],
        },
        Some("~") | Some("~>") => {
            let upper = match p.minor {
                None => Version::new(bump(major, cursor)?, 0, 0),
                Some(minor) => Version::new(major, bump(minor, cursor)?, 0),
            };
            vec![Comparator::new(Ge, p.floor()), Comparator::new(Lt, upper)]
        }
        Some("^") => {
            let upper = match (major, p.minor, p.patch) {
                (_, None, _) => Version::new(bump(major, cursor)?, 0, 0),
                (0, Some(0), Some(patch)) => Version::new(0, 0, bump(patch, cursor)?),
                (0, Some(minor), _) => Version::new(0, bump(minor, cursor)?, 0),
                _ => Version::new(bump(major, cursor)?, 0, 0),
            };
            vec![Comparator::new(Ge, p.floor()), Comparator::new(Lt, upper)]
        }
        Some(other) => unreachable!("unknown operator {other}"),
    })
}

fn desugar_hyphen(low: &Partial, high: &Partial, cursor: &Cursor<'_>) -> Result<Vec<Comparator>, SemverError> {
    let mut out = Vec::new();
    if low.major.is_some() {
        out.push(Comparator::new(Op::Ge, low.floor()));
    }
    if high.major.is_some() {
        out.push(match wildcard_ceiling(high, cursor)? {
            Some(ceiling) => Comparator::new(Op::Lt, ceiling),
            None => Comparator::new(Op::Le, high.floor()),
        });
    }
    Ok(out)
}

const OPERATORS: [&str; 8] = ["~>", ">=", "<=", ">", "<", "=", "~", "^"];

impl Cursor<'_> {
    fn component(&mut self) -> Result<Option<u64>, SemverError> {
        match self.peek() {
            Some('x' | 'X' | '*') => {
                self.bump();
                Ok(None)
            }
            _ => self.number().map(Some),
        }
    }

    fn partial(&mut self) -> Result<Partial, SemverError> {
        self.eat("v");
        let major = self.component()?;
        let mut parts = vec![major];
        while parts.len() < 3 && self.peek_str(".") {
            self.bump();
            let at = self.pos();
            let next = self.component()?;
            if next.is_some() && parts.last().copied().flatten().is_none() {
                return Err(SemverError::new(self.text(), at, "number after wildcard component"));
            }
            parts.push(next);
        }
        parts.resize(3, None);
        let full = parts.iter().all(Option::is_some);
        let at = self.pos();
        let (prerelease, _build) = if full {
            self.qualifiers()?
        } else {
            (Vec::new(), Vec::new())
        };
        if !full && matches!(self.peek(), Some('-' | '+')) {
            return Err(SemverError::new(self.text(), at, "qualifier on a partial version"));
        }
        Ok(Partial {
            major: parts[0],
            minor: parts[1],
            patch: parts[2],
            prerelease,
        })
    }

    fn operator(&mut self) -> Option<&'static str> {
        let op = OPERATORS.into_iter().find(|op| self.peek_str(op))?;
        self.eat(op);
        Some(op)
    }

    /// A single whitespace-separated conjunction, up to `||` or the end.
    fn comparator_set(&mut self) -> Result<ComparatorSet, SemverError> {
        let mut comparators = Vec::new();
        loop {
            self.skip_ws();
            if self.at_end() || self.peek_str("||") {
                break;
            }
            let op = self.operator();
            if op.is_some() {
                self.skip_ws();
            }
            let partial = self.partial()?;
            let after_low = self.pos();
            if op.is_none() && self.skip_ws() && self.eat("-") {
                if !self.skip_ws() {
                    return Err(self.error("expected whitespace after hyphen"));
                }
                let high = self.partial()?;
                comparators.extend(desugar_hyphen(&partial, &high, self)?);
            } else {
                self.rewind(after_low);
                comparators.extend(desugar_primitive(op, &partial, self)?);
            }
            if !matches!(self.peek(), None | Some(' ' | '\t' | '\n' | '\r')) && !self.peek_str("||") {
                return Err(self.error("expected whitespace between comparators"));
            }
        }
        Ok(ComparatorSet::new(comparators))
    }
}

/// Parses an npm range expression into its normalized disjunctive form.
pub fn parse_range(text: &str) -> Result<VersionRange, SemverError> {
    let mut cursor = Cursor::new(text);
    let mut sets = vec![cursor.comparator_set()?];
    while cursor.eat("||") {
        sets.push(cursor.comparator_set()?);
    }
    cursor.expect_end()?;
    Ok(VersionRange { sets })
}
