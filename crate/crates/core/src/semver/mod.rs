//! npm-flavoured semantic versions and version ranges.
//!
//! Versions follow SemVer 2.0.0 precedence. Ranges accept the npm surface
//! syntax (`^`, `~`, x-ranges, hyphen ranges, `||`) and are normalized to a
//! disjunction of comparator conjunctions before evaluation.

mod range;
mod version;

use std::fmt;

pub use range::{parse_range, ranges_intersect, satisfies, Comparator, ComparatorSet, Op, VersionRange};
pub use version::{compare, parse_version, Identifier, Version};

/// A version or range failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SemverError {
    pub input: String,
    /// Byte offset of the offending character.
    pub position: usize,
    pub message: String,
}

impl SemverError {
    pub(crate) fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        SemverError {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for SemverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid version `{}` at position {}: {}", self.input, self.position, self.message)
    }
}
