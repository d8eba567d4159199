//! Reachability analysis for vulnerable npm dependencies: decides whether a
//! JavaScript project calls the functions an advisory names, and whether the
//! dependency version it uses is affected.

pub mod advisory;
pub mod analyze;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod extract;
pub mod project;
pub mod report;
pub mod semver;
