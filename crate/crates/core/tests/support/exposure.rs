//! Fixture projects with installed versions inside, outside and at the fix
//! boundary of an affected range, checked against the universe oracle.

use depreach::advisory::{parse_advisories, Strictness};
use depreach::analyze::{analyze_pair, AnalyzeOptions};

use super::semver_universe::{range_fixtures, universe, V};
use super::{project, write};

pub struct ExposureCase {
    pub affected: &'static str,
    pub fixed: &'static str,
    pub inside: &'static str,
    pub outside: &'static str,
}

pub fn cases() -> Vec<ExposureCase> {
    vec![
        ExposureCase { affected: "<1.2.3", fixed: "1.2.3", inside: "1.0.4", outside: "2.0.0" },
        ExposureCase { affected: "1.2.3 - 2.3.1", fixed: "2.3.2", inside: "2.0.0", outside: "1.2.2" },
        ExposureCase { affected: "^0.2.3", fixed: "0.3.0", inside: "0.2.4", outside: "0.2.2" },
        ExposureCase { affected: "~1.2", fixed: "1.3.0", inside: "1.2.0", outside: "1.4.1" },
        ExposureCase { affected: ">=1.2.3-alpha.1 <2.0.0", fixed: "2.0.0", inside: "1.2.3-beta", outside: "1.2.3-alpha" },
        ExposureCase { affected: "<1.0.0 || >=2.1.0", fixed: "1.0.0", inside: "2.4.0", outside: "1.3.3" },
    ]
}

fn oracle_for(range: &str) -> fn(&V) -> bool {
    range_fixtures()
        .into_iter()
        .find(|f| f.text == range)
        .unwrap_or_else(|| panic!("no oracle for `{range}`"))
        .oracle
}

fn universe_member(text: &str) -> V {
    universe()
        .into_iter()
        .find(|v| v.text() == text)
        .unwrap_or_else(|| panic!("{text} is outside the universe"))
}

/// Runs every case as a real project on disk; `Err` lists the mismatches.
pub fn check_all() -> Result<usize, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut problems = Vec::new();
    for (i, case) in cases().iter().enumerate() {
        let oracle = oracle_for(case.affected);
        let store = parse_advisories(
            &format!(
                r#"{{"id":"E-{i}","package":"pkg","affected":"{}","symbols":["run"],"fixed":"{}"}}"#,
                case.affected, case.fixed
            ),
            Strictness::Strict,
        )
        .map_err(|e| e.to_string())?;
        let advisory = &store.advisories()[0];
        let expectations = [
            (case.inside, Some(true)),
            (case.outside, Some(false)),
            (case.fixed, Some(false)),
        ];
        for (installed, expected) in expectations {
            let from_oracle = oracle(&universe_member(installed));
            if Some(from_oracle) != expected {
                problems.push(format!("case `{}`: oracle disagrees with the fixture at {installed}", case.affected));
                continue;
            }
            let root = dir.path().join(format!("case{i}-{installed}"));
            project(&root, "pkg", "*", Some(installed));
            write(&root, "index.js", "require('pkg').run();\n");
            let report = analyze_pair(&root, "client", advisory, AnalyzeOptions::default());
            checked += 1;
            if report.version_affected != expected {
                problems.push(format!(
                    "`{}` installed {installed}: expected {expected:?}, got {:?}",
                    case.affected, report.version_affected
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(checked)
    } else {
        Err(problems.join("; "))
    }
}
