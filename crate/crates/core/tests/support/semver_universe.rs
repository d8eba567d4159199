//! A finite version universe with hand-written range predicates, used as a
//! brute-force oracle for the semver engine.

/// A universe member. `pre` is one of the prerelease tags below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct V {
    pub major: u64,
    pub minor: u64,
    pub patch: u64,
    pub pre: Option<&'static str>,
}

/// Prerelease tags in ascending precedence.
pub const PRERELEASES: [&str; 3] = ["alpha", "alpha.1", "beta"];

impl V {
    pub fn text(&self) -> String {
        match self.pre {
            Some(p) => format!("{}.{}.{}-{}", self.major, self.minor, self.patch, p),
            None => format!("{}.{}.{}", self.major, self.minor, self.patch),
        }
    }

    pub fn core(&self) -> (u64, u64, u64) {
        (self.major, self.minor, self.patch)
    }

    pub fn is_release(&self) -> bool {
        self.pre.is_none()
    }

    /// Rank of the prerelease tag; releases rank above every tag.
    pub fn pre_rank(&self) -> usize {
        match self.pre {
            None => PRERELEASES.len(),
            Some(p) => PRERELEASES.iter().position(|&q| q == p).expect("known tag"),
        }
    }
}

/// Every version with components in 0..=4 and each prerelease tag, listed
/// in precedence order, so list position is the expected ordering.
pub fn universe() -> Vec<V> {
    let mut out = Vec::new();
    for major in 0..=4 {
        for minor in 0..=4 {
            for patch in 0..=4 {
                for pre in PRERELEASES.iter().map(|&p| Some(p)).chain([None]) {
                    out.push(V { major, minor, patch, pre });
                }
            }
        }
    }
    out
}

type Core = (u64, u64, u64);

fn rel(v: &V) -> bool {
    v.is_release()
}

/// `v` is a prerelease of `core` whose tag ranks at least `min_tag`.
fn pre_at_least(v: &V, core: Core, min_tag: usize) -> bool {
    !v.is_release() && v.core() == core && v.pre_rank() >= min_tag
}

fn releases_in(v: &V, low: Core, high_exclusive: Core) -> bool {
    rel(v) && v.core() >= low && v.core() < high_exclusive
}

pub struct RangeFixture {
    pub text: &'static str,
    pub oracle: fn(&V) -> bool,
}

pub fn range_fixtures() -> Vec<RangeFixture> {
    const ALPHA: usize = 0;
    const ALPHA_1: usize = 1;
    const BETA: usize = 2;
    vec![
        RangeFixture { text: "*", oracle: |v| rel(v) },
        RangeFixture { text: "", oracle: |v| rel(v) },
        RangeFixture { text: "x", oracle: |v| rel(v) },
        RangeFixture { text: "1.2.3", oracle: |v| rel(v) && v.core() == (1, 2, 3) },
        RangeFixture { text: "=1.2.3", oracle: |v| rel(v) && v.core() == (1, 2, 3) },
        RangeFixture { text: "v1.2.3", oracle: |v| rel(v) && v.core() == (1, 2, 3) },
        RangeFixture { text: ">1.2.3", oracle: |v| rel(v) && v.core() > (1, 2, 3) },
        RangeFixture { text: ">=1.2.3", oracle: |v| rel(v) && v.core() >= (1, 2, 3) },
        RangeFixture { text: ">= 1.2.3", oracle: |v| rel(v) && v.core() >= (1, 2, 3) },
        RangeFixture { text: "<1.2.3", oracle: |v| rel(v) && v.core() < (1, 2, 3) },
        RangeFixture { text: "<=1.2.3", oracle: |v| rel(v) && v.core() <= (1, 2, 3) },
        RangeFixture { text: "^1.2.3", oracle: |v| releases_in(v, (1, 2, 3), (2, 0, 0)) },
        RangeFixture { text: "^0.2.3", oracle: |v| releases_in(v, (0, 2, 3), (0, 3, 0)) },
        RangeFixture { text: "^0.0.3", oracle: |v| rel(v) && v.core() == (0, 0, 3) },
        RangeFixture { text: "^1.2", oracle: |v| releases_in(v, (1, 2, 0), (2, 0, 0)) },
        RangeFixture { text: "^0.0", oracle: |v| releases_in(v, (0, 0, 0), (0, 1, 0)) },
        RangeFixture { text: "^1", oracle: |v| releases_in(v, (1, 0, 0), (2, 0, 0)) },
        RangeFixture { text: "~1.2.3", oracle: |v| releases_in(v, (1, 2, 3), (1, 3, 0)) },
        RangeFixture { text: "~>1.2.3", oracle: |v| releases_in(v, (1, 2, 3), (1, 3, 0)) },
        RangeFixture { text: "~1.2", oracle: |v| releases_in(v, (1, 2, 0), (1, 3, 0)) },
        RangeFixture { text: "~1", oracle: |v| releases_in(v, (1, 0, 0), (2, 0, 0)) },
        RangeFixture { text: "~0.2.3", oracle: |v| releases_in(v, (0, 2, 3), (0, 3, 0)) },
        RangeFixture { text: "1.x", oracle: |v| rel(v) && v.major == 1 },
        RangeFixture { text: "1.2.x", oracle: |v| rel(v) && v.major == 1 && v.minor == 2 },
        RangeFixture { text: "1.2.*", oracle: |v| rel(v) && v.major == 1 && v.minor == 2 },
        RangeFixture { text: "1.2.3 - 2.3.1", oracle: |v| rel(v) && v.core() >= (1, 2, 3) && v.core() <= (2, 3, 1) },
        RangeFixture { text: "1.2 - 2.3", oracle: |v| releases_in(v, (1, 2, 0), (2, 4, 0)) },
        RangeFixture { text: "1 - 2", oracle: |v| releases_in(v, (1, 0, 0), (3, 0, 0)) },
        RangeFixture { text: "<1.0.0 || >=2.1.0", oracle: |v| rel(v) && (v.core() < (1, 0, 0) || v.core() >= (2, 1, 0)) },
        RangeFixture {
            text: "^0.1.0 || ^1.2.0 || 3.0.0",
            oracle: |v| releases_in(v, (0, 1, 0), (0, 2, 0)) || releases_in(v, (1, 2, 0), (2, 0, 0)) || (rel(v) && v.core() == (3, 0, 0)),
        },
        RangeFixture { text: ">1.0.0 <=2.0.0", oracle: |v| rel(v) && v.core() > (1, 0, 0) && v.core() <= (2, 0, 0) },
        RangeFixture { text: ">=3.3.3", oracle: |v| rel(v) && v.core() >= (3, 3, 3) },
        RangeFixture { text: "<0.0.0", oracle: |_| false },
        RangeFixture {
            text: ">=1.2.3-alpha.1 <2.0.0",
            oracle: |v| pre_at_least(v, (1, 2, 3), ALPHA_1) || releases_in(v, (1, 2, 3), (2, 0, 0)),
        },
        RangeFixture {
            text: "^1.2.3-beta",
            oracle: |v| pre_at_least(v, (1, 2, 3), BETA) || releases_in(v, (1, 2, 3), (2, 0, 0)),
        },
        RangeFixture { text: "1.2.3-alpha", oracle: |v| v.core() == (1, 2, 3) && v.pre == Some("alpha") },
        RangeFixture {
            text: "~1.2.3-alpha",
            oracle: |v| pre_at_least(v, (1, 2, 3), ALPHA) || releases_in(v, (1, 2, 3), (1, 3, 0)),
        },
        RangeFixture {
            text: ">1.2.3-alpha <1.2.3",
            oracle: |v| pre_at_least(v, (1, 2, 3), ALPHA_1),
        },
        RangeFixture { text: "<2.0.0-alpha", oracle: |v| rel(v) && v.core() < (2, 0, 0) },
        RangeFixture {
            text: "1.2.3 || 1.2.3-beta",
            oracle: |v| v.core() == (1, 2, 3) && (v.is_release() || v.pre == Some("beta")),
        },
        RangeFixture {
            text: "0.x || >=3.0.0-beta",
            oracle: |v| (rel(v) && v.major == 0) || pre_at_least(v, (3, 0, 0), BETA) || (rel(v) && v.core() >= (3, 0, 0)),
        },
        RangeFixture {
            text: ">=0.1.0-beta <0.1.2 || ~2.2",
            oracle: |v| pre_at_least(v, (0, 1, 0), BETA) || releases_in(v, (0, 1, 0), (0, 1, 2)) || releases_in(v, (2, 2, 0), (2, 3, 0)),
        },
    ]
}
