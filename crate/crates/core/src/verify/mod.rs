//! Batch verification: builds the configuration for one tower, runs the
//! selected suites and assembles a deterministic report.

mod dump;
mod suites;
mod world;

pub use dump::{dump, Artifact};
pub use world::{ClassifiedRegulus, World};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{primitive_polys, FieldTower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fields,
    Spread,
    Subplane,
    Quadrics,
    Tangents,
    Covers,
    Transversals,
    Carriers,
    Disjoint,
    Sublines,
    SpecialConics,
    Replacement,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Fields,
        Suite::Spread,
        Suite::Subplane,
        Suite::Quadrics,
        Suite::Tangents,
        Suite::Covers,
        Suite::Transversals,
        Suite::Carriers,
        Suite::Disjoint,
        Suite::Sublines,
        Suite::SpecialConics,
        Suite::Replacement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fields => "fields",
            Suite::Spread => "spread",
            Suite::Subplane => "subplane",
            Suite::Quadrics => "quadrics",
            Suite::Tangents => "tangents",
            Suite::Covers => "covers",
            Suite::Transversals => "transversals",
            Suite::Carriers => "carriers",
            Suite::Disjoint => "disjoint",
            Suite::Sublines => "sublines",
            Suite::SpecialConics => "special-conics",
            Suite::Replacement => "replacement",
        }
    }

    /// The suites run when none are named: all of them, except the
    /// enumeration-heavy subline suites for q ≥ 5.
    pub fn defaults(q: u32) -> Vec<Suite> {
        Suite::ALL
            .into_iter()
            .filter(|s| q < 5 || !matches!(s, Suite::Sublines | Suite::SpecialConics))
            .collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidToken {
                token: s.to_string(),
                reason: "unknown suite".into(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub q: u32,
    /// Tower token overriding the smallest primitive polynomial.
    pub poly: Option<String>,
    /// Empty means [`Suite::defaults`].
    pub suites: Vec<Suite>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// Record elapsed milliseconds per check. Off keeps reports byte-identical.
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(q: u32) -> Self {
        SuiteConfig {
            q,
            poly: None,
            suites: Vec::new(),
            jobs: 0,
            timings: false,
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }

    /// The tower named by the config, validated.
    pub fn tower(&self) -> Result<FieldTower> {
        match &self.poly {
            None => FieldTower::for_q(self.q),
            Some(tok) => {
                let t = FieldTower::parse_token(tok)?;
                if t.q() != self.q {
                    return Err(Error::InvalidToken {
                        token: tok.clone(),
                        reason: format!("tower is over GF({}), not GF({})", t.q(), self.q),
                    });
                }
                Ok(t)
            }
        }
    }

    pub fn selected(&self) -> Vec<Suite> {
        let mut s = if self.suites.is_empty() {
            Suite::defaults(self.q)
        } else {
            self.suites.clone()
        };
        s.sort();
        s.dedup();
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub theorem: String,
    pub pass: bool,
    pub counts: BTreeMap<String, u64>,
    pub witness: Option<String>,
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub q: u32,
    pub tower: String,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, id: &str) -> Option<&Check> {
        self.suites.iter().flat_map(|s| &s.checks).find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q = {}  tower = {}\n", self.q, self.tower);
        for s in &self.suites {
            out.push_str(&format!("\n[{}]\n", s.name));
            for c in &s.checks {
                let counts: Vec<String> = c.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!(
                    "  {} {:<36} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    counts.join(" ")
                ));
                if let Some(ms) = c.ms {
                    out.push_str(&format!("  ({ms} ms)"));
                }
                out.push('\n');
                if let Some(w) = &c.witness {
                    out.push_str(&format!("       witness: {w}\n"));
                }
            }
        }
        out.push_str(&format!("\noverall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }

    /// (check id, pass) for every check, in report order.
    pub fn signature(&self) -> Vec<(String, bool)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().map(|c| (c.id.clone(), c.pass)))
            .collect()
    }
}

/// Counters and the expected-versus-actual bookkeeping of one check.
#[derive(Default)]
pub(crate) struct Counts(BTreeMap<String, u64>);

impl Counts {
    pub fn set(&mut self, key: &str, v: usize) {
        self.0.insert(key.to_string(), v as u64);
    }

    /// Records both values and returns whether they agree.
    pub fn pair(&mut self, key: &str, expected: usize, actual: usize) -> bool {
        self.set(&format!("{key}_expected"), expected);
        self.set(key, actual);
        expected == actual
    }
}

pub(crate) type Outcome = std::result::Result<(), String>;

pub(crate) struct Recorder {
    timings: bool,
    checks: Vec<Check>,
}

impl Recorder {
    pub fn check(&mut self, id: &str, theorem: &str, body: impl FnOnce(&mut Counts) -> Outcome) {
        let start = Instant::now();
        let mut counts = Counts::default();
        let outcome = body(&mut counts);
        let ms = self.timings.then(|| start.elapsed().as_millis() as u64);
        self.checks.push(Check {
            id: id.to_string(),
            theorem: theorem.to_string(),
            pass: outcome.is_ok(),
            counts: counts.0,
            witness: outcome.err(),
            ms,
        });
    }
}

/// Runs the configured suites. Configuration errors are returned before any
/// suite runs.
pub fn run(config: &SuiteConfig) -> Result<VerificationReport> {
    let tower = config.tower()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    Ok(pool.install(|| run_tower(tower, config)))
}

fn run_tower(tower: FieldTower, config: &SuiteConfig) -> VerificationReport {
    let token = tower.token();
    let world = World::build(tower);
    let mut suites = Vec::new();
    for s in config.selected() {
        let mut rec = Recorder {
            timings: config.timings,
            checks: Vec::new(),
        };
        suites::run_suite(&world, s, &mut rec);
        suites.push(SuiteReport {
            name: s.name().to_string(),
            checks: rec.checks,
        });
    }
    let pass = suites.iter().all(|s| s.checks.iter().all(|c| c.pass));
    VerificationReport {
        q: config.q,
        tower: token,
        suites,
        pass,
    }
}

/// Runs the configuration under every primitive polynomial for q and
/// appends a `tower-invariance` suite comparing each tower's pass/fail
/// signature with that of the configured tower.
pub fn run_all_towers(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut report = run(config)?;
    let base = report.signature();
    let polys = primitive_polys(config.q)?;
    let mut rec = Recorder {
        timings: config.timings,
        checks: Vec::new(),
    };
    for t in polys {
        let tower = FieldTower::new(crate::gf::BaseField::builtin(config.q)?, t)?;
        let mut cfg = config.clone();
        cfg.poly = Some(tower.token());
        let other = run(&cfg)?;
        rec.check(
            &format!("tower-invariance.{}", tower.token()),
            "verification outcomes do not depend on the primitive polynomial",
            |c| {
                let sig = other.signature();
                c.set("checks", sig.len());
                c.set("passed", sig.iter().filter(|x| x.1).count());
                match sig.iter().zip(&base).find(|(a, b)| a != b) {
                    _ if sig.len() != base.len() => Err("different check lists".into()),
                    Some((a, _)) => Err(format!("check {} differs", a.0)),
                    None => Ok(()),
                }
            },
        );
    }
    report.suites.push(SuiteReport {
        name: "tower-invariance".into(),
        checks: rec.checks,
    });
    report.pass = report.suites.iter().all(|s| s.checks.iter().all(|c| c.pass));
    Ok(report)
}
