//! Run configuration and check records shared by the suites and the command-line front end.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subspace::GradedSubspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Unsupported,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Unsupported => "UNSUPPORTED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeRow {
    pub d: usize,
    pub dim_lhs: usize,
    pub dim_rhs: usize,
    pub equal: bool,
}

/// Per-degree dimensions of two subspaces of the same ambient space.
pub fn degree_rows(lhs: &GradedSubspace, rhs: &GradedSubspace) -> Vec<DegreeRow> {
    lhs.dim_profile()
        .into_iter()
        .zip(rhs.dim_profile())
        .enumerate()
        .map(|(d, (a, b))| DegreeRow {
            d,
            dim_lhs: a,
            dim_rhs: b,
            equal: a == b,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement being checked, in words.
    pub anchor: String,
    pub verdict: Verdict,
    pub degrees: Vec<DegreeRow>,
    pub budget: Option<usize>,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, verdict: Verdict) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            verdict,
            degrees: Vec::new(),
            budget: None,
            ms: 0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_degrees(mut self, rows: Vec<DegreeRow>) -> Self {
        self.degrees = rows;
        self
    }

    /// `lhs ⊆ rhs`, with dimension data.
    pub fn inclusion(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: &GradedSubspace,
        rhs: &GradedSubspace,
    ) -> Self {
        let ok = lhs.is_subset(rhs).unwrap_or(false);
        CheckRecord::new(name, anchor, Verdict::from_bool(ok)).with_degrees(degree_rows(lhs, rhs))
    }

    /// `lhs = rhs`, with dimension data.
    pub fn equality(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: &GradedSubspace,
        rhs: &GradedSubspace,
    ) -> Self {
        let ok = lhs.equals(rhs).unwrap_or(false);
        CheckRecord::new(name, anchor, Verdict::from_bool(ok)).with_degrees(degree_rows(lhs, rhs))
    }

    /// Maps an error to a record: missing preconditions make the check vacuous, unsupported
    /// inputs make it unsupported, anything else is a failure.
    pub fn from_error(name: impl Into<String>, anchor: impl Into<String>, e: &Error) -> Self {
        let verdict = match e {
            Error::Precondition(_) | Error::TypeMismatch(_) | Error::BudgetExhausted => {
                Verdict::Vacuous
            }
            Error::Unsupported(_) => Verdict::Unsupported,
            _ => Verdict::Fail,
        };
        CheckRecord::new(name, anchor, verdict).with_note(e.to_string())
    }
}

/// Runs `f` and stores the elapsed milliseconds in its record.
pub fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let t = Instant::now();
    let mut r = f();
    r.ms = t.elapsed().as_millis() as u64;
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Free,
    Matrix(usize),
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "free" {
            return Ok(Backend::Free);
        }
        if let Some(n) = s.strip_prefix("matrix:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Config(format!("bad backend '{s}'")))?;
            if n == 0 {
                return Err(Error::Config("matrix backend needs n >= 1".into()));
            }
            return Ok(Backend::Matrix(n));
        }
        Err(Error::Config(format!(
            "backend must be 'free' or 'matrix:n', got '{s}'"
        )))
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Free => write!(f, "free"),
            Backend::Matrix(n) => write!(f, "matrix:{n}"),
        }
    }
}

impl Serialize for Backend {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Compute,
    Cartan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub pair: String,
    pub gens: Vec<String>,
    pub deg: usize,
    pub backend: Backend,
    pub unital: bool,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag: Option<String>,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command, pair: &str) -> Self {
        RunConfig {
            command,
            pair: pair.to_string(),
            gens: crate::coeffalg::default_names(2),
            deg: 3,
            backend: Backend::Free,
            unital: false,
            suite: "all".into(),
            object: None,
            k: None,
            diag: None,
            seed: 0,
            format: Format::Text,
        }
    }

    /// `--gens 3` or `--gens a,b,c`.
    pub fn parse_gens(text: &str) -> Result<Vec<String>> {
        if let Ok(m) = text.trim().parse::<usize>() {
            if m == 0 {
                return Err(Error::Config("need at least one generator".into()));
            }
            return Ok(crate::coeffalg::default_names(m));
        }
        let names: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
        if names.iter().any(|n| n.is_empty()) {
            return Err(Error::Config(format!("bad generator list '{text}'")));
        }
        Ok(names)
    }

    pub fn validate(&self) -> Result<()> {
        if self.deg == 0 {
            return Err(Error::Config("truncation degree must be at least 1".into()));
        }
        if self.gens.is_empty() {
            return Err(Error::Config("need at least one generator".into()));
        }
        crate::pairs::pair_from_spec(&self.pair)?;
        Ok(())
    }
}

/// A named object and its per-degree dimensions, as produced by `compute`.
#[derive(Clone, Debug, Serialize)]
pub struct ObjectDump {
    pub name: String,
    pub dims: Vec<usize>,
    pub total: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<ObjectDump>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            objects: Vec::new(),
        }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    /// 0 when nothing failed, 1 on any failure, 3 when something was unsupported.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Fail) > 0 {
            1
        } else if self.count(Verdict::Unsupported) > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        out.push_str(&format!(
            "pair {}  backend {}  gens {}  D={}  unital={}  seed={}\n",
            c.pair,
            c.backend,
            c.gens.join(","),
            c.deg,
            c.unital,
            c.seed
        ));
        for o in &self.objects {
            out.push_str(&format!(
                "{}: dims {:?} total {}\n",
                o.name, o.dims, o.total
            ));
            for b in &o.basis {
                out.push_str(&format!("    {b}\n"));
            }
        }
        for r in &self.checks {
            out.push_str(&format!(
                "{:<11} {}  [{}]",
                r.verdict.label(),
                r.name,
                r.anchor
            ));
            if let Some(b) = r.budget {
                out.push_str(&format!("  budget {b}"));
            }
            out.push_str(&format!("  {} ms\n", r.ms));
            if !r.degrees.is_empty() {
                let dims: Vec<String> = r
                    .degrees
                    .iter()
                    .map(|d| format!("{}:{}/{}", d.d, d.dim_lhs, d.dim_rhs))
                    .collect();
                out.push_str(&format!("            dims {}\n", dims.join(" ")));
            }
            if let Some(n) = &r.note {
                out.push_str(&format!("            {n}\n"));
            }
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} vacuous, {} unsupported\n",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Vacuous),
            self.count(Verdict::Unsupported)
        ));
        out
    }
}
