//! The structured run document and its human-readable rendering.
//!
//! One JSON document per run. Optional sections are omitted when a command does
//! not produce them; the human table is derived from the document alone.

use std::fmt::Write as _;

use gradres_core::ExtInt;
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "gradres-report";
pub const VERSION: u32 = 1;

/// Exit codes of the command line.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const TRUNCATED: i32 = 3;
}

/// An integer or one of the strings `"+inf"`, `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Finite(i64),
    Infinite(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Infinity {
    #[serde(rename = "+inf")]
    Pos,
    #[serde(rename = "-inf")]
    Neg,
}

impl From<ExtInt> for Bound {
    fn from(x: ExtInt) -> Self {
        match x {
            ExtInt::Finite(v) => Bound::Finite(v),
            ExtInt::PosInf => Bound::Infinite(Infinity::Pos),
            ExtInt::NegInf => Bound::Infinite(Infinity::Neg),
        }
    }
}

fn opt(b: &Option<Bound>) -> String {
    b.as_ref().map_or_else(|| "-".to_string(), Bound::to_string)
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite(Infinity::Pos) => write!(f, "+inf"),
            Bound::Infinite(Infinity::Neg) => write!(f, "-inf"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub max_n: usize,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub module: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub quasi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowInfo {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub field: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowInfo>,
    /// Arrow names, greatest first.
    pub order: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerSection {
    pub elements: Vec<String>,
    pub tips: Vec<String>,
    pub complete: bool,
    /// Degree through which the basis is known to be correct when incomplete.
    pub certified_degree: Option<usize>,
    /// `dim A_d` for `d = 0..=max_degree`.
    pub hilbert: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub word: String,
    /// `ρ_{n-1}, …, ρ_1`: the chain of left divisors at the lower levels.
    pub rho: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiRow {
    pub word: String,
    pub phantom: String,
    pub rho: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extrema {
    pub mino: Bound,
    pub maxo: Bound,
    /// Absent when quasioverlaps were not computed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minqo: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub maxqo: Option<Bound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSection {
    pub n: usize,
    pub overlaps: Vec<OverlapRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quasi: Option<Vec<QuasiRow>>,
    pub extrema: Extrema,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapSection {
    pub tips: Vec<String>,
    pub len_s: usize,
    pub levels: Vec<LevelSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyRow {
    pub element: String,
    pub degree: usize,
    pub tip: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygySection {
    pub t1: Vec<SyzygyRow>,
    pub t1_prime: Vec<SyzygyRow>,
    /// `[k, l]`, the degree range of the first syzygy generators.
    pub degree_range: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRow {
    pub n: usize,
    /// `qo`, `o` or `qo-refined`.
    pub method: String,
    pub lo: Bound,
    pub hi: Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSection {
    pub rows: Vec<WindowRow>,
    /// Degree cap the oracle needs to see every predicted generator.
    pub required_max_degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSection {
    pub max_n: usize,
    pub max_degree: usize,
    /// Generating degrees of `P_n`, ascending with multiplicity.
    pub degrees: Vec<Vec<usize>>,
    /// `P_n` known to have no generator above the degree cap.
    pub complete: Vec<bool>,
    /// `dim X_d` for `d = 0..=max_degree`.
    pub hilbert: Vec<usize>,
    pub certified: bool,
    /// First `[n, degree]` that is not certified.
    pub truncation: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySection {
    pub seed: u64,
    pub instances: usize,
    /// Draws discarded because the oracle would exceed its word budget.
    pub skipped: usize,
    pub rows: Vec<PropertyRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Holds on everything computed, but the computation is not certified complete.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub format: String,
    pub version: u32,
    pub command: String,
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub algebra: Option<AlgebraInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub groebner: Option<GroebnerSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub overlaps: Option<OverlapSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub syzygy: Option<SyzygySection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub windows: Option<WindowSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<ResolutionSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub properties: Option<PropertySection>,
    pub verdicts: Vec<Verdict>,
    pub exit_code: i32,
}

impl Document {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        Self {
            format: FORMAT.into(),
            version: VERSION,
            command: command.into(),
            parameters,
            algebra: None,
            groebner: None,
            overlaps: None,
            syzygy: None,
            windows: None,
            resolution: None,
            properties: None,
            verdicts: Vec::new(),
            exit_code: exit::OK,
        }
    }

    pub fn verdict(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), status, detail: detail.into() });
    }

    /// 1 if any verdict fails, else 3 if any is truncated, else 0.
    pub fn settle(&mut self) {
        self.exit_code = if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            exit::FAIL
        } else if self.verdicts.iter().any(|v| v.status == Status::Truncated) {
            exit::TRUNCATED
        } else {
            exit::OK
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "== {} ==", self.command);
        if let Some(a) = &self.algebra {
            let arrows: Vec<String> = a.arrows.iter().map(|x| format!("{}: {} -> {}", x.name, x.source, x.target)).collect();
            let _ = writeln!(w, "field {}; vertices {}; arrows {}", a.field, a.vertices.join(" "), arrows.join(", "));
            let _ = writeln!(w, "order {}", a.order.join(" > "));
        }
        if let Some(g) = &self.groebner {
            let status = if g.complete { "complete".to_string() } else { format!("truncated, certified through degree {}", g.certified_degree.unwrap_or(0)) };
            let _ = writeln!(w, "\nGroebner basis ({status})");
            for e in &g.elements {
                let _ = writeln!(w, "  {e}");
            }
            let _ = writeln!(w, "tips {{{}}}", g.tips.join(", "));
            let _ = writeln!(w, "dim A_d  {}", join(&g.hilbert));
        }
        if let Some(o) = &self.overlaps {
            let _ = writeln!(w, "\nS = {{{}}}, len(S) = {}", o.tips.join(", "), o.len_s);
            let _ = writeln!(w, "{:>3}  {:>5} {:>5} {:>5} {:>5}  words", "n", "mino", "maxo", "minqo", "maxqo");
            for l in &o.levels {
                let e = &l.extrema;
                let words: Vec<&str> = l.overlaps.iter().map(|r| r.word.as_str()).collect();
                let _ = writeln!(w, "{:>3}  {:>5} {:>5} {:>5} {:>5}  {}", l.n, e.mino.to_string(), e.maxo.to_string(), opt(&e.minqo), opt(&e.maxqo), words.join(" "));
            }
            for l in &o.levels {
                for r in l.overlaps.iter().filter(|r| !r.rho.is_empty()) {
                    let _ = writeln!(w, "  O_{} {}  rho {}", l.n, r.word, r.rho.join(" > "));
                }
                for r in l.quasi.iter().flatten() {
                    let _ = writeln!(w, "  QO_{} ({}, {})  rho {}", l.n, r.word, r.phantom, r.rho.join(" > "));
                }
            }
        }
        if let Some(s) = &self.syzygy {
            let _ = writeln!(w, "\nfirst syzygy, degrees {}", s.degree_range.map_or("none".into(), |[k, l]| format!("[{k}, {l}]")));
            for (label, rows) in [("T1", &s.t1), ("T1'", &s.t1_prime)] {
                for r in rows {
                    let _ = writeln!(w, "  {label} deg {}: {}", r.degree, r.element);
                }
            }
        }
        if let Some(ws) = &self.windows {
            let _ = writeln!(w, "\n{:>3}  {:<11} window", "n", "method");
            for r in &ws.rows {
                let _ = writeln!(w, "{:>3}  {:<11} [{}, {}]", r.n, r.method, r.lo, r.hi);
            }
            if let Some(d) = ws.required_max_degree {
                let _ = writeln!(w, "resolving through the last window needs --max-degree >= {d}");
            }
        }
        if let Some(r) = &self.resolution {
            let _ = writeln!(w, "\nminimal resolution through P_{} up to degree {}", r.max_n, r.max_degree);
            for (n, d) in r.degrees.iter().enumerate() {
                let mark = if r.complete[n] { "" } else { "  (may continue above the cap)" };
                let _ = writeln!(w, "  P_{n}: {{{}}}{mark}", join(d));
            }
            let _ = writeln!(w, "dim X_d  {}", join(&r.hilbert));
            match r.truncation {
                None => {
                    let _ = writeln!(w, "certified");
                }
                Some([n, d]) => {
                    let _ = writeln!(w, "not certified: P_{n} may have generators above degree {d}");
                }
            }
        }
        if let Some(p) = &self.properties {
            let _ = writeln!(w, "\nseed {}, {} instances ({} skipped)", p.seed, p.instances, p.skipped);
            for r in &p.rows {
                let _ = writeln!(w, "  {:<32} {:>6} pass {:>4} fail", r.name, r.passed, r.failed);
                if let Some(f) = &r.first_failure {
                    let _ = writeln!(w, "    first failure: {f}");
                }
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(w);
            for v in &self.verdicts {
                let tag = match v.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Truncated => "TRUNCATED",
                };
                let _ = writeln!(w, "{tag:<9} {}: {}", v.name, v.detail);
            }
        }
        let _ = writeln!(w, "exit {}", self.exit_code);
        out
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
