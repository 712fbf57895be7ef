//! Command execution: builds the algebra of a problem file over its field, runs
//! one command and fills a [`Document`].

use std::collections::BTreeMap;

use gradres_core::algebra::normal_words;
use gradres_core::field::Field;
use gradres_core::koszul::{determined_check, s_koszul_criterion, DegreeCollection};
use gradres_core::oracle::{build_model, chain_bounds, minimal_resolution, verify_windows, AlgebraModel, DegreeBound, ResolutionReport};
use gradres_core::overlaps::{enumerate, EnumerateOptions, OverlapTable};
use gradres_core::syzygy::{
    degree_window, first_syzygy, refined_quasi_window, window_consistency, DegreeWindow, FirstSyzygy, IndexConvention, ModulePresentation,
    SyzygyError, WindowMethod,
};
use gradres_core::{AlgebraElement, GroebnerBasis, ModuleElement, Path, PathAlgebra, PrimeField, Quiver, Rationals};

use crate::problem::{FieldSpec, ProblemFile, SIMPLE_TOPS};
use crate::report::{self, *};

pub const DEFAULT_MAX_N: usize = 5;
pub const DEFAULT_MAX_DEGREE: usize = 12;
/// Ceiling for a degree cap raised automatically to reach predicted window tops.
pub const AUTO_DEGREE_CEILING: usize = 24;
/// Normal words the automatic cap may spend.
const AUTO_WORD_BUDGET: usize = 60_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Linear,
    SKoszul(usize),
    /// A collection spec: `linear`, `chi:<s>`, `chi-down:<s>` or `list:<S_0>;<S_1>;…`
    /// with comma-separated degrees in each component.
    Determined(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Groebner,
    Overlaps { quasi: bool },
    Window { module: String, method: WindowMethod },
    Check { module: String, kind: CheckKind },
    Resolve { module: String },
    Verify { module: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Groebner => "groebner",
            Command::Overlaps { .. } => "overlaps",
            Command::Window { .. } => "window",
            Command::Check { .. } => "check",
            Command::Resolve { .. } => "resolve",
            Command::Verify { .. } => "verify",
        }
    }

    fn module(&self) -> Option<&str> {
        match self {
            Command::Window { module, .. } | Command::Check { module, .. } | Command::Resolve { module } | Command::Verify { module } => Some(module),
            _ => None,
        }
    }
}

/// Caps from the command line; unset values fall back to the file, then to defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Caps {
    pub max_n: Option<usize>,
    pub max_degree: Option<usize>,
}

/// Input problems discovered while running (exit code 2).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("unknown module `{name}`; available: {}", available.join(", "))]
    UnknownModule { name: String, available: Vec<String> },
    #[error("--max-degree {cap} is below the largest relation degree {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("module `{module}`: {source}")]
    Presentation { module: String, source: SyzygyError },
    #[error("bad collection spec `{0}`: expected linear, chi:<s>, chi-down:<s> or list:<degrees>;<degrees>;...")]
    Collection(String),
    #[error("s must be at least 2")]
    BadS,
    #[error("{0}")]
    Other(String),
}

pub fn parse_collection(spec: &str) -> Result<DegreeCollection, RunError> {
    let bad = || RunError::Collection(spec.to_string());
    let s_of = |x: &str| x.parse::<usize>().ok().filter(|s| *s >= 2).ok_or_else(bad);
    if spec == "linear" {
        return Ok(DegreeCollection::linear());
    }
    if let Some(x) = spec.strip_prefix("chi-down:") {
        return Ok(DegreeCollection::ChiDownSet(s_of(x)?));
    }
    if let Some(x) = spec.strip_prefix("chi:") {
        return Ok(DegreeCollection::Chi(s_of(x)?));
    }
    if let Some(x) = spec.strip_prefix("list:") {
        let comps = x
            .split(';')
            .map(|c| c.split(',').map(str::trim).filter(|d| !d.is_empty()).map(|d| d.parse::<i64>().map_err(|_| bad())).collect())
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        return Ok(DegreeCollection::Explicit(comps));
    }
    Err(bad())
}

/// Runs `cmd` on `pf`. Mathematical outcomes are verdicts in the document;
/// only input problems are errors.
pub fn run(pf: &ProblemFile, cmd: &Command, caps: Caps) -> Result<Document, RunError> {
    match pf.field {
        FieldSpec::Rationals => Runner::new(pf, Rationals, cmd, caps)?.run(cmd),
        FieldSpec::Prime(p) => Runner::new(pf, PrimeField::new(p).expect("parser checks primes"), cmd, caps)?.run(cmd),
    }
}

/// Concatenated names when every arrow name is a single character, `*`-joined otherwise.
pub fn show_path(q: &Quiver, p: &Path) -> String {
    let short = q.arrows().all(|a| q.arrow_name(a).chars().count() == 1);
    q.render_with(p, if short { "" } else { "*" })
}

fn show_terms<'a, E: 'a>(f: &impl Field<Elem = E>, terms: impl Iterator<Item = (&'a E, String)>) -> String {
    let mut out = String::new();
    for (i, (c, body)) in terms.enumerate() {
        let s = f.render(c);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        out += match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        if mag != "1" {
            out += &mag;
            out += "*";
        }
        out += &body;
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

type Prepared<F> = (AlgebraModel<F>, FirstSyzygy<<F as Field>::Elem>, OverlapTable, Vec<(String, DegreeWindow)>);

struct Runner<'p, F: Field> {
    pf: &'p ProblemFile,
    alg: PathAlgebra<F>,
    ideal: Vec<AlgebraElement<F::Elem>>,
    modules: BTreeMap<String, ModulePresentation<F::Elem>>,
    max_n: usize,
    max_degree: usize,
    /// Whether the degree cap may be raised to reach predicted window tops.
    auto_degree: bool,
    gb: GroebnerBasis<F::Elem>,
    doc: Document,
}

impl<'p, F: Field> Runner<'p, F> {
    fn new(pf: &'p ProblemFile, field: F, cmd: &Command, caps: Caps) -> Result<Self, RunError> {
        let inst = pf.instance(field);
        let max_n = caps.max_n.or(pf.run.max_n).unwrap_or(DEFAULT_MAX_N);
        let given = caps.max_degree.or(pf.run.max_degree);
        let max_degree = given.unwrap_or(DEFAULT_MAX_DEGREE);
        if let Some(m) = cmd.module() {
            if !inst.modules.contains_key(m) {
                return Err(RunError::UnknownModule { name: m.into(), available: pf.module_names().iter().map(|s| s.to_string()).collect() });
            }
        }
        let gb = complete(&inst.algebra, &inst.ideal, max_degree)?;
        let params = Parameters { max_n, max_degree, module: cmd.module().map(String::from), ..Parameters::default() };
        let mut doc = Document::new(cmd.name(), params);
        let q = inst.algebra.quiver();
        doc.algebra = Some(AlgebraInfo {
            field: pf.field.to_string(),
            vertices: q.vertices().map(|v| q.vertex_name(v).to_string()).collect(),
            arrows: q
                .arrows()
                .map(|a| report::ArrowInfo {
                    name: q.arrow_name(a).into(),
                    source: q.vertex_name(a.source).into(),
                    target: q.vertex_name(a.target).into(),
                })
                .collect(),
            order: inst.algebra.order().arrow_precedence().into_iter().map(|i| q.arrow_name(q.arrow(i)).to_string()).collect(),
            relations: inst.ideal.iter().map(|x| show_element(&inst.algebra, x)).collect(),
        });
        Ok(Self {
            pf,
            alg: inst.algebra,
            ideal: inst.ideal,
            modules: inst.modules,
            max_n,
            max_degree,
            auto_degree: given.is_none(),
            gb,
            doc,
        })
    }

    fn run(mut self, cmd: &Command) -> Result<Document, RunError> {
        match cmd {
            Command::Groebner => self.groebner(),
            Command::Overlaps { quasi } => self.overlaps(*quasi)?,
            Command::Window { module, method } => self.window(module, *method)?,
            Command::Check { module, kind } => self.check(module, kind)?,
            Command::Resolve { module } => self.resolve(module)?,
            Command::Verify { module } => self.verify(module)?,
        }
        self.doc.parameters.max_degree = self.max_degree;
        self.doc.settle();
        Ok(self.doc)
    }

    fn q(&self) -> &Quiver {
        self.alg.quiver()
    }

    fn basis_verdict(&mut self) {
        match self.gb.certified_degree() {
            None => self.doc.verdict("groebner", Status::Pass, format!("complete with {} elements", self.gb.elements().len())),
            Some(d) => self.doc.verdict(
                "groebner",
                Status::Truncated,
                format!("not complete; correct through degree {d}, tips above it may be missing"),
            ),
        }
    }

    fn groebner(&mut self) {
        let q = self.alg.quiver();
        let hilbert = (0..=self.max_degree).map(|d| normal_words(q, self.alg.order(), self.gb.tips(), d).len()).collect();
        self.doc.groebner = Some(GroebnerSection {
            elements: self.gb.elements().iter().map(|g| show_element(&self.alg, g)).collect(),
            tips: self.gb.tips().iter().map(|p| show_path(q, p)).collect(),
            complete: self.gb.is_complete(),
            certified_degree: self.gb.certified_degree(),
            hilbert,
        });
        self.basis_verdict();
    }

    fn table(&self, depth: usize) -> Result<OverlapTable, RunError> {
        enumerate(self.q(), self.gb.tips(), EnumerateOptions::levels(depth)).map_err(|e| RunError::Other(e.to_string()))
    }

    fn overlaps(&mut self, quasi: bool) -> Result<(), RunError> {
        self.groebner();
        let t = enumerate(self.q(), self.gb.tips(), EnumerateOptions { max_level: self.max_n, quasi, word_cap: None })
            .map_err(|e| RunError::Other(e.to_string()))?;
        self.doc.parameters.quasi = quasi;
        self.doc.overlaps = Some(overlap_section(self.q(), &t, quasi));
        Ok(())
    }

    fn presentation(&self, module: &str) -> &ModulePresentation<F::Elem> {
        &self.modules[module]
    }

    fn syzygy(&self, model: &AlgebraModel<F>, module: &str) -> Result<FirstSyzygy<F::Elem>, RunError> {
        first_syzygy(model, self.presentation(module)).map_err(|e| RunError::Presentation { module: module.into(), source: e })
    }

    /// Shifted windows for `n = 1..=max_n`, with the refined quasioverlap window.
    fn windows(&self, syz: &FirstSyzygy<F::Elem>, table: &OverlapTable, methods: &[WindowMethod]) -> Vec<(String, DegreeWindow)> {
        let mut out = Vec::new();
        for n in 1..=self.max_n {
            for &m in methods {
                let w = match syz.degree_range() {
                    None => DegreeWindow::empty(n, m),
                    Some((k, l)) => degree_window(n, k, l, table, m, IndexConvention::Shifted).expect("table is deep enough"),
                };
                let label = if m == WindowMethod::Quasioverlap { "qo" } else { "o" };
                out.push((label.to_string(), w));
                if m == WindowMethod::Quasioverlap {
                    out.push(("qo-refined".into(), refined_quasi_window(n, syz, table).expect("table is deep enough")));
                }
            }
        }
        out
    }

    fn window_section(&self, windows: &[(String, DegreeWindow)]) -> WindowSection {
        let rows: Vec<WindowRow> = windows
            .iter()
            .map(|(label, w)| WindowRow { n: w.n, method: label.clone(), lo: w.interval.lo.into(), hi: w.interval.hi.into() })
            .collect();
        let required = windows.iter().filter(|(l, _)| l != "qo-refined").map(|(_, w)| w.interval.hi.finite()).try_fold(0i64, |acc, hi| {
            // an empty window has top -inf; an unbounded one makes the cap underivable
            match hi {
                Some(h) => Some(acc.max(h)),
                None => Some(acc),
            }
        });
        WindowSection { rows, required_max_degree: required.map(|r| r.max(0) as usize) }
    }

    /// Model through the degree cap, raised to the largest window top when the
    /// cap was not given and the extra words fit the budget.
    fn model_for(&mut self, module: &str, methods: &[WindowMethod]) -> Result<Prepared<F>, RunError> {
        let table = self.table(self.max_n.max(2))?;
        let model = build_model(&self.alg, &self.gb, self.max_degree);
        let syz = self.syzygy(&model, module)?;
        let windows = self.windows(&syz, &table, methods);
        if self.auto_degree && self.gb.is_complete() {
            if let Some(top) = self.window_section(&windows).required_max_degree {
                let words: usize = (0..=top.min(AUTO_DEGREE_CEILING)).map(|d| normal_words(self.q(), self.alg.order(), self.gb.tips(), d).len()).sum();
                if top > self.max_degree && top <= AUTO_DEGREE_CEILING && words <= AUTO_WORD_BUDGET {
                    self.max_degree = top;
                    self.gb = complete(&self.alg, &self.ideal, top)?;
                    let model = build_model(&self.alg, &self.gb, top);
                    let syz = self.syzygy(&model, module)?;
                    let windows = self.windows(&syz, &table, methods);
                    return Ok((model, syz, table, windows));
                }
            }
        }
        Ok((model, syz, table, windows))
    }

    fn syzygy_section(&self, module: &str, syz: &FirstSyzygy<F::Elem>) -> SyzygySection {
        let names = self.generator_names(module);
        let row = |h: &gradres_core::syzygy::SyzygyElement<F::Elem>| SyzygyRow {
            element: show_module_element(&self.alg, &names, &h.element),
            degree: h.degree,
            tip: format!("{}*{}", names[h.tip().generator], show_path(self.q(), &h.tip().path)),
        };
        SyzygySection {
            t1: syz.t1.iter().map(row).collect(),
            t1_prime: syz.t1_prime.iter().map(row).collect(),
            degree_range: syz.degree_range().map(|(k, l)| [k, l]),
        }
    }

    fn generator_names(&self, module: &str) -> Vec<String> {
        match self.pf.modules.iter().find(|m| m.name == module) {
            Some(m) => m.generators.iter().map(|g| g.name.clone()).collect(),
            None => self.q().vertices().map(|v| format!("f_{}", self.q().vertex_name(v))).collect(),
        }
    }

    fn window(&mut self, module: &str, method: WindowMethod) -> Result<(), RunError> {
        self.doc.parameters.method = Some(method_name(method).into());
        let (_, syz, _, windows) = self.model_for(module, &[method])?;
        self.doc.syzygy = Some(self.syzygy_section(module, &syz));
        self.doc.windows = Some(self.window_section(&windows));
        if !self.gb.is_complete() {
            self.basis_verdict();
        }
        Ok(())
    }

    /// Extra degree bounds: chain lengths for `A0` over a complete basis.
    fn extra_bounds(&self, module: &str, table: &OverlapTable) -> Vec<DegreeBound> {
        if module == SIMPLE_TOPS && self.gb.is_complete() {
            chain_bounds(table, self.max_n)
        } else {
            Vec::new()
        }
    }

    fn resolution(&mut self, module: &str, model: &AlgebraModel<F>, table: &OverlapTable) -> ResolutionReport {
        let extra = self.extra_bounds(module, table);
        let mut res = minimal_resolution(model, self.presentation(module), self.max_n, &extra);
        match res.check() {
            Ok(()) => self.doc.verdict("exactness", Status::Pass, "onto, exact, a complex and minimal in every computed degree"),
            Err(v) => self.doc.verdict("exactness", Status::Fail, format!("{v:?}")),
        }
        let r = res.report();
        self.doc.resolution = Some(ResolutionSection {
            max_n: r.max_n,
            max_degree: r.max_degree,
            degrees: r.degrees.clone(),
            complete: r.complete.clone(),
            hilbert: r.hilbert.clone(),
            certified: r.is_certified(),
            truncation: r.truncation.map(|(n, d)| [n, d]),
        });
        r
    }

    fn certification_verdict(&mut self, r: &ResolutionReport) {
        match r.truncation {
            _ if !r.exact_model => self.doc.verdict("certificate", Status::Truncated, "the Groebner basis is not certified through the degree cap"),
            None => self.doc.verdict("certificate", Status::Pass, format!("no generators above degree {} through P_{}", r.max_degree, r.max_n)),
            Some((n, d)) => self.doc.verdict("certificate", Status::Truncated, format!("P_{n} may have generators above degree {d}; raise --max-degree")),
        }
    }

    fn resolve(&mut self, module: &str) -> Result<(), RunError> {
        let (model, _, table, _) = self.model_for(module, &[WindowMethod::Quasioverlap, WindowMethod::Overlap])?;
        let r = self.resolution(module, &model, &table);
        self.certification_verdict(&r);
        Ok(())
    }

    fn check(&mut self, module: &str, kind: &CheckKind) -> Result<(), RunError> {
        let (name, collection) = match kind {
            CheckKind::SKoszul(s) => return self.s_koszul(*s),
            CheckKind::Linear => {
                let m0 = self.presentation(module).generators().iter().map(|g| g.degree).min().unwrap_or(0) as i64;
                ("linear".to_string(), DegreeCollection::Singleton(std::sync::Arc::new(move |i| i as i64 + m0)))
            }
            CheckKind::Determined(spec) => (format!("determined {spec}"), parse_collection(spec)?),
        };
        self.doc.parameters.check = Some(name.clone());
        let (model, _, table, _) = self.model_for(module, &[WindowMethod::Quasioverlap, WindowMethod::Overlap])?;
        let r = self.resolution(module, &model, &table);
        let v = determined_check(&r, &collection, self.max_n).map_err(|e| RunError::Other(e.to_string()))?;
        match (v.first_violation, v.certified) {
            (Some((n, d)), _) => self.doc.verdict(&name, Status::Fail, format!("P_{n} has a generator in degree {d}")),
            (None, true) => self.doc.verdict(&name, Status::Pass, format!("P_0..P_{} generated in the allowed degrees", self.max_n)),
            (None, false) => self.doc.verdict(&name, Status::Truncated, "holds through the degree cap, which does not certify the terms"),
        }
        Ok(())
    }

    fn s_koszul(&mut self, s: usize) -> Result<(), RunError> {
        if s < 2 {
            return Err(RunError::BadS);
        }
        let name = format!("s-koszul {s}");
        self.doc.parameters.check = Some(name.clone());
        let t = self.table(2)?;
        match s_koszul_criterion(&self.gb, s, &t) {
            Ok(c) => {
                let detail = format!("len(S) = {} (<= {s}), maxo_2 = {} (<= {}), mino_1 = {} (= {s})", c.len_tips, Bound::from(c.maxo_2), s + 1, Bound::from(c.mino_1));
                let status = if c.holds { Status::Pass } else { Status::Fail };
                let detail = if c.holds { detail } else { format!("{detail}; the criterion is sufficient only, so this does not rule out s-Koszul") };
                self.doc.verdict(&name, status, detail);
            }
            Err(e) => self.doc.verdict(&name, Status::Truncated, e.to_string()),
        }
        Ok(())
    }

    fn verify(&mut self, module: &str) -> Result<(), RunError> {
        let (model, syz, table, windows) = self.model_for(module, &[WindowMethod::Quasioverlap, WindowMethod::Overlap])?;
        self.doc.syzygy = Some(self.syzygy_section(module, &syz));
        self.doc.windows = Some(self.window_section(&windows));
        let r = self.resolution(module, &model, &table);
        if !self.gb.is_complete() {
            self.basis_verdict();
        }
        let plain: Vec<DegreeWindow> = windows.iter().map(|(_, w)| *w).collect();
        for ((label, _), v) in windows.iter().zip(verify_windows(&r, &plain)) {
            let name = format!("window {label} P_{}", v.n);
            let shown = format!("[{}, {}]", Bound::from(v.window.lo), Bound::from(v.window.hi));
            if !v.pass() {
                self.doc.verdict(&name, Status::Fail, format!("degrees {:?} outside {shown}", v.outside));
            } else if r.complete[v.n] && r.exact_model {
                self.doc.verdict(&name, Status::Pass, format!("degrees {:?} inside {shown}", v.degrees));
            } else {
                self.doc.verdict(&name, Status::Truncated, format!("degrees {:?} inside {shown}, higher ones not ruled out", v.degrees));
            }
        }
        for n in 1..=self.max_n {
            let pick = |l: &str| windows.iter().find(|(x, w)| x == l && w.n == n).map(|(_, w)| w);
            if let (Some(qo), Some(o)) = (pick("qo"), pick("o")) {
                let ok = window_consistency(qo, o);
                self.doc.verdict(&format!("consistency P_{n}"), if ok { Status::Pass } else { Status::Fail }, "quasioverlap window inside overlap window");
            }
        }
        if module == SIMPLE_TOPS && self.gb.is_complete() && self.gb.elements().iter().all(|g| g.len() == 1) {
            for n in 1..=self.max_n.min(table.depth() + 1) {
                let mut lens: Vec<usize> = table.overlaps(n - 1).iter().map(|e| e.word.len()).filter(|l| *l <= r.max_degree).collect();
                lens.sort_unstable();
                let ok = lens == r.degrees[n];
                let detail = format!("P_{n} degrees {:?}, level {} lengths {:?}", r.degrees[n], n - 1, lens);
                self.doc.verdict(&format!("chains P_{n}"), if ok { Status::Pass } else { Status::Fail }, detail);
            }
        }
        self.certification_verdict(&r);
        Ok(())
    }
}

fn complete<F: Field>(alg: &PathAlgebra<F>, ideal: &[AlgebraElement<F::Elem>], max_degree: usize) -> Result<GroebnerBasis<F::Elem>, RunError> {
    alg.complete(ideal, max_degree).map_err(|e| match e {
        gradres_core::AlgebraError::CapTooSmall { cap, needed } => RunError::CapTooSmall { cap, needed },
        e => RunError::Other(e.to_string()),
    })
}

fn method_name(m: WindowMethod) -> &'static str {
    match m {
        WindowMethod::Quasioverlap => "qo",
        WindowMethod::Overlap => "o",
    }
}

pub fn show_element<F: Field>(alg: &PathAlgebra<F>, x: &AlgebraElement<F::Elem>) -> String {
    // highest term first
    show_terms(alg.field(), x.terms().iter().rev().map(|(p, c)| (c, show_path(alg.quiver(), p))))
}

fn show_module_element<F: Field>(alg: &PathAlgebra<F>, names: &[String], x: &ModuleElement<F::Elem>) -> String {
    show_terms(
        alg.field(),
        x.terms().iter().rev().map(|(t, c)| {
            let body = if t.path.is_vertex() { names[t.generator].clone() } else { format!("{}*{}", names[t.generator], show_path(alg.quiver(), &t.path)) };
            (c, body)
        }),
    )
}

pub fn overlap_section(q: &Quiver, t: &OverlapTable, quasi: bool) -> OverlapSection {
    let levels = (0..=t.depth())
        .map(|n| {
            let e = t.extrema(n);
            LevelSection {
                n,
                overlaps: t
                    .overlaps(n)
                    .iter()
                    .enumerate()
                    .map(|(i, x)| OverlapRow { word: show_path(q, &x.word), rho: (1..n).rev().map(|k| show_path(q, t.rho(n, i, k))).collect() })
                    .collect(),
                quasi: (quasi && t.has_quasi()).then(|| {
                    t.quasi(n)
                        .iter()
                        .enumerate()
                        .map(|(i, x)| QuasiRow {
                            word: show_path(q, &x.word),
                            phantom: show_path(q, &x.phantom),
                            rho: (1..n).rev().map(|k| show_path(q, t.rho_quasi(n, i, k))).collect(),
                        })
                        .collect()
                }),
                extrema: report::Extrema { mino: e.mino.into(), maxo: e.maxo.into(), minqo: t.has_quasi().then(|| e.minqo.into()), maxqo: t.has_quasi().then(|| e.maxqo.into()) },
            }
        })
        .collect();
    OverlapSection { tips: t.tips().iter().map(|p| show_path(q, p)).collect(), len_s: t.len_s(), levels }
}
