//! Problem files: a line-oriented description of a quiver, an admissible order,
//! a field, ideal generators, named module presentations and run parameters.
//!
//! ```text
//! [quiver]
//! vertex e
//! arrow x : e -> e
//! arrow y : e -> e
//! [order]
//! arrows x > y
//! [field]
//! Q
//! [ideal]
//! x*y
//! y*x
//! x^3 - y^3
//! [module M]
//! generator g : e @ 0
//! g*x
//! [run]
//! max-n 5
//! max-degree 12
//! ```
//!
//! `#` starts a comment. Paths are factors joined by `*`; a factor is an arrow
//! or vertex name with an optional power `^k`. Scalars are integers or `p/q`,
//! optionally followed by `*`. In a module section every term starts with a
//! generator name. Field lines are `Q` or `Fp <prime>`.

use std::collections::BTreeMap;
use std::fmt;

use gradres_core::field::Field;
use gradres_core::syzygy::{Generator, ModulePresentation};
use gradres_core::{AlgebraElement, Combination, ModuleTerm, OrderSpec, Path, PathAlgebra, PrimeField, Quiver};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The built-in module `A_0`: one simple top per vertex.
pub const SIMPLE_TOPS: &str = "A0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticCode {
    Syntax,
    UnknownSection,
    DuplicateSection,
    MissingSection,
    UnknownIdentifier,
    DuplicateIdentifier,
    NonComposable,
    NonParallel,
    Inhomogeneous,
    DegreeTooLow,
    BadFieldSpec,
    ScalarUndefined,
    BadOrder,
    BadRunParameter,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        use DiagnosticCode::*;
        match self {
            Syntax => "E100",
            UnknownSection => "E101",
            DuplicateSection => "E102",
            MissingSection => "E103",
            UnknownIdentifier => "E201",
            DuplicateIdentifier => "E202",
            NonComposable => "E203",
            NonParallel => "E204",
            Inhomogeneous => "E205",
            DegreeTooLow => "E206",
            BadFieldSpec => "E301",
            ScalarUndefined => "E302",
            BadOrder => "E401",
            BadRunParameter => "E501",
        }
    }
}

/// A located error. Lines and columns start at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error[{}]: {}", self.line, self.col, self.code.as_str(), self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// Explicit precedence lists, greatest first. Empty lists mean declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderDecl {
    pub arrows: Vec<String>,
    pub vertices: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

/// A path in canonical form: a vertex, or a nonempty arrow sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathExpr {
    Vertex(String),
    Arrows(Vec<String>),
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Vertex(v) => write!(f, "{v}"),
            PathExpr::Arrows(a) => write!(f, "{}", a.join("*")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub path: PathExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleTermExpr {
    pub coeff: BigRational,
    pub generator: String,
    /// `None` for the generator itself.
    pub path: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub vertex: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub generators: Vec<GeneratorDecl>,
    pub relations: Vec<Vec<ModuleTermExpr>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunParams {
    pub max_n: Option<usize>,
    pub max_degree: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub order: OrderDecl,
    pub field: FieldSpec,
    pub ideal: Vec<Vec<Term>>,
    pub modules: Vec<ModuleDecl>,
    pub run: RunParams,
}

/// Typed objects built from a problem file over a concrete field.
#[derive(Clone, Debug)]
pub struct Instance<F: Field> {
    pub algebra: PathAlgebra<F>,
    pub ideal: Vec<AlgebraElement<F::Elem>>,
    pub modules: BTreeMap<String, ModulePresentation<F::Elem>>,
}

impl ProblemFile {
    pub fn quiver(&self) -> Quiver {
        let mut q = Quiver::new();
        for v in &self.vertices {
            q.add_vertex(v).expect("validated");
        }
        for a in &self.arrows {
            let s = q.vertex_by_name(&a.source).expect("validated");
            let t = q.vertex_by_name(&a.target).expect("validated");
            q.add_arrow(&a.name, s, t).expect("validated");
        }
        q
    }

    pub fn order_spec(&self, q: &Quiver) -> OrderSpec {
        if self.order.arrows.is_empty() && self.order.vertices.is_empty() {
            return OrderSpec::declaration_order(q);
        }
        let arrows: Vec<&str> = if self.order.arrows.is_empty() {
            self.arrows.iter().map(|a| a.name.as_str()).collect()
        } else {
            self.order.arrows.iter().map(String::as_str).collect()
        };
        let vertices: Vec<&str> = self.order.vertices.iter().map(String::as_str).collect();
        OrderSpec::length_lex(q, &arrows, &vertices).expect("validated")
    }

    pub fn module_names(&self) -> Vec<&str> {
        std::iter::once(SIMPLE_TOPS).chain(self.modules.iter().map(|m| m.name.as_str())).collect()
    }

    /// Builds the algebra, the ideal generators and every module (including `A0`).
    pub fn instance<F: Field>(&self, field: F) -> Instance<F> {
        let q = self.quiver();
        let order = self.order_spec(&q);
        let algebra = PathAlgebra::new(q, order, field);
        let (q, f) = (algebra.quiver(), algebra.field());
        let scalar = |c: &BigRational| f.from_ratio(c.numer(), c.denom()).expect("validated");
        let ideal = self
            .ideal
            .iter()
            .map(|r| algebra.element(r.iter().map(|t| (resolve_path(q, &t.path), scalar(&t.coeff)))).expect("validated"))
            .filter(|x| !x.is_zero())
            .collect();
        let mut modules = BTreeMap::new();
        modules.insert(SIMPLE_TOPS.to_string(), ModulePresentation::simple_tops(f, q));
        for m in &self.modules {
            let gens: Vec<Generator> = m
                .generators
                .iter()
                .map(|g| Generator { vertex: q.vertex_by_name(&g.vertex).expect("validated"), degree: g.degree })
                .collect();
            let index = |name: &str| m.generators.iter().position(|g| g.name == name).expect("validated");
            let rels = m
                .relations
                .iter()
                .map(|r| {
                    Combination::from_terms(
                        f,
                        algebra.order(),
                        r.iter().map(|t| {
                            let j = index(&t.generator);
                            let p = match &t.path {
                                None => Path::vertex(gens[j].vertex),
                                Some(a) => q.path(&a.iter().map(String::as_str).collect::<Vec<_>>()).expect("validated"),
                            };
                            (ModuleTerm::new(j, p), scalar(&t.coeff))
                        }),
                    )
                })
                .collect();
            modules.insert(m.name.clone(), ModulePresentation::new(gens, rels).expect("validated"));
        }
        Instance { algebra, ideal, modules }
    }

    /// Canonical text; `parse(render(p)) == p`.
    pub fn render(&self) -> String {
        let mut out = String::from("[quiver]\n");
        if !self.vertices.is_empty() {
            out += &format!("vertex {}\n", self.vertices.join(" "));
        }
        for a in &self.arrows {
            out += &format!("arrow {} : {} -> {}\n", a.name, a.source, a.target);
        }
        if !self.order.arrows.is_empty() || !self.order.vertices.is_empty() {
            out += "\n[order]\n";
            if !self.order.arrows.is_empty() {
                out += &format!("arrows {}\n", self.order.arrows.join(" > "));
            }
            if !self.order.vertices.is_empty() {
                out += &format!("vertices {}\n", self.order.vertices.join(" > "));
            }
        }
        out += &format!("\n[field]\n{}\n", self.field);
        if !self.ideal.is_empty() {
            out += "\n[ideal]\n";
            for r in &self.ideal {
                out += &render_terms(r.iter().map(|t| (&t.coeff, t.path.to_string())));
                out.push('\n');
            }
        }
        for m in &self.modules {
            out += &format!("\n[module {}]\n", m.name);
            for g in &m.generators {
                out += &format!("generator {} : {} @ {}\n", g.name, g.vertex, g.degree);
            }
            for r in &m.relations {
                let terms = r.iter().map(|t| {
                    let body = match &t.path {
                        None => t.generator.clone(),
                        Some(a) => format!("{}*{}", t.generator, a.join("*")),
                    };
                    (&t.coeff, body)
                });
                out += &render_terms(terms);
                out.push('\n');
            }
        }
        let RunParams { max_n, max_degree, seed } = self.run;
        if max_n.is_some() || max_degree.is_some() || seed.is_some() {
            out += "\n[run]\n";
            if let Some(n) = max_n {
                out += &format!("max-n {n}\n");
            }
            if let Some(d) = max_degree {
                out += &format!("max-degree {d}\n");
            }
            if let Some(s) = seed {
                out += &format!("seed {s}\n");
            }
        }
        out
    }
}

fn resolve_path(q: &Quiver, p: &PathExpr) -> Path {
    match p {
        PathExpr::Vertex(v) => Path::vertex(q.vertex_by_name(v).expect("validated")),
        PathExpr::Arrows(a) => q.path(&a.iter().map(String::as_str).collect::<Vec<_>>()).expect("validated"),
    }
}

fn render_scalar(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (&'a BigRational, String)>) -> String {
    let mut out = String::new();
    for (i, (c, body)) in terms.enumerate() {
        let (neg, mag) = (c.is_negative(), c.abs());
        match (i, neg) {
            (0, true) => out += "-",
            (0, false) => {}
            (_, true) => out += " - ",
            (_, false) => out += " + ",
        }
        if !mag.is_one() {
            out += &render_scalar(&mag);
            out += "*";
        }
        out += &body;
    }
    out
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, code: DiagnosticCode, col: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic { code, line: self.no, col, message: message.into() }
    }

    fn end_col(&self) -> usize {
        self.text.chars().count() + 1
    }

    fn tokens(&self) -> Result<Vec<Token>, Diagnostic> {
        let chars: Vec<char> = self.text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                // hyphenated keywords; elsewhere `-` is a minus sign
                for kw in HYPHENATED {
                    let n = kw.chars().count();
                    let word: String = chars[start..(start + n).min(chars.len())].iter().collect();
                    let boundary = chars.get(start + n).is_none_or(|c| !(c.is_ascii_alphanumeric() || *c == '_'));
                    if word == *kw && boundary {
                        i = start + n;
                    }
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(s.parse().expect("digits")), col });
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, col });
                i += 2;
            } else if "*^/+-:@>".contains(c) {
                out.push(Token { tok: Tok::Sym(c), col });
                i += 1;
            } else {
                return Err(self.err(DiagnosticCode::Syntax, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(out)
    }
}

const HYPHENATED: [&str; 3] = ["max-n", "max-degree", "length-lex"];

fn is_name(s: &str) -> bool {
    !s.contains('-')
}

struct Cursor<'l, 'a> {
    line: &'l Line<'a>,
    toks: Vec<Token>,
    pos: usize,
}

impl<'l, 'a> Cursor<'l, 'a> {
    fn new(line: &'l Line<'a>) -> Result<Self, Diagnostic> {
        Ok(Self { toks: line.tokens()?, line, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.line.end_col(), |t| t.col)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn syntax(&self, what: &str) -> Diagnostic {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
            Some(Tok::Arrow) => "`->`".to_string(),
        };
        self.line.err(DiagnosticCode::Syntax, self.col(), format!("expected {what}, found {found}"))
    }

    fn name(&mut self, what: &str) -> Result<(String, usize), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) if is_name(s) => {
                let s = s.clone();
                let col = self.col();
                self.pos += 1;
                Ok((s, col))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("`{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(&Tok::Sym(c));
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn uint(&mut self, what: &str) -> Result<(BigInt, usize), Diagnostic> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                let col = self.col();
                self.pos += 1;
                Ok((n, col))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn small(&mut self, what: &str) -> Result<usize, Diagnostic> {
        let (n, col) = self.uint(what)?;
        usize::try_from(&n).map_err(|_| self.line.err(DiagnosticCode::Syntax, col, format!("{n} is too large")))
    }

    fn done(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.syntax("end of line")),
        }
    }
}

/// A parsed factor before name resolution.
struct Factor {
    name: String,
    col: usize,
    power: usize,
}

struct RawTerm {
    coeff: BigRational,
    col: usize,
    scalar_col: usize,
    factors: Vec<Factor>,
}

fn parse_polynomial(c: &mut Cursor) -> Result<Vec<RawTerm>, Diagnostic> {
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let col = c.col();
        let negative = if c.eat('-') {
            true
        } else {
            if !c.eat('+') && !first {
                return Err(c.syntax("`+`, `-` or end of line"));
            }
            false
        };
        first = false;
        let mut coeff = BigRational::one();
        let scalar_col = c.col();
        if let Some(Tok::Int(_)) = c.peek() {
            let (num, _) = c.uint("a scalar")?;
            let den = if c.eat('/') {
                let (d, dcol) = c.uint("a denominator")?;
                if d.is_zero() {
                    return Err(c.line.err(DiagnosticCode::Syntax, dcol, "zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            coeff = BigRational::new(num, den);
            c.eat('*');
        }
        if negative {
            coeff = -coeff;
        }
        let mut factors = Vec::new();
        loop {
            let (name, fcol) = c.name("a path")?;
            let power = if c.eat('^') { c.small("an exponent")? } else { 1 };
            factors.push(Factor { name, col: fcol, power });
            if !c.eat('*') {
                break;
            }
        }
        terms.push(RawTerm { coeff, col, scalar_col, factors });
        if c.peek().is_none() {
            return Ok(terms);
        }
    }
}

/// Resolves factors to a canonical path, checking composability.
/// `start` fixes the source vertex (module terms).
fn resolve_factors(
    line: &Line,
    q: &Quiver,
    factors: &[Factor],
    start: Option<&str>,
) -> Result<(PathExpr, Path), Diagnostic> {
    let mut cur: Option<Path> = start.map(|v| Path::vertex(q.vertex_by_name(v).expect("declared")));
    let mut names = Vec::new();
    for f in factors {
        let piece = if let Some(a) = q.arrow_by_name(&f.name) {
            for _ in 0..f.power {
                names.push(f.name.clone());
            }
            Path::from_arrows(vec![a; f.power]).map_err(|_| {
                line.err(DiagnosticCode::NonComposable, f.col, format!("`{}` is not a loop and cannot be raised to a power", f.name))
            })?
        } else if let Some(v) = q.vertex_by_name(&f.name) {
            Path::vertex(v)
        } else {
            return Err(line.err(DiagnosticCode::UnknownIdentifier, f.col, format!("unknown arrow or vertex `{}`", f.name)));
        };
        if f.power == 0 && !piece.is_vertex() {
            return Err(line.err(DiagnosticCode::Syntax, f.col, "exponent must be positive"));
        }
        cur = Some(match cur {
            None => piece,
            Some(p) => p.compose(&piece).map_err(|_| {
                line.err(
                    DiagnosticCode::NonComposable,
                    f.col,
                    format!(
                        "`{}` starts at {} but the path before it ends at {}",
                        f.name,
                        q.vertex_name(piece.source()),
                        q.vertex_name(p.target())
                    ),
                )
            })?,
        });
    }
    let p = cur.expect("at least one factor");
    let expr = if names.is_empty() { PathExpr::Vertex(q.vertex_name(p.source()).to_string()) } else { PathExpr::Arrows(names) };
    Ok((expr, p))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Quiver,
    Order,
    Field,
    Ideal,
    Module(usize),
    Run,
}

pub fn parse(text: &str) -> Result<ProblemFile, Diagnostic> {
    let mut pf = ProblemFile::default();
    let mut q = Quiver::new();
    let mut section: Option<Section> = None;
    let mut seen: Vec<Section> = Vec::new();
    let mut field_line: Option<usize> = None;
    // ideal and module lines are resolved once the quiver and field are complete
    let mut deferred: Vec<(Section, usize, &str)> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line { no: i + 1, text: body };
        last_line = i + 1;
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            let col = body.find('[').unwrap() + 1;
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| line.err(DiagnosticCode::Syntax, col, "section header must end with `]`"))?;
            let words: Vec<&str> = inner.split_whitespace().collect();
            let s = match words.as_slice() {
                ["quiver"] => Section::Quiver,
                ["order"] => Section::Order,
                ["field"] => Section::Field,
                ["ideal"] => Section::Ideal,
                ["run"] => Section::Run,
                ["module", name] => {
                    if !is_ident(name) {
                        return Err(line.err(DiagnosticCode::Syntax, col, format!("`{name}` is not a valid module name")));
                    }
                    if *name == SIMPLE_TOPS || pf.modules.iter().any(|m| m.name == *name) {
                        return Err(line.err(DiagnosticCode::DuplicateIdentifier, col, format!("module `{name}` is already defined")));
                    }
                    pf.modules.push(ModuleDecl { name: name.to_string(), generators: Vec::new(), relations: Vec::new() });
                    Section::Module(pf.modules.len() - 1)
                }
                _ => return Err(line.err(DiagnosticCode::UnknownSection, col, format!("unknown section `[{inner}]`"))),
            };
            if !matches!(s, Section::Module(_)) && seen.contains(&s) {
                return Err(line.err(DiagnosticCode::DuplicateSection, col, format!("section `[{inner}]` appears twice")));
            }
            let quiver_needed = !matches!(s, Section::Quiver);
            if quiver_needed && !seen.contains(&Section::Quiver) {
                return Err(line.err(DiagnosticCode::MissingSection, col, "the `[quiver]` section must come first"));
            }
            seen.push(s);
            section = Some(s);
            continue;
        }
        let Some(s) = section else {
            let col = body.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
            return Err(line.err(DiagnosticCode::Syntax, col, "content before the first section header"));
        };
        let mut c = Cursor::new(&line)?;
        match s {
            Section::Quiver => quiver_line(&mut c, &mut q, &mut pf)?,
            Section::Order => order_line(&mut c, &q, &mut pf.order)?,
            Section::Field => {
                if field_line.is_some() {
                    return Err(line.err(DiagnosticCode::BadFieldSpec, c.col(), "the field is already given"));
                }
                field_line = Some(line.no);
                pf.field = field_spec(&mut c)?;
            }
            Section::Run => run_line(&mut c, &mut pf.run)?,
            Section::Ideal => deferred.push((s, line.no, body)),
            Section::Module(m) => {
                if let Some(Tok::Ident(w)) = c.peek() {
                    if w == "generator" {
                        c.next();
                        generator_line(&mut c, &q, &mut pf.modules[m])?;
                        continue;
                    }
                }
                deferred.push((s, line.no, body));
            }
        }
    }
    if !seen.contains(&Section::Quiver) {
        return Err(Diagnostic { code: DiagnosticCode::MissingSection, line: last_line.max(1), col: 1, message: "missing `[quiver]` section".into() });
    }
    if seen.contains(&Section::Order) {
        check_order(&q, &pf.order, text)?;
    }
    let prime = match pf.field {
        FieldSpec::Prime(p) => Some(PrimeField::new(p).expect("checked")),
        FieldSpec::Rationals => None,
    };

    for (s, no, body) in deferred {
        let line = Line { no, text: body };
        let mut c = Cursor::new(&line)?;
        let raw = parse_polynomial(&mut c)?;
        for t in &raw {
            if let Some(p) = &prime {
                if p.from_ratio(t.coeff.numer(), t.coeff.denom()).is_none() {
                    return Err(line.err(DiagnosticCode::ScalarUndefined, t.scalar_col, format!("{} is undefined in F_{}", render_scalar(&t.coeff), p.characteristic())));
                }
            }
        }
        match s {
            Section::Ideal => pf.ideal.push(ideal_relation(&line, &q, raw)?),
            Section::Module(m) => {
                let r = module_relation(&line, &q, &pf.modules[m], raw)?;
                pf.modules[m].relations.push(r);
            }
            _ => unreachable!(),
        }
    }
    Ok(pf)
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn quiver_line(c: &mut Cursor, q: &mut Quiver, pf: &mut ProblemFile) -> Result<(), Diagnostic> {
    let (kw, kcol) = c.name("`vertex` or `arrow`")?;
    match kw.as_str() {
        "vertex" | "vertices" => {
            if c.peek().is_none() {
                return Err(c.syntax("a vertex name"));
            }
            while c.peek().is_some() {
                let (v, col) = c.name("a vertex name")?;
                q.add_vertex(&v).map_err(|_| c.line.err(DiagnosticCode::DuplicateIdentifier, col, format!("`{v}` is already declared")))?;
                pf.vertices.push(v);
            }
            Ok(())
        }
        "arrow" => {
            let (a, acol) = c.name("an arrow name")?;
            c.sym(':')?;
            let (s, scol) = c.name("a source vertex")?;
            if c.peek() != Some(&Tok::Arrow) {
                return Err(c.syntax("`->`"));
            }
            c.next();
            let (t, tcol) = c.name("a target vertex")?;
            c.done()?;
            let vs = q.vertex_by_name(&s).ok_or_else(|| c.line.err(DiagnosticCode::UnknownIdentifier, scol, format!("unknown vertex `{s}`")))?;
            let vt = q.vertex_by_name(&t).ok_or_else(|| c.line.err(DiagnosticCode::UnknownIdentifier, tcol, format!("unknown vertex `{t}`")))?;
            q.add_arrow(&a, vs, vt).map_err(|_| c.line.err(DiagnosticCode::DuplicateIdentifier, acol, format!("`{a}` is already declared")))?;
            pf.arrows.push(ArrowDecl { name: a, source: s, target: t });
            Ok(())
        }
        _ => Err(c.line.err(DiagnosticCode::Syntax, kcol, format!("expected `vertex` or `arrow`, found `{kw}`"))),
    }
}

fn order_line(c: &mut Cursor, q: &Quiver, order: &mut OrderDecl) -> Result<(), Diagnostic> {
    let kcol = c.col();
    let kw = match c.next() {
        Some(Token { tok: Tok::Ident(s), .. }) => s,
        _ => return Err(c.line.err(DiagnosticCode::Syntax, kcol, "expected `arrows`, `vertices` or `length-lex`")),
    };
    if kw == "length-lex" || kw == "deglex" {
        return c.done();
    }
    let arrows = match kw.as_str() {
        "arrows" => true,
        "vertices" => false,
        _ => return Err(c.line.err(DiagnosticCode::Syntax, kcol, format!("expected `arrows` or `vertices`, found `{kw}`"))),
    };
    let target = if arrows { &mut order.arrows } else { &mut order.vertices };
    if !target.is_empty() {
        return Err(c.line.err(DiagnosticCode::BadOrder, kcol, format!("`{kw}` precedence is already given")));
    }
    loop {
        let (n, col) = c.name("a name")?;
        let known = if arrows { q.arrow_by_name(&n).is_some() } else { q.vertex_by_name(&n).is_some() };
        if !known {
            return Err(c.line.err(DiagnosticCode::UnknownIdentifier, col, format!("unknown {} `{n}`", if arrows { "arrow" } else { "vertex" })));
        }
        if target.contains(&n) {
            return Err(c.line.err(DiagnosticCode::BadOrder, col, format!("`{n}` is listed twice")));
        }
        target.push(n);
        if c.peek().is_none() {
            return Ok(());
        }
        c.sym('>')?;
    }
}

/// Precedence lists must name everything once; reported at the `[order]` header.
fn check_order(q: &Quiver, order: &OrderDecl, text: &str) -> Result<(), Diagnostic> {
    let no = text.lines().position(|l| l.trim_start().starts_with("[order")).map_or(1, |i| i + 1);
    let err = |m: String| Diagnostic { code: DiagnosticCode::BadOrder, line: no, col: 1, message: m };
    if !order.arrows.is_empty() && order.arrows.len() != q.arrow_count() {
        return Err(err(format!("arrow precedence names {} of {} arrows", order.arrows.len(), q.arrow_count())));
    }
    if !order.vertices.is_empty() && order.vertices.len() != q.vertex_count() {
        return Err(err(format!("vertex precedence names {} of {} vertices", order.vertices.len(), q.vertex_count())));
    }
    Ok(())
}

fn field_spec(c: &mut Cursor) -> Result<FieldSpec, Diagnostic> {
    let col = c.col();
    let bad = |m: String| c.line.err(DiagnosticCode::BadFieldSpec, col, m);
    match c.peek().cloned() {
        Some(Tok::Ident(s)) if s == "Q" || s == "QQ" => {
            c.next();
            c.done().map_err(|_| bad("`Q` takes no argument".into()))?;
            Ok(FieldSpec::Rationals)
        }
        Some(Tok::Ident(s)) if s == "Fp" || s == "GF" => {
            c.next();
            let (p, _) = c.uint("a prime").map_err(|_| bad(format!("`{s}` needs a prime characteristic")))?;
            c.done().map_err(|_| bad("unexpected text after the characteristic".into()))?;
            let p = u64::try_from(&p).ok().filter(|p| PrimeField::new(*p).is_some()).ok_or_else(|| bad(format!("{p} is not a supported prime")))?;
            Ok(FieldSpec::Prime(p))
        }
        _ => Err(bad("field must be `Q` or `Fp <prime>`".into())),
    }
}

fn run_line(c: &mut Cursor, run: &mut RunParams) -> Result<(), Diagnostic> {
    let (kw, kcol) = match c.peek().cloned() {
        Some(Tok::Ident(s)) => {
            let col = c.col();
            c.next();
            (s, col)
        }
        _ => return Err(c.syntax("a run parameter")),
    };
    let bad = |m: String| c.line.err(DiagnosticCode::BadRunParameter, kcol, m);
    let (value, vcol) = c.uint("a value")?;
    c.done()?;
    let slot_err = || bad(format!("`{kw}` is given twice"));
    let too_big = || c.line.err(DiagnosticCode::BadRunParameter, vcol, format!("{value} is too large"));
    match kw.as_str() {
        "max-n" => {
            if run.max_n.is_some() {
                return Err(slot_err());
            }
            run.max_n = Some(usize::try_from(&value).map_err(|_| too_big())?);
        }
        "max-degree" => {
            if run.max_degree.is_some() {
                return Err(slot_err());
            }
            run.max_degree = Some(usize::try_from(&value).map_err(|_| too_big())?);
        }
        "seed" => {
            if run.seed.is_some() {
                return Err(slot_err());
            }
            run.seed = Some(u64::try_from(&value).map_err(|_| too_big())?);
        }
        _ => return Err(bad(format!("unknown run parameter `{kw}`"))),
    }
    Ok(())
}

fn generator_line(c: &mut Cursor, q: &Quiver, m: &mut ModuleDecl) -> Result<(), Diagnostic> {
    let (g, gcol) = c.name("a generator name")?;
    c.sym(':')?;
    let (v, vcol) = c.name("a vertex")?;
    c.sym('@')?;
    let degree = c.small("a degree")?;
    c.done()?;
    if q.vertex_by_name(&v).is_none() {
        return Err(c.line.err(DiagnosticCode::UnknownIdentifier, vcol, format!("unknown vertex `{v}`")));
    }
    if m.generators.iter().any(|x| x.name == g) || q.vertex_by_name(&g).is_some() || q.arrow_by_name(&g).is_some() {
        return Err(c.line.err(DiagnosticCode::DuplicateIdentifier, gcol, format!("`{g}` is already declared")));
    }
    if !m.relations.is_empty() {
        return Err(c.line.err(DiagnosticCode::Syntax, 1, "generators must precede relations"));
    }
    m.generators.push(GeneratorDecl { name: g, vertex: v, degree });
    Ok(())
}

fn ideal_relation(line: &Line, q: &Quiver, raw: Vec<RawTerm>) -> Result<Vec<Term>, Diagnostic> {
    let mut out = Vec::new();
    let mut shape: Option<(usize, Path)> = None;
    for t in raw {
        let (expr, p) = resolve_factors(line, q, &t.factors, None)?;
        match &shape {
            None => {
                if p.len() < 2 {
                    return Err(line.err(DiagnosticCode::DegreeTooLow, t.col, format!("relation of degree {}; ideal generators need degree at least 2", p.len())));
                }
                shape = Some((t.col, p));
            }
            Some((_, first)) => {
                if p.len() != first.len() {
                    return Err(line.err(DiagnosticCode::Inhomogeneous, t.col, format!("term of degree {} in a relation of degree {}", p.len(), first.len())));
                }
                if (p.source(), p.target()) != (first.source(), first.target()) {
                    return Err(line.err(DiagnosticCode::NonParallel, t.col, "terms do not share source and target"));
                }
            }
        }
        out.push(Term { coeff: t.coeff, path: expr });
    }
    Ok(out)
}

fn module_relation(line: &Line, q: &Quiver, m: &ModuleDecl, raw: Vec<RawTerm>) -> Result<Vec<ModuleTermExpr>, Diagnostic> {
    let mut out = Vec::new();
    let mut shape: Option<(usize, String)> = None;
    for t in raw {
        let head = &t.factors[0];
        let g = m.generators.iter().find(|g| g.name == head.name).ok_or_else(|| {
            line.err(DiagnosticCode::UnknownIdentifier, head.col, format!("unknown generator `{}` in module `{}`", head.name, m.name))
        })?;
        if head.power != 1 {
            return Err(line.err(DiagnosticCode::Syntax, head.col, "a generator cannot be raised to a power"));
        }
        let rest = &t.factors[1..];
        let (path, len, target) = if rest.is_empty() {
            (None, 0, g.vertex.clone())
        } else {
            let (expr, p) = resolve_factors(line, q, rest, Some(&g.vertex))?;
            let target = q.vertex_name(p.target()).to_string();
            match expr {
                PathExpr::Vertex(_) => (None, 0, target),
                PathExpr::Arrows(a) => (Some(a), p.len(), target),
            }
        };
        let degree = g.degree + len;
        match &shape {
            None => shape = Some((degree, target)),
            Some((d, v)) => {
                if *d != degree {
                    return Err(line.err(DiagnosticCode::Inhomogeneous, t.col, format!("term of degree {degree} in a relation of degree {d}")));
                }
                if *v != target {
                    return Err(line.err(DiagnosticCode::NonParallel, t.col, "terms end at different vertices"));
                }
            }
        }
        out.push(ModuleTermExpr { coeff: t.coeff, generator: g.name.clone(), path });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
