//! Exact graded linear algebra over `A = kQ/I`: normal-word bases, the right
//! action of arrows, minimal graded projective resolutions computed degree by
//! degree, Hilbert functions, and an ideal membership test that never looks
//! at a Gröbner basis.
//!
//! Elements of a free module `⊕ f_j A` are sparse vectors over keys
//! `j·W + w`, where `w` is the global index of a normal word and `W` the total
//! number of normal words up to the model's degree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, GroebnerBasis, ModuleElement, PathAlgebra};
use crate::field::Field;
use crate::linalg::{self, Echelon, SparseVec};
use crate::overlaps::{Interval, OverlapTable};
use crate::quiver::{Arrow, Path, Vertex};
use crate::syzygy::{DegreeWindow, Generator, ModulePresentation};

/// Normal words of `A` up to a degree, with the action of every arrow.
#[derive(Clone, Debug)]
pub struct AlgebraModel<F: Field> {
    alg: PathAlgebra<F>,
    gb: GroebnerBasis<F::Elem>,
    max_degree: usize,
    exact: bool,
    words: Vec<Path>,
    offsets: Vec<usize>,
    index: BTreeMap<Path, usize>,
    parent: Vec<Option<(usize, Arrow)>>,
    action: Vec<Vec<(Arrow, SparseVec<F::Elem>)>>,
    by_ends: BTreeMap<(usize, Vertex, Vertex), Vec<usize>>,
}

/// Builds the model through degree `max_degree`. The dimensions are exact when
/// the basis is complete or certified through that degree; otherwise they are
/// only upper bounds and the model says so.
pub fn build_model<F: Field>(alg: &PathAlgebra<F>, gb: &GroebnerBasis<F::Elem>, max_degree: usize) -> AlgebraModel<F> {
    let exact = gb.certified_degree().is_none_or(|c| c >= max_degree);
    let mut words = Vec::new();
    let mut offsets = Vec::with_capacity(max_degree + 2);
    for d in 0..=max_degree {
        offsets.push(words.len());
        words.extend(crate::algebra::normal_words(alg.quiver(), alg.order(), gb.tips(), d));
    }
    offsets.push(words.len());
    let index: BTreeMap<Path, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let parent = words
        .iter()
        .map(|w| (!w.is_vertex()).then(|| (index[&w.prefix(w.len() - 1)], w.arrows()[w.len() - 1])))
        .collect();
    let mut by_ends: BTreeMap<(usize, Vertex, Vertex), Vec<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        by_ends.entry((w.len(), w.source(), w.target())).or_default().push(i);
    }
    let field = alg.field();
    let mut action = Vec::with_capacity(words.len());
    for w in &words {
        let mut acts = Vec::new();
        if w.len() < max_degree {
            for a in alg.quiver().arrows_from(w.target()) {
                let wa = w.extended(a);
                let v = match index.get(&wa) {
                    Some(&i) => alloc::vec![(i, field.one())],
                    None => {
                        let nf = alg.normal_form(&alg.monomial(wa), gb);
                        linalg::collect(field, nf.terms().iter().map(|(p, c)| (index[p], c.clone())))
                    }
                };
                acts.push((a, v));
            }
        }
        action.push(acts);
    }
    AlgebraModel { alg: alg.clone(), gb: gb.clone(), max_degree, exact, words, offsets, index, parent, action, by_ends }
}

impl<F: Field> AlgebraModel<F> {
    pub fn algebra(&self) -> &PathAlgebra<F> {
        &self.alg
    }

    pub fn groebner(&self) -> &GroebnerBasis<F::Elem> {
        &self.gb
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Whether the dimensions are exact (not just upper bounds).
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn dims(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Normal words of degree `d`, greatest first.
    pub fn words(&self, d: usize) -> &[Path] {
        &self.words[self.offsets[d]..self.offsets[d + 1]]
    }

    pub fn word(&self, id: usize) -> &Path {
        &self.words[id]
    }

    pub fn word_id(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn total_words(&self) -> usize {
        self.words.len()
    }

    /// Ids of the normal words of length `d` from `source` to `target`.
    pub fn words_between(&self, d: usize, source: Vertex, target: Vertex) -> &[usize] {
        self.by_ends.get(&(d, source, target)).map_or(&[], Vec::as_slice)
    }

    /// The word without its last arrow, and that arrow.
    pub fn parent(&self, id: usize) -> Option<(usize, Arrow)> {
        self.parent[id]
    }

    /// `NF(w·a)` over word ids; empty when `a` does not start at the end of `w`.
    pub fn act(&self, id: usize, a: Arrow) -> &[(usize, F::Elem)] {
        assert!(self.words[id].len() < self.max_degree, "product leaves the model");
        self.action[id].iter().find(|(b, _)| *b == a).map_or(&[], |(_, v)| v.as_slice())
    }

    /// Normal form of a path of length at most the model degree.
    pub fn normal_form(&self, p: &Path) -> SparseVec<F::Elem> {
        let mut v: SparseVec<F::Elem> = alloc::vec![(self.index[&Path::vertex(p.source())], self.field().one())];
        for &a in p.arrows() {
            v = self.times_arrow(&v, a);
        }
        v
    }

    /// Normal form of an element of `kQ` over word ids.
    pub fn reduce(&self, x: &AlgebraElement<F::Elem>) -> SparseVec<F::Elem> {
        let f = self.field();
        x.terms().iter().fold(Vec::new(), |acc, (p, c)| linalg::axpy(f, &acc, c, &self.normal_form(p)))
    }

    /// Normal form of a free-module element over keys.
    pub fn reduce_module(&self, m: &ModuleElement<F::Elem>) -> SparseVec<F::Elem> {
        let f = self.field();
        let mut out = Vec::new();
        for (t, c) in m.terms() {
            let nf: SparseVec<F::Elem> = self.normal_form(&t.path).into_iter().map(|(w, d)| (self.key(t.generator, w), d)).collect();
            out = linalg::axpy(f, &out, c, &nf);
        }
        out
    }

    pub fn key(&self, generator: usize, word: usize) -> usize {
        generator * self.words.len() + word
    }

    pub fn split_key(&self, key: usize) -> (usize, usize) {
        (key / self.words.len(), key % self.words.len())
    }

    /// `m·a` for a free-module element `m`.
    pub fn times_arrow(&self, m: &SparseVec<F::Elem>, a: Arrow) -> SparseVec<F::Elem> {
        let f = self.field();
        let mut out = Vec::new();
        for (key, c) in m {
            let (j, w) = self.split_key(*key);
            let scaled: SparseVec<F::Elem> = self.act(w, a).iter().map(|(u, x)| (self.key(j, *u), f.mul(c, x))).collect();
            out = linalg::axpy(f, &out, &f.one(), &scaled);
        }
        out
    }

    /// Keys of the degree-`d` part of `⊕ f_j A` ending at `v`, ascending.
    pub fn block(&self, generators: &[Generator], d: usize, v: Vertex) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, g) in generators.iter().enumerate() {
            if g.degree <= d && d - g.degree <= self.max_degree {
                out.extend(self.words_between(d - g.degree, g.vertex, v).iter().map(|&w| self.key(j, w)));
            }
        }
        out
    }

    /// The largest degree with nonzero words, when `A` visibly vanishes above it.
    pub fn top_degree(&self) -> Option<usize> {
        let dims = self.dims();
        let first_zero = dims.iter().position(|&n| n == 0)?;
        // A is generated in degree 1, so it vanishes above a zero component
        (first_zero <= self.gb.certified_degree().unwrap_or(usize::MAX)).then(|| first_zero.saturating_sub(1))
    }
}

/// The submodule `N ⊆ ⊕ f_i A` spanned by the relations of a presentation, as
/// an echelon basis in every degree and target vertex.
#[derive(Clone, Debug)]
pub struct RelationSpan<E> {
    basis: BTreeMap<(usize, Vertex), Vec<SparseVec<E>>>,
}

impl<E: Clone> RelationSpan<E> {
    pub fn basis(&self, d: usize, v: Vertex) -> &[SparseVec<E>] {
        self.basis.get(&(d, v)).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, d: usize, v: Vertex) -> usize {
        self.basis(d, v).len()
    }
}

/// Spans the relations degree by degree: `N_{d+1} = N_d·A_1 + (relations of degree d+1)`.
pub fn relation_span<F: Field>(model: &AlgebraModel<F>, pres: &ModulePresentation<F::Elem>) -> RelationSpan<F::Elem> {
    let f = model.field();
    let mut fresh: BTreeMap<(usize, Vertex), Vec<SparseVec<F::Elem>>> = BTreeMap::new();
    for (r, rel) in pres.relations().iter().enumerate() {
        let d = pres.relation_degree(r);
        if d > model.max_degree() {
            continue;
        }
        // split by target vertex: each part is again in N
        let mut parts: BTreeMap<Vertex, SparseVec<F::Elem>> = BTreeMap::new();
        for (t, c) in rel.terms() {
            let nf: SparseVec<F::Elem> =
                model.normal_form(&t.path).into_iter().map(|(w, x)| (model.key(t.generator, w), x)).collect();
            let slot = parts.entry(t.path.target()).or_default();
            *slot = linalg::axpy(f, slot, c, &nf);
        }
        for (v, vec) in parts {
            if !vec.is_empty() {
                fresh.entry((d, v)).or_default().push(vec);
            }
        }
    }
    let quiver = model.algebra().quiver();
    let mut basis: BTreeMap<(usize, Vertex), Vec<SparseVec<F::Elem>>> = BTreeMap::new();
    for d in 0..=model.max_degree() {
        for v in quiver.vertices() {
            let mut ech = Echelon::new(f.clone());
            if d > 0 {
                for u in quiver.vertices() {
                    for a in quiver.arrows_from(u).filter(|a| a.target == v) {
                        for b in basis.get(&(d - 1, u)).into_iter().flatten() {
                            ech.insert(&model.times_arrow(b, a));
                        }
                    }
                }
            }
            for x in fresh.get(&(d, v)).into_iter().flatten() {
                ech.insert(x);
            }
            if ech.rank() > 0 {
                basis.insert((d, v), ech.rows().cloned().collect());
            }
        }
    }
    RelationSpan { basis }
}

/// What is known about the generating degrees of one term of a resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DegreeBound {
    /// The term is zero.
    Vanishes,
    /// Every generator has degree at most this.
    AtMost(usize),
    Unknown,
}

impl DegreeBound {
    pub fn tighter(self, other: DegreeBound) -> DegreeBound {
        self.min(other)
    }

    fn certifies(self, max_degree: usize) -> bool {
        match self {
            DegreeBound::Vanishes => true,
            DegreeBound::AtMost(b) => b <= max_degree,
            DegreeBound::Unknown => false,
        }
    }
}

/// Bounds that hold for any presentation: generators of `P_0` are among the
/// presented ones, generators of `P_1` among the relations, and over a
/// finite-dimensional `A` with top degree `t` each further term adds at most `t`.
pub fn presentation_bounds<F: Field>(model: &AlgebraModel<F>, pres: &ModulePresentation<F::Elem>, max_n: usize) -> Vec<DegreeBound> {
    let max_or_zero = |it: &mut dyn Iterator<Item = usize>| it.max().map_or(DegreeBound::Vanishes, DegreeBound::AtMost);
    let mut out = alloc::vec![DegreeBound::Unknown; max_n + 1];
    out[0] = max_or_zero(&mut pres.generators().iter().map(|g| g.degree));
    if max_n >= 1 {
        out[1] = if out[0] == DegreeBound::Vanishes {
            DegreeBound::Vanishes
        } else {
            max_or_zero(&mut (0..pres.relations().len()).filter(|&r| !pres.relations()[r].is_zero()).map(|r| pres.relation_degree(r)))
        };
    }
    if let Some(top) = model.top_degree() {
        for n in 1..=max_n {
            let step = match out[n - 1] {
                DegreeBound::Vanishes => DegreeBound::Vanishes,
                DegreeBound::AtMost(b) => DegreeBound::AtMost(b + top),
                DegreeBound::Unknown => DegreeBound::Unknown,
            };
            out[n] = out[n].tighter(step);
        }
    }
    for n in 1..=max_n {
        if out[n - 1] == DegreeBound::Vanishes {
            out[n] = DegreeBound::Vanishes;
        }
    }
    out
}

/// Bounds for the simple top `A_0` from chains of tips of a complete basis:
/// the chain resolution has `P_n` generated in the lengths of level `n−1`, and
/// the minimal resolution is a summand of it.
pub fn chain_bounds(table: &OverlapTable, max_n: usize) -> Vec<DegreeBound> {
    let mut out = alloc::vec![DegreeBound::Unknown; max_n + 1];
    out[0] = DegreeBound::AtMost(0);
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        if n - 1 <= table.depth() && !table.is_truncated() {
            *slot = table
                .overlaps(n - 1)
                .iter()
                .map(|e| e.word.len())
                .max()
                .map_or(DegreeBound::Vanishes, DegreeBound::AtMost);
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Level<E> {
    generators: Vec<Generator>,
    /// Images of the generators in the previous term (the free cover of the
    /// presentation for `P_0`).
    images: Vec<SparseVec<E>>,
    memo: BTreeMap<usize, SparseVec<E>>,
}

impl<E: Clone + PartialEq + core::fmt::Debug> Level<E> {
    fn new() -> Self {
        Self { generators: Vec::new(), images: Vec::new(), memo: BTreeMap::new() }
    }

    fn image<F: Field<Elem = E>>(&mut self, model: &AlgebraModel<F>, key: usize) -> SparseVec<E> {
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (j, w) = model.split_key(key);
        let v = match model.parent(w) {
            None => self.images[j].clone(),
            Some((p, a)) => {
                let base = self.image(model, model.key(j, p));
                model.times_arrow(&base, a)
            }
        };
        self.memo.insert(key, v.clone());
        v
    }
}

/// Per-term generating degrees of a minimal resolution, with the envelope in
/// which they are certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub max_n: usize,
    pub max_degree: usize,
    /// Sorted generating degrees of `P_0..=P_max_n`, up to `max_degree`.
    pub degrees: Vec<Vec<usize>>,
    /// Whether `P_n` is known to have no generators above `max_degree`.
    pub complete: Vec<bool>,
    /// `dim X_d` for `d ≤ max_degree`.
    pub hilbert: Vec<usize>,
    /// First `(n, max_degree)` whose term is not certified complete.
    pub truncation: Option<(usize, usize)>,
    /// Whether the algebra model is exact through `max_degree`.
    pub exact_model: bool,
}

impl ResolutionReport {
    pub fn is_certified(&self) -> bool {
        self.truncation.is_none() && self.exact_model
    }
}

/// A minimal graded projective resolution through `max_n` terms and the
/// model's degree.
#[derive(Clone, Debug)]
pub struct Resolution<'m, F: Field> {
    model: &'m AlgebraModel<F>,
    cover: Vec<Generator>,
    relations: RelationSpan<F::Elem>,
    levels: Vec<Level<F::Elem>>,
    hilbert: Vec<usize>,
    bounds: Vec<DegreeBound>,
}

/// A failed consistency check of a computed resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactnessViolation {
    NotSurjective { degree: usize },
    NotExact { n: usize, degree: usize },
    NotComplex { n: usize, generator: usize },
    NotMinimal { n: usize, generator: usize },
}

/// Computes the minimal resolution of the module presented by `pres`. `extra`
/// supplies further degree bounds per term (for instance [`chain_bounds`]).
pub fn minimal_resolution<'m, F: Field>(
    model: &'m AlgebraModel<F>,
    pres: &ModulePresentation<F::Elem>,
    max_n: usize,
    extra: &[DegreeBound],
) -> Resolution<'m, F> {
    let f = model.field();
    let quiver = model.algebra().quiver();
    let cover: Vec<Generator> = pres.generators().to_vec();
    let relations = relation_span(model, pres);
    let mut bounds = presentation_bounds(model, pres, max_n);
    for (b, e) in bounds.iter_mut().zip(extra) {
        *b = b.tighter(*e);
    }
    let mut levels: Vec<Level<F::Elem>> = (0..=max_n).map(|_| Level::new()).collect();
    let mut hilbert = Vec::new();
    for d in 0..=model.max_degree() {
        let mut dim = 0;
        for v in quiver.vertices() {
            let block = model.block(&cover, d, v);
            dim += block.len() - relations.dim(d, v);
            // minimal generators of X: presented generators of degree d that stay
            // independent modulo N and the radical
            let degree_d: BTreeSet<usize> = block.iter().copied().filter(|k| model.word(model.split_key(*k).1).is_vertex()).collect();
            let mut ech = Echelon::new(f.clone());
            for r in relations.basis(d, v) {
                let top: SparseVec<F::Elem> = r.iter().filter(|(k, _)| degree_d.contains(k)).cloned().collect();
                ech.insert(&top);
            }
            for &k in &degree_d {
                let e = alloc::vec![(k, f.one())];
                if ech.insert(&e).is_some() {
                    let (i, _) = model.split_key(k);
                    levels[0].generators.push(cover[i]);
                    levels[0].images.push(e);
                }
            }
        }
        hilbert.push(dim);
        for n in 1..=max_n {
            for v in quiver.vertices() {
                let kernel = kernel_block(model, &mut levels[n - 1], &relations, n - 1, d, v);
                if kernel.is_empty() {
                    continue;
                }
                let mut ech = Echelon::new(f.clone());
                for k in model.block(&levels[n].generators, d, v) {
                    let img = levels[n].image(model, k);
                    ech.insert(&img);
                }
                for kv in kernel {
                    if ech.insert(&kv).is_some() {
                        levels[n].generators.push(Generator { vertex: v, degree: d });
                        levels[n].images.push(kv);
                    }
                }
            }
        }
    }
    Resolution { model, cover, relations, levels, hilbert, bounds }
}

/// A spanning set of the kernel of `P_n → P_{n−1}` (of `P_0 → X` for `n = 0`)
/// in degree `d` at vertex `v`, as vectors over `P_n`'s keys.
fn kernel_block<F: Field>(
    model: &AlgebraModel<F>,
    level: &mut Level<F::Elem>,
    relations: &RelationSpan<F::Elem>,
    n: usize,
    d: usize,
    v: Vertex,
) -> Vec<SparseVec<F::Elem>> {
    let f = model.field();
    let basis = model.block(&level.generators, d, v);
    if basis.is_empty() {
        return Vec::new();
    }
    let mut vectors: Vec<SparseVec<F::Elem>> = basis.iter().map(|&k| level.image(model, k)).collect();
    if n == 0 {
        vectors.extend(relations.basis(d, v).iter().cloned());
    }
    linalg::kernel(f, &vectors)
        .into_iter()
        .map(|c| c.into_iter().filter(|(t, _)| *t < basis.len()).map(|(t, x)| (basis[t], x)).collect::<SparseVec<_>>())
        .filter(|c| !c.is_empty())
        .collect()
}

impl<'m, F: Field> Resolution<'m, F> {
    pub fn model(&self) -> &AlgebraModel<F> {
        self.model
    }

    pub fn max_n(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn generators(&self, n: usize) -> &[Generator] {
        &self.levels[n].generators
    }

    /// Image of the `j`-th generator of `P_n` in `P_{n−1}` (in the free cover
    /// of the presentation for `n = 0`).
    pub fn image(&self, n: usize, j: usize) -> &SparseVec<F::Elem> {
        &self.levels[n].images[j]
    }

    pub fn bounds(&self) -> &[DegreeBound] {
        &self.bounds
    }

    pub fn hilbert(&self) -> &[usize] {
        &self.hilbert
    }

    pub fn report(&self) -> ResolutionReport {
        let max_degree = self.model.max_degree();
        let degrees: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|l| {
                let mut ds: Vec<usize> = l.generators.iter().map(|g| g.degree).collect();
                ds.sort_unstable();
                ds
            })
            .collect();
        let complete: Vec<bool> = self.bounds.iter().map(|b| b.certifies(max_degree)).collect();
        let truncation = complete.iter().position(|c| !c).map(|n| (n, max_degree));
        ResolutionReport {
            max_n: self.max_n(),
            max_degree,
            degrees,
            complete,
            hilbert: self.hilbert.clone(),
            truncation,
            exact_model: self.model.is_exact(),
        }
    }

    /// Recomputes ranks degree by degree: `P_0 → X` is onto, every `P_n` is
    /// exact at the kernel of the previous map, consecutive maps compose to
    /// zero, and every image lies in the radical of the previous term.
    pub fn check(&mut self) -> Result<(), ExactnessViolation> {
        let model = self.model;
        let f = model.field().clone();
        let quiver = model.algebra().quiver();
        let max_n = self.max_n();
        for d in 0..=model.max_degree() {
            for v in quiver.vertices() {
                let block = model.block(&self.cover, d, v);
                let mut vectors: Vec<SparseVec<F::Elem>> =
                    model.block(&self.levels[0].generators, d, v).iter().map(|&k| self.levels[0].image(model, k)).collect();
                vectors.extend(self.relations.basis(d, v).iter().cloned());
                if linalg::rank(&f, &vectors) != block.len() {
                    return Err(ExactnessViolation::NotSurjective { degree: d });
                }
                for n in 1..=max_n {
                    let kernel = kernel_block(model, &mut self.levels[n - 1], &self.relations, n - 1, d, v);
                    let kernel_dim = linalg::rank(&f, &kernel);
                    let images: Vec<SparseVec<F::Elem>> = model
                        .block(&self.levels[n].generators, d, v)
                        .iter()
                        .map(|&k| self.levels[n].image(model, k))
                        .collect();
                    let mut both = kernel.clone();
                    both.extend(images.iter().cloned());
                    let image_rank = linalg::rank(&f, &images);
                    if image_rank != kernel_dim || linalg::rank(&f, &both) != kernel_dim {
                        return Err(ExactnessViolation::NotExact { n, degree: d });
                    }
                }
            }
        }
        for n in 1..=max_n {
            for j in 0..self.levels[n].images.len() {
                let img = self.levels[n].images[j].clone();
                if img.iter().any(|(k, _)| model.word(model.split_key(*k).1).is_vertex()) {
                    return Err(ExactnessViolation::NotMinimal { n, generator: j });
                }
                let mut composite = Vec::new();
                for (k, c) in &img {
                    let below = self.levels[n - 1].image(model, *k);
                    composite = linalg::axpy(&f, &composite, c, &below);
                }
                let vanishes = if n == 1 {
                    let g = self.levels[n].generators[j];
                    let mut ech = Echelon::new(f.clone());
                    for r in self.relations.basis(g.degree, g.vertex) {
                        ech.insert(r);
                    }
                    ech.contains(&composite)
                } else {
                    composite.is_empty()
                };
                if !vanishes {
                    return Err(ExactnessViolation::NotComplex { n, generator: j });
                }
            }
        }
        Ok(())
    }
}

/// Verdict of one degree window against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowVerdict {
    pub n: usize,
    pub window: Interval,
    pub degrees: Vec<usize>,
    /// Oracle degrees outside the window.
    pub outside: Vec<usize>,
}

impl WindowVerdict {
    pub fn pass(&self) -> bool {
        self.outside.is_empty()
    }
}

/// Checks every oracle generating degree of `P_n` against the window for `n`.
pub fn verify_windows(report: &ResolutionReport, windows: &[DegreeWindow]) -> Vec<WindowVerdict> {
    windows
        .iter()
        .filter(|w| w.n <= report.max_n)
        .map(|w| {
            let degrees = report.degrees[w.n].clone();
            let outside = degrees.iter().copied().filter(|&d| !w.interval.contains(d as i64)).collect();
            WindowVerdict { n: w.n, window: w.interval, degrees, outside }
        })
        .collect()
}

/// Ideal membership by linear algebra on all paths: `I_d` is spanned by the
/// generators of degree `d` and by `a·x`, `x·a` for `x ∈ I_{d−1}`.
#[derive(Clone, Debug)]
pub struct IdealSpan<F: Field> {
    field: F,
    index: BTreeMap<Path, usize>,
    spans: Vec<Echelon<F>>,
    paths: Vec<usize>,
}

impl<F: Field> IdealSpan<F> {
    pub fn new(alg: &PathAlgebra<F>, generators: &[AlgebraElement<F::Elem>], max_degree: usize) -> Self {
        let f = alg.field();
        let quiver = alg.quiver();
        let mut index = BTreeMap::new();
        let mut paths = Vec::new();
        for d in 0..=max_degree {
            let level = quiver.paths_of_length(d);
            paths.push(level.len());
            for p in level {
                let n = index.len();
                index.insert(p, n);
            }
        }
        let to_vec = |x: &AlgebraElement<F::Elem>, index: &BTreeMap<Path, usize>| {
            linalg::collect(f, x.terms().iter().map(|(p, c)| (index[p], c.clone())))
        };
        let mut spans: Vec<Echelon<F>> = Vec::new();
        let mut rows: Vec<Vec<AlgebraElement<F::Elem>>> = Vec::new();
        for d in 0..=max_degree {
            let mut ech = Echelon::new(f.clone());
            let mut kept = Vec::new();
            let mut offer = |x: AlgebraElement<F::Elem>, ech: &mut Echelon<F>| {
                if !x.is_zero() && ech.insert(&to_vec(&x, &index)).is_some() {
                    kept.push(x);
                }
            };
            if d > 0 {
                for x in &rows[d - 1] {
                    let tip = x.tip().expect("stored rows are nonzero");
                    let (s, t) = (Path::vertex(tip.source()), Path::vertex(tip.target()));
                    for a in quiver.arrows() {
                        let pa = Path::arrow(a);
                        offer(alg.sandwich(&pa, x, &t), &mut ech);
                        offer(alg.sandwich(&s, x, &pa), &mut ech);
                    }
                }
            }
            for g in generators.iter().filter(|g| g.path_degree() == Some(d)) {
                offer(g.clone(), &mut ech);
            }
            spans.push(ech);
            rows.push(kept);
        }
        Self { field: f.clone(), index, spans, paths }
    }

    /// Whether a homogeneous element of degree at most the span's degree lies in `I`.
    pub fn contains(&self, x: &AlgebraElement<F::Elem>) -> bool {
        let Some(d) = x.path_degree() else { return true };
        let v = linalg::collect(&self.field, x.terms().iter().map(|(p, c)| (self.index[p], c.clone())));
        self.spans[d].contains(&v)
    }

    /// `dim (kQ/I)_d`.
    pub fn quotient_dim(&self, d: usize) -> usize {
        self.paths[d] - self.spans[d].rank()
    }
}
