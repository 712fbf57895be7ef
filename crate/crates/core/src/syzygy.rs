//! Graded module presentations, the first syzygy in right tip reduced form,
//! and the generating-degree windows predicted for the later terms of a
//! minimal resolution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, Combination, ModuleElement, ModuleTerm, PathAlgebra};
use crate::field::Field;
use crate::linalg::{self, Echelon};
use crate::oracle::{relation_span, AlgebraModel};
use crate::overlaps::{ExtInt, Interval, OverlapTable};
use crate::quiver::{Path, Quiver, Vertex};

/// A generator `f_i` of a free module, isomorphic to `e_i A` shifted to `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub vertex: Vertex,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyzygyError {
    #[error("relation {relation} uses generator {generator}, which does not exist")]
    UnknownGenerator { relation: usize, generator: usize },
    #[error("relation {relation} has a path that does not start at its generator's vertex")]
    WrongVertex { relation: usize },
    #[error("relation {relation} is not homogeneous")]
    Inhomogeneous { relation: usize },
    #[error("Groebner basis is certified through degree {certified}, degree {needed} is needed")]
    TruncatedBasis { certified: usize, needed: usize },
    #[error("presentation is not minimal: a relation of degree {degree} kills a generator")]
    NotMinimal { degree: usize },
    #[error("overlap table has depth {depth}, level {needed} is needed")]
    TableTooShallow { needed: usize, depth: usize },
    #[error("overlap table was built without quasioverlaps")]
    NoQuasioverlaps,
}

/// Generators `f_i` with vertices and degrees, and homogeneous relations in
/// `⊕ f_i kQ`. The module is the cokernel.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation<E> {
    generators: Vec<Generator>,
    relations: Vec<ModuleElement<E>>,
    degrees: Vec<usize>,
}

impl<E: Clone + PartialEq + core::fmt::Debug> ModulePresentation<E> {
    /// Validates endpoints and homogeneity; zero relations are dropped.
    pub fn new(generators: Vec<Generator>, relations: Vec<ModuleElement<E>>) -> Result<Self, SyzygyError> {
        let mut kept = Vec::new();
        let mut degrees = Vec::new();
        for (r, rel) in relations.into_iter().enumerate() {
            let mut degree = None;
            for (t, _) in rel.terms() {
                let g = generators
                    .get(t.generator)
                    .ok_or(SyzygyError::UnknownGenerator { relation: r, generator: t.generator })?;
                if t.path.source() != g.vertex {
                    return Err(SyzygyError::WrongVertex { relation: r });
                }
                let d = g.degree + t.path.len();
                if *degree.get_or_insert(d) != d {
                    return Err(SyzygyError::Inhomogeneous { relation: r });
                }
            }
            if let Some(d) = degree {
                kept.push(rel);
                degrees.push(d);
            }
        }
        Ok(Self { generators, relations: kept, degrees })
    }

    /// `A_0 = A/A_{>0}`: one generator in degree 0 per vertex, killed by every arrow.
    pub fn simple_tops<F: Field<Elem = E>>(field: &F, quiver: &Quiver) -> Self {
        let generators: Vec<Generator> = quiver.vertices().map(|v| Generator { vertex: v, degree: 0 }).collect();
        let relations = quiver
            .arrows()
            .map(|a| Combination::monomial(field, ModuleTerm::new(a.source.index(), Path::arrow(a)), field.one()))
            .collect();
        Self::new(generators, relations).expect("arrows start at their vertex")
    }

    /// The free module `e_v A` shifted to `degree`.
    pub fn free(vertex: Vertex, degree: usize) -> Self {
        Self { generators: alloc::vec![Generator { vertex, degree }], relations: Vec::new(), degrees: Vec::new() }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[ModuleElement<E>] {
        &self.relations
    }

    pub fn relation_degree(&self, r: usize) -> usize {
        self.degrees[r]
    }
}

/// An element of the first syzygy with its degree and the vertex `e_h` with `h·e_h = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyzygyElement<E> {
    pub element: ModuleElement<E>,
    pub degree: usize,
    pub vertex: Vertex,
}

impl<E: Clone + PartialEq + core::fmt::Debug> SyzygyElement<E> {
    pub fn tip(&self) -> &ModuleTerm {
        self.element.tip().expect("syzygy elements are nonzero")
    }
}

/// Kernel generators of `V_X → X` split into the part outside `V_X·I` (`T1`)
/// and the part inside it (`T1'`).
#[derive(Clone, Debug, PartialEq)]
pub struct FirstSyzygy<E> {
    pub t1: Vec<SyzygyElement<E>>,
    pub t1_prime: Vec<SyzygyElement<E>>,
    pub max_degree: usize,
}

impl<E: Clone + PartialEq + core::fmt::Debug> FirstSyzygy<E> {
    /// Smallest and largest degree over `T1`; `None` when `X` is projective.
    pub fn degree_range(&self) -> Option<(usize, usize)> {
        let lo = self.t1.iter().map(|h| h.degree).min()?;
        let hi = self.t1.iter().map(|h| h.degree).max()?;
        Some((lo, hi))
    }

    pub fn combined(&self) -> Vec<ModuleElement<E>> {
        self.t1.iter().chain(&self.t1_prime).map(|h| h.element.clone()).collect()
    }
}

/// Computes the first syzygy through the model's degree. The `T1` part is the
/// reduced echelon basis of the relation submodule `N ⊆ ⊕ f_i A` whose tips are
/// minimal under right multiplication; the `T1'` part consists of the
/// elements `f_i·u·g` whose tip `f_i·u·tip(g)` is the first non-normal path
/// above a term outside `tip(N)`.
pub fn first_syzygy<F: Field>(
    model: &AlgebraModel<F>,
    pres: &ModulePresentation<F::Elem>,
) -> Result<FirstSyzygy<F::Elem>, SyzygyError> {
    let max_degree = model.max_degree();
    let gb = model.groebner();
    if let Some(c) = gb.certified_degree() {
        if c < max_degree {
            return Err(SyzygyError::TruncatedBasis { certified: c, needed: max_degree });
        }
    }
    let alg = model.algebra();
    let f = alg.field();
    let order = alg.order();
    let quiver = alg.quiver();
    let gens = pres.generators();
    let span = relation_span(model, pres);
    let term_of = |key: usize| {
        let (j, w) = model.split_key(key);
        ModuleTerm::new(j, model.word(w).clone())
    };
    let mut tips: BTreeMap<(usize, Vertex), BTreeSet<usize>> = BTreeMap::new();
    let mut t1 = Vec::new();
    for d in 0..=max_degree {
        for v in quiver.vertices() {
            let basis = span.basis(d, v);
            if basis.is_empty() {
                continue;
            }
            // columns greatest first, so each echelon pivot is a tip
            let mut cols = model.block(gens, d, v);
            cols.sort_by(|a, b| {
                let (ta, tb) = (term_of(*a), term_of(*b));
                order.compare_module((tb.generator, &tb.path), (ta.generator, &ta.path))
            });
            let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(c, k)| (*k, c)).collect();
            let mut ech = Echelon::new(f.clone());
            for x in basis {
                if x.iter().any(|(k, _)| model.word(model.split_key(*k).1).is_vertex()) {
                    return Err(SyzygyError::NotMinimal { degree: d });
                }
                ech.insert(&linalg::collect(f, x.iter().map(|(k, c)| (col_of[k], c.clone()))));
            }
            let here: BTreeSet<usize> = ech.pivots().map(|c| cols[c]).collect();
            for row in ech.rows() {
                let key = cols[row[0].0];
                let (j, w) = model.split_key(key);
                let below = model.parent(w).is_some_and(|(p, _)| {
                    let pv = model.word(p).target();
                    tips.get(&(d - 1, pv)).is_some_and(|s| s.contains(&model.key(j, p)))
                });
                if below {
                    continue;
                }
                let element = Combination::from_terms(f, order, row.iter().map(|(c, x)| (term_of(cols[*c]), x.clone())));
                t1.push(SyzygyElement { element, degree: d, vertex: v });
            }
            tips.insert((d, v), here);
        }
    }
    let mut t1_prime = Vec::new();
    for d in 0..max_degree {
        for v in quiver.vertices() {
            let here = tips.get(&(d, v));
            for key in model.block(gens, d, v) {
                if here.is_some_and(|s| s.contains(&key)) {
                    continue;
                }
                let (j, w) = model.split_key(key);
                let w = model.word(w);
                for a in quiver.arrows_from(v) {
                    let wa = w.extended(a);
                    if model.word_id(&wa).is_some() {
                        continue;
                    }
                    let (g, t) = gb
                        .elements()
                        .iter()
                        .zip(gb.tips())
                        .find(|(_, t)| t.divides_right(&wa))
                        .expect("a minimal non-normal path ends in a tip");
                    let u = wa.prefix(wa.len() - t.len());
                    let element = alg.embed(j, &alg.sandwich(&u, g, &Path::vertex(a.target)));
                    t1_prime.push(SyzygyElement { element, degree: d + 1, vertex: a.target });
                }
            }
        }
    }
    Ok(FirstSyzygy { t1, t1_prime, max_degree })
}

/// No tip is a right multiple of another: `tip(x_i) = f_j·p`, `tip(x_k) = f_j·q`
/// with `p` a prefix of `q` is forbidden for `i ≠ k`.
pub fn is_right_tip_reduced<E: Clone + PartialEq + core::fmt::Debug>(set: &[ModuleElement<E>]) -> bool {
    let tips: Vec<&ModuleTerm> = set.iter().filter_map(|x| x.tip()).collect();
    if tips.len() != set.len() {
        return false;
    }
    tips.iter().enumerate().all(|(i, s)| {
        tips.iter()
            .enumerate()
            .all(|(k, t)| i == k || s.generator != t.generator || !s.path.divides_left(&t.path))
    })
}

/// Which reducible term to rewrite next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Always the largest remaining term.
    TipFirst,
    /// The smallest term that some divisor's tip right-divides.
    LowestFirst,
}

/// `h = Σ x_i·q_i + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct Division<E> {
    pub quotients: Vec<AlgebraElement<E>>,
    pub remainder: ModuleElement<E>,
}

/// Right division in `⊕ f_i kQ` by a right tip reduced set.
pub fn divide<F: Field>(
    alg: &PathAlgebra<F>,
    set: &[ModuleElement<F::Elem>],
    h: &ModuleElement<F::Elem>,
    strategy: RewriteStrategy,
) -> Division<F::Elem> {
    let f = alg.field();
    let order = alg.order();
    let divisor = |t: &ModuleTerm| {
        set.iter().enumerate().find_map(|(i, x)| {
            let s = x.tip()?;
            (s.generator == t.generator && s.path.divides_left(&t.path)).then(|| (i, t.path.suffix(t.path.len() - s.path.len())))
        })
    };
    let mut quotients: Vec<AlgebraElement<F::Elem>> = alloc::vec![Combination::zero(); set.len()];
    let mut work = h.clone();
    let mut kept: Vec<(ModuleTerm, F::Elem)> = Vec::new();
    loop {
        let step = match strategy {
            RewriteStrategy::TipFirst => {
                let Some(t) = work.tip().cloned() else { break };
                match divisor(&t) {
                    Some((i, q)) => Some((i, q, work.leading_coefficient().expect("nonzero").clone())),
                    None => {
                        kept.extend(work.pop_tip());
                        None
                    }
                }
            }
            RewriteStrategy::LowestFirst => {
                let found = work.terms().iter().find_map(|(t, c)| divisor(t).map(|(i, q)| (i, q, c.clone())));
                match found {
                    Some(s) => Some(s),
                    None => break,
                }
            }
        };
        if let Some((i, q, c)) = step {
            let x = &set[i];
            let coeff = f.div(&c, x.leading_coefficient().expect("nonzero divisor")).expect("nonzero leading coefficient");
            work = work.add_scaled(f, order, &alg.module_times_path(x, &q), &f.neg(&coeff));
            quotients[i] = quotients[i].add(f, order, &Combination::monomial(f, q, coeff));
        }
    }
    let remainder = match strategy {
        RewriteStrategy::TipFirst => {
            kept.reverse();
            Combination::from_sorted(kept)
        }
        RewriteStrategy::LowestFirst => work,
    };
    Division { quotients, remainder }
}

/// How the terms of the resolution are paired with the levels of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexConvention {
    /// `P_n` uses level `n−1`, so `P_1` gets exactly `[k, l]`.
    Shifted,
    /// `P_n` uses level `n`.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WindowMethod {
    Quasioverlap,
    Overlap,
}

/// Predicted interval of generating degrees of `P_n`; empty means `P_n = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub n: usize,
    pub interval: Interval,
    pub method: WindowMethod,
}

impl DegreeWindow {
    pub fn empty(n: usize, method: WindowMethod) -> Self {
        Self { n, interval: Interval::new(ExtInt::PosInf, ExtInt::NegInf), method }
    }
}

/// `[k + minqo, l + maxqo]` or `[k + mino − len(S) + 1, l + maxo − 1]` at the
/// level paired with `P_n`.
pub fn degree_window(
    n: usize,
    k: usize,
    l: usize,
    table: &OverlapTable,
    method: WindowMethod,
    convention: IndexConvention,
) -> Result<DegreeWindow, SyzygyError> {
    let level = match convention {
        IndexConvention::Shifted => {
            if n <= 1 {
                return Ok(DegreeWindow { n, interval: Interval::finite(k as i64, l as i64), method });
            }
            n - 1
        }
        IndexConvention::Literal => n,
    };
    if level > table.depth() {
        return Err(SyzygyError::TableTooShallow { needed: level, depth: table.depth() });
    }
    let e = table.extrema(level);
    let (k, l) = (ExtInt::Finite(k as i64), ExtInt::Finite(l as i64));
    let interval = match method {
        WindowMethod::Quasioverlap => {
            if !table.has_quasi() {
                return Err(SyzygyError::NoQuasioverlaps);
            }
            Interval::new(k + e.minqo, l + e.maxqo)
        }
        WindowMethod::Overlap => {
            let len_s = table.len_s() as i64;
            Interval::new(k + e.mino - len_s + 1, l + e.maxo - 1)
        }
    };
    Ok(DegreeWindow { n, interval, method })
}

/// The quasioverlap window with phantom prefixes restricted to suffixes of
/// first-syzygy tips: a generator of `P_n` coming from `h` in `T1` has degree
/// `deg(h) + len(w)` for some `(w, v)` at level `n−1` with `v` a suffix of the
/// path of `tip(h)`. Falls back to the plain window when a tip path is a vertex.
pub fn refined_quasi_window<E: Clone + PartialEq + core::fmt::Debug>(
    n: usize,
    syz: &FirstSyzygy<E>,
    table: &OverlapTable,
) -> Result<DegreeWindow, SyzygyError> {
    let method = WindowMethod::Quasioverlap;
    let Some((k, l)) = syz.degree_range() else {
        return Ok(DegreeWindow::empty(n, method));
    };
    if n <= 1 || syz.t1.iter().any(|h| h.tip().path.is_vertex()) {
        return degree_window(n, k, l, table, method, IndexConvention::Shifted);
    }
    if n - 1 > table.depth() {
        return Err(SyzygyError::TableTooShallow { needed: n - 1, depth: table.depth() });
    }
    if !table.has_quasi() {
        return Err(SyzygyError::NoQuasioverlaps);
    }
    let degrees = syz.t1.iter().flat_map(|h| {
        let p = &h.tip().path;
        table.quasi(n - 1).iter().filter(|q| q.phantom.divides_right(p)).map(move |q| h.degree + q.word.len())
    });
    let (lo, hi) = ExtInt::range(degrees);
    Ok(DegreeWindow { n, interval: Interval::new(lo, hi), method })
}

/// The quasioverlap window lies inside the overlap window.
pub fn window_consistency(qo: &DegreeWindow, o: &DegreeWindow) -> bool {
    qo.n == o.n && qo.interval.is_subset_of(&o.interval)
}

#[cfg(test)]
mod tests;
