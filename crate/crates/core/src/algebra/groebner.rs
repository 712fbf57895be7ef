use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{AlgebraElement, AlgebraError, Combination, PathAlgebra};
use crate::field::Field;
use crate::order::{OrderSpec, PathOrder};
use crate::quiver::{Path, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// Every overlap resolves: the basis is a Gröbner basis in all degrees.
    Complete,
    /// Correct through the given degree; some overlap above it does not resolve.
    TruncatedAt(usize),
}

/// A reduced, monic, homogeneous Gröbner basis, sorted by ascending tip.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<E> {
    elements: Vec<AlgebraElement<E>>,
    tips: Vec<Path>,
    status: Completion,
    order: OrderSpec,
}

impl<E: Clone + PartialEq + core::fmt::Debug> GroebnerBasis<E> {
    pub fn elements(&self) -> &[AlgebraElement<E>] {
        &self.elements
    }

    pub fn tips(&self) -> &[Path] {
        &self.tips
    }

    pub fn status(&self) -> Completion {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Completion::Complete
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    /// Degree through which the basis is certified.
    pub fn certified_degree(&self) -> Option<usize> {
        match self.status {
            Completion::Complete => None,
            Completion::TruncatedAt(d) => Some(d),
        }
    }

    /// Longest tip, 0 for an empty basis.
    pub fn max_tip_len(&self) -> usize {
        self.tips.iter().map(Path::len).max().unwrap_or(0)
    }

    /// First element whose tip divides `p`, with the leftmost `(u, v)` such that
    /// `p = u·tip·v`.
    pub fn find_reducer(&self, p: &Path) -> Option<(&AlgebraElement<E>, Path, Path)> {
        for (g, t) in self.elements.iter().zip(&self.tips) {
            if let Some(i) = first_occurrence(p, t) {
                return Some((g, p.subpath(0, i), p.subpath(i + t.len(), p.len())));
            }
        }
        None
    }

    pub(crate) fn from_parts(elements: Vec<AlgebraElement<E>>, status: Completion, order: OrderSpec) -> Self {
        let tips = elements.iter().map(|g| g.tip().expect("nonzero basis element").clone()).collect();
        Self { elements, tips, status, order }
    }
}

fn first_occurrence(hay: &Path, needle: &Path) -> Option<usize> {
    let n = needle.len();
    if n == 0 || n > hay.len() {
        return None;
    }
    hay.arrows().windows(n).position(|w| w == needle.arrows())
}

/// The S-elements `g·b − a·h` for every proper overlap `tip(g)·b = a·tip(h)`
/// with `a`, `b` nonempty.
pub fn overlap_elements<F: Field>(
    alg: &PathAlgebra<F>,
    g: &AlgebraElement<F::Elem>,
    h: &AlgebraElement<F::Elem>,
) -> Vec<AlgebraElement<F::Elem>> {
    let (Some(t1), Some(t2)) = (g.tip(), h.tip()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for k in 1..t1.len().min(t2.len()) {
        if t1.arrows()[t1.len() - k..] != t2.arrows()[..k] {
            continue;
        }
        let a = t1.prefix(t1.len() - k);
        let b = t2.suffix(t2.len() - k);
        let lhs = alg.sandwich(&Path::vertex(g.tip().unwrap().source()), g, &b);
        let rhs = alg.sandwich(&a, h, &Path::vertex(h.tip().unwrap().target()));
        out.push(lhs.sub(alg.field(), alg.order(), &rhs));
    }
    out
}

pub(super) fn complete<F: Field>(
    alg: &PathAlgebra<F>,
    generators: &[AlgebraElement<F::Elem>],
    max_degree: usize,
) -> Result<GroebnerBasis<F::Elem>, AlgebraError> {
    let field = alg.field();
    let order = alg.order();
    let mut pending: BTreeMap<usize, Vec<AlgebraElement<F::Elem>>> = BTreeMap::new();
    let mut needed = 0;
    for g in generators.iter().filter(|g| !g.is_zero()) {
        let d = g.path_degree().ok_or(AlgebraError::Inhomogeneous)?;
        if d < 2 {
            return Err(AlgebraError::DegreeTooLow(d));
        }
        let ends = (g.terms()[0].0.source(), g.terms()[0].0.target());
        if g.terms().iter().any(|(p, _)| (p.source(), p.target()) != ends) {
            return Err(AlgebraError::NotParallel);
        }
        needed = needed.max(d);
        pending.entry(d).or_default().push(g.clone());
    }
    if needed > max_degree {
        return Err(AlgebraError::CapTooSmall { cap: max_degree, needed });
    }

    let mut basis = GroebnerBasis::from_parts(Vec::new(), Completion::Complete, order.clone());
    while let Some((&d, _)) = pending.first_key_value() {
        if d > max_degree {
            break;
        }
        let items = pending.remove(&d).unwrap_or_default();
        for x in items {
            let r = alg.normal_form(&x, &basis);
            if r.is_zero() {
                continue;
            }
            let r = r.monic(field);
            let mut fresh = overlap_elements(alg, &r, &r);
            for g in basis.elements() {
                fresh.extend(overlap_elements(alg, &r, g));
                fresh.extend(overlap_elements(alg, g, &r));
            }
            for s in fresh.into_iter().filter(|s| !s.is_zero()) {
                let sd = s.path_degree().expect("overlap of homogeneous elements is homogeneous");
                pending.entry(sd).or_default().push(s);
            }
            let mut elements = basis.elements;
            elements.push(r);
            basis = GroebnerBasis::from_parts(elements, Completion::Complete, order.clone());
        }
    }

    let elements = interreduce(alg, basis.elements);
    let mut gb = GroebnerBasis::from_parts(elements, Completion::Complete, order.clone());

    // Diamond lemma: the basis is complete iff every overlap of the final
    // basis reduces to zero. Overlaps up to the cap resolve by construction.
    let mut resolves = true;
    'outer: for g in gb.elements() {
        for h in gb.elements() {
            for s in overlap_elements(alg, g, h) {
                if !alg.normal_form(&s, &gb).is_zero() {
                    debug_assert!(s.path_degree().unwrap_or(0) > max_degree);
                    resolves = false;
                    break 'outer;
                }
            }
        }
    }
    if !resolves {
        gb.status = Completion::TruncatedAt(max_degree);
    }
    Ok(gb)
}

/// Makes every tail normal with respect to the other elements and sorts by tip.
fn interreduce<F: Field>(alg: &PathAlgebra<F>, mut elements: Vec<AlgebraElement<F::Elem>>) -> Vec<AlgebraElement<F::Elem>> {
    let order = alg.order();
    elements.sort_by(|a, b| order.compare(a.tip().unwrap(), b.tip().unwrap()));
    for i in 0..elements.len() {
        let others: Vec<_> = elements.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let rest = GroebnerBasis::from_parts(others, Completion::Complete, order.clone());
        let g = &elements[i];
        let (tip, lc) = g.terms().last().cloned().expect("nonzero");
        let tail = alg.normal_form(&g.tail(), &rest);
        let head: AlgebraElement<F::Elem> = Combination::from_sorted(alloc::vec![(tip, lc)]);
        elements[i] = tail.add(alg.field(), order, &head);
    }
    elements
}

/// Paths of length `d` with no element of `tips` as a factor, greatest first.
pub fn normal_words(quiver: &Quiver, order: &OrderSpec, tips: &[Path], d: usize) -> Vec<Path> {
    let mut level: Vec<Path> = quiver.vertices().map(Path::vertex).collect();
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &level {
            for a in quiver.arrows_from(w.target()) {
                let x = w.extended(a);
                if !tips.iter().any(|t| t.len() <= x.len() && x.arrows().ends_with(t.arrows())) {
                    next.push(x);
                }
            }
        }
        level = next;
    }
    level.sort_by(|a, b| order.compare(b, a));
    level
}
