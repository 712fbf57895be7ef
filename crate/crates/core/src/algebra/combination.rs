use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Debug;

use crate::field::Field;
use crate::order::{OrderSpec, PathOrder};
use crate::quiver::Path;

/// A basis element that the admissible order knows how to compare.
pub trait Term: Clone + Eq + Debug {
    fn compare(&self, other: &Self, order: &OrderSpec) -> Ordering;
    fn path(&self) -> &Path;
}

impl Term for Path {
    fn compare(&self, other: &Self, order: &OrderSpec) -> Ordering {
        order.compare(self, other)
    }
    fn path(&self) -> &Path {
        self
    }
}

/// The basis element `f_i·p` of a free right module `⊕ f_i kQ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleTerm {
    pub generator: usize,
    pub path: Path,
}

impl ModuleTerm {
    pub fn new(generator: usize, path: Path) -> Self {
        Self { generator, path }
    }
}

impl Term for ModuleTerm {
    fn compare(&self, other: &Self, order: &OrderSpec) -> Ordering {
        order.compare_module((self.generator, &self.path), (other.generator, &other.path))
    }
    fn path(&self) -> &Path {
        &self.path
    }
}

/// A reduced expression: distinct terms with nonzero coefficients, kept sorted
/// ascending under the admissible order so the tip is the last entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination<T, E> {
    terms: Vec<(T, E)>,
}

impl<T, E> Default for Combination<T, E> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<T: Term, E: Clone + PartialEq + Debug> Combination<T, E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial<F: Field<Elem = E>>(field: &F, term: T, coeff: E) -> Self {
        if field.is_zero(&coeff) {
            Self::zero()
        } else {
            Self { terms: alloc::vec![(term, coeff)] }
        }
    }

    /// Sorts, merges repeated terms and drops zero coefficients.
    pub fn from_terms<F: Field<Elem = E>>(field: &F, order: &OrderSpec, terms: impl IntoIterator<Item = (T, E)>) -> Self {
        let mut raw: Vec<(T, E)> = terms.into_iter().collect();
        raw.sort_by(|a, b| a.0.compare(&b.0, order));
        let mut out: Vec<(T, E)> = Vec::with_capacity(raw.len());
        for (t, c) in raw {
            match out.last_mut() {
                Some((lt, lc)) if *lt == t => *lc = field.add(lc, &c),
                _ => out.push((t, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Self { terms: out }
    }

    /// Terms in ascending order; the caller guarantees the invariants.
    pub(crate) fn from_sorted(terms: Vec<(T, E)>) -> Self {
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending order.
    pub fn terms(&self) -> &[(T, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(T, E)> {
        self.terms
    }

    pub fn tip(&self) -> Option<&T> {
        self.terms.last().map(|(t, _)| t)
    }

    pub fn leading_coefficient(&self) -> Option<&E> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn coefficient(&self, term: &T) -> Option<&E> {
        self.terms.iter().find(|(t, _)| t == term).map(|(_, c)| c)
    }

    pub(crate) fn pop_tip(&mut self) -> Option<(T, E)> {
        self.terms.pop()
    }

    /// Everything below the tip.
    pub fn tail(&self) -> Self {
        let n = self.terms.len().saturating_sub(1);
        Self { terms: self.terms[..n].to_vec() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(t, a)| (t.clone(), field.mul(a, c))).collect() }
    }

    /// Divides by the leading coefficient.
    pub fn monic<F: Field<Elem = E>>(&self, field: &F) -> Self {
        match self.leading_coefficient().and_then(|c| field.inv(c)) {
            Some(inv) => self.scale(field, &inv),
            None => Self::zero(),
        }
    }

    /// `self + c·other`.
    pub fn add_scaled<F: Field<Elem = E>>(&self, field: &F, order: &OrderSpec, other: &Self, c: &E) -> Self {
        if field.is_zero(c) {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.compare(&b[j].0, order) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), field.mul(&b[j].1, c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = field.add(&a[i].1, &field.mul(&b[j].1, c));
                    if !field.is_zero(&v) {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(t, e)| (t.clone(), field.mul(e, c))));
        Self { terms: out }
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, order: &OrderSpec, other: &Self) -> Self {
        self.add_scaled(field, order, other, &field.one())
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, order: &OrderSpec, other: &Self) -> Self {
        self.add_scaled(field, order, other, &field.neg(&field.one()))
    }

    /// Applies an order-preserving map to every term (multiplication by paths).
    /// Terms mapped to `None` vanish.
    pub(crate) fn map_monotone(&self, mut f: impl FnMut(&T) -> Option<T>) -> Self {
        Self {
            terms: self.terms.iter().filter_map(|(t, c)| f(t).map(|u| (u, c.clone()))).collect(),
        }
    }

    /// Length of the support paths when they all agree.
    pub fn path_degree(&self) -> Option<usize> {
        let first = self.terms.first()?.0.path().len();
        self.terms.iter().all(|(t, _)| t.path().len() == first).then_some(first)
    }
}
