//! Elements of `kQ` and of free right `kQ`-modules, normal forms, and
//! homogeneous Gröbner completion.

mod combination;
mod groebner;

use alloc::vec::Vec;

pub use combination::{Combination, ModuleTerm, Term};
pub use groebner::{normal_words, overlap_elements, Completion, GroebnerBasis};

use crate::field::Field;
use crate::order::OrderSpec;
use crate::quiver::{Path, Quiver, QuiverError};

/// A linear combination of parallel paths.
pub type AlgebraElement<E> = Combination<Path, E>;

/// A linear combination of basis elements `f_i·p` of a free right module.
pub type ModuleElement<E> = Combination<ModuleTerm, E>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("the zero element has no tip")]
    Zero,
    #[error("terms do not share source and target")]
    NotParallel,
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("relation of degree {0}; relations must have degree at least 2")]
    DegreeTooLow(usize),
    #[error("degree cap {cap} is below the largest generator degree {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A path algebra `kQ` with a fixed admissible order and coefficient field.
#[derive(Clone, Debug)]
pub struct PathAlgebra<F: Field> {
    quiver: Quiver,
    order: OrderSpec,
    field: F,
}

impl<F: Field> PathAlgebra<F> {
    pub fn new(quiver: Quiver, order: OrderSpec, field: F) -> Self {
        Self { quiver, order, field }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Builds a reduced expression, rejecting non-parallel supports.
    pub fn element(&self, terms: impl IntoIterator<Item = (Path, F::Elem)>) -> Result<AlgebraElement<F::Elem>, AlgebraError> {
        let x = Combination::from_terms(&self.field, &self.order, terms);
        if let Some((first, _)) = x.terms().first() {
            let ends = (first.source(), first.target());
            if x.terms().iter().any(|(p, _)| (p.source(), p.target()) != ends) {
                return Err(AlgebraError::NotParallel);
            }
        }
        Ok(x)
    }

    pub fn monomial(&self, p: Path) -> AlgebraElement<F::Elem> {
        Combination::monomial(&self.field, p, self.field.one())
    }

    pub fn tip<'a>(&self, x: &'a AlgebraElement<F::Elem>) -> Result<&'a Path, AlgebraError> {
        x.tip().ok_or(AlgebraError::Zero)
    }

    /// `u·x·v`; zero when the products are not defined.
    pub fn sandwich(&self, u: &Path, x: &AlgebraElement<F::Elem>, v: &Path) -> AlgebraElement<F::Elem> {
        x.map_monotone(|p| p.sandwich(u, v).ok())
    }

    pub fn mul(&self, x: &AlgebraElement<F::Elem>, y: &AlgebraElement<F::Elem>) -> AlgebraElement<F::Elem> {
        let terms = x.terms().iter().flat_map(|(p, a)| {
            y.terms().iter().filter_map(move |(q, b)| p.compose(q).ok().map(|pq| (pq, self.field.mul(a, b))))
        });
        Combination::from_terms(&self.field, &self.order, terms.collect::<Vec<_>>())
    }

    /// `m·p` for a module element and a path.
    pub fn module_times_path(&self, m: &ModuleElement<F::Elem>, p: &Path) -> ModuleElement<F::Elem> {
        m.map_monotone(|t| t.path.compose(p).ok().map(|q| ModuleTerm::new(t.generator, q)))
    }

    /// `f_i·x`.
    pub fn embed(&self, generator: usize, x: &AlgebraElement<F::Elem>) -> ModuleElement<F::Elem> {
        Combination::from_sorted(
            x.terms().iter().map(|(p, c)| (ModuleTerm::new(generator, p.clone()), c.clone())).collect(),
        )
    }

    /// Rewrites every occurrence of a Gröbner tip away.
    pub fn normal_form(&self, x: &AlgebraElement<F::Elem>, gb: &GroebnerBasis<F::Elem>) -> AlgebraElement<F::Elem> {
        self.reduce(x, |p| {
            let (g, u, v) = gb.find_reducer(p)?;
            Some(self.sandwich(&u, g, &v))
        })
    }

    /// Componentwise normal form in `⊕ f_i kQ`; zero iff `m` lies in `⊕ f_i I`.
    pub fn normal_form_module(&self, m: &ModuleElement<F::Elem>, gb: &GroebnerBasis<F::Elem>) -> ModuleElement<F::Elem> {
        self.reduce(m, |t| {
            let (g, u, v) = gb.find_reducer(&t.path)?;
            Some(self.embed(t.generator, &self.sandwich(&u, g, &v)))
        })
    }

    /// Generic leading-term reduction. `reducer(t)` returns a monic element with
    /// tip `t`, or `None` when `t` is irreducible.
    pub(crate) fn reduce<T: Term>(
        &self,
        x: &Combination<T, F::Elem>,
        mut reducer: impl FnMut(&T) -> Option<Combination<T, F::Elem>>,
    ) -> Combination<T, F::Elem> {
        let mut work = x.clone();
        let mut kept: Vec<(T, F::Elem)> = Vec::new();
        while let Some((t, c)) = work.pop_tip() {
            match reducer(&t) {
                Some(r) => {
                    debug_assert_eq!(r.tip(), Some(&t));
                    work = work.add_scaled(&self.field, &self.order, &r.tail(), &self.field.neg(&c));
                }
                None => kept.push((t, c)),
            }
        }
        kept.reverse();
        Combination::from_sorted(kept)
    }

    /// Homogeneous Buchberger completion up to degree `max_degree`.
    pub fn complete(
        &self,
        generators: &[AlgebraElement<F::Elem>],
        max_degree: usize,
    ) -> Result<GroebnerBasis<F::Elem>, AlgebraError> {
        groebner::complete(self, generators, max_degree)
    }
}

#[cfg(test)]
mod tests;
