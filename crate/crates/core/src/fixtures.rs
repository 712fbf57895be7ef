//! Small algebras shared by the unit tests.

use alloc::vec::Vec;

use num_rational::BigRational;

use crate::algebra::{AlgebraElement, GroebnerBasis, PathAlgebra};
use crate::field::{Field, Rationals};
use crate::order::OrderSpec;
use crate::quiver::Quiver;

pub(crate) type Q = Rationals;
pub(crate) type Elem = BigRational;

pub(crate) fn loops(names: &[&str]) -> PathAlgebra<Q> {
    let q = Quiver::one_vertex("e", names).unwrap();
    let o = OrderSpec::length_lex(&q, names, &[]).unwrap();
    PathAlgebra::new(q, o, Rationals)
}

/// A homogeneous element from `(coefficient, word)` pairs with one-letter arrows.
pub(crate) fn poly(alg: &PathAlgebra<Q>, terms: &[(i64, &str)]) -> AlgebraElement<Elem> {
    alg.element(terms.iter().map(|(c, w)| (alg.quiver().word(w).unwrap(), alg.field().from_i64(*c)))).unwrap()
}

pub(crate) fn gb(alg: &PathAlgebra<Q>, gens: &[&[(i64, &str)]], cap: usize) -> GroebnerBasis<Elem> {
    let gens: Vec<_> = gens.iter().map(|g| poly(alg, g)).collect();
    alg.complete(&gens, cap).unwrap()
}

/// `k[x]/(x^s)`.
pub(crate) fn truncated(s: usize) -> (PathAlgebra<Q>, GroebnerBasis<Elem>) {
    let alg = loops(&["x"]);
    let w = "x".repeat(s);
    let g = gb(&alg, &[&[(1, &w)]], 2 * s + 2);
    (alg, g)
}

/// `k<x,y>/(xy, yx, x³ − y³)`.
pub(crate) fn example() -> (PathAlgebra<Q>, GroebnerBasis<Elem>) {
    let alg = loops(&["x", "y"]);
    let g = gb(&alg, &[&[(1, "xy")], &[(1, "yx")], &[(1, "xxx"), (-1, "yyy")]], 10);
    (alg, g)
}

/// `k[x,y]`.
pub(crate) fn commutative() -> (PathAlgebra<Q>, GroebnerBasis<Elem>) {
    let alg = loops(&["x", "y"]);
    let g = gb(&alg, &[&[(1, "xy"), (-1, "yx")]], 10);
    (alg, g)
}
