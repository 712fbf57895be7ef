use super::*;
use crate::field::{PrimeField, Rationals};
use num_rational::BigRational;

fn xy_algebra() -> PathAlgebra<Rationals> {
    let q = Quiver::one_vertex("e", &["x", "y"]).unwrap();
    let o = OrderSpec::length_lex(&q, &["x", "y"], &[]).unwrap();
    PathAlgebra::new(q, o, Rationals)
}

fn poly(alg: &PathAlgebra<Rationals>, terms: &[(i64, &str)]) -> AlgebraElement<BigRational> {
    alg.element(terms.iter().map(|(c, w)| (alg.quiver().word(w).unwrap(), alg.field().from_i64(*c)))).unwrap()
}

fn words(alg: &PathAlgebra<Rationals>, tips: &[Path], d: usize) -> Vec<alloc::string::String> {
    normal_words(alg.quiver(), alg.order(), tips, d).iter().map(|p| alg.quiver().render(p)).collect()
}

fn example_gb(alg: &PathAlgebra<Rationals>) -> GroebnerBasis<BigRational> {
    let gens = [poly(alg, &[(1, "xy")]), poly(alg, &[(1, "yx")]), poly(alg, &[(1, "xxx"), (-1, "yyy")])];
    alg.complete(&gens, 8).unwrap()
}

#[test]
fn tips_under_length_lex() {
    let alg = xy_algebra();
    let w = |s| alg.quiver().word(s).unwrap();
    assert_eq!(alg.tip(&poly(&alg, &[(1, "xxx"), (-1, "yyy")])).unwrap(), &w("xxx"));
    assert_eq!(alg.tip(&poly(&alg, &[(1, "yx"), (-1, "xy")])).unwrap(), &w("xy"));
    assert_eq!(alg.tip(&poly(&alg, &[(1, "xy")])).unwrap(), &w("xy"));
    assert_eq!(alg.tip(&AlgebraElement::zero()), Err(AlgebraError::Zero));
}

#[test]
fn non_parallel_rejected() {
    let mut q = Quiver::new();
    let u = q.add_vertex("u").unwrap();
    let v = q.add_vertex("v").unwrap();
    q.add_arrow("a", u, v).unwrap();
    q.add_arrow("b", v, u).unwrap();
    let o = OrderSpec::declaration_order(&q);
    let alg = PathAlgebra::new(q, o, Rationals);
    let ab = alg.quiver().path(&["a", "b"]).unwrap();
    let ba = alg.quiver().path(&["b", "a"]).unwrap();
    assert_eq!(alg.element([(ab, Rationals.one()), (ba, Rationals.one())]), Err(AlgebraError::NotParallel));
}

#[test]
fn commutator_is_already_complete() {
    let alg = xy_algebra();
    let gb = alg.complete(&[poly(&alg, &[(1, "xy"), (-1, "yx")])], 6).unwrap();
    assert_eq!(gb.elements().len(), 1);
    assert_eq!(gb.tips(), &[alg.quiver().word("xy").unwrap()]);
    assert!(gb.is_complete());
}

#[test]
fn example_algebra_basis() {
    let alg = example_gb(&xy_algebra()).clone();
    let a = xy_algebra();
    let tips: Vec<_> = alg.tips().iter().map(|p| a.quiver().render(p)).collect();
    assert_eq!(tips, ["yx", "xy", "xxx", "yyyy"]);
    assert!(alg.is_complete());
    // x³ − y³ keeps its tail, the rest are monomials
    assert_eq!(alg.elements()[2], poly(&a, &[(1, "xxx"), (-1, "yyy")]));
    assert_eq!(alg.elements()[3], poly(&a, &[(1, "yyyy")]));
}

#[test]
fn normal_form_examples() {
    let alg = xy_algebra();
    let mono = alg.complete(&[poly(&alg, &[(1, "xy")])], 4).unwrap();
    assert!(alg.normal_form(&poly(&alg, &[(1, "xxy")]), &mono).is_zero());

    let cube = alg.complete(&[poly(&alg, &[(1, "xxx"), (-1, "yyy")])], 6).unwrap();
    assert_eq!(alg.normal_form(&poly(&alg, &[(1, "xxx")]), &cube), poly(&alg, &[(1, "yyy")]));

    let gb = example_gb(&alg);
    assert!(alg.normal_form(&poly(&alg, &[(1, "yyyy")]), &gb).is_zero());
    assert_eq!(alg.normal_form(&poly(&alg, &[(2, "xxx"), (1, "xx")]), &gb), poly(&alg, &[(2, "yyy"), (1, "xx")]));
}

#[test]
fn normal_word_examples() {
    let alg = xy_algebra();
    let gb = example_gb(&alg);
    assert_eq!(words(&alg, gb.tips(), 2), ["xx", "yy"]);
    assert_eq!(words(&alg, gb.tips(), 3), ["yyy"]);
    let dims: Vec<usize> = (0..6).map(|d| words(&alg, gb.tips(), d).len()).collect();
    assert_eq!(dims, [1, 2, 2, 1, 0, 0]);

    let q = Quiver::one_vertex("e", &["x"]).unwrap();
    let o = OrderSpec::declaration_order(&q);
    let xx = q.word("xx").unwrap();
    assert!(normal_words(&q, &o, &[xx], 5).is_empty());
}

#[test]
fn completion_input_order_irrelevant() {
    let alg = xy_algebra();
    let a = poly(&alg, &[(1, "xy")]);
    let b = poly(&alg, &[(1, "yx")]);
    let c = poly(&alg, &[(1, "xxx"), (-1, "yyy")]);
    let g1 = alg.complete(&[a.clone(), b.clone(), c.clone()], 8).unwrap();
    let g2 = alg.complete(&[c, a, b], 8).unwrap();
    assert_eq!(g1, g2);
}

#[test]
fn completion_errors() {
    let alg = xy_algebra();
    let mixed = poly(&alg, &[(1, "xy"), (-1, "x")]);
    assert_eq!(alg.complete(&[mixed], 4), Err(AlgebraError::Inhomogeneous));
    assert_eq!(alg.complete(&[poly(&alg, &[(1, "x")])], 4), Err(AlgebraError::DegreeTooLow(1)));
    assert_eq!(
        alg.complete(&[poly(&alg, &[(1, "xxx")])], 2),
        Err(AlgebraError::CapTooSmall { cap: 2, needed: 3 })
    );
}

#[test]
fn infinite_basis_is_truncated() {
    // xyx − yxy under x > y has the infinite basis xy^n x − yxy^n ... style family
    let alg = xy_algebra();
    let gb = alg.complete(&[poly(&alg, &[(1, "xyx"), (-1, "yxy")])], 6).unwrap();
    assert_eq!(gb.status(), Completion::TruncatedAt(6));
    assert!(gb.tips().len() > 1);
}

#[test]
fn monomial_inputs_and_inclusions() {
    let alg = xy_algebra();
    let gb = alg.complete(&[poly(&alg, &[(1, "xxx")]), poly(&alg, &[(1, "xx")])], 5).unwrap();
    assert_eq!(gb.tips(), &[alg.quiver().word("xx").unwrap()]);
    assert!(gb.is_complete());
}

#[test]
fn prime_field_completion() {
    let q = Quiver::one_vertex("e", &["x", "y"]).unwrap();
    let o = OrderSpec::length_lex(&q, &["x", "y"], &[]).unwrap();
    let f = PrimeField::new(3).unwrap();
    let alg = PathAlgebra::new(q.clone(), o, f);
    let g = alg.element([(q.word("xx").unwrap(), 1), (q.word("yy").unwrap(), 2)]).unwrap();
    let gb = alg.complete(&[g], 6).unwrap();
    assert!(gb.elements().iter().all(|g| f.is_one(g.leading_coefficient().unwrap())));
}
