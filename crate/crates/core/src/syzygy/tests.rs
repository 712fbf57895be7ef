use super::*;
use crate::field::{PrimeField, Rationals};
use crate::fixtures::{example, loops, truncated, Elem};
use crate::koszul::chi;
use crate::oracle::{build_model, minimal_resolution, verify_windows};
use crate::overlaps::{enumerate, EnumerateOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn render(alg: &PathAlgebra<Rationals>, x: &ModuleElement<Elem>) -> Vec<alloc::string::String> {
    x.terms().iter().map(|(t, c)| alloc::format!("{}*f{}{}", c, t.generator, alg.quiver().render(&t.path))).collect()
}

fn cyclic(alg: &PathAlgebra<Rationals>, relations: &[&[(i64, &str)]]) -> ModulePresentation<Elem> {
    let f = alg.field();
    let e = alg.quiver().vertex_by_name("e").unwrap();
    let rels = relations
        .iter()
        .map(|r| {
            Combination::from_terms(
                f,
                alg.order(),
                r.iter().map(|(c, w)| (ModuleTerm::new(0, if *w == "e" { Path::vertex(e) } else { alg.quiver().word(w).unwrap() }), f.from_i64(*c))),
            )
        })
        .collect();
    ModulePresentation::new(alloc::vec![Generator { vertex: e, degree: 0 }], rels).unwrap()
}

#[test]
fn presentation_validation() {
    let alg = loops(&["x", "y"]);
    let f = alg.field();
    let e = alg.quiver().vertex_by_name("e").unwrap();
    let g = alloc::vec![Generator { vertex: e, degree: 0 }];
    let t = |j, w: &str| ModuleTerm::new(j, alg.quiver().word(w).unwrap());
    let bad = Combination::from_terms(f, alg.order(), [(t(0, "xy"), f.one()), (t(0, "x"), f.one())]);
    assert_eq!(ModulePresentation::new(g.clone(), alloc::vec![bad]), Err(SyzygyError::Inhomogeneous { relation: 0 }));
    let missing = Combination::monomial(f, t(1, "x"), f.one());
    assert_eq!(
        ModulePresentation::new(g.clone(), alloc::vec![missing]),
        Err(SyzygyError::UnknownGenerator { relation: 0, generator: 1 })
    );
    let p = ModulePresentation::<Elem>::new(g, alloc::vec![Combination::zero()]).unwrap();
    assert!(p.relations().is_empty());
}

#[test]
fn top_of_dual_numbers() {
    let (alg, g) = truncated(2);
    let model = build_model(&alg, &g, 6);
    let syz = first_syzygy(&model, &ModulePresentation::simple_tops(alg.field(), alg.quiver())).unwrap();
    assert_eq!(syz.t1.len(), 1);
    assert_eq!(render(&alg, &syz.t1[0].element), ["1*f0x"]);
    assert!(syz.t1_prime.is_empty());
    assert_eq!(syz.degree_range(), Some((1, 1)));
}

#[test]
fn top_of_example_algebra() {
    let (alg, g) = example();
    let model = build_model(&alg, &g, 6);
    let syz = first_syzygy(&model, &ModulePresentation::simple_tops(alg.field(), alg.quiver())).unwrap();
    let t1: Vec<_> = syz.t1.iter().map(|h| render(&alg, &h.element)).collect();
    assert_eq!(t1, [["1*f0x"], ["1*f0y"]]);
    assert_eq!(syz.degree_range(), Some((1, 1)));
    assert!(syz.t1_prime.is_empty());
    assert!(is_right_tip_reduced(&syz.combined()));
}

#[test]
fn relation_inside_the_ideal_is_vacuous() {
    let (alg, g) = example();
    let model = build_model(&alg, &g, 5);
    let syz = first_syzygy(&model, &cyclic(&alg, &[&[(1, "xy")]])).unwrap();
    assert!(syz.t1.is_empty());
    assert_eq!(syz.degree_range(), None);
    let primes: Vec<_> = syz.t1_prime.iter().map(|h| render(&alg, &h.element)).collect();
    assert!(primes.contains(&alloc::vec!["1*f0xy".into()]));
    assert!(primes.contains(&alloc::vec!["-1*f0yyy".into(), "1*f0xxx".into()]));
    assert!(syz.t1_prime.iter().all(|h| model.reduce_module(&h.element).is_empty()));
    assert!(is_right_tip_reduced(&syz.combined()));
}

#[test]
fn non_minimal_presentation_is_rejected() {
    let (alg, g) = example();
    let model = build_model(&alg, &g, 4);
    let pres = cyclic(&alg, &[&[(1, "e")]]);
    assert_eq!(first_syzygy(&model, &pres), Err(SyzygyError::NotMinimal { degree: 0 }));
}

#[test]
fn truncated_basis_is_rejected() {
    let alg = loops(&["x", "y"]);
    let g = crate::fixtures::gb(&alg, &[&[(1, "xyx"), (-1, "yxy")]], 6);
    assert_eq!(g.certified_degree(), Some(6));
    let model = build_model(&alg, &g, 8);
    let pres = ModulePresentation::simple_tops(alg.field(), alg.quiver());
    assert_eq!(first_syzygy(&model, &pres), Err(SyzygyError::TruncatedBasis { certified: 6, needed: 8 }));
}

#[test]
fn tip_reduction_detects_prefixes() {
    let alg = loops(&["x", "y"]);
    let f = alg.field();
    let m = |w: &str| Combination::monomial(f, ModuleTerm::new(0, alg.quiver().word(w).unwrap()), f.one());
    assert!(is_right_tip_reduced(&[m("x"), m("yx")]));
    assert!(!is_right_tip_reduced(&[m("x"), m("xy")]));
    // a suffix is not a right divisor in this sense
    assert!(is_right_tip_reduced(&[m("y"), m("xy")]));
}

/// A random element of the kernel of `V_X → X`: combinations of `r·p` for
/// relations `r` and of `f_i·u·g·v` for basis elements `g`.
fn kernel_element(
    alg: &PathAlgebra<Rationals>,
    g: &crate::algebra::GroebnerBasis<Elem>,
    pres: &ModulePresentation<Elem>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> ModuleElement<Elem> {
    let f = alg.field();
    let q = alg.quiver();
    let mut acc = ModuleElement::zero();
    for _ in 0..4 {
        let c = f.from_i64(rng.gen_range(-3..=3));
        let piece = if rng.gen_bool(0.5) && !pres.relations().is_empty() {
            let r = rng.gen_range(0..pres.relations().len());
            let rd = pres.relation_degree(r);
            if rd > d {
                continue;
            }
            let ps = q.paths_of_length(d - rd);
            alg.module_times_path(&pres.relations()[r], &ps[rng.gen_range(0..ps.len())])
        } else {
            let h = &g.elements()[rng.gen_range(0..g.elements().len())];
            let hd = h.path_degree().unwrap();
            if hd > d {
                continue;
            }
            let k = rng.gen_range(0..=d - hd);
            let us = q.paths_of_length(k);
            let vs = q.paths_of_length(d - hd - k);
            let x = alg.sandwich(&us[rng.gen_range(0..us.len())], h, &vs[rng.gen_range(0..vs.len())]);
            alg.embed(0, &x)
        };
        acc = acc.add_scaled(f, alg.order(), &piece, &c);
    }
    acc
}

#[test]
fn kernel_elements_have_unique_representations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (alg, g) = example();
    let cases = [
        ModulePresentation::simple_tops(alg.field(), alg.quiver()),
        cyclic(&alg, &[&[(1, "x")]]),
        cyclic(&alg, &[&[(1, "xx"), (1, "yy")]]),
        cyclic(&alg, &[&[(1, "xy")], &[(2, "y"), (0, "x")]]),
    ];
    let model = build_model(&alg, &g, 7);
    for pres in &cases {
        let syz = first_syzygy(&model, pres).unwrap();
        let set = syz.combined();
        assert!(is_right_tip_reduced(&set));
        for _ in 0..40 {
            let d = rng.gen_range(1..=7);
            let h = kernel_element(&alg, &g, pres, d, &mut rng);
            let a = divide(&alg, &set, &h, RewriteStrategy::TipFirst);
            let b = divide(&alg, &set, &h, RewriteStrategy::LowestFirst);
            assert!(a.remainder.is_zero(), "{:?}", render(&alg, &h));
            assert!(b.remainder.is_zero());
            assert_eq!(a.quotients, b.quotients);
        }
    }
}

#[test]
fn window_examples() {
    let q = crate::quiver::Quiver::one_vertex("e", &["x", "y"]).unwrap();
    let xx = enumerate(&q, &[q.word("xx").unwrap()], EnumerateOptions::levels(4)).unwrap();
    let qo = degree_window(3, 1, 1, &xx, WindowMethod::Quasioverlap, IndexConvention::Shifted).unwrap();
    let o = degree_window(3, 1, 1, &xx, WindowMethod::Overlap, IndexConvention::Shifted).unwrap();
    assert_eq!(qo.interval, Interval::finite(3, 3));
    assert_eq!(o.interval, Interval::finite(3, 3));
    assert!(window_consistency(&qo, &o));
    let s = [q.word("xxyyy").unwrap(), q.word("xxx").unwrap()];
    let t = enumerate(&q, &s, EnumerateOptions::levels(4)).unwrap();
    let o4 = degree_window(4, 1, 1, &t, WindowMethod::Overlap, IndexConvention::Shifted).unwrap();
    assert_eq!(o4.interval, Interval::finite(3, 8));
    let qo4 = degree_window(4, 1, 1, &t, WindowMethod::Quasioverlap, IndexConvention::Shifted).unwrap();
    assert!(window_consistency(&qo4, &o4));
    for m in [WindowMethod::Quasioverlap, WindowMethod::Overlap] {
        assert_eq!(degree_window(1, 2, 5, &t, m, IndexConvention::Shifted).unwrap().interval, Interval::finite(2, 5));
    }
    let xy = enumerate(&q, &[q.word("xy").unwrap()], EnumerateOptions::levels(3)).unwrap();
    let e1 = degree_window(3, 1, 1, &xy, WindowMethod::Quasioverlap, IndexConvention::Shifted).unwrap();
    let e2 = degree_window(3, 1, 1, &xy, WindowMethod::Overlap, IndexConvention::Shifted).unwrap();
    assert!(e1.interval.is_empty() && e2.interval.is_empty() && window_consistency(&e1, &e2));
    assert_eq!(
        degree_window(5, 1, 1, &xy, WindowMethod::Overlap, IndexConvention::Shifted),
        Err(SyzygyError::TableTooShallow { needed: 4, depth: 3 })
    );
    let literal = degree_window(1, 1, 1, &xx, WindowMethod::Quasioverlap, IndexConvention::Literal).unwrap();
    assert_eq!(literal.interval, Interval::finite(2, 2));
}

#[test]
fn refined_windows_are_chi_singletons() {
    for s in 2..=4 {
        let (alg, g) = truncated(s);
        let model = build_model(&alg, &g, 2);
        let syz = first_syzygy(&model, &ModulePresentation::simple_tops(alg.field(), alg.quiver())).unwrap();
        let table = enumerate(alg.quiver(), g.tips(), EnumerateOptions::levels(6)).unwrap();
        for i in 1..=6 {
            let w = refined_quasi_window(i, &syz, &table).unwrap();
            let c = chi(s, i) as i64;
            assert_eq!(w.interval, Interval::finite(c, c), "s = {s}, i = {i}");
            let plain = degree_window(i, 1, 1, &table, WindowMethod::Quasioverlap, IndexConvention::Shifted).unwrap();
            assert!(plain.interval.contains(c));
            assert!(w.interval.is_subset_of(&plain.interval));
        }
    }
}

fn random_module(
    alg: &PathAlgebra<PrimeField>,
    model: &crate::oracle::AlgebraModel<PrimeField>,
    rng: &mut ChaCha8Rng,
) -> ModulePresentation<u64> {
    let f = alg.field();
    let q = alg.quiver();
    let vs: Vec<Vertex> = q.vertices().collect();
    let gens: Vec<Generator> =
        (0..rng.gen_range(1..=2)).map(|_| Generator { vertex: vs[rng.gen_range(0..vs.len())], degree: rng.gen_range(0..=1) }).collect();
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let j = rng.gen_range(0..gens.len());
        let len = rng.gen_range(1..=2);
        let ps: Vec<Path> = q.paths_of_length(len).into_iter().filter(|p| p.source() == gens[j].vertex && model.word_id(p).is_some()).collect();
        if ps.is_empty() {
            continue;
        }
        let terms: Vec<_> = (0..2).map(|_| (ModuleTerm::new(j, ps[rng.gen_range(0..ps.len())].clone()), f.from_i64(rng.gen_range(1..5)))).collect();
        // keep one target vertex so the relation is a single element of e_v-graded pieces
        let t = terms[0].0.path.target();
        rels.push(Combination::from_terms(f, alg.order(), terms.into_iter().filter(|(m, _)| m.path.target() == t)));
    }
    ModulePresentation::new(gens, rels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    /// Oracle generating degrees fall inside both windows, for random modules
    /// over random monomial algebras.
    #[test]
    fn windows_contain_oracle_degrees((q, s) in crate::overlaps::tests::arb_instance(), seed in any::<u64>()) {
        let f = PrimeField::new(101).unwrap();
        let alg = PathAlgebra::new(q.clone(), crate::order::OrderSpec::declaration_order(&q), f);
        let g = alg.complete(&s.iter().map(|p| alg.monomial(p.clone())).collect::<Vec<_>>(), 8).unwrap();
        let words: usize = (0..=8).map(|d| crate::algebra::normal_words(&q, alg.order(), g.tips(), d).len()).sum();
        prop_assume!(words <= 1200);
        let model = build_model(&alg, &g, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pres = random_module(&alg, &model, &mut rng);
        let syz = first_syzygy(&model, &pres).unwrap();
        let table = enumerate(&q, g.tips(), EnumerateOptions::levels(4)).unwrap();
        let mut res = minimal_resolution(&model, &pres, 4, &[]);
        prop_assert_eq!(res.check(), Ok(()));
        let report = res.report();
        let windows: Vec<DegreeWindow> = match syz.degree_range() {
            None => (1..=4).flat_map(|n| [DegreeWindow::empty(n, WindowMethod::Quasioverlap), DegreeWindow::empty(n, WindowMethod::Overlap)]).collect(),
            Some((k, l)) => (1..=4)
                .flat_map(|n| {
                    [WindowMethod::Quasioverlap, WindowMethod::Overlap]
                        .map(|m| degree_window(n, k, l, &table, m, IndexConvention::Shifted).unwrap())
                })
                .chain((1..=4).map(|n| refined_quasi_window(n, &syz, &table).unwrap()))
                .collect(),
        };
        for v in verify_windows(&report, &windows) {
            prop_assert!(v.pass(), "{:?} {:?}", v, pres);
        }
    }
}
