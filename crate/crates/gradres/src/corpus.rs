//! Seeded random corpora and the property suites run over them.
//!
//! Instances are small quivers (at most 3 vertices and 4 arrows) with a
//! reduced, nonempty set of monomial relations of lengths 2 to 4. Everything is
//! drawn from a ChaCha stream, so a seed fixes the whole run.

use std::collections::BTreeSet;

use gradres_core::algebra::normal_words;
use gradres_core::field::Field;
use gradres_core::oracle::{build_model, chain_bounds, minimal_resolution, verify_windows, AlgebraModel};
use gradres_core::overlaps::{bound_compose, check_partition, enumerate, partition, partitioned_words, EnumerateOptions, ExtInt, OverlapTable};
use gradres_core::syzygy::{
    degree_window, first_syzygy, refined_quasi_window, window_consistency, DegreeWindow, Generator, IndexConvention, ModulePresentation,
    WindowMethod,
};
use gradres_core::{Combination, ModuleTerm, OrderSpec, Path, PathAlgebra, Quiver, Rationals, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{PropertyRow, PropertySection};
use crate::run::show_path;

#[derive(Clone, Debug)]
pub struct MonomialInstance {
    pub quiver: Quiver,
    pub tips: Vec<Path>,
}

impl MonomialInstance {
    pub fn describe(&self) -> String {
        let q = &self.quiver;
        let arrows: Vec<String> = q.arrows().map(|a| format!("{}:{}->{}", q.arrow_name(a), q.vertex_name(a.source), q.vertex_name(a.target))).collect();
        let tips: Vec<String> = self.tips.iter().map(|p| show_path(q, p)).collect();
        format!("arrows [{}] S {{{}}}", arrows.join(" "), tips.join(", "))
    }
}

/// A random quiver with a random reduced nonempty set of paths of length 2..=4.
pub fn random_monomial(rng: &mut ChaCha8Rng) -> MonomialInstance {
    loop {
        let nv = rng.gen_range(1..=3);
        let na = rng.gen_range(1..=4);
        let mut q = Quiver::new();
        let vs: Vec<Vertex> = (0..nv).map(|i| q.add_vertex(&format!("v{i}")).expect("fresh")).collect();
        let names = ["x", "y", "z", "w"];
        for name in &names[..na] {
            let (s, t) = (vs[rng.gen_range(0..nv)], vs[rng.gen_range(0..nv)]);
            q.add_arrow(name, s, t).expect("fresh");
        }
        let mut tips: Vec<Path> = Vec::new();
        for _ in 0..rng.gen_range(1..=5) {
            let paths = q.paths_of_length(rng.gen_range(2..=4));
            if paths.is_empty() {
                continue;
            }
            let p = paths[rng.gen_range(0..paths.len())].clone();
            if tips.iter().all(|r| !r.divides(&p) && !p.divides(r)) {
                tips.push(p);
            }
        }
        if !tips.is_empty() {
            return MonomialInstance { quiver: q, tips };
        }
    }
}

/// Pass/fail tallies keyed by property name, in insertion order.
#[derive(Default)]
struct Tally {
    rows: Vec<PropertyRow>,
}

impl Tally {
    fn record(&mut self, name: &str, ok: bool, failure: impl FnOnce() -> String) {
        let i = match self.rows.iter().position(|r| r.name == name) {
            Some(i) => i,
            None => {
                self.rows.push(PropertyRow { name: name.into(), passed: 0, failed: 0, first_failure: None });
                self.rows.len() - 1
            }
        };
        let row = &mut self.rows[i];
        if ok {
            row.passed += 1;
        } else {
            row.failed += 1;
            if row.first_failure.is_none() {
                row.first_failure = Some(failure());
            }
        }
    }
}

pub const OVERLAP_DEPTH: usize = 5;

/// Checks, per instance and level `n <= 5`:
/// the quasioverlap/overlap extrema inequalities, the composition bounds
/// between levels, uniqueness of the `ρ` chain, the partition lemmas in both
/// directions, lifting of quasioverlaps to overlaps through a suffix of the
/// phantom prefix, and `n+1 <= mino_n`, `maxo_n <= len(S)·n − n + 1`.
pub fn overlap_properties(seed: u64, count: usize) -> PropertySection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..count {
        let inst = random_monomial(&mut rng);
        overlap_instance(&inst, &mut rng, &mut tally);
    }
    PropertySection { seed, instances: count, skipped: 0, rows: tally.rows }
}

fn overlap_instance(inst: &MonomialInstance, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let (q, s) = (&inst.quiver, &inst.tips);
    let depth = OVERLAP_DEPTH;
    let t = enumerate(q, s, EnumerateOptions::levels(depth)).expect("reduced by construction");
    let len = t.len_s() as i64;
    let ctx = |what: String| format!("{}: {what}", inst.describe());
    for n in 0..=depth {
        let e = t.extrema(n);
        // ±inf arithmetic: `x <= y - 1` is not `x < y` when both are -inf
        #[allow(clippy::int_plus_one)]
        let ok = e.maxqo <= e.maxo - 1 && e.minqo >= e.mino - len + 1;
        tally.record("qo/o extrema inequalities", ok, || ctx(format!("n = {n}, {e:?}")));
        for m in 0..=depth - n {
            let (lower, upper) = bound_compose(&e, &t.extrema(m), len as usize);
            let em = t.extrema(n + m);
            tally.record("composition bounds", em.maxo <= upper && em.mino >= lower, || ctx(format!("n = {n}, m = {m}")));
        }
        if n == 0 {
            continue;
        }
        let unique = t.predecessor_counts(n, false).iter().all(|&c| c == 1) && t.predecessor_counts(n, true).iter().all(|&c| c == 1);
        tally.record("rho uniqueness", unique, || ctx(format!("n = {n}")));
        if !t.overlaps(n).is_empty() {
            let ok = e.mino >= ExtInt::Finite(n as i64 + 1) && e.maxo <= ExtInt::Finite(len * n as i64 - n as i64 + 1);
            tally.record("length bounds", ok, || ctx(format!("n = {n}, mino {:?}, maxo {:?}", e.mino, e.maxo)));
        }
        for x in t.quasi(n) {
            let lifted = (1..=x.phantom.len()).any(|k| x.phantom.suffix(k).compose(&x.word).is_ok_and(|vw| t.contains_overlap(n, &vw)));
            tally.record("quasioverlap lifting", lifted, || ctx(format!("n = {n}, ({}, {})", show_path(q, &x.word), show_path(q, &x.phantom))));
        }
        partition_checks(inst, &t, n, rng, tally);
    }
}

/// Members have valid decompositions; decomposable words are members. The
/// converse direction is exhaustive over short words and sampled near misses
/// (members with an arrow added or removed at either end) above that.
fn partition_checks(inst: &MonomialInstance, t: &OverlapTable, n: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let (q, s) = (&inst.quiver, &inst.tips);
    let ctx = |what: String| format!("{}: {what}", inst.describe());
    for x in t.overlaps(n) {
        let ok = partition(&x.word, n, s, None).is_some_and(|p| check_partition(&x.word, s, None, &p).is_ok());
        tally.record("partition lemma, overlaps", ok, || ctx(format!("O_{n} member {} has no decomposition", show_path(q, &x.word))));
    }
    for x in t.quasi(n) {
        let ok = partition(&x.word, n, s, Some(&x.phantom)).is_some_and(|p| check_partition(&x.word, s, Some(&x.phantom), &p).is_ok());
        tally.record("partition lemma, quasioverlaps", ok, || {
            ctx(format!("QO_{n} member ({}, {}) has no decomposition", show_path(q, &x.word), show_path(q, &x.phantom)))
        });
    }
    let cap = if q.arrow_count() <= 2 { 7 } else { 5 };
    for (w, _) in partitioned_words(q, s, n, cap, false) {
        tally.record("partition lemma, overlaps", t.contains_overlap(n, &w), || ctx(format!("{} decomposes but is not in O_{n}", show_path(q, &w))));
    }
    for (w, v) in partitioned_words(q, s, n, cap, true) {
        let v = v.expect("phantom");
        tally.record("partition lemma, quasioverlaps", t.contains_quasi(n, &w, &v), || {
            ctx(format!("({}, {}) decomposes but is not in QO_{n}", show_path(q, &w), show_path(q, &v)))
        });
    }
    let mut near: BTreeSet<Path> = BTreeSet::new();
    for x in t.overlaps(n).iter().chain(t.overlaps(n - 1)) {
        let w = &x.word;
        if w.len() > 1 {
            near.insert(w.prefix(w.len() - 1));
            near.insert(w.suffix(w.len() - 1));
        }
        for a in q.arrows_from(w.target()) {
            near.insert(w.extended(a));
        }
        for a in q.arrows().filter(|a| a.target == w.source()) {
            near.insert(Path::arrow(a).compose(w).expect("composable"));
        }
    }
    let sample: Vec<Path> = near.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    for w in sample {
        let decomposes = partition(&w, n, s, None).is_some();
        tally.record("partition lemma, overlaps", decomposes == t.contains_overlap(n, &w), || {
            ctx(format!("near miss {} at level {n}", show_path(q, &w)))
        });
    }
}

/// Largest cap in `6..=12` whose normal words fit the budget.
fn choose_degree(q: &Quiver, order: &OrderSpec, tips: &[Path], budget: usize) -> Option<usize> {
    let mut total = 0;
    let mut best = None;
    for d in 0..=12 {
        total += normal_words(q, order, tips, d).len();
        if total > budget {
            break;
        }
        if d >= 6 {
            best = Some(d);
        }
    }
    best
}

pub const WINDOW_DEPTH: usize = 4;
pub const WORD_BUDGET: usize = 1500;

/// A random presentation over `alg`: one or two generators in degree 0 or 1 and
/// up to three relations of length one or two, each ending at a single vertex.
pub fn random_module<F: Field>(alg: &PathAlgebra<F>, model: &AlgebraModel<F>, rng: &mut ChaCha8Rng) -> ModulePresentation<F::Elem> {
    let f = alg.field();
    let q = alg.quiver();
    let vs: Vec<Vertex> = q.vertices().collect();
    let gens: Vec<Generator> =
        (0..rng.gen_range(1..=2)).map(|_| Generator { vertex: vs[rng.gen_range(0..vs.len())], degree: rng.gen_range(0..=1) }).collect();
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let j = rng.gen_range(0..gens.len());
        let len = rng.gen_range(1..=2);
        let ps: Vec<Path> = q.paths_of_length(len).into_iter().filter(|p| p.source() == gens[j].vertex && model.word_id(p).is_some()).collect();
        if ps.is_empty() {
            continue;
        }
        let terms: Vec<_> = (0..2).map(|_| (ModuleTerm::new(j, ps[rng.gen_range(0..ps.len())].clone()), f.from_i64(rng.gen_range(1..5)))).collect();
        let t = terms[0].0.path.target();
        rels.push(Combination::from_terms(f, alg.order(), terms.into_iter().filter(|(m, _)| m.path.target() == t)));
    }
    ModulePresentation::new(gens, rels).expect("terms start at their generator")
}

/// Differential check of the degree windows against the oracle, over `algebras`
/// random monomial algebras (each with `A_0` and `modules_each` random
/// presentations), for `P_1..P_4` and degree caps up to 12. For `A_0` the
/// generating degrees must also equal the lengths of the level below.
pub fn window_differential(seed: u64, algebras: usize, modules_each: usize) -> PropertySection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let mut skipped = 0;
    let mut done = 0;
    while done < algebras {
        let inst = random_monomial(&mut rng);
        let q = inst.quiver.clone();
        let order = OrderSpec::declaration_order(&q);
        let Some(d) = choose_degree(&q, &order, &inst.tips, WORD_BUDGET) else {
            skipped += 1;
            continue;
        };
        done += 1;
        let alg = PathAlgebra::new(q.clone(), order, Rationals);
        let gens: Vec<_> = inst.tips.iter().map(|p| alg.monomial(p.clone())).collect();
        let gb = alg.complete(&gens, d).expect("monomial relations");
        let model = build_model(&alg, &gb, d);
        let table = enumerate(&q, gb.tips(), EnumerateOptions::levels(WINDOW_DEPTH)).expect("reduced");
        let mut presentations = vec![("A0".to_string(), ModulePresentation::simple_tops(alg.field(), &q))];
        for i in 0..modules_each {
            presentations.push((format!("M{i}"), random_module(&alg, &model, &mut rng)));
        }
        for (name, pres) in &presentations {
            let ctx = |what: String| format!("{} D={d} module {name}: {what}", inst.describe());
            let syz = first_syzygy(&model, pres).expect("presentations are minimal");
            let extra = if name == "A0" { chain_bounds(&table, WINDOW_DEPTH) } else { Vec::new() };
            let mut res = minimal_resolution(&model, pres, WINDOW_DEPTH, &extra);
            let exact = res.check();
            tally.record("oracle exactness", exact.is_ok(), || ctx(format!("{exact:?}")));
            let report = res.report();
            for n in 1..=WINDOW_DEPTH {
                let window = |m| match syz.degree_range() {
                    None => DegreeWindow::empty(n, m),
                    Some((k, l)) => degree_window(n, k, l, &table, m, IndexConvention::Shifted).expect("deep enough"),
                };
                let (qo, o) = (window(WindowMethod::Quasioverlap), window(WindowMethod::Overlap));
                let refined = refined_quasi_window(n, &syz, &table).expect("deep enough");
                let verdicts = verify_windows(&report, &[qo, o, refined]);
                for (label, v) in ["quasioverlap window", "overlap window", "refined quasioverlap window"].iter().zip(&verdicts) {
                    tally.record(label, v.pass(), || ctx(format!("P_{n} degrees {:?} outside {:?}", v.outside, v.window)));
                }
                tally.record("window consistency", window_consistency(&qo, &o), || ctx(format!("P_{n}: {:?} not inside {:?}", qo.interval, o.interval)));
                if name == "A0" {
                    let mut lens: Vec<usize> = table.overlaps(n - 1).iter().map(|e| e.word.len()).filter(|l| *l <= d).collect();
                    lens.sort_unstable();
                    tally.record("A0 degrees equal chain lengths", lens == report.degrees[n], || {
                        ctx(format!("P_{n} degrees {:?}, level {} lengths {:?}", report.degrees[n], n - 1, lens))
                    });
                }
            }
        }
    }
    PropertySection { seed, instances: algebras * (1 + modules_each), skipped, rows: tally.rows }
}
