use super::*;
use proptest::prelude::*;

pub(crate) const EXAMPLE: &str = "\
# k<x,y>/(xy, yx, x^3 - y^3)
[quiver]
vertex e
arrow x : e -> e
arrow y : e -> e

[order]
arrows x > y

[field]
Q

[ideal]
x*y
y*x
x^3 - y^3

[module M]
generator g : e @ 0
g*x - 2*g*y   # a cyclic module
";

fn err(text: &str) -> Diagnostic {
    parse(text).expect_err("should be rejected")
}

fn with_ideal(rel: &str) -> String {
    format!("[quiver]\nvertex e f\narrow x : e -> e\narrow y : e -> e\narrow a : e -> f\narrow b : f -> f\n[ideal]\n{rel}\n")
}

#[test]
fn example_file() {
    let pf = parse(EXAMPLE).unwrap();
    assert_eq!(pf.vertices, ["e"]);
    assert_eq!(pf.arrows.len(), 2);
    assert_eq!(pf.order.arrows, ["x", "y"]);
    assert_eq!(pf.ideal.len(), 3);
    let cube = &pf.ideal[2];
    assert_eq!(cube[0].path, PathExpr::Arrows(vec!["x".into(); 3]));
    assert_eq!(cube[1].coeff, -BigRational::one());
    assert_eq!(pf.modules[0].relations[0][1].coeff, BigRational::from_integer((-2).into()));
    assert_eq!(pf.module_names(), ["A0", "M"]);

    let inst = pf.instance(gradres_core::Rationals);
    assert_eq!(inst.ideal.len(), 3);
    assert_eq!(inst.modules.len(), 2);
    assert_eq!(inst.modules["M"].relations().len(), 1);
}

#[test]
fn diagnostics() {
    let d = err(&with_ideal("x*y - x"));
    assert_eq!((d.code, d.line, d.col), (DiagnosticCode::Inhomogeneous, 8, 5));
    let d = err(&with_ideal("b*a"));
    assert_eq!((d.code, d.line, d.col), (DiagnosticCode::NonComposable, 8, 3));
    assert_eq!(err(&with_ideal("x*z")).code, DiagnosticCode::UnknownIdentifier);
    assert_eq!(err(&with_ideal("x*x - a*b")).code, DiagnosticCode::NonParallel);
    assert_eq!(err(&with_ideal("x + y")).code, DiagnosticCode::DegreeTooLow);
    assert_eq!(err(&with_ideal("a^2")).code, DiagnosticCode::NonComposable);
    assert_eq!(err(&with_ideal("x*y +")).code, DiagnosticCode::Syntax);
    assert_eq!(err(&with_ideal("1/0 x*y")).code, DiagnosticCode::Syntax);

    let d = err("[quiver]\nvertex e\n[field]\nFp 4\n");
    assert_eq!((d.code, d.line), (DiagnosticCode::BadFieldSpec, 4));
    assert_eq!(err("[quiver]\nvertex e\n[field]\nR\n").code, DiagnosticCode::BadFieldSpec);
    let d = err("[quiver]\nvertex e\narrow x : e -> e\n[field]\nFp 3\n[ideal]\nx*x + 1/3 x*x\n");
    assert_eq!((d.code, d.col), (DiagnosticCode::ScalarUndefined, 7));

    assert_eq!(err("[quiver]\nvertex e e\n").code, DiagnosticCode::DuplicateIdentifier);
    assert_eq!(err("[quiver]\nvertex e\narrow x : e -> f\n").code, DiagnosticCode::UnknownIdentifier);
    assert_eq!(err("[quivers]\n").code, DiagnosticCode::UnknownSection);
    assert_eq!(err("[quiver]\nvertex e\n[field]\nQ\n[field]\nQ\n").code, DiagnosticCode::DuplicateSection);
    assert_eq!(err("[field]\nQ\n").code, DiagnosticCode::MissingSection);
    assert_eq!(err("").code, DiagnosticCode::MissingSection);
    assert_eq!(err("[quiver]\nvertex e\narrow x : e -> e\narrow y : e -> e\n[order]\narrows x\n").code, DiagnosticCode::BadOrder);
    assert_eq!(err("[quiver]\nvertex e\n[run]\nmax-n 3\nmax-n 4\n").code, DiagnosticCode::BadRunParameter);
    assert_eq!(err("[quiver]\nvertex e\n[run]\nfoo 3\n").code, DiagnosticCode::BadRunParameter);
    assert_eq!(err("[quiver]\nvertex e\n[module A0]\n").code, DiagnosticCode::DuplicateIdentifier);

    let m = "[quiver]\nvertex e f\narrow x : e -> e\narrow a : e -> f\n[module M]\ngenerator g : e @ 1\ngenerator h : f @ 0\n";
    assert_eq!(err(&format!("{m}g*x - h\n")).code, DiagnosticCode::Inhomogeneous);
    assert_eq!(err(&format!("{m}g*a - h*x\n")).code, DiagnosticCode::NonComposable);
    assert_eq!(err(&format!("{m}k*x\n")).code, DiagnosticCode::UnknownIdentifier);
    assert_eq!(err(&format!("{m}g*x - h*h\n")).code, DiagnosticCode::UnknownIdentifier);
    let ok = parse(&format!("{m}generator k : f @ 2\ng*a*f + 2*k*f\n")).unwrap();
    assert_eq!(ok.modules[0].relations[0][1].path, None);
}

#[test]
fn codes_are_distinct() {
    use DiagnosticCode::*;
    let all = [
        Syntax, UnknownSection, DuplicateSection, MissingSection, UnknownIdentifier, DuplicateIdentifier, NonComposable, NonParallel,
        Inhomogeneous, DegreeTooLow, BadFieldSpec, ScalarUndefined, BadOrder, BadRunParameter,
    ];
    let codes: std::collections::BTreeSet<_> = all.iter().map(|c| c.as_str()).collect();
    assert_eq!(codes.len(), all.len());
}

#[test]
fn spelling_variants_agree() {
    let a = parse(EXAMPLE).unwrap();
    let b = parse(
        "[quiver]\nvertices e\narrow x:e->e\n  arrow y : e->e\n[order]\nlength-lex\narrows x>y\n[field]\nQQ\n[ideal]\n+1 x*y\ny*x\nx*x*x-1*y^2*y\n[module M]\ngenerator g:e@0\ng*x-2g*y\n",
    )
    .unwrap();
    assert_eq!(a, b);
    assert_eq!(parse(&a.render()).unwrap(), a);
}

#[test]
fn run_parameters() {
    let pf = parse("[quiver]\nvertex e\n[run]\nmax-n 3\nmax-degree 10\nseed 42\n").unwrap();
    assert_eq!(pf.run, RunParams { max_n: Some(3), max_degree: Some(10), seed: Some(42) });
}

fn arb_scalar() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-4i64..=-1, 1i64..=4], prop_oneof![Just(1i64), Just(2), Just(4)]).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// Valid problem files over quivers with up to three vertices.
fn arb_problem() -> impl Strategy<Value = ProblemFile> {
    (1usize..=3, proptest::collection::vec((0usize..3, 0usize..3), 1..=4), any::<u64>(), proptest::collection::vec(arb_scalar(), 24), any::<bool>())
        .prop_map(|(nv, ends, seed, scalars, reorder)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut pf = ProblemFile {
                vertices: (0..nv).map(|i| format!("v{i}")).collect(),
                arrows: ends
                    .iter()
                    .enumerate()
                    .map(|(i, (s, t))| ArrowDecl { name: format!("a{i}"), source: format!("v{}", s % nv), target: format!("v{}", t % nv) })
                    .collect(),
                ..ProblemFile::default()
            };
            if reorder {
                let mut names: Vec<String> = pf.arrows.iter().map(|a| a.name.clone()).collect();
                names.reverse();
                pf.order.arrows = names;
            }
            pf.field = [FieldSpec::Rationals, FieldSpec::Prime(3), FieldSpec::Prime(7)][rng.gen_range(0..3)];
            let q = pf.quiver();
            let mut coeffs = scalars.into_iter().cycle();
            let arrows_of = |p: &Path| p.arrows().iter().map(|a| q.arrow_name(*a).to_string()).collect::<Vec<_>>();
            for _ in 0..rng.gen_range(0..=3) {
                let paths = q.paths_of_length(rng.gen_range(2..=3));
                if paths.is_empty() {
                    continue;
                }
                let p = &paths[rng.gen_range(0..paths.len())];
                let par: Vec<&Path> = paths.iter().filter(|r| r.source() == p.source() && r.target() == p.target()).collect();
                let terms = (0..rng.gen_range(1..=3))
                    .map(|_| Term { coeff: coeffs.next().unwrap(), path: PathExpr::Arrows(arrows_of(par[rng.gen_range(0..par.len())])) })
                    .collect();
                pf.ideal.push(terms);
            }
            for m in 0..rng.gen_range(0..=2) {
                let gens: Vec<GeneratorDecl> = (0..rng.gen_range(1..=2))
                    .map(|j| GeneratorDecl { name: format!("g{j}"), vertex: format!("v{}", rng.gen_range(0..nv)), degree: rng.gen_range(0..=2) })
                    .collect();
                let mut relations = Vec::new();
                for _ in 0..rng.gen_range(0..=2) {
                    let g = &gens[rng.gen_range(0..gens.len())];
                    let v = q.vertex_by_name(&g.vertex).unwrap();
                    let paths: Vec<Path> = q.paths_of_length(rng.gen_range(0..=2)).into_iter().filter(|p| p.source() == v).collect();
                    let Some(p) = paths.first().cloned() else { continue };
                    let term = |p: &Path, c| ModuleTermExpr {
                        coeff: c,
                        generator: g.name.clone(),
                        path: if p.is_vertex() { None } else { Some(arrows_of(p)) },
                    };
                    let mut rel = vec![term(&p, coeffs.next().unwrap())];
                    if let Some(r) = paths.iter().find(|r| r.target() == p.target() && **r != p) {
                        rel.push(term(r, coeffs.next().unwrap()));
                    }
                    relations.push(rel);
                }
                pf.modules.push(ModuleDecl { name: format!("M{m}"), generators: gens, relations });
            }
            pf.run = RunParams {
                max_n: rng.gen_bool(0.5).then(|| rng.gen_range(1..6)),
                max_degree: rng.gen_bool(0.5).then(|| rng.gen_range(4..13)),
                seed: rng.gen_bool(0.3).then(|| rng.gen()),
            };
            pf
        })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(pf in arb_problem()) {
        let text = pf.render();
        let back = parse(&text);
        prop_assert_eq!(back.as_ref(), Ok(&pf), "{}", text);
    }

    #[test]
    fn parse_never_panics(text in "[\\[\\]a-z0-9 *^/+:@>#\n-]{0,80}") {
        let _ = parse(&text);
    }
}
