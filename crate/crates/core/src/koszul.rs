//! Degree patterns of minimal resolutions: `χ_s`, collections of allowed
//! degrees per homological degree, their sumset product, and the overlap
//! criterion for `s`-Koszul algebras.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::GroebnerBasis;
use crate::oracle::ResolutionReport;
use crate::overlaps::{ExtInt, OverlapTable};

/// `is/2` for even `i`, `(i−1)s/2 + 1` for odd `i`.
pub fn chi(s: usize, i: usize) -> usize {
    if i.is_multiple_of(2) {
        i * s / 2
    } else {
        (i - 1) * s / 2 + 1
    }
}

/// Allowed generating degrees `S_i` for every homological degree `i`.
#[derive(Clone)]
pub enum DegreeCollection {
    /// `S_i = {δ(i)}`.
    Singleton(Arc<dyn Fn(usize) -> i64 + Send + Sync>),
    /// `S_i = {χ_s(i)}`.
    Chi(usize),
    /// `S_i = {j : j ≤ χ_s(i)}`.
    ChiDownSet(usize),
    /// `S_i` listed for small `i`, empty afterwards.
    Explicit(Vec<Vec<i64>>),
}

impl fmt::Debug for DegreeCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeCollection::Singleton(d) => write!(f, "Singleton({:?}…)", (0..4).map(|i| d(i)).collect::<Vec<_>>()),
            DegreeCollection::Chi(s) => write!(f, "Chi({s})"),
            DegreeCollection::ChiDownSet(s) => write!(f, "ChiDownSet({s})"),
            DegreeCollection::Explicit(l) => write!(f, "Explicit({l:?})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KoszulError {
    #[error("component {0} of the collection is infinite")]
    Infinite(usize),
    #[error("the Groebner basis is only certified through degree {0}")]
    TruncatedBasis(usize),
    #[error("overlap table has depth {depth}, level {needed} is needed")]
    TableTooShallow { needed: usize, depth: usize },
    #[error("resolution is known through P_{known}, P_{needed} is needed")]
    ResolutionTooShort { known: usize, needed: usize },
    #[error("s must be at least 2")]
    BadS,
}

impl DegreeCollection {
    /// `S_i = {i}`.
    pub fn linear() -> Self {
        DegreeCollection::Singleton(Arc::new(|i| i as i64))
    }

    pub fn contains(&self, i: usize, j: i64) -> bool {
        match self {
            DegreeCollection::Singleton(d) => d(i) == j,
            DegreeCollection::Chi(s) => chi(*s, i) as i64 == j,
            DegreeCollection::ChiDownSet(s) => j <= chi(*s, i) as i64,
            DegreeCollection::Explicit(l) => l.get(i).is_some_and(|c| c.contains(&j)),
        }
    }

    /// `S_i` as a finite set.
    pub fn component(&self, i: usize) -> Result<BTreeSet<i64>, KoszulError> {
        Ok(match self {
            DegreeCollection::Singleton(d) => [d(i)].into(),
            DegreeCollection::Chi(s) => [chi(*s, i) as i64].into(),
            DegreeCollection::ChiDownSet(_) => return Err(KoszulError::Infinite(i)),
            DegreeCollection::Explicit(l) => l.get(i).map(|c| c.iter().copied().collect()).unwrap_or_default(),
        })
    }
}

/// `(S ⊗ R)_i = ⋃_{j+k=i} {n + m : n ∈ S_j, m ∈ R_k}`.
pub fn collection_tensor(s: &DegreeCollection, r: &DegreeCollection, i: usize) -> Result<BTreeSet<i64>, KoszulError> {
    let mut out = BTreeSet::new();
    for j in 0..=i {
        let (a, b) = (s.component(j)?, r.component(i - j)?);
        out.extend(a.iter().flat_map(|n| b.iter().map(move |m| n + m)));
    }
    Ok(out)
}

/// The three quantities of the overlap criterion and whether it applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SKoszulCertificate {
    pub s: usize,
    pub len_tips: usize,
    pub maxo_2: ExtInt,
    pub mino_1: ExtInt,
    pub holds: bool,
}

/// `len(tip G) ≤ s`, `maxo_2 ≤ s + 1` and `mino_1 = s` together imply that `A`
/// is `s`-Koszul. The criterion is sufficient, not necessary.
pub fn s_koszul_criterion<E: Clone + PartialEq + fmt::Debug>(
    gb: &GroebnerBasis<E>,
    s: usize,
    table: &OverlapTable,
) -> Result<SKoszulCertificate, KoszulError> {
    if s < 2 {
        return Err(KoszulError::BadS);
    }
    if let Some(d) = gb.certified_degree() {
        return Err(KoszulError::TruncatedBasis(d));
    }
    if table.depth() < 2 {
        return Err(KoszulError::TableTooShallow { needed: 2, depth: table.depth() });
    }
    let len_tips = gb.max_tip_len();
    let maxo_2 = table.extrema(2).maxo;
    let mino_1 = table.extrema(1).mino;
    let si = s as i64;
    let holds = len_tips <= s && maxo_2 <= ExtInt::Finite(si + 1) && mino_1 == ExtInt::Finite(si);
    Ok(SKoszulCertificate { s, len_tips, maxo_2, mino_1, holds })
}

/// Outcome of comparing oracle degrees with a collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminedVerdict {
    pub holds: bool,
    /// First `(i, degree)` with a degree of `P_i` outside `S_i`.
    pub first_violation: Option<(usize, i64)>,
    /// Every `P_i` with `i ≤ r` is known to have no generators beyond the report.
    pub certified: bool,
}

/// Checks that every generating degree of `P_i`, `i ≤ r`, lies in `S_i`.
pub fn determined_check(report: &ResolutionReport, collection: &DegreeCollection, r: usize) -> Result<DeterminedVerdict, KoszulError> {
    if report.max_n < r {
        return Err(KoszulError::ResolutionTooShort { known: report.max_n, needed: r });
    }
    let first_violation = (0..=r).find_map(|i| {
        report.degrees[i].iter().map(|&d| d as i64).find(|&d| !collection.contains(i, d)).map(|d| (i, d))
    });
    Ok(DeterminedVerdict {
        holds: first_violation.is_none(),
        first_violation,
        certified: report.exact_model && report.complete[..=r].iter().all(|c| *c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{commutative, example, truncated};
    use crate::oracle::{build_model, minimal_resolution};
    use crate::overlaps::{enumerate, EnumerateOptions};
    use crate::syzygy::ModulePresentation;
    use proptest::prelude::*;

    #[test]
    fn chi_values() {
        assert_eq!(chi(3, 4), 6);
        assert_eq!(chi(5, 0), 0);
        assert!((0..=6).all(|i| chi(2, i) == i));
        assert_eq!((0..6).map(|i| chi(3, i)).collect::<Vec<_>>(), [0, 1, 3, 4, 6, 7]);
    }

    #[test]
    fn tensor_examples() {
        let lin = DegreeCollection::linear();
        assert_eq!(collection_tensor(&lin, &lin, 3).unwrap(), [3].into());
        let s = DegreeCollection::Explicit(alloc::vec![alloc::vec![0], alloc::vec![2]]);
        let r = DegreeCollection::Explicit(alloc::vec![alloc::vec![0], alloc::vec![3]]);
        assert_eq!(collection_tensor(&s, &r, 1).unwrap(), [2, 3].into());
        let c = DegreeCollection::Chi(3);
        assert_eq!(collection_tensor(&c, &c, 2).unwrap(), [2, 3].into());
        assert_eq!(collection_tensor(&DegreeCollection::ChiDownSet(3), &c, 1), Err(KoszulError::Infinite(0)));
    }

    #[test]
    fn criterion_examples() {
        for s in 2..=5 {
            let (alg, g) = truncated(s);
            let t = enumerate(alg.quiver(), g.tips(), EnumerateOptions::levels(2)).unwrap();
            let c = s_koszul_criterion(&g, s, &t).unwrap();
            assert!(c.holds);
            assert_eq!((c.len_tips, c.maxo_2, c.mino_1), (s, ExtInt::Finite(s as i64 + 1), ExtInt::Finite(s as i64)));
        }
        let (alg, g) = example();
        let t = enumerate(alg.quiver(), g.tips(), EnumerateOptions::levels(2)).unwrap();
        let c = s_koszul_criterion(&g, 4, &t).unwrap();
        assert_eq!((c.len_tips, c.mino_1, c.holds), (4, ExtInt::Finite(2), false));
        let (alg, g) = commutative();
        let t = enumerate(alg.quiver(), g.tips(), EnumerateOptions::levels(2)).unwrap();
        let c = s_koszul_criterion(&g, 2, &t).unwrap();
        assert_eq!((c.len_tips, c.maxo_2, c.mino_1, c.holds), (2, ExtInt::NegInf, ExtInt::Finite(2), true));
    }

    #[test]
    fn criterion_refuses_truncated_basis() {
        let alg = crate::fixtures::loops(&["x", "y"]);
        let g = crate::fixtures::gb(&alg, &[&[(1, "xyx"), (-1, "yxy")]], 6);
        let t = enumerate(alg.quiver(), g.tips(), EnumerateOptions::levels(2)).unwrap();
        assert_eq!(s_koszul_criterion(&g, 3, &t), Err(KoszulError::TruncatedBasis(6)));
    }

    #[test]
    fn determined_examples() {
        let (alg, g) = truncated(3);
        let model = build_model(&alg, &g, 9);
        let pres = ModulePresentation::simple_tops(alg.field(), alg.quiver());
        let r = minimal_resolution(&model, &pres, 5, &[]).report();
        let v = determined_check(&r, &DegreeCollection::Chi(3), 5).unwrap();
        assert!(v.holds && v.certified);
        assert!(determined_check(&r, &DegreeCollection::ChiDownSet(3), 5).unwrap().holds);
        assert_eq!(determined_check(&r, &DegreeCollection::linear(), 5).unwrap().first_violation, Some((2, 3)));
        assert_eq!(determined_check(&r, &DegreeCollection::Chi(3), 6), Err(KoszulError::ResolutionTooShort { known: 5, needed: 6 }));

        let (alg, g) = example();
        let model = build_model(&alg, &g, 8);
        let pres = ModulePresentation::simple_tops(alg.field(), alg.quiver());
        let r = minimal_resolution(&model, &pres, 2, &[]).report();
        let v = determined_check(&r, &DegreeCollection::linear(), 2).unwrap();
        assert_eq!((v.holds, v.first_violation), (false, Some((2, 3))));

        // a free module has nothing past P_0
        let e = alg.quiver().vertex_by_name("e").unwrap();
        let r = minimal_resolution(&model, &ModulePresentation::free(e, 0), 3, &[]).report();
        assert!(determined_check(&r, &DegreeCollection::Explicit(alloc::vec![alloc::vec![0]]), 3).unwrap().holds);
    }

    fn explicit() -> impl Strategy<Value = DegreeCollection> {
        proptest::collection::vec(proptest::collection::vec(-3i64..6, 0..3), 1..4).prop_map(DegreeCollection::Explicit)
    }

    proptest! {
        #[test]
        fn chi_step(s in 2usize..8, i in 2usize..40) {
            prop_assert_eq!(chi(s, i) - chi(s, i - 2), s);
        }

        #[test]
        fn tensor_commutative_and_associative(a in explicit(), b in explicit(), c in explicit(), i in 0usize..5) {
            prop_assert_eq!(collection_tensor(&a, &b, i).unwrap(), collection_tensor(&b, &a, i).unwrap());
            // (A⊗B)⊗C against A⊗(B⊗C), with the inner products tabulated
            let ab = DegreeCollection::Explicit((0..=i).map(|j| collection_tensor(&a, &b, j).unwrap().into_iter().collect()).collect());
            let bc = DegreeCollection::Explicit((0..=i).map(|j| collection_tensor(&b, &c, j).unwrap().into_iter().collect()).collect());
            prop_assert_eq!(collection_tensor(&ab, &c, i).unwrap(), collection_tensor(&a, &bc, i).unwrap());
        }
    }
}
