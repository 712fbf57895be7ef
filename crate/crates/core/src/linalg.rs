//! Exact sparse linear algebra: incremental row echelon forms and kernels.
//!
//! Vectors are sparse, sorted by coordinate, without stored zeros. Every stored
//! row is normalized so its first entry (the pivot) is 1 and no other row has
//! a nonzero entry in that column.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

/// `a + c·b`.
pub fn axpy<F: Field>(field: &F, a: &SparseVec<F::Elem>, c: &F::Elem, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = field.mul(c, &b[j].1);
            if !field.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(field: &F, a: &SparseVec<F::Elem>, c: &F::Elem) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, field.mul(x, c))).collect()
}

/// Builds a sparse vector from unsorted entries, summing repeats.
pub fn collect<F: Field>(field: &F, entries: impl IntoIterator<Item = (usize, F::Elem)>) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (i, x) in entries {
        let slot = acc.entry(i).or_insert_with(|| field.zero());
        *slot = field.add(slot, &x);
    }
    acc.into_iter().filter(|(_, x)| !field.is_zero(x)).collect()
}

#[derive(Clone, Debug)]
struct Row<E> {
    vec: SparseVec<E>,
    tag: SparseVec<E>,
}

/// A reduced row echelon form built one vector at a time. Each row optionally
/// records which combination of inserted vectors produced it.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    rows: Vec<Row<F::Elem>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Self { field, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F::Elem>> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduces `v` against the stored rows, tracking the same operations on `tag`.
    pub fn reduce_tagged(&self, v: &SparseVec<F::Elem>, tag: &SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut acc: BTreeMap<usize, F::Elem> = v.iter().cloned().collect();
        let mut tag = tag.clone();
        let mut out = Vec::new();
        while let Some((c, a)) = acc.pop_first() {
            let Some(&r) = self.pivot_row.get(&c) else {
                out.push((c, a));
                continue;
            };
            let row = &self.rows[r];
            let minus = f.neg(&a);
            for (j, b) in &row.vec[1..] {
                let slot = acc.entry(*j).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(&minus, b));
                if f.is_zero(slot) {
                    acc.remove(j);
                }
            }
            if !row.tag.is_empty() {
                tag = axpy(f, &tag, &minus, &row.tag);
            }
        }
        (out, tag)
    }

    pub fn reduce(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.reduce_tagged(v, &Vec::new()).0
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns the new pivot column, or `None` if `v` was dependent.
    pub fn insert(&mut self, v: &SparseVec<F::Elem>) -> Option<usize> {
        self.insert_tagged(v, &Vec::new()).err()
    }

    /// Inserts `v` carrying `tag`. Returns `Ok(reduced tag)` when `v` reduces to
    /// zero (a linear relation) and `Err(pivot)` when a new row was added.
    pub fn insert_tagged(&mut self, v: &SparseVec<F::Elem>, tag: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>, usize> {
        let (r, t) = self.reduce_tagged(v, tag);
        if r.is_empty() {
            return Ok(t);
        }
        let f = &self.field;
        let inv = f.inv(&r[0].1).expect("pivot is nonzero");
        let r = scale(f, &r, &inv);
        let t = scale(f, &t, &inv);
        let pivot = r[0].0;
        // keep the form fully reduced: clear the new pivot column elsewhere
        for row in &mut self.rows {
            if let Some((_, c)) = row.vec.iter().find(|(j, _)| *j == pivot) {
                let minus = f.neg(c);
                row.vec = axpy(f, &row.vec, &minus, &r);
                if !t.is_empty() || !row.tag.is_empty() {
                    row.tag = axpy(f, &row.tag, &minus, &t);
                }
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(Row { vec: r, tag: t });
        Err(pivot)
    }
}

/// A basis of `{c : Σ c_i·vectors[i] = 0}`.
pub fn kernel<F: Field>(field: &F, vectors: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut ech = Echelon::new(field.clone());
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if let Ok(rel) = ech.insert_tagged(v, &alloc::vec![(i, field.one())]) {
            out.push(rel);
        }
    }
    out
}

/// Rank of a list of vectors.
pub fn rank<F: Field>(field: &F, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field.clone());
    vectors.iter().filter(|v| ech.insert(v).is_some()).count()
}

/// Evaluates `Σ c_i·vectors[i]`.
pub fn combine<F: Field>(field: &F, coeffs: &SparseVec<F::Elem>, vectors: &[SparseVec<F::Elem>]) -> SparseVec<F::Elem> {
    coeffs.iter().fold(Vec::new(), |acc, (i, c)| axpy(field, &acc, c, &vectors[*i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec<u64> {
        let f = PrimeField::new(101).unwrap();
        collect(&f, entries.iter().map(|(i, x)| (*i, f.from_i64(*x))))
    }

    #[test]
    fn rank_and_kernel_small() {
        let f = PrimeField::new(101).unwrap();
        let vs = [v(&[(0, 1), (1, 2)]), v(&[(1, 1)]), v(&[(0, 2), (1, 5)])];
        assert_eq!(rank(&f, &vs), 2);
        let k = kernel(&f, &vs);
        assert_eq!(k.len(), 1);
        assert!(combine(&f, &k[0], &vs).is_empty());
    }

    #[test]
    fn rational_kernel() {
        let q = Rationals;
        let h = |n: i64, d: i64| q.from_ratio(&n.into(), &d.into()).unwrap();
        let vs = [alloc::vec![(0, h(1, 2)), (2, h(1, 3))], alloc::vec![(0, h(3, 1)), (2, h(2, 1))]];
        let k = kernel(&q, &vs);
        assert_eq!(k.len(), 1);
        assert!(combine(&q, &k[0], &vs).is_empty());
    }

    #[test]
    fn reduced_form_is_canonical() {
        let f = PrimeField::new(7).unwrap();
        let mut a = Echelon::new(f);
        let mut b = Echelon::new(f);
        a.insert(&v(&[(0, 1), (1, 1)]));
        a.insert(&v(&[(1, 1), (2, 3)]));
        b.insert(&v(&[(1, 1), (2, 3)]));
        b.insert(&v(&[(0, 1), (2, 4)]));
        let target = v(&[(0, 3), (1, 1), (2, 2)]);
        assert_eq!(a.reduce(&target), b.reduce(&target));
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0i64..5, 6), 1..8)) {
            let f = PrimeField::new(5).unwrap();
            let vs: Vec<_> = rows.iter().map(|r| collect(&f, r.iter().enumerate().map(|(i, x)| (i, f.from_i64(*x))))).collect();
            let k = kernel(&f, &vs);
            prop_assert_eq!(k.len() + rank(&f, &vs), vs.len());
            for c in &k {
                prop_assert!(combine(&f, c, &vs).is_empty());
            }
            prop_assert_eq!(rank(&f, &k), k.len());
        }
    }
}
