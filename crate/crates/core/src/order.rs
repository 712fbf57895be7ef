//! Admissible orders on paths.
//!
//! The built-in order is length-lexicographic: a longer path is greater, paths of
//! equal length are compared arrow by arrow from the left, and parallel vertices
//! by vertex precedence. Consumers only rely on the [`PathOrder`] contract.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::quiver::{Path, Quiver, QuiverError};

pub trait PathOrder {
    fn compare(&self, p: &Path, q: &Path) -> Ordering;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    LengthLex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    kind: OrderKind,
    /// Indexed by arrow id; larger rank is greater.
    arrow_rank: Vec<u32>,
    vertex_rank: Vec<u32>,
}

impl OrderSpec {
    /// Precedence follows declaration order, earliest declared is greatest.
    pub fn declaration_order(quiver: &Quiver) -> Self {
        let na = quiver.arrow_count() as u32;
        let nv = quiver.vertex_count() as u32;
        Self {
            kind: OrderKind::LengthLex,
            arrow_rank: (0..na).map(|i| na - i).collect(),
            vertex_rank: (0..nv).map(|i| nv - i).collect(),
        }
    }

    /// Explicit precedence lists, greatest first. Each list must name every arrow
    /// (resp. vertex) exactly once; an empty vertex list means declaration order.
    pub fn length_lex(quiver: &Quiver, arrows: &[&str], vertices: &[&str]) -> Result<Self, QuiverError> {
        let mut spec = Self::declaration_order(quiver);
        spec.arrow_rank = ranks(arrows, quiver.arrow_count(), |n| quiver.arrow_by_name(n).map(|a| a.index()))
            .map_err(|n| QuiverError::UnknownArrow(n.into()))?;
        if !vertices.is_empty() {
            spec.vertex_rank = ranks(vertices, quiver.vertex_count(), |n| quiver.vertex_by_name(n).map(|v| v.index()))
                .map_err(|n| QuiverError::UnknownVertex(n.into()))?;
        }
        Ok(spec)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Arrow ids, greatest first.
    pub fn arrow_precedence(&self) -> Vec<usize> {
        precedence(&self.arrow_rank)
    }

    pub fn vertex_precedence(&self) -> Vec<usize> {
        precedence(&self.vertex_rank)
    }

    /// Compares `f_i·p` with `f_j·q`: by path first, then the larger index wins.
    pub fn compare_module(&self, (i, p): (usize, &Path), (j, q): (usize, &Path)) -> Ordering {
        self.compare(p, q).then(i.cmp(&j))
    }
}

fn ranks<'a>(names: &[&'a str], count: usize, lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<u32>, &'a str> {
    let mut rank = alloc::vec![0u32; count];
    let mut seen = alloc::vec![false; count];
    for (pos, name) in names.iter().enumerate() {
        let idx = lookup(name).ok_or(*name)?;
        if seen[idx] {
            return Err(name);
        }
        seen[idx] = true;
        rank[idx] = (names.len() - pos) as u32;
    }
    if seen.iter().any(|s| !s) {
        // incomplete precedence list
        return Err("");
    }
    Ok(rank)
}

fn precedence(rank: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rank.len()).collect();
    idx.sort_by(|a, b| rank[*b].cmp(&rank[*a]));
    idx
}

impl PathOrder for OrderSpec {
    fn compare(&self, p: &Path, q: &Path) -> Ordering {
        match self.kind {
            OrderKind::LengthLex => p.len().cmp(&q.len()).then_with(|| {
                if p.is_vertex() {
                    return self.vertex_rank[p.source().index()].cmp(&self.vertex_rank[q.source().index()]);
                }
                for (a, b) in p.arrows().iter().zip(q.arrows()) {
                    let c = self.arrow_rank[a.index()].cmp(&self.arrow_rank[b.index()]);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// A violated admissibility axiom found by [`check_admissible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityWitness {
    /// `q | p` but `p < q`.
    Divisibility { p: Path, q: Path },
    /// `p > q` but `u·p·v <= u·q·v`.
    Translation { p: Path, q: Path, u: Path, v: Path },
    /// The comparator is not antisymmetric on `(p, q)`.
    NotTotal { p: Path, q: Path },
}

/// Exhaustively checks both admissibility axioms over all paths of length at most
/// `bound`. Translation invariance is tested against single arrows and vertices on
/// each side, which implies it for all composable `u`, `v` by induction.
#[allow(clippy::result_large_err)]
pub fn check_admissible(order: &impl PathOrder, quiver: &Quiver, bound: usize) -> Result<(), AdmissibilityWitness> {
    let paths: Vec<Path> = (0..=bound).flat_map(|l| quiver.paths_of_length(l)).collect();
    let mut units: Vec<Path> = quiver.vertices().map(Path::vertex).collect();
    units.extend(quiver.arrows().map(Path::arrow));

    for p in &paths {
        for q in &paths {
            let c = order.compare(p, q);
            if c != order.compare(q, p).reverse() || (c == Ordering::Equal && p != q) {
                return Err(AdmissibilityWitness::NotTotal { p: p.clone(), q: q.clone() });
            }
            if q.divides(p) && c == Ordering::Less {
                return Err(AdmissibilityWitness::Divisibility { p: p.clone(), q: q.clone() });
            }
            if c != Ordering::Greater {
                continue;
            }
            for u in &units {
                for v in &units {
                    if let (Ok(up), Ok(uq)) = (p.sandwich(u, v), q.sandwich(u, v)) {
                        if order.compare(&up, &uq) != Ordering::Greater {
                            return Err(AdmissibilityWitness::Translation {
                                p: p.clone(),
                                q: q.clone(),
                                u: u.clone(),
                                v: v.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
