//! Finite quivers and their paths.
//!
//! A [`Path`] carries its arrows together with their endpoints, so paths can be
//! composed, split and compared without access to the owning [`Quiver`]. Names are
//! only needed to render a path, see [`Quiver::render`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub id: u32,
    pub source: Vertex,
    pub target: Vertex,
}

impl Arrow {
    pub fn index(self) -> usize {
        self.id as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("empty identifier")]
    EmptyName,
    #[error("identifier `{0}` declared twice")]
    DuplicateName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("paths are not composable: target {left} differs from source {right}")]
    NotComposable { left: u32, right: u32 },
    #[error("path of length {0} where length at least 2 is required")]
    TooShort(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ArrowInfo {
    name: String,
    arrow: Arrow,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<ArrowInfo>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<Vertex, QuiverError> {
        self.check_fresh(name)?;
        self.vertices.push(name.into());
        Ok(Vertex(self.vertices.len() as u32 - 1))
    }

    pub fn add_arrow(&mut self, name: &str, source: Vertex, target: Vertex) -> Result<Arrow, QuiverError> {
        self.check_fresh(name)?;
        for v in [source, target] {
            if v.index() >= self.vertices.len() {
                return Err(QuiverError::UnknownVertex(alloc::format!("#{}", v.0)));
            }
        }
        let arrow = Arrow { id: self.arrows.len() as u32, source, target };
        self.arrows.push(ArrowInfo { name: name.into(), arrow });
        Ok(arrow)
    }

    /// One vertex carrying a loop for each name, the setting of most small examples.
    pub fn one_vertex(vertex: &str, loops: &[&str]) -> Result<Self, QuiverError> {
        let mut q = Self::new();
        let v = q.add_vertex(vertex)?;
        for name in loops {
            q.add_arrow(name, v, v)?;
        }
        Ok(q)
    }

    fn check_fresh(&self, name: &str) -> Result<(), QuiverError> {
        if name.is_empty() {
            return Err(QuiverError::EmptyName);
        }
        if self.vertices.iter().any(|v| v == name) || self.arrows.iter().any(|a| a.name == name) {
            return Err(QuiverError::DuplicateName(name.into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertices.len() as u32).map(Vertex)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows.iter().map(|a| a.arrow)
    }

    pub fn arrow(&self, index: usize) -> Arrow {
        self.arrows[index].arrow
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertices[v.index()]
    }

    pub fn arrow_name(&self, a: Arrow) -> &str {
        &self.arrows[a.index()].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.vertices.iter().position(|v| v == name).map(|i| Vertex(i as u32))
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<Arrow> {
        self.arrows.iter().find(|a| a.name == name).map(|a| a.arrow)
    }

    /// Arrows leaving `v`, in declaration order.
    pub fn arrows_from(&self, v: Vertex) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows().filter(move |a| a.source == v)
    }

    /// Builds a path from arrow names, e.g. `["x", "y", "x"]`.
    pub fn path(&self, names: &[&str]) -> Result<Path, QuiverError> {
        let mut arrows = Vec::with_capacity(names.len());
        for n in names {
            arrows.push(self.arrow_by_name(n).ok_or_else(|| QuiverError::UnknownArrow((*n).into()))?);
        }
        Path::from_arrows(arrows)
    }

    /// Parses a word of single-letter arrow names such as `"xxy"`; convenient in tests.
    pub fn word(&self, letters: &str) -> Result<Path, QuiverError> {
        let names: Vec<String> = letters.chars().map(String::from).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.path(&refs)
    }

    /// All paths of length `len`, depth first in arrow declaration order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        for v in self.vertices() {
            let mut stack = alloc::vec![Path::vertex(v)];
            while let Some(p) = stack.pop() {
                if p.len() == len {
                    out.push(p);
                    continue;
                }
                for a in self.arrows_from(p.target()) {
                    stack.push(p.extended(a));
                }
            }
        }
        out
    }

    pub fn render(&self, p: &Path) -> String {
        self.render_with(p, "")
    }

    /// Arrow names joined by `sep`; a vertex path renders as the vertex name.
    pub fn render_with(&self, p: &Path, sep: &str) -> String {
        if p.is_vertex() {
            return self.vertex_name(p.source()).into();
        }
        let mut s = String::new();
        for (i, a) in p.arrows().iter().enumerate() {
            if i > 0 {
                s.push_str(sep);
            }
            s.push_str(self.arrow_name(*a));
        }
        s
    }
}

/// A path of the quiver: a vertex (length 0) or a composable arrow word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    source: Vertex,
    arrows: Vec<Arrow>,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e{}", self.source.0)
        } else {
            let ids: Vec<u32> = self.arrows.iter().map(|a| a.id).collect();
            write!(f, "{ids:?}")
        }
    }
}

impl Path {
    pub fn vertex(v: Vertex) -> Self {
        Self { source: v, arrows: Vec::new() }
    }

    pub fn arrow(a: Arrow) -> Self {
        Self { source: a.source, arrows: alloc::vec![a] }
    }

    /// Fails on an empty list (use [`Path::vertex`]) or a non-composable pair.
    pub fn from_arrows(arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let first = arrows.first().ok_or(QuiverError::TooShort(0))?;
        for w in arrows.windows(2) {
            if w[0].target != w[1].source {
                return Err(QuiverError::NotComposable { left: w[0].target.0, right: w[1].source.0 });
            }
        }
        Ok(Self { source: first.source, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_vertex(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.arrows.last().map_or(self.source, |a| a.target)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// The vertex sitting between arrows `i - 1` and `i`.
    pub fn vertex_at(&self, i: usize) -> Vertex {
        if i == 0 {
            self.source
        } else {
            self.arrows[i - 1].target
        }
    }

    /// The subpath between positions `start` and `end` (`0 <= start <= end <= len`).
    pub fn subpath(&self, start: usize, end: usize) -> Path {
        Path { source: self.vertex_at(start), arrows: self.arrows[start..end].to_vec() }
    }

    pub fn prefix(&self, len: usize) -> Path {
        self.subpath(0, len)
    }

    pub fn suffix(&self, len: usize) -> Path {
        self.subpath(self.len() - len, self.len())
    }

    /// `self · a`; the caller guarantees `a.source == self.target()`.
    pub fn extended(&self, a: Arrow) -> Path {
        debug_assert_eq!(a.source, self.target());
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { source: self.source, arrows }
    }

    pub fn compose(&self, other: &Path) -> Result<Path, QuiverError> {
        if self.target() != other.source {
            return Err(QuiverError::NotComposable { left: self.target().0, right: other.source.0 });
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Ok(Path { source: self.source, arrows })
    }

    /// `u · self · v` when both products are defined.
    pub fn sandwich(&self, u: &Path, v: &Path) -> Result<Path, QuiverError> {
        u.compose(self)?.compose(v)
    }

    /// Every `(u, v)` with `other = u · self · v`, ordered by the length of `u`.
    pub fn factorizations_in(&self, other: &Path) -> Vec<(Path, Path)> {
        occurrences(other, self)
            .map(|i| (other.subpath(0, i), other.subpath(i + self.len(), other.len())))
            .collect()
    }

    pub fn divides(&self, other: &Path) -> bool {
        occurrences(other, self).next().is_some()
    }

    /// `other = self · v`.
    pub fn divides_left(&self, other: &Path) -> bool {
        if self.is_vertex() {
            return self.source == other.source;
        }
        other.arrows.starts_with(&self.arrows)
    }

    /// `other = u · self`.
    pub fn divides_right(&self, other: &Path) -> bool {
        if self.is_vertex() {
            return self.source == other.target();
        }
        other.arrows.ends_with(&self.arrows)
    }
}

/// Start positions of `needle` inside `hay`. A vertex path occurs at every
/// position carrying its vertex.
fn occurrences<'a>(hay: &'a Path, needle: &'a Path) -> impl Iterator<Item = usize> + 'a {
    let n = needle.len();
    let m = hay.len();
    let last = if n > m { None } else { Some(m - n) };
    last.into_iter().flat_map(move |last| {
        (0..=last).filter(move |&i| {
            if n == 0 {
                hay.vertex_at(i) == needle.source
            } else {
                hay.arrows[i..i + n] == needle.arrows[..]
            }
        })
    })
}

/// Does any element of `set` occur as a factor of the arrow slice `word`?
pub fn has_factor_in(word: &[Arrow], set: &[Path]) -> bool {
    set.iter().any(|s| !s.is_vertex() && s.len() <= word.len() && word.windows(s.len()).any(|w| w == s.arrows()))
}

/// No element of `set` properly divides another. Elements must have length at least 2.
pub fn is_reduced(set: &[Path]) -> Result<bool, QuiverError> {
    if let Some(p) = set.iter().find(|p| p.len() < 2) {
        return Err(QuiverError::TooShort(p.len()));
    }
    for (i, p) in set.iter().enumerate() {
        for (j, q) in set.iter().enumerate() {
            if i != j && p != q && p.divides(q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Quiver {
        Quiver::one_vertex("e", &["x", "y"]).unwrap()
    }

    #[test]
    fn compose_words() {
        let q = xy();
        let x = q.word("x").unwrap();
        let y = q.word("y").unwrap();
        assert_eq!(x.compose(&y).unwrap(), q.word("xy").unwrap());
        let e = Path::vertex(q.vertex_by_name("e").unwrap());
        assert_eq!(e.compose(&x).unwrap(), x);
        assert_eq!(x.compose(&e).unwrap(), x);
        assert_eq!(x.compose(&y).unwrap().len(), 2);
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let mut q = Quiver::new();
        let u = q.add_vertex("u").unwrap();
        let v = q.add_vertex("v").unwrap();
        q.add_arrow("a", u, v).unwrap();
        let a = q.word("a").unwrap();
        assert!(matches!(a.compose(&a), Err(QuiverError::NotComposable { .. })));
        assert!(q.path(&["a", "a"]).is_err());
    }

    #[test]
    fn factorization_lists() {
        let q = xy();
        let w = |s: &str| q.word(s).unwrap();
        let e = Path::vertex(Vertex(0));
        assert_eq!(w("xy").factorizations_in(&w("xxyy")), alloc::vec![(w("x"), w("y"))]);
        assert_eq!(w("xxx").factorizations_in(&w("xxxyyy")), alloc::vec![(e.clone(), w("yyy"))]);
        assert!(w("xxx").divides_left(&w("xxxyyy")));
        assert!(!w("xxx").divides_right(&w("xxxyyy")));
        assert_eq!(
            w("x").factorizations_in(&w("xxx")),
            alloc::vec![(e.clone(), w("xx")), (w("x"), w("x")), (w("xx"), e)]
        );
        assert!(w("yx").factorizations_in(&w("xxyy")).is_empty());
    }

    #[test]
    fn vertex_factorizations() {
        let mut q = Quiver::new();
        let u = q.add_vertex("u").unwrap();
        let v = q.add_vertex("v").unwrap();
        q.add_arrow("a", u, v).unwrap();
        let a = q.word("a").unwrap();
        assert_eq!(Path::vertex(u).factorizations_in(&a).len(), 1);
        assert_eq!(Path::vertex(v).factorizations_in(&a).len(), 1);
        assert_eq!(Path::vertex(v).factorizations_in(&Path::vertex(u)).len(), 0);
    }

    #[test]
    fn reduced_sets() {
        let q = xy();
        let w = |s: &str| q.word(s).unwrap();
        assert_eq!(is_reduced(&[w("xxyyy"), w("xxx")]), Ok(true));
        assert_eq!(is_reduced(&[w("xx"), w("xxx")]), Ok(false));
        assert_eq!(is_reduced(&[]), Ok(true));
        assert_eq!(is_reduced(&[w("x")]), Err(QuiverError::TooShort(1)));
    }

    #[test]
    fn rendering() {
        let q = xy();
        assert_eq!(q.render_with(&q.word("xyx").unwrap(), "*"), "x*y*x");
        assert_eq!(q.render(&Path::vertex(Vertex(0))), "e");
    }
}
