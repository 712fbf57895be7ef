//! Overlap combinatorics of a reduced set of tips: vanishing predicates, the
//! overlap and quasioverlap levels with their predecessor links, length
//! extrema, and the bounds relating them.
//!
//! Level 0 of the overlaps is the arrow set and level 1 is the tip set itself.
//! A quasioverlap is a pair `(w, v)` where `v` is a nonempty phantom prefix that
//! completes the first tip; level 0 pairs a vertex with `v`. Only the phantom
//! prefixes that can start a tip are stored at level 0, though the level is
//! nonempty (with word length 0) whenever the quiver has an arrow.

mod extint;
mod partition;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use extint::{ExtInt, Interval};
pub use partition::{check_partition, partition, partitioned_words, Partition};

use crate::quiver::{has_factor_in, is_reduced, Path, Quiver};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OverlapError {
    #[error("relation set is not reduced")]
    NotReduced,
    #[error("relation of length {0}; relations must have length at least 2")]
    TooShort(usize),
    #[error("first path is not a left divisor of the second")]
    NotLeftDivisor,
}

/// `p = q·u` and no element of `S` divides `u`.
pub fn s_vanishes(q: &Path, p: &Path, s: &[Path]) -> Result<bool, OverlapError> {
    let u = remainder(q, p)?;
    Ok(!has_factor_in(u, s))
}

/// `q` does not vanish `p`, but vanishes every proper left part `q·u₁` of it.
/// Equivalently `u` has a factor in `S` and `u` without its last arrow has none.
pub fn almost_s_vanishes(q: &Path, p: &Path, s: &[Path]) -> Result<bool, OverlapError> {
    let u = remainder(q, p)?;
    Ok(almost(u, s))
}

fn remainder<'a>(q: &Path, p: &'a Path) -> Result<&'a [crate::quiver::Arrow], OverlapError> {
    if !q.divides_left(p) {
        return Err(OverlapError::NotLeftDivisor);
    }
    Ok(&p.arrows()[q.len()..])
}

fn almost(u: &[crate::quiver::Arrow], s: &[Path]) -> bool {
    !u.is_empty() && has_factor_in(u, s) && !has_factor_in(&u[..u.len() - 1], s)
}

/// An overlap with the index of its predecessor one level down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapEntry {
    pub word: Path,
    pub parent: Option<usize>,
}

/// A quasioverlap `(word, phantom)` with the index of its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiEntry {
    pub word: Path,
    pub phantom: Path,
    pub parent: Option<usize>,
}

/// Length extrema of one level, with the empty-level conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Extrema {
    pub mino: ExtInt,
    pub maxo: ExtInt,
    pub minqo: ExtInt,
    pub maxqo: ExtInt,
}

#[derive(Clone, Debug)]
pub struct OverlapTable {
    tips: Vec<Path>,
    overlaps: Vec<Vec<OverlapEntry>>,
    quasi: Option<Vec<Vec<QuasiEntry>>>,
    has_arrows: bool,
    word_cap: Option<usize>,
    truncated: bool,
}

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_level: usize,
    pub quasi: bool,
    /// Words longer than this are discarded and the table marked truncated.
    pub word_cap: Option<usize>,
}

impl EnumerateOptions {
    pub fn levels(max_level: usize) -> Self {
        Self { max_level, quasi: true, word_cap: None }
    }
}

/// Enumerates overlap (and optionally quasioverlap) levels `0..=max_level` of a
/// reduced tip set.
pub fn enumerate(quiver: &Quiver, tips: &[Path], opts: EnumerateOptions) -> Result<OverlapTable, OverlapError> {
    match is_reduced(tips) {
        Err(crate::quiver::QuiverError::TooShort(l)) => return Err(OverlapError::TooShort(l)),
        Err(_) | Ok(false) => return Err(OverlapError::NotReduced),
        Ok(true) => {}
    }
    let mut tips_sorted: Vec<Path> = tips.to_vec();
    tips_sorted.sort();
    tips_sorted.dedup();
    let tips = tips_sorted;
    let mut truncated = false;
    let fits = |w: &Path, truncated: &mut bool| match opts.word_cap {
        Some(cap) if w.len() > cap => {
            *truncated = true;
            false
        }
        _ => true,
    };

    let mut overlaps: Vec<Vec<OverlapEntry>> = Vec::new();
    overlaps.push(quiver.arrows().map(|a| OverlapEntry { word: Path::arrow(a), parent: None }).collect());
    if opts.max_level >= 1 {
        let level0 = &overlaps[0];
        let level1 = tips
            .iter()
            .filter(|s| fits(s, &mut truncated))
            .map(|s| OverlapEntry {
                word: s.clone(),
                parent: level0.iter().position(|e| e.word.divides_left(s)),
            })
            .collect();
        overlaps.push(level1);
    }
    for n in 2..=opts.max_level {
        let words: Vec<Path> = overlaps[n - 2].iter().map(|e| e.word.clone()).collect();
        let next = extend_level(&overlaps[n - 1], |e| &e.word, &tips, &words, &mut truncated, opts.word_cap);
        overlaps.push(next.into_iter().map(|(word, parent)| OverlapEntry { word, parent: Some(parent) }).collect());
    }

    let quasi = opts.quasi.then(|| {
        let mut levels: Vec<Vec<QuasiEntry>> = Vec::new();
        let mut seeds: Vec<QuasiEntry> = Vec::new();
        for s in &tips {
            for k in 1..s.len() {
                let v = s.prefix(k);
                if !seeds.iter().any(|e| e.phantom == v) {
                    seeds.push(QuasiEntry { word: Path::vertex(v.target()), phantom: v, parent: None });
                }
            }
        }
        seeds.sort_by(|a, b| a.phantom.cmp(&b.phantom));
        levels.push(seeds);
        if opts.max_level >= 1 {
            let mut level1 = Vec::new();
            for s in &tips {
                for k in 1..s.len() {
                    let (v, w) = (s.prefix(k), s.suffix(s.len() - k));
                    if !fits(&w, &mut truncated) {
                        continue;
                    }
                    let parent = levels[0].iter().position(|e| e.phantom == v);
                    level1.push(QuasiEntry { word: w, phantom: v, parent });
                }
            }
            levels.push(level1);
        }
        for n in 2..=opts.max_level {
            // candidates are grouped by phantom prefix, since every condition
            // only compares entries sharing it
            let mut by_phantom: BTreeMap<Path, (Vec<usize>, Vec<Path>)> = BTreeMap::new();
            for (i, e) in levels[n - 1].iter().enumerate() {
                by_phantom.entry(e.phantom.clone()).or_default().0.push(i);
            }
            for e in &levels[n - 2] {
                if let Some(slot) = by_phantom.get_mut(&e.phantom) {
                    slot.1.push(e.word.clone());
                }
            }
            let mut next = Vec::new();
            for (phantom, (idx, older)) in by_phantom {
                let prev: Vec<OverlapEntry> =
                    idx.iter().map(|&i| OverlapEntry { word: levels[n - 1][i].word.clone(), parent: None }).collect();
                let found = extend_level(&prev, |e| &e.word, &tips, &older, &mut truncated, opts.word_cap);
                next.extend(found.into_iter().map(|(word, p)| QuasiEntry { word, phantom: phantom.clone(), parent: Some(idx[p]) }));
            }
            levels.push(next);
        }
        levels
    });

    Ok(OverlapTable { tips, overlaps, quasi, has_arrows: quiver.arrow_count() > 0, word_cap: opts.word_cap, truncated })
}

/// One recursion step: extends each previous-level word `w₁` by a tail `t` so
/// that some tip ends the new word, keeping `w = w₁·t` when `w₁` vanishes `w`
/// and some word two levels down almost vanishes it. Returns `(w, index of w₁)`.
fn extend_level<'a, E>(
    prev: &'a [E],
    word: impl Fn(&'a E) -> &'a Path,
    tips: &[Path],
    older: &[Path],
    truncated: &mut bool,
    cap: Option<usize>,
) -> Vec<(Path, usize)> {
    let mut seen: BTreeMap<Path, usize> = BTreeMap::new();
    for (i, e) in prev.iter().enumerate() {
        let w1 = word(e);
        for s in tips {
            for k in 1..=s.len().min(w1.len()) {
                if w1.arrows()[w1.len() - k..] != s.arrows()[..k] {
                    continue;
                }
                let tail = s.suffix(s.len() - k);
                if has_factor_in(tail.arrows(), tips) {
                    continue;
                }
                let w = w1.compose(&tail).expect("overlap is composable");
                if seen.contains_key(&w) {
                    continue;
                }
                let ok = older.iter().any(|w2| w2.divides_left(&w) && almost(&w.arrows()[w2.len()..], tips));
                if !ok {
                    continue;
                }
                if matches!(cap, Some(c) if w.len() > c) {
                    *truncated = true;
                    continue;
                }
                seen.insert(w, i);
            }
        }
    }
    let mut out: Vec<(Path, usize)> = seen.into_iter().collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.len().cmp(&b.0.len())).then_with(|| a.0.cmp(&b.0)));
    out
}

impl OverlapTable {
    pub fn tips(&self) -> &[Path] {
        &self.tips
    }

    /// Deepest enumerated level.
    pub fn depth(&self) -> usize {
        self.overlaps.len() - 1
    }

    pub fn has_quasi(&self) -> bool {
        self.quasi.is_some()
    }

    /// Some word exceeded the length cap; levels are exact only up to that cap.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn word_cap(&self) -> Option<usize> {
        self.word_cap
    }

    /// Longest tip, 0 when there are none.
    pub fn len_s(&self) -> usize {
        self.tips.iter().map(Path::len).max().unwrap_or(0)
    }

    pub fn overlaps(&self, n: usize) -> &[OverlapEntry] {
        &self.overlaps[n]
    }

    pub fn quasi(&self, n: usize) -> &[QuasiEntry] {
        self.quasi.as_ref().map_or(&[], |q| &q[n])
    }

    pub fn contains_overlap(&self, n: usize, w: &Path) -> bool {
        self.overlaps.get(n).is_some_and(|l| l.iter().any(|e| &e.word == w))
    }

    pub fn contains_quasi(&self, n: usize, w: &Path, v: &Path) -> bool {
        self.quasi.as_ref().and_then(|q| q.get(n)).is_some_and(|l| l.iter().any(|e| &e.word == w && &e.phantom == v))
    }

    /// `ρ_i` of the `idx`-th entry at level `n`, for `i <= n`.
    pub fn rho(&self, n: usize, idx: usize, i: usize) -> &Path {
        let (mut lvl, mut k) = (n, idx);
        while lvl > i {
            k = self.overlaps[lvl][k].parent.expect("linked entry");
            lvl -= 1;
        }
        &self.overlaps[lvl][k].word
    }

    pub fn rho_quasi(&self, n: usize, idx: usize, i: usize) -> &Path {
        let q = self.quasi.as_ref().expect("quasioverlaps enumerated");
        let (mut lvl, mut k) = (n, idx);
        while lvl > i {
            k = q[lvl][k].parent.expect("linked entry");
            lvl -= 1;
        }
        &q[lvl][k].word
    }

    pub fn extrema(&self, n: usize) -> Extrema {
        let (mino, maxo) = ExtInt::range(self.overlaps[n].iter().map(|e| e.word.len()));
        let (minqo, maxqo) = if n == 0 {
            if self.has_arrows {
                (ExtInt::Finite(0), ExtInt::Finite(0))
            } else {
                (ExtInt::PosInf, ExtInt::NegInf)
            }
        } else {
            ExtInt::range(self.quasi(n).iter().map(|e| e.word.len()))
        };
        Extrema { mino, maxo, minqo, maxqo }
    }

    /// Number of level-`n` entries having a level-`n-1` left divisor (sharing
    /// the phantom prefix for quasioverlaps), for each entry.
    pub fn predecessor_counts(&self, n: usize, quasi: bool) -> Vec<usize> {
        if quasi {
            let lvl = self.quasi(n);
            let below = self.quasi(n - 1);
            lvl.iter()
                .map(|e| below.iter().filter(|b| b.phantom == e.phantom && b.word.divides_left(&e.word)).count())
                .collect()
        } else {
            let below = &self.overlaps[n - 1];
            self.overlaps[n].iter().map(|e| below.iter().filter(|b| b.word.divides_left(&e.word)).count()).collect()
        }
    }
}

/// Interval `[mino_n - len(S) + 1, maxo_n - 1]` containing every quasioverlap
/// length at level `n`.
pub fn bound_qo(ext: &Extrema, len_s: usize) -> Interval {
    Interval::new(ext.mino - len_s as i64 + 1, ext.maxo - 1)
}

/// Bounds at level `n + m` from levels `n` and `m`: `(mino lower, maxo upper)`.
pub fn bound_compose(at_n: &Extrema, at_m: &Extrema, len_s: usize) -> (ExtInt, ExtInt) {
    let lower = at_n.mino + at_m.mino - len_s as i64 + 1;
    let upper = at_n.maxo + at_m.maxo - 1;
    (lower, upper)
}
