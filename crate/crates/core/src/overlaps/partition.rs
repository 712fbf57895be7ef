//! Membership in the overlap levels through explicit decompositions
//! `w = v_0 u_1 v_1 ... u_n v_n`, independent of the level recursion.

use alloc::vec::Vec;

use crate::quiver::{Path, Quiver};

/// Pieces `u_1..u_n` and `v_0..v_n` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub u: Vec<Path>,
    pub v: Vec<Path>,
}

/// Searches a decomposition of `w` into `n` chained tips. With `phantom`, the
/// first tip starts inside the phantom prefix `v_0` (quasioverlap case);
/// without, `v_0` is the source vertex of `w` (overlap case).
pub fn partition(w: &Path, n: usize, tips: &[Path], phantom: Option<&Path>) -> Option<Partition> {
    if n == 0 {
        return None;
    }
    let z = match phantom {
        Some(v) if v.is_vertex() => return None,
        Some(v) => v.compose(w).ok()?,
        None => w.clone(),
    };
    let b0 = phantom.map_or(0, Path::len);
    let occ: Vec<(usize, usize)> = occurrences(&z, tips);
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let quasi = phantom.is_some();
    if search(&z, n, b0, &occ, &mut chosen, quasi) {
        Some(pieces(&z, b0, &chosen))
    } else {
        None
    }
}

/// All `[start, end)` positions of tips in `z`, sorted.
fn occurrences(z: &Path, tips: &[Path]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for s in tips {
        if s.is_vertex() || s.len() > z.len() {
            continue;
        }
        for (i, win) in z.arrows().windows(s.len()).enumerate() {
            if win == s.arrows() {
                out.push((i, i + s.len()));
            }
        }
    }
    out.sort_unstable();
    out
}

fn search(z: &Path, n: usize, b0: usize, occ: &[(usize, usize)], chosen: &mut Vec<(usize, usize)>, quasi: bool) -> bool {
    let i = chosen.len();
    let end = z.len();
    if i == n {
        return chosen.last().is_some_and(|&(_, b)| b == end) && valid(b0, occ, chosen, end, quasi);
    }
    for &(a, b) in occ {
        let ok = if i == 0 {
            a == 0 && b >= b0
        } else {
            let (_, b_prev) = chosen[i - 1];
            let b_prev2 = if i >= 2 { chosen[i - 2].1 } else { b0 };
            // u_i has nonnegative length and v_i is nonempty
            a >= b_prev2 && a < b_prev
        };
        if !ok {
            continue;
        }
        chosen.push((a, b));
        if search(z, n, b0, occ, chosen, quasi) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn valid(b0: usize, occ: &[(usize, usize)], chosen: &[(usize, usize)], end: usize, quasi: bool) -> bool {
    let n = chosen.len();
    let b = |i: usize| if i == 0 { b0 } else { chosen[i - 1].1 };
    let a = |i: usize| if i == n + 1 { end } else { chosen[i - 1].0 };
    // u_n must have nonnegative length
    if b(n - 1) > end {
        return false;
    }
    for i in 1..n {
        let blocked = occ.iter().any(|&(x, y)| b(i - 1) <= x && x < a(i + 1) && b(i) < y && y <= b(i + 1));
        if blocked {
            return false;
        }
    }
    let needs_u1 = if quasi { n == 1 } else { n <= 2 };
    let u1_len = a(2).saturating_sub(b(0));
    !(needs_u1 && u1_len == 0)
}

/// Checks a proposed decomposition against the three conditions. Returns the
/// number of the first violated condition, or 0 when the pieces do not
/// multiply out to `v_0·w`.
pub fn check_partition(w: &Path, tips: &[Path], phantom: Option<&Path>, p: &Partition) -> Result<(), usize> {
    let n = p.u.len();
    if n == 0 || p.v.len() != n + 1 {
        return Err(0);
    }
    let z = match phantom {
        Some(v) => v.compose(w).map_err(|_| 0usize)?,
        None => w.clone(),
    };
    let b0 = phantom.map_or(0, Path::len);
    if p.v[0].len() != b0 || !p.v[n].is_vertex() {
        return Err(0);
    }
    let mut word: Vec<crate::quiver::Arrow> = p.v[0].arrows().to_vec();
    for i in 0..n {
        word.extend_from_slice(p.u[i].arrows());
        word.extend_from_slice(p.v[i + 1].arrows());
    }
    if word != z.arrows() {
        return Err(0);
    }
    // positions a_i (start of the i-th tip) and b_i (its end)
    let mut chosen = Vec::with_capacity(n);
    let mut pos = 0;
    for i in 1..=n {
        let start = pos;
        let s_len = p.v[i - 1].len() + p.u[i - 1].len() + p.v[i].len();
        pos += p.v[i - 1].len() + p.u[i - 1].len();
        let s = z.subpath(start, start + s_len);
        if !tips.contains(&s) {
            return Err(1);
        }
        chosen.push((start, start + s_len));
    }
    if (1..n).any(|i| p.v[i].is_vertex()) {
        return Err(1);
    }
    let occ = occurrences(&z, tips);
    let n = chosen.len();
    let b = |i: usize| if i == 0 { b0 } else { chosen[i - 1].1 };
    let a = |i: usize| if i == n + 1 { z.len() } else { chosen[i - 1].0 };
    for i in 1..n {
        if occ.iter().any(|&(x, y)| b(i - 1) <= x && x < a(i + 1) && b(i) < y && y <= b(i + 1)) {
            return Err(2);
        }
    }
    let needs_u1 = if phantom.is_some() { n == 1 } else { n <= 2 };
    if needs_u1 && p.u[0].is_vertex() {
        return Err(3);
    }
    Ok(())
}

fn pieces(z: &Path, b0: usize, chosen: &[(usize, usize)]) -> Partition {
    let n = chosen.len();
    let end = z.len();
    let b = |i: usize| if i == 0 { b0 } else { chosen[i - 1].1 };
    let a = |i: usize| if i == n + 1 { end } else { chosen[i - 1].0 };
    let mut v = Vec::with_capacity(n + 1);
    v.push(if b0 == 0 { Path::vertex(z.source()) } else { z.prefix(b0) });
    let mut u = Vec::with_capacity(n);
    for i in 1..=n {
        u.push(z.subpath(b(i - 1), a(i + 1)));
        v.push(if i == n { Path::vertex(z.target()) } else { z.subpath(a(i + 1), b(i)) });
    }
    Partition { u, v }
}

/// Every word of length `1..=max_len` admitting a decomposition at level `n`,
/// paired with its phantom prefix in the quasioverlap case.
pub fn partitioned_words(quiver: &Quiver, tips: &[Path], n: usize, max_len: usize, quasi: bool) -> Vec<(Path, Option<Path>)> {
    let words: Vec<Path> = (1..=max_len).flat_map(|l| quiver.paths_of_length(l)).collect();
    let mut out = Vec::new();
    if !quasi {
        for w in words {
            if partition(&w, n, tips, None).is_some() {
                out.push((w, None));
            }
        }
        return out;
    }
    let mut phantoms: Vec<Path> = tips.iter().flat_map(|s| (1..s.len()).map(move |k| s.prefix(k))).collect();
    phantoms.sort();
    phantoms.dedup();
    for v in &phantoms {
        for w in words.iter().filter(|w| w.source() == v.target()) {
            if partition(w, n, tips, Some(v)).is_some() {
                out.push((w.clone(), Some(v.clone())));
            }
        }
    }
    out
}
