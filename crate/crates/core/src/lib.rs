//! Gröbner bases over path algebras, overlap and quasioverlap combinatorics, and
//! generating-degree predictions for minimal graded projective resolutions.
//!
//! Everything in this crate is pure computation over `alloc` collections. File
//! formats, reporting and the command line live in the `gradres` crate.
//!
//! Paths are written left to right: `p·q` is defined when `target(p) == source(q)`.
//! Modules are right modules, so a free module `⊕ f_i kQ` has basis elements
//! `f_i·p` with `source(p)` equal to the vertex of `f_i`.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod field;
#[cfg(test)]
mod fixtures;
pub mod koszul;
pub mod linalg;
pub mod oracle;
pub mod order;
pub mod overlaps;
pub mod quiver;
pub mod syzygy;

pub use algebra::{
    AlgebraElement, AlgebraError, Combination, Completion, GroebnerBasis, ModuleElement,
    ModuleTerm, PathAlgebra,
};
pub use field::{Field, PrimeField, Rationals};
pub use order::{OrderSpec, PathOrder};
pub use overlaps::{ExtInt, OverlapTable};
pub use quiver::{Arrow, Path, Quiver, QuiverError, Vertex};
