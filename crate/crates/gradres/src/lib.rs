//! File formats, structured reports, seeded corpora and the command runner on
//! top of `gradres-core`.

pub use gradres_core as core;

pub mod problem;
pub mod report;
pub mod run;
pub mod corpus;
