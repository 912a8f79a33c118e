//! Approximation algorithms that work directly on hierarchical (succinct)
//! graph, formula and circuit specifications.
//!
//! Every algorithm processes the cells of a specification bottom-up and keeps
//! only a small summary per cell, so running time is polynomial in the size
//! of the specification even when the expanded object is exponentially large.
//! Results are returned as [`HSolution`]s, which mirror the call structure of
//! the input and support membership queries and streaming output.

pub mod error;
pub mod expand;
pub mod hardgen;
pub mod hiersat;
pub mod hsolution;
pub mod indset;
pub mod maxcut;
pub mod oracle;
pub mod simplify;
pub mod spec;
pub mod vcover;

pub use error::{Error, Result};
pub use expand::FlatGraph;
pub use hsolution::HSolution;
pub use spec::{CellDef, HierSpec, Nonterminal, VertexPath};
