//! Citation analytics for journals and other venues.
//!
//! Computes the h-index, g-index, the window-free ("generalized") impact
//! factor and the windowed impact factor from citation data, and checks the
//! exact decompositions that tie total citations to each index:
//!
//! ```text
//! Σc = h² + Σ_{i≤h}(c_i − h) + Σ_{i>h} c_i
//! Σc = g² + slack + Σ_{i>g} c_i            (slack ≥ 0)
//! ```
//!
//! The [`analysis`] module works on aggregate journal rows when per-paper
//! vectors are not available, and [`cli`] wires everything into the
//! `citemetrics` binary.

pub mod analysis;
pub mod cli;
pub mod decimal;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod vector;
pub mod windowed;

pub use error::{Error, Issue, Result};
pub use metrics::{
    compute_g, compute_h, decompose_g, decompose_h, generalized_if, verify_relation, GConvention,
    GDecomposition, HDecomposition, JournalMetrics, RelationReport,
};
pub use vector::{canonicalize, CitationVector};

/// Exact non-negative ratio used for every impact factor.
pub type Ratio = num_rational::Ratio<u64>;
