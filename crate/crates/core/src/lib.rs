//! Exact polyhedral hierarchies for the completely positive semidefinite cone.
//!
//! The crate materializes the inner cones `C_r^n` (conic hulls of Gram matrices
//! of rational PSD tuples) and their duals `D_r^n`, decides membership with
//! exact certificates, and assembles the linear programs bounding quantum
//! coloring-game chromatic numbers.
//!
//! Modules, bottom-up:
//! - [`exact`]: rationals, symmetric matrices, exact PSD test.
//! - [`gridgen`]: simplex grids and rational PSD tuple enumeration.
//! - [`lp`]: exact two-phase simplex with verified certificates.
//! - [`cones`]: membership and separation for `C_r`, `D_r`, `O_r`, `O_r*`.
//! - [`graph`]: DIMACS graphs, chromatic number oracle, coloring matrices.
//! - [`game`]: the `λ_k^r` and `Λ_k^r` feasibility programs.
//! - [`cert`]: JSON certificates and their independent verification.

pub mod cert;
pub mod cones;
pub mod error;
pub mod exact;
pub mod game;
pub mod graph;
pub mod gridgen;
pub mod lp;

pub use error::{CpsdError, Result};
pub use exact::{
    is_psd_exact, psd_check, trace, trace_inner, BlockIndex, DenominatorRule, PsdCheck, PsdTuple,
    Rational, SymMatrix,
};

/// Resource caps shared by enumeration and LP solving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    /// Abort tuple enumeration after this many tuples.
    pub max_tuples: u64,
    /// Abort a simplex solve after this many pivots.
    pub max_pivots: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_tuples: 100_000_000,
            max_pivots: 1_000_000,
        }
    }
}
