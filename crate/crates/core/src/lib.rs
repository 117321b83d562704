//! Synthesis of linear-optical interferometer circuits from unitary matrices.
//!
//! Decomposes an N-dimensional unitary into meshes of beamsplitters and phase
//! shifters (triangular and rectangular two-mode meshes, a four-block scheme
//! built from one repeated fixed tritter, and a multiport-beamsplitter mesh),
//! verifies every decomposition numerically, and ships a CLI plus JSON formats
//! for matrices and circuits.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod decompose;
pub mod matrix;
pub mod primitives;
pub mod usd;

pub use analysis::{
    scaling_report, scaling_report_with_seed, smzi_can_nullify, three_tritter_feasible,
    verify_decomposition, FeasibilityVerdict, Obstruction, ScalingReport, ScalingRow,
};
pub use circuit::{Circuit, ComponentReport, Element};
pub use decompose::{
    decompose_bwc, decompose_clements, decompose_mbs3, decompose_reck, decompose_u2,
    nullification_angles, rebuild_blocks, BlockFlavor, DecompositionResult, Mbs3Params, Side,
    TwoModeBlock,
};
pub use matrix::{
    distance_up_to_global_phase, embed_block, haar_random_unitary, is_unitary, ComplexMatrix,
    PhaseEquivalence, UnitaryMatrix,
};
pub use primitives::{
    bs_matrix, diag_matrix, fixed_tritter_block, mbs_matrix, smzi_matrix, t_matrix,
    t_tilde_matrix, tritter_matrix, AmziParams, BsRatio, DiagPhases, SmziParams,
};
pub use usd::{
    apply_to_inputs, povm_set, success_probability, usd_clements_closed_form, usd_unitary,
    usd_uprime, uprime_closed_form, PovmSet, UsdClosedForm, UsdParams,
};

/// Max-entry tolerance for unitarity checks.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance for circuit-reconstruction distances (products accumulate error).
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Tolerance for entrywise algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for single-entry feasibility checks.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Errors reported by matrix construction, decomposition, and serialization.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A dimension precondition was violated (wrong size, empty, mismatch).
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A mode or entry index was out of range.
    #[error("index error: {0}")]
    Index(String),
    /// The input matrix failed the unitarity check.
    #[error("matrix is not unitary: max |U\u{2020}U - I| = {deviation:.3e}")]
    NotUnitary {
        /// Max-entry modulus of U†U − I.
        deviation: f64,
    },
    /// A document could not be parsed or validated.
    #[error("parse error: {0}")]
    Parse(String),
    /// A structural invariant of a circuit or mesh schedule was violated.
    #[error("structural error: {0}")]
    Structure(String),
    /// An argument was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Normalizes an angle to the branch (-pi, pi].
pub(crate) fn normalize_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x - TAU * (x / TAU).round();
    if y <= -PI {
        y += TAU;
    }
    if y > PI {
        y -= TAU;
    }
    y
}
