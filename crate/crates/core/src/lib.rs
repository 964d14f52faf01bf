//! Probe-spin thermodynamics of the finite 2D Ising model.
//!
//! The crate simulates a probe qubit dephasing against an N x M Ising torus,
//! reconstructs the lattice's zero-field free energy from the decoherence
//! signal alone through a periodic Cauchy-kernel integral, and extracts the
//! critical central charge from finite-size scaling fits.
//!
//! Layout:
//!
//! * [`brute`] — enumeration oracle for the partition function (area <= 20).
//! * [`transfer`] — column transfer matrix at arbitrary complex field:
//!   dense powering and the matrix-free production evaluator.
//! * [`zero_field`] — exact h = 0 free-fermion evaluation at any size.
//! * [`coherence`] — coherence signal L(u) = Z(beta, h + iu/beta)/Z(beta, h)
//!   sampled on closed uniform grids, with invariant diagnostics.
//! * [`holography`] — partition-function-ratio reconstruction from coherence
//!   data (periodic kernel, critical kernel, truncated two-line variant).
//! * [`scaling`] — central-charge fits and the fixed-area elongation table.
//! * [`oracle`] — the cross-validation sweep behind the CLI `oracle` command.
//!
//! With the default `parallel` feature, coherence grids, partition-function
//! traces and the oracle sweep distribute over a rayon pool (honoring
//! `RAYON_NUM_THREADS`); results are bit-identical to the sequential build
//! because every reduction runs in fixed index order.

pub mod brute;
pub mod coherence;
pub mod error;
pub mod holography;
pub mod lattice;
pub mod logcomplex;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod scaling;
pub mod transfer;
pub mod zero_field;

pub use brute::{brute_force_log_partition, MAX_BRUTE_AREA};
pub use coherence::{
    coherence_at, coherence_series, verify_series, CoherenceSeries, SeriesDiagnostics, SeriesSpan,
};
pub use error::{Error, Result};
pub use holography::{
    complete_to_full_turn, free_energy_at_zero_field, free_energy_from_series, natural_span,
    reconstruct_critical_ratio, reconstruct_ratio_infinite_line, reconstruct_ratio_periodic,
    FreeEnergyOutcome, ReconstructionResult,
};
pub use lattice::LatticeSpec;
pub use logcomplex::{wrap_phase, LogComplex};
pub use oracle::{run_oracle, OracleOutcome, OracleTolerances};
pub use params::{ModelParams, BETA_CRITICAL};
pub use quadrature::{simpson38, QuadratureConfig};
pub use scaling::{
    elongation_curve, fit_central_charge_aspect, fit_central_charge_strip, CentralChargeFit,
    ElongationRow, FreeEnergyMethod, FreeEnergyPoint,
};
pub use transfer::{
    build_transfer_matrix, log_partition_dense, log_partition_transfer, CMatrix, MAX_TRANSFER_ROWS,
};
pub use zero_field::log_partition_zero_field;
