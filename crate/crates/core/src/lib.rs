//! Quantum optical model of a ring resonator coupled to two waveguides.
//!
//! The device acts on the two input modes `a` (bus waveguide) and `f` (drop
//! waveguide) as a 2×2 unitary. From that unitary this crate derives two-photon
//! coincidence statistics, the Hong-Ou-Mandel manifolds (parameter sets on
//! which the coincidence probability vanishes), and a loss model in which the
//! drop-port output mode is traced out.
//!
//! [`pathsum`] rebuilds the same transfer amplitudes from an explicit sum over
//! ring round trips and is used as an independent check of [`device`].
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod device;
mod error;
pub mod fock;
pub mod homm;
pub mod pathsum;

pub use device::{
    balanced_params, beam_splitter_matrix, round_trip_phase, transfer_matrix, CouplerParams,
    PhysicalRingSpec, RingDeviceParams, TransferMatrix2,
};
pub use error::{Error, Result};
pub use fock::{
    coherent_output, coincidence_probability, mean_field_at, multiphoton_joint_amplitudes,
    reduced_density_c, two_photon_output, FockDensityMatrix, FockVector, TravelingFieldMode,
    TwoPhotonState,
};
pub use homm::{
    cutoff_tau, dip_angles, manifold_tau_of_theta, shommc_residual, trace_manifold,
    whommc_residual, DipAngles, GridAxis, ManifoldPoint, ManifoldPointSet, TraceMode,
    TraceTolerances,
};
pub use num_complex::Complex64;
pub use pathsum::{
    critical_coupling_amplitudes, pathsum_transfer, FeedbackBreakdown, PathSumConfig,
};

use core::f64::consts::TAU;

/// Reduces `angle` into `[0, 2π)`.
pub(crate) fn wrap_tau(angle: f64) -> f64 {
    let r = angle % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Distance from `angle` to the nearest multiple of 2π.
pub(crate) fn distance_to_zero_mod_tau(angle: f64) -> f64 {
    let r = wrap_tau(angle);
    r.min(TAU - r)
}
