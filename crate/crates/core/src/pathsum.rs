//! Transfer amplitudes rebuilt as explicit sums over ring round trips.
//!
//! Each coupler scatters `(outside, ring) → (outside, ring)` by
//!
//! ```text
//! bus coupler:   (τ,  κ ; −κ*, τ*)      drop coupler:  (η,  γ ; −γ*, η*)
//! ```
//!
//! and light circulating in the ring picks up `e^{−iφ₁}` on the arc from the
//! bus coupler to the drop coupler and `e^{−iφ₂}` on the way back. Summing the
//! paths with up to `N` completed loops and letting `N → ∞` gives the
//! closed form in [`crate::device::transfer_matrix`] term for term.

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is in the build graph
use num_traits::Float;

use crate::device::{RingDeviceParams, TransferMatrix2};
use crate::error::{Error, Result};

/// Loop gains at or above `1 − CONVERGENCE_MARGIN` are refused.
pub const CONVERGENCE_MARGIN: f64 = 1e-12;

/// Target truncation tail for [`PathSumConfig::for_tail`].
pub const DEFAULT_TAIL: f64 = 1e-10;

/// Upper limit on round trips chosen automatically.
pub const MAX_AUTO_ROUND_TRIPS: usize = 10_000;

/// Phase convention of the coupler scattering matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplerConvention {
    /// Through amplitudes `(τ, τ*)` on the diagonal, cross amplitudes
    /// `(κ, −κ*)` off it, `e^{−iφ}` per arc.
    #[default]
    ConjugateThroughNegatedCross,
}

/// Truncation settings for [`pathsum_transfer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathSumConfig {
    /// Highest round-trip index `j` kept.
    pub max_round_trips: usize,
    /// Scattering convention.
    pub convention: CouplerConvention,
}

impl PathSumConfig {
    /// Keeps loops `j = 0..=max_round_trips`.
    pub fn new(max_round_trips: usize) -> Self {
        Self {
            max_round_trips,
            convention: CouplerConvention::default(),
        }
    }

    /// Smallest `N` with `|ητ|^N ≤ tail·(1 − |ητ|)`, capped at
    /// [`MAX_AUTO_ROUND_TRIPS`].
    pub fn for_tail(loop_gain: f64, tail: f64) -> Self {
        if loop_gain <= 0.0 {
            return Self::new(0);
        }
        if loop_gain >= 1.0 {
            return Self::new(MAX_AUTO_ROUND_TRIPS);
        }
        let n = ((tail * (1.0 - loop_gain)).ln() / loop_gain.ln()).ceil();
        let n = if n.is_finite() && n > 0.0 { n as usize } else { 0 };
        Self::new(n.min(MAX_AUTO_ROUND_TRIPS))
    }

    /// [`Self::for_tail`] with [`DEFAULT_TAIL`] for the given device.
    pub fn for_device(params: &RingDeviceParams) -> Self {
        Self::for_tail(loop_gain(params), DEFAULT_TAIL)
    }
}

/// `|ητ|`, the amplitude factor of one full loop.
pub fn loop_gain(params: &RingDeviceParams) -> f64 {
    (params.eta() * params.tau()).norm()
}

/// Truncated path sum of the four transfer amplitudes.
///
/// Light entering on `a` may pass the bus coupler directly (τ) or cross into
/// the ring (−κ*), then circulate; every arrival at the drop coupler leaks γ
/// into `l` and every arrival back at the bus coupler leaks κ into `c`.
/// Input `f` is handled the same way starting from the drop coupler.
pub fn pathsum_transfer(params: &RingDeviceParams, cfg: &PathSumConfig) -> Result<TransferMatrix2> {
    let gain = loop_gain(params);
    let (kappa, tau) = (params.kappa(), params.tau());
    let (gamma, eta) = (params.gamma(), params.eta());
    let no_feedback = kappa.norm() == 0.0 && gamma.norm() == 0.0;
    if gain >= 1.0 - CONVERGENCE_MARGIN && !no_feedback {
        return Err(Error::NonConvergent { loop_gain: gain });
    }
    let CouplerConvention::ConjugateThroughNegatedCross = cfg.convention;

    let to_drop = Complex64::cis(-params.phi1());
    let to_bus = Complex64::cis(-params.phi2());

    let mut t = tau;
    let mut s = Complex64::new(0.0, 0.0);
    let mut ring = -kappa.conj();
    for _ in 0..=cfg.max_round_trips {
        ring *= to_drop;
        s += ring * gamma;
        ring *= eta.conj();
        ring *= to_bus;
        t += ring * kappa;
        ring *= tau.conj();
    }

    let mut t_prime = eta;
    let mut s_prime = Complex64::new(0.0, 0.0);
    let mut ring = -gamma.conj();
    for _ in 0..=cfg.max_round_trips {
        ring *= to_bus;
        s_prime += ring * kappa;
        ring *= tau.conj();
        ring *= to_drop;
        t_prime += ring * gamma;
        ring *= eta.conj();
    }

    Ok(TransferMatrix2 {
        t,
        s,
        t_prime,
        s_prime,
    })
}

/// Geometric tail bound on `|pathsum − closed form|` for each entry, in the
/// order `(t, s, t′, s′)`.
///
/// Loop `j` of `t` has modulus `|κ|²|η|·|ητ|^j`, of `t′` `|γ|²|τ|·|ητ|^j`,
/// and of `s`, `s′` `|κγ|·|ητ|^j`.
pub fn truncation_bounds(params: &RingDeviceParams, cfg: &PathSumConfig) -> [f64; 4] {
    let gain = loop_gain(params);
    let k = params.kappa().norm();
    let g = params.gamma().norm();
    let tail = if gain == 0.0 {
        0.0
    } else {
        gain.powi(cfg.max_round_trips as i32 + 1) / (1.0 - gain)
    };
    [
        k * k * params.eta().norm() * tail,
        k * g * tail,
        g * g * params.tau().norm() * tail,
        k * g * tail,
    ]
}

/// Magnitude bookkeeping of direct and fed-back amplitudes at resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackBreakdown {
    /// `τ·α_in`
    pub alpha_direct: f64,
    /// `(1 − τ²)·η·α_in / (1 − ητ)`
    pub alpha_feedback: f64,
    /// `alpha_feedback / alpha_direct`
    pub ratio: f64,
}

/// Direct and fed-back output amplitudes for a resonant ring with real
/// couplers, ignoring phases.
///
/// The feedback amplitude is `(1 − τ²)·η·α_in·Σ_j (ητ)^j`; the two cancel in
/// the bus output exactly when `η = τ`.
pub fn critical_coupling_amplitudes(tau: f64, eta: f64, alpha_in: f64) -> Result<FeedbackBreakdown> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain { what: "tau", value: tau });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain { what: "eta", value: eta });
    }
    let alpha_direct = tau * alpha_in;
    let alpha_feedback = (1.0 - tau * tau) * eta * alpha_in / (1.0 - eta * tau);
    let ratio = ((1.0 - tau * tau) / (1.0 - eta * tau)) * (eta / tau);
    Ok(FeedbackBreakdown {
        alpha_direct,
        alpha_feedback,
        ratio,
    })
}
