//! Device parameters and the 2×2 mode transformation of the dual-coupled ring.
//!
//! Input modes are `a` (bus) and `f` (drop); output modes are `c` (bus) and
//! `l` (drop, also the traced-out loss mode). The transfer matrix maps
//! `(â, f̂)` to `(ĉ, l̂)`:
//!
//! ```text
//! ĉ = t  â + s′ f̂
//! l̂ = s  â + t′ f̂
//! ```

use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is in the build graph
use num_traits::Float;

use crate::error::{Error, Result};

/// Tolerance on every unitarity and losslessness equation.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Smallest denominator magnitude `|η*τ* − e^{iθ}|` the closed form accepts.
pub const SINGULAR_DENOMINATOR: f64 = 1e-14;

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A lossless evanescent directional coupler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerParams {
    cross: Complex64,
    through: Complex64,
}

impl CouplerParams {
    /// Builds a coupler, rejecting it unless `|cross|² + |through|² = 1`.
    pub fn new(cross: Complex64, through: Complex64) -> Result<Self> {
        let norm = cross.norm_sqr() + through.norm_sqr();
        if (norm - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::LossyCoupler { norm });
        }
        Ok(Self { cross, through })
    }

    /// Coupler with real through amplitude `through ∈ [0, 1]` and cross
    /// amplitude `i·√(1 − through²)`.
    pub fn from_real_through(through: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&through) {
            return Err(Error::Domain {
                what: "through amplitude",
                value: through,
            });
        }
        let k = (1.0 - through * through).sqrt();
        Ok(Self {
            cross: Complex64::new(0.0, k),
            through: Complex64::new(through, 0.0),
        })
    }

    /// Cross-coupling amplitude (κ or γ).
    pub fn cross(&self) -> Complex64 {
        self.cross
    }

    /// Direct transmission amplitude (τ or η).
    pub fn through(&self) -> Complex64 {
        self.through
    }
}

/// Full description of the dual-coupled ring.
///
/// `coupler_a` couples the bus waveguide to the ring (κ, τ), `coupler_f`
/// couples the drop waveguide (γ, η). `phi1` is the propagation phase on the
/// arc from the bus coupler to the drop coupler, `phi2` on the arc back; they
/// must add up to the round-trip phase `theta` modulo 2π. `theta` is stored as
/// given and reduced only for comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDeviceParams {
    coupler_a: CouplerParams,
    coupler_f: CouplerParams,
    theta: f64,
    phi1: f64,
    phi2: f64,
}

impl RingDeviceParams {
    /// Builds the parameters, checking `φ₁ + φ₂ ≡ θ (mod 2π)`.
    pub fn new(
        coupler_a: CouplerParams,
        coupler_f: CouplerParams,
        theta: f64,
        phi1: f64,
        phi2: f64,
    ) -> Result<Self> {
        let phase_sum = phi1 + phi2;
        if crate::distance_to_zero_mod_tau(phase_sum - theta) > UNITARITY_TOL {
            return Err(Error::PhaseMismatch { theta, phase_sum });
        }
        Ok(Self {
            coupler_a,
            coupler_f,
            theta,
            phi1,
            phi2,
        })
    }

    /// Splits the round-trip phase evenly over the two arcs.
    pub fn with_even_split(coupler_a: CouplerParams, coupler_f: CouplerParams, theta: f64) -> Self {
        Self {
            coupler_a,
            coupler_f,
            theta,
            phi1: theta / 2.0,
            phi2: theta / 2.0,
        }
    }

    /// Real through amplitudes `tau`, `eta` in `[0, 1]` with imaginary cross
    /// amplitudes and an even phase split.
    pub fn real_couplers(tau: f64, eta: f64, theta: f64) -> Result<Self> {
        Ok(Self::with_even_split(
            CouplerParams::from_real_through(tau)?,
            CouplerParams::from_real_through(eta)?,
            theta,
        ))
    }

    /// Bus-side coupler (κ, τ).
    pub fn coupler_a(&self) -> CouplerParams {
        self.coupler_a
    }

    /// Drop-side coupler (γ, η).
    pub fn coupler_f(&self) -> CouplerParams {
        self.coupler_f
    }

    /// Round-trip phase θ, unreduced.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Bus-to-drop arc phase.
    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    /// Drop-to-bus arc phase.
    pub fn phi2(&self) -> f64 {
        self.phi2
    }

    /// κ
    pub fn kappa(&self) -> Complex64 {
        self.coupler_a.cross
    }

    /// τ
    pub fn tau(&self) -> Complex64 {
        self.coupler_a.through
    }

    /// γ
    pub fn gamma(&self) -> Complex64 {
        self.coupler_f.cross
    }

    /// η
    pub fn eta(&self) -> Complex64 {
        self.coupler_f.through
    }

    /// Common denominator `η*τ* − e^{iθ}` of the transfer amplitudes.
    pub fn denominator(&self) -> Complex64 {
        self.eta().conj() * self.tau().conj() - Complex64::cis(self.theta)
    }
}

/// Mode transformation with rows `(t, s′; s, t′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2 {
    /// `a → c`
    pub t: Complex64,
    /// `a → l`
    pub s: Complex64,
    /// `f → l`
    pub t_prime: Complex64,
    /// `f → c`
    pub s_prime: Complex64,
}

impl TransferMatrix2 {
    /// Identity routing: `a → c`, `f → l`.
    pub const IDENTITY: Self = Self {
        t: Complex64::new(1.0, 0.0),
        s: Complex64::new(0.0, 0.0),
        t_prime: Complex64::new(1.0, 0.0),
        s_prime: Complex64::new(0.0, 0.0),
    };

    /// Largest violation of `|t|²+|s|²=1`, `|s′|²+|t′|²=1`, `t*s′ + s*t′ = 0`.
    pub fn unitarity_defect(&self) -> f64 {
        let col_a = (self.t.norm_sqr() + self.s.norm_sqr() - 1.0).abs();
        let col_f = (self.s_prime.norm_sqr() + self.t_prime.norm_sqr() - 1.0).abs();
        let overlap = (self.t.conj() * self.s_prime + self.s.conj() * self.t_prime).norm();
        col_a.max(col_f).max(overlap)
    }

    /// True when every unitarity equation holds within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Returns `self` if it is unitary within [`UNITARITY_TOL`].
    pub fn check_unitary(&self) -> Result<&Self> {
        let defect = self.unitarity_defect();
        if defect > UNITARITY_TOL {
            Err(Error::NonUnitary { defect })
        } else {
            Ok(self)
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.t - other.t,
            self.s - other.s,
            self.t_prime - other.t_prime,
            self.s_prime - other.s_prime,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// Closed-form transfer amplitudes of the ring.
///
/// ```text
/// t  = (η* − τ e^{iθ}) / D      s  = γκ* e^{iφ₂} / D
/// t′ = (τ* − η e^{iθ}) / D      s′ = κγ* e^{iφ₁} / D      D = η*τ* − e^{iθ}
/// ```
pub fn transfer_matrix(params: &RingDeviceParams) -> Result<TransferMatrix2> {
    let d = params.denominator();
    let magnitude = d.norm();
    if magnitude <= SINGULAR_DENOMINATOR {
        return Err(Error::SingularDenominator { magnitude });
    }
    let (kappa, tau) = (params.kappa(), params.tau());
    let (gamma, eta) = (params.gamma(), params.eta());
    let e_theta = Complex64::cis(params.theta);
    Ok(TransferMatrix2 {
        t: (eta.conj() - tau * e_theta) / d,
        s: gamma * kappa.conj() * Complex64::cis(params.phi2) / d,
        t_prime: (tau.conj() - eta * e_theta) / d,
        s_prime: kappa * gamma.conj() * Complex64::cis(params.phi1) / d,
    })
}

/// Balanced device: `τ = η = tau`, `κ = γ = i√(1 − tau²)`, `φ₁ = φ₂ = θ/2`.
pub fn balanced_params(tau: f64, theta: f64) -> Result<RingDeviceParams> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Domain { what: "tau", value: tau });
    }
    RingDeviceParams::real_couplers(tau, tau, theta)
}

/// Lossless beam splitter with transmission `t` and reflection `r`.
///
/// Uses the SU(2) form `(t, −r*; r, t*)`, which is unitary for any phases of
/// `r` and `t` once `|r|² + |t|² = 1`.
pub fn beam_splitter_matrix(r: Complex64, t: Complex64) -> Result<TransferMatrix2> {
    let norm = r.norm_sqr() + t.norm_sqr();
    if (norm - 1.0).abs() > UNITARITY_TOL {
        return Err(Error::NonUnitary {
            defect: (norm - 1.0).abs(),
        });
    }
    Ok(TransferMatrix2 {
        t,
        s: r,
        t_prime: t.conj(),
        s_prime: -r.conj(),
    })
}

/// Physical ring geometry, used to locate resonances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalRingSpec {
    refractive_index: f64,
    radius: f64,
    omega: f64,
}

impl PhysicalRingSpec {
    /// `refractive_index ≥ 1`, `radius > 0` (m), `omega > 0` (rad/s).
    pub fn new(refractive_index: f64, radius: f64, omega: f64) -> Result<Self> {
        if !(refractive_index >= 1.0) {
            return Err(Error::Domain {
                what: "refractive index",
                value: refractive_index,
            });
        }
        if !(radius > 0.0) {
            return Err(Error::Domain {
                what: "radius",
                value: radius,
            });
        }
        if !(omega > 0.0) {
            return Err(Error::Domain {
                what: "omega",
                value: omega,
            });
        }
        Ok(Self {
            refractive_index,
            radius,
            omega,
        })
    }

    /// Mode number `nRω/c`; resonant when it is an integer.
    pub fn mode_number(&self) -> f64 {
        self.refractive_index * self.radius * self.omega / SPEED_OF_LIGHT
    }
}

/// Round-trip phase `2π·nRω/c` reduced into `[0, 2π)`.
pub fn round_trip_phase(spec: &PhysicalRingSpec) -> f64 {
    let x = spec.mode_number();
    TAU * (x - x.floor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn critical_coupling_suppresses_through_port() {
        let k = 0.75f64.sqrt();
        let p = RingDeviceParams::new(
            CouplerParams::new(c(0.0, k), c(0.5, 0.0)).unwrap(),
            CouplerParams::new(c(0.0, k), c(0.5, 0.0)).unwrap(),
            0.0,
            0.0,
            0.0,
        )
        .unwrap();
        let m = transfer_matrix(&p).unwrap();
        assert!(m.t.norm() < 1e-15);
        assert!(m.is_unitary(UNITARITY_TOL));
    }

    #[test]
    fn uncoupled_ring_only_phase_shifts() {
        let tau = Complex64::cis(0.3);
        let eta = Complex64::cis(-1.1);
        for theta in [0.5, 1.0, 2.5, -2.0] {
            let p = RingDeviceParams::with_even_split(
                CouplerParams::new(c(0.0, 0.0), tau).unwrap(),
                CouplerParams::new(c(0.0, 0.0), eta).unwrap(),
                theta,
            );
            let m = transfer_matrix(&p).unwrap();
            assert!((m.t.norm() - 1.0).abs() < 1e-14);
            assert_eq!(m.s, c(0.0, 0.0));
        }
    }

    #[test]
    fn three_db_ring_at_half_round_trip() {
        let p = balanced_params(FRAC_1_SQRT_2, PI).unwrap();
        assert!((p.phi1() - FRAC_PI_2).abs() < 1e-15);
        let m = transfer_matrix(&p).unwrap();
        assert!((m.t - c(2.0 * 2f64.sqrt() / 3.0, 0.0)).norm() < 1e-15);
        assert!((m.s.norm() - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.t_prime - c(2.0 * 2f64.sqrt() / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_denominator_is_rejected() {
        let p = balanced_params(1.0, 0.0).unwrap();
        assert!(matches!(
            transfer_matrix(&p),
            Err(Error::SingularDenominator { .. })
        ));
        // same couplers off resonance are fine
        assert!(transfer_matrix(&balanced_params(1.0, 0.1).unwrap()).is_ok());
    }

    #[test]
    fn balanced_param_construction() {
        let p = balanced_params(1.0, 2.0).unwrap();
        assert_eq!(p.kappa(), c(0.0, 0.0));
        assert_eq!(p.gamma(), c(0.0, 0.0));

        let p = balanced_params(0.5, 0.0).unwrap();
        assert!((p.kappa() - c(0.0, 0.75f64.sqrt())).norm() < 1e-16);
        assert_eq!(p.kappa(), p.gamma());
        assert_eq!((p.phi1(), p.phi2()), (0.0, 0.0));

        let p = balanced_params(FRAC_1_SQRT_2, PI).unwrap();
        assert!((p.kappa().norm() - FRAC_1_SQRT_2).abs() < 1e-15);

        for bad in [0.0, -0.1, 1.0 + 1e-9, f64::NAN] {
            assert!(matches!(balanced_params(bad, 0.0), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(matches!(
            CouplerParams::new(c(0.5, 0.0), c(0.5, 0.0)),
            Err(Error::LossyCoupler { .. })
        ));
        let a = CouplerParams::from_real_through(0.6).unwrap();
        assert!(matches!(
            RingDeviceParams::new(a, a, 1.0, 0.2, 0.3),
            Err(Error::PhaseMismatch { .. })
        ));
        // congruent mod 2π is accepted
        assert!(RingDeviceParams::new(a, a, 1.0, 0.4, 0.6 + TAU).is_ok());
    }

    #[test]
    fn beam_splitter_baselines() {
        let bs = beam_splitter_matrix(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        assert!(bs.is_unitary(UNITARITY_TOL));
        let id = beam_splitter_matrix(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(id, TransferMatrix2::IDENTITY);
        assert!(matches!(
            beam_splitter_matrix(c(0.5, 0.0), c(0.5, 0.0)),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn resonance_phase() {
        let spec = |x: f64| PhysicalRingSpec::new(1.0, 1.0, x * SPEED_OF_LIGHT).unwrap();
        assert_eq!(round_trip_phase(&spec(3.0)), 0.0);
        assert!((round_trip_phase(&spec(2.5)) - PI).abs() < 1e-12);
        assert!((round_trip_phase(&spec(1.25)) - FRAC_PI_2).abs() < 1e-12);
        assert!(PhysicalRingSpec::new(0.5, 1.0, 1.0).is_err());
        assert!(PhysicalRingSpec::new(1.5, 0.0, 1.0).is_err());
        assert!(PhysicalRingSpec::new(1.5, 1.0, -1.0).is_err());
    }
}
