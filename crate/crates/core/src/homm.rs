//! Hong-Ou-Mandel manifolds: operating points with vanishing coincidence.
//!
//! The strong constraint is `ss′ + tt′ = 0` on the transfer amplitudes. Its
//! numerator, written in raw device parameters, is the weak constraint
//!
//! ```text
//! W = |κ|² + |γ|² + |κ|²|γ|² + 2·Re(ητ e^{iθ}) − 2 = 0
//! ```
//!
//! and `ss′ + tt′ = e^{iθ}·W / D²` with `D = η*τ* − e^{iθ}`, so the two agree
//! wherever `D ≠ 0`. For a balanced device (`τ = η` real) with `u = τ²`,
//! `W = u² − 2u(2 − cos θ) + 1`, which gives the closed-form curve and the dip
//! locations below.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is in the build graph
use num_traits::Float;

use crate::device::{RingDeviceParams, TransferMatrix2, SINGULAR_DENOMINATOR};
use crate::error::{Error, Result};
use crate::fock::coincidence_probability;

/// Default bound on `|W|` at an accepted manifold point.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Default bound on P(1,1) at an accepted manifold point.
pub const P11_TOL: f64 = 1e-9;
/// Half-width of the neighbourhood of θ ≡ 0 excluded from the balanced curve.
pub const RESONANCE_EXCLUSION: f64 = 1e-9;
/// Bracket width at which root bisection stops.
pub const ROOT_PRECISION: f64 = 1e-12;

/// `ss′ + tt′`; its squared modulus is P(1,1).
pub fn shommc_residual(m: &TransferMatrix2) -> Complex64 {
    m.s * m.s_prime + m.t * m.t_prime
}

/// Left side of the weak constraint minus 2.
pub fn whommc_residual(params: &RingDeviceParams) -> f64 {
    let k2 = params.kappa().norm_sqr();
    let g2 = params.gamma().norm_sqr();
    let loop_term = params.eta() * params.tau() * Complex64::cis(params.theta());
    k2 + g2 + k2 * g2 + 2.0 * loop_term.re - 2.0
}

/// Balanced manifold curve `τ(θ) = √(2 − cos θ − √((2 − cos θ)² − 1))`.
///
/// Evaluated as `1/√(b + √((1 − cos θ)(3 − cos θ)))` with `b = 2 − cos θ`,
/// which is the same branch without the cancellation near θ = 0.
pub fn manifold_tau_of_theta(theta: f64) -> Result<f64> {
    if crate::distance_to_zero_mod_tau(theta) <= RESONANCE_EXCLUSION {
        return Err(Error::ExcludedPoint { theta });
    }
    let c = theta.cos();
    let b = 2.0 - c;
    let disc = ((1.0 - c) * (3.0 - c)).sqrt();
    Ok((1.0 / (b + disc)).sqrt())
}

/// Smallest balanced `τ` for which dips exist: `√(3 − √8) = √2 − 1`.
pub fn cutoff_tau() -> f64 {
    (3.0 - 8f64.sqrt()).sqrt()
}

/// Dip locations of a balanced device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DipAngles {
    /// No zero of P(1,1) for any θ.
    None,
    /// Zeros at `±theta`, with `theta ∈ [0, π]`.
    Pair {
        /// Non-negative dip angle.
        theta: f64,
    },
}

impl DipAngles {
    /// `[−θ, +θ]` if dips exist.
    pub fn angles(&self) -> Option<[f64; 2]> {
        match *self {
            DipAngles::None => None,
            DipAngles::Pair { theta } => Some([-theta, theta]),
        }
    }
}

/// Solves the weak constraint for θ at fixed balanced `tau`:
/// `cos θ_dip = 1 − (1 − τ²)²/(2τ²)`.
///
/// Returns [`DipAngles::None`] below [`cutoff_tau`] and outside `(0, 1)`; at
/// the cutoff itself the pair degenerates to `±π`.
pub fn dip_angles(tau: f64) -> DipAngles {
    if !(tau > 0.0 && tau < 1.0) {
        return DipAngles::None;
    }
    let u = tau * tau;
    let cos_dip = 1.0 - (1.0 - u) * (1.0 - u) / (2.0 * u);
    if cos_dip < -1.0 - 1e-12 {
        return DipAngles::None;
    }
    DipAngles::Pair {
        theta: cos_dip.clamp(-1.0, 1.0).acos(),
    }
}

/// Validated zero-coincidence operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldPoint {
    /// Round-trip phase, rad.
    pub theta: f64,
    /// Bus coupler through amplitude.
    pub tau: f64,
    /// Drop coupler through amplitude.
    pub eta: f64,
    /// Weak-constraint residual `W` at the root.
    pub residual_weak: f64,
    /// P(1,1) at the root.
    pub p11: f64,
}

/// Output of [`trace_manifold`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ManifoldPointSet {
    /// Accepted points in row-major grid order.
    pub points: Vec<ManifoldPoint>,
    /// 1 for the balanced curve, 2 for the unbalanced surface.
    pub dimensionality: u8,
    /// `(theta, tau, eta)` where the constraint is degenerate.
    pub excluded_points: Vec<(f64, f64, f64)>,
    /// Roots that failed validation against the tolerances.
    pub rejected: Vec<ManifoldPoint>,
}

/// Roots found along one θ axis at fixed `(tau, eta)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellTrace {
    /// Accepted roots, increasing in θ.
    pub points: Vec<ManifoldPoint>,
    /// Roots over tolerance.
    pub rejected: Vec<ManifoldPoint>,
    /// Degenerate grid nodes and roots.
    pub excluded: Vec<(f64, f64, f64)>,
}

impl ManifoldPointSet {
    /// Concatenates per-cell traces in the given order.
    pub fn from_cells<I>(dimensionality: u8, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = CellTrace>,
    {
        let mut set = Self {
            dimensionality,
            ..Self::default()
        };
        for cell in cells {
            set.points.extend(cell.points);
            set.rejected.extend(cell.rejected);
            set.excluded_points.extend(cell.excluded);
        }
        if set.points.is_empty() && set.rejected.is_empty() {
            return Err(Error::EmptyManifold);
        }
        Ok(set)
    }
}

/// Evenly spaced samples including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    min: f64,
    max: f64,
    steps: usize,
}

impl GridAxis {
    /// Requires finite `min < max` and `steps ≥ 2`.
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid("range endpoints must be finite"));
        }
        if !(min < max) {
            return Err(Error::InvalidGrid("range is empty"));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid("need at least two steps"));
        }
        Ok(Self { min, max, steps })
    }

    /// Lower end.
    pub fn min(&self) -> f64 {
        self.min
    }

    /// Upper end.
    pub fn max(&self) -> f64 {
        self.max
    }

    /// Number of samples.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Sample `i`; the last one is exactly `max`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * (i as f64) / ((self.steps - 1) as f64)
        }
    }

    /// All samples in increasing order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |i| self.value(i))
    }

    fn within_unit_interval(&self) -> bool {
        self.min >= 0.0 && self.max <= 1.0
    }
}

/// Parameter space to search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceMode {
    /// `τ = η` real; yields the one-dimensional curve.
    Balanced {
        /// θ axis, scanned for sign changes.
        theta: GridAxis,
        /// τ rows.
        tau: GridAxis,
    },
    /// Independent real `τ`, `η`; yields the two-dimensional surface.
    Unbalanced {
        /// θ axis, scanned for sign changes.
        theta: GridAxis,
        /// τ rows (outer).
        tau: GridAxis,
        /// η columns (inner).
        eta: GridAxis,
    },
}

impl TraceMode {
    /// 200 τ rows over `[0.45, 0.95]` × 400 θ samples over `[0, 2π]`.
    pub fn balanced_default() -> Self {
        TraceMode::Balanced {
            theta: GridAxis { min: 0.0, max: TAU, steps: 400 },
            tau: GridAxis { min: 0.45, max: 0.95, steps: 200 },
        }
    }

    /// 60 × 60 `(τ, η)` cells over `[0.05, 0.95]²` × 200 θ samples over `[0, 2π]`.
    pub fn unbalanced_default() -> Self {
        TraceMode::Unbalanced {
            theta: GridAxis { min: 0.0, max: TAU, steps: 200 },
            tau: GridAxis { min: 0.05, max: 0.95, steps: 60 },
            eta: GridAxis { min: 0.05, max: 0.95, steps: 60 },
        }
    }

    /// Manifold dimension traced by this mode.
    pub fn dimensionality(&self) -> u8 {
        match self {
            TraceMode::Balanced { .. } => 1,
            TraceMode::Unbalanced { .. } => 2,
        }
    }

    /// θ axis.
    pub fn theta_axis(&self) -> &GridAxis {
        match self {
            TraceMode::Balanced { theta, .. } | TraceMode::Unbalanced { theta, .. } => theta,
        }
    }

    /// `(tau, eta)` cells in row-major order.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        match self {
            TraceMode::Balanced { tau, .. } => tau.values().map(|t| (t, t)).collect(),
            TraceMode::Unbalanced { tau, eta, .. } => tau
                .values()
                .flat_map(|t| eta.values().map(move |e| (t, e)))
                .collect(),
        }
    }

    /// Checks that coupler axes stay in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            TraceMode::Balanced { tau, .. } => tau.within_unit_interval(),
            TraceMode::Unbalanced { tau, eta, .. } => {
                tau.within_unit_interval() && eta.within_unit_interval()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid("coupler amplitudes must lie in [0, 1]"))
        }
    }
}

/// Acceptance thresholds for traced roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTolerances {
    /// Upper bound on P(1,1).
    pub p11: f64,
    /// Upper bound on `|W|`.
    pub residual: f64,
}

impl Default for TraceTolerances {
    fn default() -> Self {
        Self {
            p11: P11_TOL,
            residual: RESIDUAL_TOL,
        }
    }
}

impl TraceTolerances {
    /// Default residual bound with a custom P(1,1) bound.
    pub fn with_p11(p11: f64) -> Self {
        Self {
            p11,
            ..Self::default()
        }
    }
}

/// Scans the θ axis at fixed `(tau, eta)`, bisects every sign change of `W`
/// down to [`ROOT_PRECISION`], and validates each root by P(1,1).
pub fn trace_cell(mode: &TraceMode, tau: f64, eta: f64, tol: &TraceTolerances) -> CellTrace {
    let axis = mode.theta_axis();
    let balanced = matches!(mode, TraceMode::Balanced { .. });
    let params = |theta: f64| {
        RingDeviceParams::real_couplers(tau, eta, theta).expect("coupler axes validated")
    };
    let residual = |theta: f64| whommc_residual(&params(theta));
    let degenerate = |theta: f64| {
        params(theta).denominator().norm() < SINGULAR_DENOMINATOR
            || (balanced && crate::distance_to_zero_mod_tau(theta) <= RESONANCE_EXCLUSION)
    };

    let mut out = CellTrace::default();
    let accept = |theta: f64, out: &mut CellTrace| {
        if degenerate(theta) {
            out.excluded.push((theta, tau, eta));
            return;
        }
        let p = params(theta);
        let point = ManifoldPoint {
            theta,
            tau,
            eta,
            residual_weak: whommc_residual(&p),
            p11: coincidence_probability(&p),
        };
        if point.p11 < tol.p11 && point.residual_weak.abs() < tol.residual {
            out.points.push(point);
        } else {
            out.rejected.push(point);
        }
    };

    let nodes: Vec<(f64, f64, bool)> = axis
        .values()
        .map(|theta| {
            let singular = params(theta).denominator().norm() < SINGULAR_DENOMINATOR;
            (theta, residual(theta), singular)
        })
        .collect();
    for (i, &(theta, w, singular)) in nodes.iter().enumerate() {
        if singular {
            out.excluded.push((theta, tau, eta));
            continue;
        }
        if w == 0.0 {
            accept(theta, &mut out);
        }
        if let Some(&(next_theta, next_w, next_singular)) = nodes.get(i + 1) {
            if !next_singular && (w < 0.0 && next_w > 0.0 || w > 0.0 && next_w < 0.0) {
                let root = bisect(&residual, theta, w, next_theta);
                accept(root, &mut out);
            }
        }
    }
    out
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut f_lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= ROOT_PRECISION {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Traces the zero-coincidence set of `mode` cell by cell.
///
/// Fails with [`Error::EmptyManifold`] when no root lies in the grid, e.g. a
/// balanced grid entirely below [`cutoff_tau`].
pub fn trace_manifold(mode: &TraceMode, tol: &TraceTolerances) -> Result<ManifoldPointSet> {
    check_tolerances(tol)?;
    mode.validate()?;
    let cells = mode
        .cells()
        .into_iter()
        .map(|(tau, eta)| trace_cell(mode, tau, eta, tol));
    ManifoldPointSet::from_cells(mode.dimensionality(), cells)
}

/// Rejects non-positive tolerances.
pub fn check_tolerances(tol: &TraceTolerances) -> Result<()> {
    if !(tol.p11 > 0.0) {
        return Err(Error::Domain {
            what: "p11 tolerance",
            value: tol.p11,
        });
    }
    if !(tol.residual > 0.0) {
        return Err(Error::Domain {
            what: "residual tolerance",
            value: tol.residual,
        });
    }
    Ok(())
}

/// Shifts `theta` into `[−π, π)`.
pub fn centered_angle(theta: f64) -> f64 {
    let r = crate::wrap_tau(theta + PI);
    r - PI
}
