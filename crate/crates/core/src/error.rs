use core::fmt;

/// Errors reported by the ring resonator model.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coupler violates `|cross|² + |through|² = 1`.
    LossyCoupler {
        /// The offending value of `|cross|² + |through|²`.
        norm: f64,
    },
    /// The partial-arc phases do not add up to the round-trip phase.
    PhaseMismatch {
        /// Round-trip phase θ.
        theta: f64,
        /// φ₁ + φ₂.
        phase_sum: f64,
    },
    /// `|η*τ* − e^{iθ}|` is too small to divide by.
    SingularDenominator {
        /// Magnitude of the denominator.
        magnitude: f64,
    },
    /// A scalar argument lies outside its allowed domain.
    Domain {
        /// Name of the argument.
        what: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A matrix that must be unitary is not.
    NonUnitary {
        /// Largest deviation over the unitarity equations.
        defect: f64,
    },
    /// A Fock-space amplitude vector is not normalized.
    NotNormalized {
        /// Sum of squared magnitudes.
        norm: f64,
    },
    /// The Fock cutoff drops more probability than allowed.
    CutoffTooSmall {
        /// `1 − trace` of the truncated density matrix.
        deficit: f64,
    },
    /// The closed-form manifold curve is undefined at resonance.
    ExcludedPoint {
        /// The rejected round-trip phase.
        theta: f64,
    },
    /// A trace found no zero-coincidence points in its grid.
    EmptyManifold,
    /// A parameter grid has too few steps or an empty range.
    InvalidGrid(&'static str),
    /// The round-trip series does not converge (`|ητ| ≥ 1`).
    NonConvergent {
        /// Per-loop amplitude factor `|ητ|`.
        loop_gain: f64,
    },
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LossyCoupler { norm } => {
                write!(f, "coupler is not lossless: |cross|^2 + |through|^2 = {norm}")
            }
            Error::PhaseMismatch { theta, phase_sum } => write!(
                f,
                "phi1 + phi2 = {phase_sum} is not congruent to theta = {theta} mod 2pi"
            ),
            Error::SingularDenominator { magnitude } => {
                write!(f, "transfer-amplitude denominator vanishes (|D| = {magnitude:e})")
            }
            Error::Domain { what, value } => write!(f, "{what} = {value} is out of range"),
            Error::NonUnitary { defect } => {
                write!(f, "matrix is not unitary (defect {defect:e})")
            }
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::CutoffTooSmall { deficit } => {
                write!(f, "Fock cutoff too small: truncation deficit {deficit:e}")
            }
            Error::ExcludedPoint { theta } => {
                write!(f, "theta = {theta} is at resonance, where the manifold curve is excluded")
            }
            Error::EmptyManifold => f.write_str("no zero-coincidence points in the grid"),
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::NonConvergent { loop_gain } => {
                write!(f, "round-trip series does not converge (|eta tau| = {loop_gain})")
            }
        }
    }
}

impl core::error::Error for Error {}
