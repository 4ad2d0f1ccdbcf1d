//! Quantum states pushed through a [`TransferMatrix2`].
//!
//! Covers the two-photon `|1,1⟩` input used for Hong-Ou-Mandel interference,
//! single-mode Fock superpositions on the bus input `a` (with the drop input
//! `f` in vacuum), coherent states, and the reduced state of output mode `c`
//! once the drop mode `l` is traced out.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is in the build graph
use num_traits::Float;

use crate::device::{transfer_matrix, RingDeviceParams, TransferMatrix2};
use crate::error::{Error, Result};

/// Normalization tolerance for single-mode input vectors.
pub const FOCK_NORM_TOL: f64 = 1e-10;

/// Largest truncation deficit [`reduced_density_c`] accepts.
pub const MAX_TRUNCATION_DEFICIT: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Output of the `|1,1⟩` input over `{|2,0⟩, |1,1⟩, |0,2⟩}` in modes `(c, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    /// Both photons in `c`.
    pub a20: Complex64,
    /// One photon in each output.
    pub a11: Complex64,
    /// Both photons in `l`.
    pub a02: Complex64,
}

impl TwoPhotonState {
    /// P(2,0)
    pub fn p20(&self) -> f64 {
        self.a20.norm_sqr()
    }

    /// Coincidence probability P(1,1).
    pub fn p11(&self) -> f64 {
        self.a11.norm_sqr()
    }

    /// P(0,2)
    pub fn p02(&self) -> f64 {
        self.a02.norm_sqr()
    }
}

/// Propagates `â†f̂†|∅⟩` through `m`.
///
/// With `â† = t ĉ† + s l̂†` and `f̂† = s′ ĉ† + t′ l̂†` the product expands to
/// `√2·t s′|2,0⟩ + (ss′ + tt′)|1,1⟩ + √2·s t′|0,2⟩`.
pub fn two_photon_output(m: &TransferMatrix2) -> Result<TwoPhotonState> {
    m.check_unitary()?;
    let sqrt2 = core::f64::consts::SQRT_2;
    Ok(TwoPhotonState {
        a20: m.t * m.s_prime * sqrt2,
        a11: m.s * m.s_prime + m.t * m.t_prime,
        a02: m.s * m.t_prime * sqrt2,
    })
}

/// `P(1,1) = |ss′ + tt′|²` for the ring.
///
/// At the degenerate point where the closed-form denominator vanishes (both
/// couplers fully transmissive and on resonance) this returns the limiting
/// value 1.
pub fn coincidence_probability(params: &RingDeviceParams) -> f64 {
    match transfer_matrix(params) {
        Ok(m) => (m.s * m.s_prime + m.t * m.t_prime).norm_sqr().min(1.0),
        Err(_) => 1.0,
    }
}

/// Amplitudes of `(t ĉ† + s l̂†)^m |∅⟩ / √m!` over `|k, m−k⟩`, indexed by `k`.
///
/// Entry `k` is `√C(m,k) · t^k · s^(m−k)`. Binomials are accumulated in `f64`,
/// which is exact far beyond any cutoff used here and overflows only past
/// `m ≈ 1000`.
pub fn multiphoton_joint_amplitudes(m: usize, matrix: &TransferMatrix2) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m + 1);
    let mut binom = 1.0f64;
    for k in 0..=m {
        if k > 0 {
            binom = binom * (m - k + 1) as f64 / k as f64;
        }
        out.push(powu(matrix.t, k) * powu(matrix.s, m - k) * binom.sqrt());
    }
    out
}

fn powu(z: Complex64, n: usize) -> Complex64 {
    let mut acc = ONE;
    let mut base = z;
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        n >>= 1;
    }
    acc
}

/// Coherent amplitudes `(tα, sα)` in modes `c` and `l`.
///
/// A coherent input on `a` with vacuum on `f` leaves the device as a product of
/// coherent states, `D̂_c(tα) D̂_l(sα)|∅⟩`.
pub fn coherent_output(m: &TransferMatrix2, alpha: Complex64) -> (Complex64, Complex64) {
    (m.t * alpha, m.s * alpha)
}

/// A single-frequency traveling field mode polarized along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingFieldMode {
    field_scale: f64,
    propagation_constant: f64,
    omega: f64,
    z: f64,
    time: f64,
}

impl TravelingFieldMode {
    /// `field_scale` (V/m) must be non-negative.
    pub fn new(field_scale: f64, propagation_constant: f64, omega: f64, z: f64, time: f64) -> Result<Self> {
        if !(field_scale >= 0.0) {
            return Err(Error::Domain {
                what: "field scale",
                value: field_scale,
            });
        }
        Ok(Self {
            field_scale,
            propagation_constant,
            omega,
            z,
            time,
        })
    }

    /// Carrier phase `k_p z − ω t`.
    pub fn phase(&self) -> f64 {
        self.propagation_constant * self.z - self.omega * self.time
    }
}

/// Expectation `i𝓔{β e^{iφ} − β* e^{−iφ}} = −2𝓔·Im(β e^{iφ})` of the field
/// operator in a coherent state of amplitude `envelope` (β).
pub fn mean_field_at(envelope: Complex64, mode: &TravelingFieldMode) -> f64 {
    let rotated = envelope * Complex64::cis(mode.phase());
    -2.0 * mode.field_scale * rotated.im
}

/// Normalized amplitudes `c_m` on number states `|m⟩` of the bus input mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    /// Wraps normalized number-state amplitudes.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > FOCK_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Builds the state `N·Σ C_m (â†)^m |∅⟩` from creation-operator
    /// coefficients, using `(â†)^m|∅⟩ = √m!|m⟩` and normalizing.
    pub fn from_creation_coefficients(coefficients: &[Complex64]) -> Result<Self> {
        let mut fact_sqrt = 1.0f64;
        let raw: Vec<Complex64> = coefficients
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                if m > 0 {
                    fact_sqrt *= (m as f64).sqrt();
                }
                c * fact_sqrt
            })
            .collect();
        let norm: f64 = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(raw.into_iter().map(|c| c / norm).collect())
    }

    /// Number state `|n⟩`.
    pub fn number(n: usize) -> Self {
        let mut amplitudes = vec![ZERO; n + 1];
        amplitudes[n] = ONE;
        Self { amplitudes }
    }

    /// Coherent state `|α⟩` expanded up to [`coherent_cutoff`]`(α)`.
    pub fn coherent(alpha: Complex64) -> Result<Self> {
        Self::coherent_with_cutoff(alpha, coherent_cutoff(alpha))
    }

    /// Coherent state `|α⟩` expanded up to `cutoff`; the dropped Poisson tail
    /// must stay below [`FOCK_NORM_TOL`].
    pub fn coherent_with_cutoff(alpha: Complex64, cutoff: usize) -> Result<Self> {
        Self::new(coherent_amplitudes(alpha, cutoff))
    }

    /// Amplitudes `c_0..c_N`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Highest photon number carried.
    pub fn max_photons(&self) -> usize {
        self.amplitudes.len().saturating_sub(1)
    }
}

/// Number-state expansion `e^{−|α|²/2} αᵐ/√m!` for `m = 0..=cutoff`, unnormalized.
pub fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    out.push(c);
    for m in 1..=cutoff {
        c = c * alpha / (m as f64).sqrt();
        out.push(c);
    }
    out
}

/// Fock cutoff `⌈|α|² + 10|α| + 20⌉` for expanding a coherent state.
pub fn coherent_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (a * a + 10.0 * a + 20.0).ceil() as usize
}

/// Truncated density matrix of a single mode in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    truncation_deficit: f64,
}

impl FockDensityMatrix {
    /// `|ψ⟩⟨ψ|` for number-state amplitudes `psi`.
    pub fn from_pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in psi {
            for b in psi {
                entries.push(a * b.conj());
            }
        }
        let trace: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        Self {
            dim,
            entries,
            truncation_deficit: 1.0 - trace,
        }
    }

    /// Basis size (cutoff + 1).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ρ_{mn}`
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.dim + n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `1 − Tr ρ`, the probability lost to the cutoff. Never renormalized away.
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    /// Tr ρ
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Tr ρ², computed as Σ|ρ_{mn}|².
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|ρ_{mn} − ρ_{nm}*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..self.dim {
            for n in m..self.dim {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise difference against another matrix, padding the
    /// smaller one with zeros.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let dim = self.dim.max(other.dim);
        let at = |r: &Self, m: usize, n: usize| {
            if m < r.dim && n < r.dim {
                r.get(m, n)
            } else {
                ZERO
            }
        };
        let mut worst = 0.0f64;
        for m in 0..dim {
            for n in 0..dim {
                worst = worst.max((at(self, m, n) - at(other, m, n)).norm());
            }
        }
        worst
    }
}

/// Reduced state of output mode `c` for a bus input `input`, with the drop
/// input in vacuum and the drop output `l` traced out.
///
/// The joint output is `Σ_{k,j} A(k,j)|k,j⟩` with `A(k,j) = c_{k+j}·amp_{k+j}(k)`
/// from [`multiphoton_joint_amplitudes`]; then `ρ_{kk′} = Σ_j A(k,j) A(k′,j)*`
/// for `k, k′ ≤ cutoff`.
pub fn reduced_density_c(
    input: &FockVector,
    m: &TransferMatrix2,
    cutoff: usize,
) -> Result<FockDensityMatrix> {
    m.check_unitary()?;
    let dim = cutoff + 1;
    let max_m = input.max_photons();
    let cols = max_m + 1;
    // joint[k * cols + j] = A(k, j)
    let mut joint = vec![ZERO; dim * cols];
    for (photons, &c) in input.amplitudes().iter().enumerate() {
        if c == ZERO {
            continue;
        }
        for (k, amp) in multiphoton_joint_amplitudes(photons, m).into_iter().enumerate() {
            if k < dim {
                joint[k * cols + (photons - k)] = c * amp;
            }
        }
    }
    let mut entries = vec![ZERO; dim * dim];
    for k in 0..dim {
        for kp in k..dim {
            let mut acc = ZERO;
            for j in 0..cols {
                acc += joint[k * cols + j] * joint[kp * cols + j].conj();
            }
            entries[k * dim + kp] = acc;
            entries[kp * dim + k] = acc.conj();
        }
    }
    let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
    let truncation_deficit = 1.0 - trace;
    if truncation_deficit > MAX_TRUNCATION_DEFICIT {
        return Err(Error::CutoffTooSmall {
            deficit: truncation_deficit,
        });
    }
    Ok(FockDensityMatrix {
        dim,
        entries,
        truncation_deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{balanced_params, beam_splitter_matrix};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fifty_fifty() -> TransferMatrix2 {
        beam_splitter_matrix(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    #[test]
    fn hom_dip_at_fifty_fifty() {
        let out = two_photon_output(&fifty_fifty()).unwrap();
        assert!(out.a11.norm() < 1e-16);
        assert!((out.p20() - 0.5).abs() < 1e-15);
        assert!((out.p02() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_keeps_photons_apart() {
        let out = two_photon_output(&TransferMatrix2::IDENTITY).unwrap();
        assert_eq!(out.a11, ONE);
        assert_eq!(out.a20, ZERO);
        assert_eq!(out.a02, ZERO);
    }

    #[test]
    fn three_db_ring_coincidence() {
        let m = transfer_matrix(&balanced_params(FRAC_1_SQRT_2, PI).unwrap()).unwrap();
        let out = two_photon_output(&m).unwrap();
        assert!((out.p11() - 49.0 / 81.0).abs() < 1e-14);
        assert!((out.p20() + out.p11() + out.p02() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_unitary_matrix_rejected() {
        let bad = TransferMatrix2 {
            t: c(0.9, 0.0),
            ..TransferMatrix2::IDENTITY
        };
        assert!(matches!(two_photon_output(&bad), Err(Error::NonUnitary { .. })));
        assert!(reduced_density_c(&FockVector::number(1), &bad, 1).is_err());
    }

    #[test]
    fn coincidence_at_resonance_and_degenerate_point() {
        assert!((coincidence_probability(&balanced_params(0.3, 0.0).unwrap()) - 1.0).abs() < 1e-12);
        assert_eq!(coincidence_probability(&balanced_params(1.0, 0.0).unwrap()), 1.0);
        let theta = 0.75f64.acos();
        assert!(coincidence_probability(&balanced_params(FRAC_1_SQRT_2, theta).unwrap()) < 1e-12);
        let p = balanced_params(FRAC_1_SQRT_2, PI).unwrap();
        let via_matrix = two_photon_output(&transfer_matrix(&p).unwrap()).unwrap().p11();
        assert!((coincidence_probability(&p) - via_matrix).abs() < 1e-15);
    }

    #[test]
    fn low_photon_number_amplitudes() {
        let m = fifty_fifty();
        assert_eq!(multiphoton_joint_amplitudes(0, &m), vec![ONE]);
        let one = multiphoton_joint_amplitudes(1, &m);
        assert_eq!(one, vec![m.s, m.t]);
        let two = multiphoton_joint_amplitudes(2, &m);
        // |0,2⟩: s², |1,1⟩: √2 t s, |2,0⟩: t²
        assert!((two[0] - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((two[1] - m.t * m.s * 2f64.sqrt()).norm() < 1e-15);
        assert!((two[2] - c(0.5, 0.0)).norm() < 1e-15);
        let total: f64 = two.iter().map(|z| z.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_split() {
        let crit = transfer_matrix(&balanced_params(0.5, 0.0).unwrap()).unwrap();
        let (ac, al) = coherent_output(&crit, c(2.0, 0.0));
        assert!(ac.norm() < 1e-15);
        assert!((al.norm() - 2.0).abs() < 1e-14);

        let alpha = c(0.3, -1.2);
        assert_eq!(coherent_output(&TransferMatrix2::IDENTITY, alpha), (alpha, ZERO));

        let m = transfer_matrix(&balanced_params(FRAC_1_SQRT_2, PI).unwrap()).unwrap();
        let (ac, al) = coherent_output(&m, ONE);
        assert!((ac - c(2.0 * 2f64.sqrt() / 3.0, 0.0)).norm() < 1e-15);
        assert!((al.norm() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mean_field_sinusoid() {
        let at = |phase: f64| TravelingFieldMode::new(1.0, 1.0, 0.0, phase, 0.0).unwrap();
        assert_eq!(mean_field_at(ZERO, &at(0.7)), 0.0);
        assert!(mean_field_at(ONE, &at(0.0)).abs() < 1e-15);
        // i(e^{iπ/2} − e^{−iπ/2}) = −2
        assert!((mean_field_at(ONE, &at(FRAC_PI_2)) + 2.0).abs() < 1e-15);
        assert!((mean_field_at(ONE, &at(-FRAC_PI_2)) - 2.0).abs() < 1e-15);

        let crit = transfer_matrix(&balanced_params(0.5, 0.0).unwrap()).unwrap();
        let (ac, _) = coherent_output(&crit, c(2.0, 0.0));
        for k in 0..20 {
            let mode = TravelingFieldMode::new(3.0, 2.0, 5.0, 0.1 * k as f64, 0.03 * k as f64).unwrap();
            assert_eq!(mean_field_at(ac, &mode), 0.0);
        }
        assert!(TravelingFieldMode::new(-1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn single_photon_reduction() {
        let m = transfer_matrix(&balanced_params(0.8, 1.3).unwrap()).unwrap();
        let rho = reduced_density_c(&FockVector::number(1), &m, 1).unwrap();
        assert!((rho.get(0, 0).re - m.s.norm_sqr()).abs() < 1e-12);
        assert!((rho.get(1, 1).re - m.t.norm_sqr()).abs() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn vacuum_reduction() {
        let m = transfer_matrix(&balanced_params(0.8, 1.3).unwrap()).unwrap();
        let rho = reduced_density_c(&FockVector::number(0), &m, 3).unwrap();
        assert_eq!(rho.get(0, 0), ONE);
        assert_eq!(rho.trace(), 1.0);
    }

    #[test]
    fn lossless_pass_keeps_input_pure() {
        let input = FockVector::new(vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.8)]).unwrap();
        let rho = reduced_density_c(&input, &TransferMatrix2::IDENTITY, 2).unwrap();
        let expected = FockDensityMatrix::from_pure(input.amplitudes());
        assert!(rho.max_abs_diff(&expected) < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn small_cutoff_is_reported() {
        let m = transfer_matrix(&balanced_params(0.9, 2.0).unwrap()).unwrap();
        let input = FockVector::coherent(c(1.5, 0.0)).unwrap();
        assert!(matches!(
            reduced_density_c(&input, &m, 2),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn coherent_vector_construction() {
        let v = FockVector::coherent(c(4.0, 0.0)).unwrap();
        assert_eq!(v.max_photons(), 76);
        assert!(FockVector::coherent_with_cutoff(c(2.0, 0.0), 5).is_err());
        assert!(FockVector::new(vec![c(0.5, 0.0)]).is_err());
    }

    #[test]
    fn creation_coefficients_are_normalized() {
        // (1 + a†²)|∅⟩ = |0⟩ + √2|2⟩
        let v = FockVector::from_creation_coefficients(&[ONE, ZERO, ONE]).unwrap();
        let a = v.amplitudes();
        assert!((a[0].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((a[2].re - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(FockVector::from_creation_coefficients(&[ZERO]).is_err());
    }
}
