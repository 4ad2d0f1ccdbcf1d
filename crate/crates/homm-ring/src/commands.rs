//! Subcommand implementations producing [`Table`]s.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use homm_ring_core::fock::coherent_cutoff;
use homm_ring_core::homm::{centered_angle, CellTrace};
use homm_ring_core::{
    balanced_params, coincidence_probability, critical_coupling_amplitudes, dip_angles,
    manifold_tau_of_theta, pathsum_transfer, reduced_density_c, transfer_matrix, whommc_residual,
    Complex64, CouplerParams, DipAngles, FockVector, ManifoldPoint, PathSumConfig,
    RingDeviceParams, TraceMode, TraceTolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, CurveMethod, SweepConfig, Window};
use crate::output::{Cell, Table};
use crate::parallel;

/// Default P(1,1) tolerance for manifold validation.
pub const DEFAULT_P11_TOL: f64 = 1e-9;
/// Default entrywise tolerance for the path-sum oracle.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Surface,
    ManifoldCurve,
    ManifoldSurface,
    Dips,
    CriticalCoupling,
    LossDemo,
    OracleCheck,
    CorrectOperatingPoint,
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] homm_ring_core::Error),
}

/// Result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// Informational lines for stderr.
    pub notes: Vec<String>,
    /// Rows that failed physics validation; nonzero maps to exit status 2.
    pub validation_failures: usize,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Self {
            table,
            notes: Vec::new(),
            validation_failures: 0,
        }
    }
}

pub fn run(cmd: Subcommand, cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    match cmd {
        Subcommand::Surface => surface(cfg),
        Subcommand::ManifoldCurve => manifold_curve(cfg),
        Subcommand::ManifoldSurface => manifold_surface(cfg),
        Subcommand::Dips => dips(cfg),
        Subcommand::CriticalCoupling => critical_coupling(cfg),
        Subcommand::LossDemo => loss_demo(cfg),
        Subcommand::OracleCheck => oracle_check(cfg),
        Subcommand::CorrectOperatingPoint => correct_operating_point(cfg),
    }
}

fn unit_value(field: &'static str, v: f64) -> Result<f64, ConfigError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(ConfigError::Invalid {
            field,
            reason: format!("must lie in [0, 1], got {v}"),
        })
    }
}

/// P(1,1) over a (τ, θ) grid; balanced unless `eta` is fixed.
fn surface(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let theta = cfg.theta_axis(Window::ZeroToTwoPi, 201)?;
    let tau = cfg.tau_axis((0.0, 1.0, 101))?;
    let eta = cfg.eta.map(|e| unit_value("eta", e)).transpose()?;
    let rows: Vec<Vec<[f64; 4]>> = tau
        .values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            let e = eta.unwrap_or(t);
            theta
                .values()
                .map(|th| {
                    let p = RingDeviceParams::real_couplers(t, e, th).expect("validated axes");
                    [th, t, e, coincidence_probability(&p)]
                })
                .collect()
        })
        .collect();
    let mut table = Table::new(&["theta", "tau", "eta", "p11"]);
    for row in rows.into_iter().flatten() {
        table.push(row);
    }
    Ok(Outcome::new(table))
}

fn merged_cell_rows(cell: CellTrace) -> Vec<ManifoldPoint> {
    let mut rows = cell.points;
    rows.extend(cell.rejected);
    rows.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    rows
}

fn traced_rows(mode: &TraceMode, tol: &TraceTolerances) -> Result<(Vec<ManifoldPoint>, usize, usize), CommandError> {
    let cells = parallel::trace_cells(mode, tol)?;
    let excluded = cells.iter().map(|c| c.excluded.len()).sum();
    let rejected = cells.iter().map(|c| c.rejected.len()).sum();
    let rows = cells.into_iter().flat_map(merged_cell_rows).collect();
    Ok((rows, excluded, rejected))
}

fn manifold_notes(out: &mut Outcome, excluded: usize) {
    if out.table.is_empty() {
        out.notes.push("warning: empty manifold, 0 rows emitted".to_owned());
    }
    if excluded > 0 {
        out.notes.push(format!("{excluded} degenerate point(s) excluded"));
    }
    if out.validation_failures > 0 {
        out.notes.push(format!(
            "validation failed for {} row(s)",
            out.validation_failures
        ));
    }
}

fn manifold_curve(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let p11_tol = cfg.tol_or(DEFAULT_P11_TOL)?;
    let tol = TraceTolerances::with_p11(p11_tol);
    let mut table = Table::new(&["theta", "tau", "residual_weak", "p11"]);
    let (failures, excluded) = match cfg.method.unwrap_or_default() {
        CurveMethod::ClosedForm => {
            let theta = cfg.theta_axis(Window::ZeroToTwoPi, 400)?;
            let (mut failures, mut excluded) = (0, 0);
            for th in theta.values() {
                let Ok(tau) = manifold_tau_of_theta(th) else {
                    excluded += 1;
                    continue;
                };
                let p = balanced_params(tau, th)?;
                let residual = whommc_residual(&p);
                let p11 = coincidence_probability(&p);
                if !(p11 < tol.p11 && residual.abs() < tol.residual) {
                    failures += 1;
                }
                table.push([th, tau, residual, p11]);
            }
            (failures, excluded)
        }
        CurveMethod::Trace => {
            let mode = TraceMode::Balanced {
                theta: cfg.theta_axis(Window::ZeroToTwoPi, 400)?,
                tau: cfg.tau_axis((0.45, 0.95, 200))?,
            };
            let (rows, excluded, rejected) = traced_rows(&mode, &tol)?;
            for pt in rows {
                table.push([pt.theta, pt.tau, pt.residual_weak, pt.p11]);
            }
            (rejected, excluded)
        }
    };
    let mut out = Outcome::new(table);
    out.validation_failures = failures;
    manifold_notes(&mut out, excluded);
    Ok(out)
}

fn manifold_surface(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let tol = TraceTolerances::with_p11(cfg.tol_or(DEFAULT_P11_TOL)?);
    let mode = TraceMode::Unbalanced {
        theta: cfg.theta_axis(Window::ZeroToTwoPi, 200)?,
        tau: cfg.tau_axis((0.05, 0.95, 60))?,
        eta: cfg.eta_axis((0.05, 0.95, 60))?,
    };
    let (rows, excluded, rejected) = traced_rows(&mode, &tol)?;
    let mut table = Table::new(&["theta", "tau", "eta", "residual_weak", "p11"]);
    for pt in rows {
        table.push([pt.theta, pt.tau, pt.eta, pt.residual_weak, pt.p11]);
    }
    let mut out = Outcome::new(table);
    out.validation_failures = rejected;
    manifold_notes(&mut out, excluded);
    Ok(out)
}

fn dips(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let taus: Vec<f64> = match cfg.tau {
        Some(t) => vec![t],
        None => cfg.tau_axis((0.05, 0.95, 19))?.values().collect(),
    };
    let window = cfg.window.unwrap_or(Window::MinusPiToPi);
    let mut table = Table::new(&["tau", "theta_dip", "p11"]);
    let mut without = 0;
    for tau in taus {
        let Some(angles) = dip_angles(tau).angles() else {
            without += 1;
            continue;
        };
        let mut angles = angles.map(|a| match window {
            Window::MinusPiToPi => a,
            Window::ZeroToTwoPi if a < 0.0 => a + TAU,
            Window::ZeroToTwoPi => a,
        });
        angles.sort_by(f64::total_cmp);
        for theta in angles {
            let p11 = coincidence_probability(&balanced_params(tau, theta)?);
            table.push([tau, theta, p11]);
        }
    }
    let mut out = Outcome::new(table);
    if without > 0 {
        out.notes.push(format!("{without} tau value(s) without H-O-M dips"));
    }
    Ok(out)
}

fn critical_coupling(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let taus: Vec<f64> = match cfg.tau {
        Some(t) => vec![t],
        None => cfg.tau_axis((0.05, 0.95, 19))?.values().collect(),
    };
    let etas: Vec<f64> = match cfg.eta {
        Some(e) => vec![e],
        None => cfg.eta_axis((0.05, 0.95, 19))?.values().collect(),
    };
    let alpha = cfg.alpha.unwrap_or(1.0);
    let mut table = Table::new(&[
        "tau",
        "eta",
        "alpha_direct",
        "alpha_feedback",
        "ratio",
        "t_magnitude",
    ]);
    for &tau in &taus {
        for &eta in &etas {
            let b = critical_coupling_amplitudes(tau, eta, alpha)?;
            let t = transfer_matrix(&RingDeviceParams::real_couplers(tau, eta, 0.0)?)?.t;
            table.push([tau, eta, b.alpha_direct, b.alpha_feedback, b.ratio, t.norm()]);
        }
    }
    Ok(Outcome::new(table))
}

fn loss_demo(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let tau = unit_value("tau", cfg.tau.unwrap_or(FRAC_1_SQRT_2))?;
    let eta = unit_value("eta", cfg.eta.unwrap_or(tau))?;
    let theta = cfg.theta.unwrap_or(PI);
    let alpha = Complex64::new(cfg.alpha.unwrap_or(1.0), 0.0);
    let m = transfer_matrix(&RingDeviceParams::real_couplers(tau, eta, theta)?)?;
    let input = FockVector::coherent(alpha)?;
    let cutoff = coherent_cutoff(alpha);
    let rho = reduced_density_c(&input, &m, cutoff)?;
    let mut table = Table::new(&["m", "n", "re", "im"]);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let z = rho.get(i, j);
            table.push([Cell::Int(i), Cell::Int(j), Cell::Float(z.re), Cell::Float(z.im)]);
        }
    }
    let mut out = Outcome::new(table);
    out.notes.push(format!(
        "cutoff {cutoff}, truncation deficit {:e}, purity {}",
        rho.truncation_deficit(),
        rho.purity()
    ));
    Ok(out)
}

fn random_coupler(rng: &mut ChaCha8Rng, through: f64) -> CouplerParams {
    let cross = (1.0 - through * through).max(0.0).sqrt();
    CouplerParams::new(
        Complex64::from_polar(cross, rng.random_range(-PI..PI)),
        Complex64::from_polar(through, rng.random_range(-PI..PI)),
    )
    .expect("lossless by construction")
}

fn oracle_check(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let tol = cfg.tol_or(DEFAULT_ORACLE_TOL)?;
    let draws = cfg.draws.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    let mut table = Table::new(&[
        "draw",
        "tau_abs",
        "eta_abs",
        "theta",
        "round_trips",
        "max_abs_error",
    ]);
    let mut failures = 0;
    for draw in 0..draws {
        let (tau, eta) = loop {
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            if a * b <= 0.95 {
                break (a, b);
            }
        };
        let coupler_a = random_coupler(&mut rng, tau);
        let coupler_f = random_coupler(&mut rng, eta);
        let theta = rng.random_range(-PI..PI);
        let phi1 = rng.random_range(-PI..PI);
        let p = RingDeviceParams::new(coupler_a, coupler_f, theta, phi1, theta - phi1)?;
        let path_cfg = PathSumConfig::for_device(&p);
        let err = pathsum_transfer(&p, &path_cfg)?.max_abs_diff(&transfer_matrix(&p)?);
        if !(err <= tol) {
            failures += 1;
        }
        table.push([
            Cell::Int(draw),
            Cell::Float(tau),
            Cell::Float(eta),
            Cell::Float(theta),
            Cell::Int(path_cfg.max_round_trips),
            Cell::Float(err),
        ]);
    }
    let mut out = Outcome::new(table);
    out.validation_failures = failures;
    if failures > 0 {
        out.notes.push(format!("{failures} of {draws} draw(s) exceed tolerance {tol:e}"));
    }
    Ok(out)
}

/// Moves a balanced operating point vertically (in τ, at fixed θ) onto the
/// manifold curve.
fn correct_operating_point(cfg: &SweepConfig) -> Result<Outcome, CommandError> {
    let tol = cfg.tol_or(DEFAULT_P11_TOL)?;
    let theta = cfg.theta.ok_or(ConfigError::Missing("theta"))?;
    let tau_a = cfg.tau.ok_or(ConfigError::Missing("tau"))?;
    let p11_a = coincidence_probability(&balanced_params(tau_a, theta)?);
    let tau_b = if p11_a < tol {
        tau_a
    } else {
        manifold_tau_of_theta(theta)?
    };
    let p11_b = coincidence_probability(&balanced_params(tau_b, theta)?);
    let mut out = Outcome::new(Table::new(&[
        "theta",
        "tau_a",
        "p11_a",
        "tau_b",
        "p11_b",
        "delta_tau",
    ]));
    out.table.push([theta, tau_a, p11_a, tau_b, p11_b, tau_b - tau_a]);
    // the corrected device must have its dip at the requested phase
    let dip_matches = match dip_angles(tau_b) {
        DipAngles::Pair { theta: dip } => (dip - centered_angle(theta).abs()).abs() < 1e-6,
        DipAngles::None => false,
    };
    if !(p11_b < tol) || !dip_matches {
        out.validation_failures = 1;
        out.notes.push(format!("corrected point has P(1,1) = {p11_b:e}"));
    }
    Ok(out)
}
