//! Sweep configuration: command-line flags layered over a flat `key=value` file.
//!
//! File keys are the long flag names without the leading dashes, e.g.
//! `theta-steps = 400`. Blank lines and lines starting with `#` are ignored.
//! Flags given on the command line win over file values.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use homm_ring_core::GridAxis;
use thiserror::Error;

use crate::output::Format;

/// Predefined θ windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// `[0, 2π]`
    ZeroToTwoPi,
    /// `[−π, π]`
    MinusPiToPi,
}

impl Window {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Window::ZeroToTwoPi => (0.0, TAU),
            Window::MinusPiToPi => (-PI, PI),
        }
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0..2pi" => Ok(Window::ZeroToTwoPi),
            "-pi..pi" => Ok(Window::MinusPiToPi),
            other => Err(format!("unknown window `{other}` (expected 0..2pi or -pi..pi)")),
        }
    }
}

/// How `manifold-curve` obtains its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurveMethod {
    /// Sample the closed-form curve τ(θ).
    #[default]
    ClosedForm,
    /// Bisect the weak constraint over a balanced (θ, τ) grid.
    Trace,
}

impl FromStr for CurveMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed-form" => Ok(CurveMethod::ClosedForm),
            "trace" => Ok(CurveMethod::Trace),
            other => Err(format!("unknown method `{other}` (expected closed-form or trace)")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    MissingEquals { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value `{value}` for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("{field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
}

/// Every tunable of every subcommand. Unset fields fall back to the
/// subcommand's defaults.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct SweepConfig {
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub theta_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta_max: Option<f64>,
    #[arg(long)]
    pub eta_steps: Option<usize>,
    /// Single τ value.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Single η value.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Single θ value, rad.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Coherent input amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Validation tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// θ window: `0..2pi` or `-pi..pi`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `closed-form` or `trace` (manifold-curve).
    #[arg(long)]
    pub method: Option<CurveMethod>,
    /// Number of random draws (oracle-check).
    #[arg(long)]
    pub draws: Option<usize>,
    /// RNG seed (oracle-check).
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_field<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        line,
        key: key.to_owned(),
        value: value.to_owned(),
        reason: e.to_string(),
    })
}

fn set<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError::DuplicateKey {
            line,
            key: key.to_owned(),
        });
    }
    *slot = Some(value);
    Ok(())
}

impl SweepConfig {
    /// Parses a `key = value` config file.
    pub fn parse_file(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(ConfigError::MissingEquals { line })?;
            let (key, value) = (key.trim(), value.trim());
            macro_rules! field {
                ($slot:ident) => {
                    set(&mut cfg.$slot, parse_field(line, key, value)?, line, key)?
                };
            }
            match key {
                "theta-min" => field!(theta_min),
                "theta-max" => field!(theta_max),
                "theta-steps" => field!(theta_steps),
                "tau-min" => field!(tau_min),
                "tau-max" => field!(tau_max),
                "tau-steps" => field!(tau_steps),
                "eta-min" => field!(eta_min),
                "eta-max" => field!(eta_max),
                "eta-steps" => field!(eta_steps),
                "tau" => field!(tau),
                "eta" => field!(eta),
                "theta" => field!(theta),
                "alpha" => field!(alpha),
                "tol" => field!(tol),
                "window" => field!(window),
                "format" => field!(format),
                "out" => field!(out),
                "method" => field!(method),
                "draws" => field!(draws),
                "seed" => field!(seed),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_owned(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    /// Fills every unset field of `self` from `base`.
    pub fn or(self, base: Self) -> Self {
        Self {
            theta_min: self.theta_min.or(base.theta_min),
            theta_max: self.theta_max.or(base.theta_max),
            theta_steps: self.theta_steps.or(base.theta_steps),
            tau_min: self.tau_min.or(base.tau_min),
            tau_max: self.tau_max.or(base.tau_max),
            tau_steps: self.tau_steps.or(base.tau_steps),
            eta_min: self.eta_min.or(base.eta_min),
            eta_max: self.eta_max.or(base.eta_max),
            eta_steps: self.eta_steps.or(base.eta_steps),
            tau: self.tau.or(base.tau),
            eta: self.eta.or(base.eta),
            theta: self.theta.or(base.theta),
            alpha: self.alpha.or(base.alpha),
            tol: self.tol.or(base.tol),
            window: self.window.or(base.window),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            method: self.method.or(base.method),
            draws: self.draws.or(base.draws),
            seed: self.seed.or(base.seed),
        }
    }

    /// θ axis: explicit `theta-min`/`theta-max`, else the window, else `default_window`.
    pub fn theta_axis(&self, default_window: Window, default_steps: usize) -> Result<GridAxis, ConfigError> {
        let (wmin, wmax) = self.window.unwrap_or(default_window).bounds();
        axis(
            "theta",
            self.theta_min.unwrap_or(wmin),
            self.theta_max.unwrap_or(wmax),
            self.theta_steps.unwrap_or(default_steps),
        )
    }

    pub fn tau_axis(&self, default: (f64, f64, usize)) -> Result<GridAxis, ConfigError> {
        let axis = axis(
            "tau",
            self.tau_min.unwrap_or(default.0),
            self.tau_max.unwrap_or(default.1),
            self.tau_steps.unwrap_or(default.2),
        )?;
        unit_interval("tau", axis)
    }

    pub fn eta_axis(&self, default: (f64, f64, usize)) -> Result<GridAxis, ConfigError> {
        let axis = axis(
            "eta",
            self.eta_min.unwrap_or(default.0),
            self.eta_max.unwrap_or(default.1),
            self.eta_steps.unwrap_or(default.2),
        )?;
        unit_interval("eta", axis)
    }

    /// Validation tolerance, which must be positive.
    pub fn tol_or(&self, default: f64) -> Result<f64, ConfigError> {
        let tol = self.tol.unwrap_or(default);
        if !(tol > 0.0) {
            return Err(ConfigError::Invalid {
                field: "tol",
                reason: format!("must be positive, got {tol}"),
            });
        }
        Ok(tol)
    }
}

fn axis(field: &'static str, min: f64, max: f64, steps: usize) -> Result<GridAxis, ConfigError> {
    GridAxis::new(min, max, steps).map_err(|e| ConfigError::Invalid {
        field,
        reason: e.to_string(),
    })
}

fn unit_interval(field: &'static str, axis: GridAxis) -> Result<GridAxis, ConfigError> {
    if axis.min() < 0.0 || axis.max() > 1.0 {
        return Err(ConfigError::Invalid {
            field,
            reason: "coupler amplitudes must lie in [0, 1]".to_owned(),
        });
    }
    Ok(axis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let cfg = SweepConfig::parse_file(
            "# balanced sweep\n\ntau-min = 0.1\ntau-steps=11\nwindow = -pi..pi\nformat = json\nout = data/x.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.tau_min, Some(0.1));
        assert_eq!(cfg.tau_steps, Some(11));
        assert_eq!(cfg.window, Some(Window::MinusPiToPi));
        assert_eq!(cfg.format, Some(Format::Json));
        assert_eq!(cfg.out, Some(PathBuf::from("data/x.csv")));
    }

    #[test]
    fn reports_line_and_field() {
        assert_eq!(
            SweepConfig::parse_file("tau = 0.5\nbogus = 1\n"),
            Err(ConfigError::UnknownKey { line: 2, key: "bogus".into() })
        );
        assert_eq!(
            SweepConfig::parse_file("\n\ntau-steps\n"),
            Err(ConfigError::MissingEquals { line: 3 })
        );
        let err = SweepConfig::parse_file("tau-steps = many\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { line: 1, ref key, .. } if key == "tau-steps"));
        assert!(err.to_string().starts_with("line 1: bad value `many` for `tau-steps`"));
        assert_eq!(
            SweepConfig::parse_file("tau = 1\ntau = 2\n"),
            Err(ConfigError::DuplicateKey { line: 2, key: "tau".into() })
        );
    }

    #[test]
    fn flags_win_over_file() {
        let file = SweepConfig {
            tau: Some(0.3),
            theta_steps: Some(10),
            ..Default::default()
        };
        let flags = SweepConfig {
            tau: Some(0.7),
            ..Default::default()
        };
        let merged = flags.or(file);
        assert_eq!(merged.tau, Some(0.7));
        assert_eq!(merged.theta_steps, Some(10));
    }

    #[test]
    fn axis_resolution() {
        let cfg = SweepConfig {
            window: Some(Window::MinusPiToPi),
            ..Default::default()
        };
        let axis = cfg.theta_axis(Window::ZeroToTwoPi, 5).unwrap();
        assert_eq!((axis.min(), axis.max(), axis.steps()), (-PI, PI, 5));
        let custom = SweepConfig {
            theta_min: Some(0.5),
            ..cfg
        };
        assert_eq!(custom.theta_axis(Window::ZeroToTwoPi, 5).unwrap().min(), 0.5);
        let bad = SweepConfig {
            tau_steps: Some(1),
            ..Default::default()
        };
        assert!(bad.tau_axis((0.0, 1.0, 10)).is_err());
        let outside = SweepConfig {
            eta_max: Some(1.5),
            ..Default::default()
        };
        assert!(outside.eta_axis((0.0, 1.0, 10)).is_err());
        assert!(SweepConfig { tol: Some(0.0), ..Default::default() }.tol_or(1e-9).is_err());
    }
}
