//! Run configuration: a flat key=value format with command-line overrides.

use std::fmt;
use std::path::Path;

use gradflow_core::scalarfun::CorrectionKind;
use gradflow_core::specop::Grid;
use gradflow_core::tableau::registry_get;
use gradflow_core::Model;

use crate::error::CliError;
use crate::initial;

/// Everything needed to reproduce one trajectory run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: String,
    pub kind: CorrectionKind,
    pub model: String,
    pub theta: f64,
    pub theta_c: f64,
    pub eps: f64,
    pub dim: usize,
    pub m: usize,
    pub h: f64,
    pub origin: [f64; 2],
    pub tau: f64,
    pub t_final: f64,
    pub kappa: f64,
    pub ic: String,
    pub stride: usize,
    pub modified_energy: bool,
    pub stage_energies: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: String::new(),
            kind: CorrectionKind::Raw,
            model: "double-well".into(),
            theta: 0.8,
            theta_c: 1.0,
            eps: 0.1,
            dim: 1,
            m: 0,
            h: 0.0,
            origin: [0.0, 0.0],
            tau: 0.0,
            t_final: 0.0,
            kappa: 0.0,
            ic: String::new(),
            stride: 0,
            modified_energy: false,
            stage_energies: false,
        }
    }
}

pub fn parse_kind(s: &str) -> Result<CorrectionKind, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "raw" => Ok(CorrectionKind::Raw),
        "t" | "telescopic" => Ok(CorrectionKind::Telescopic),
        "n" | "nonlinear" | "nonlinear-translation" => Ok(CorrectionKind::NonlinearTranslation),
        other => Err(CliError::Usage(format!(
            "unknown correction kind `{other}` (expected raw, T or N)"
        ))),
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Usage(format!("config key `{key}`: {what} `{value}`"));
        let f = |v: &str| v.parse::<f64>().map_err(|_| bad("expected a number"));
        let u = |v: &str| v.parse::<usize>().map_err(|_| bad("expected an integer"));
        let b = |v: &str| v.parse::<bool>().map_err(|_| bad("expected true/false"));
        match key {
            "scheme" => self.scheme = value.to_string(),
            "kind" => self.kind = parse_kind(value)?,
            "model" => self.model = value.to_string(),
            "theta" => self.theta = f(value)?,
            "theta_c" => self.theta_c = f(value)?,
            "eps" => self.eps = f(value)?,
            "dim" => self.dim = u(value)?,
            "m" => self.m = u(value)?,
            "h" => self.h = f(value)?,
            // Domain length per axis; stored as the equivalent spacing.
            "length" => {
                if self.m == 0 {
                    return Err(CliError::Usage(
                        "config key `length` needs `m` to be set first".into(),
                    ));
                }
                self.h = f(value)? / self.m as f64;
            }
            "origin_x" => self.origin[0] = f(value)?,
            "origin_y" => self.origin[1] = f(value)?,
            "tau" => self.tau = f(value)?,
            "t_final" => self.t_final = f(value)?,
            "kappa" => self.kappa = f(value)?,
            "ic" => self.ic = value.to_string(),
            "stride" => self.stride = u(value)?,
            "modified_energy" => self.modified_energy = b(value)?,
            "stage_energies" => self.stage_energies = b(value)?,
            other => return Err(CliError::Usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat key=value file (blank lines and `#` comments ignored)
    /// on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{}:{}: expected key=value", path.display(), lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies `KEY=VALUE` strings from the command line.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), CliError> {
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("override `{item}` is not KEY=VALUE")))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Full validation; every run goes through this before any I/O.
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        registry_get(&self.scheme).map_err(|e| CliError::Usage(e.to_string()))?;
        match self.model.as_str() {
            "double-well" => {}
            "flory-huggins" => {
                if !(self.theta > 0.0 && self.theta < self.theta_c) {
                    return usage(format!(
                        "flory-huggins needs 0 < theta < theta_c, got theta={} theta_c={}",
                        self.theta, self.theta_c
                    ));
                }
            }
            other => return usage(format!("unknown model `{other}`")),
        }
        if !(self.dim == 1 || self.dim == 2) {
            return usage(format!("dim must be 1 or 2, got {}", self.dim));
        }
        if self.m < 2 {
            return usage(format!("m must be at least 2, got {}", self.m));
        }
        for (name, v) in [("h", self.h), ("tau", self.tau), ("t_final", self.t_final)] {
            if v.is_nan() || v <= 0.0 {
                return usage(format!("{name} must be positive, got {v}"));
            }
        }
        if self.eps < 0.0 || self.kappa < 0.0 {
            return usage(format!(
                "eps and kappa must be nonnegative, got eps={} kappa={}",
                self.eps, self.kappa
            ));
        }
        let steps = self.t_final / self.tau;
        if (steps - steps.round()).abs() > 1e-9 || steps.round() < 1.0 {
            return usage(format!(
                "t_final/tau = {steps} does not round to a positive step count"
            ));
        }
        initial::check(&self.ic, self.dim)?;
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.tau).round() as usize
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let grid = match self.dim {
            1 => Grid::new_1d(self.m, self.h, self.origin[0]),
            _ => Grid::new_2d(self.m, self.h, self.origin),
        };
        grid.map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn model(&self) -> Model {
        match self.model.as_str() {
            "flory-huggins" => Model::FloryHuggins { theta: self.theta, theta_c: self.theta_c },
            _ => Model::DoubleWell,
        }
    }

    pub fn eps2(&self) -> f64 {
        self.eps * self.eps
    }

    /// Canonical key=value listing; also the manifest echo and the input of
    /// the run id hash.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Short hex id hashed from the canonical text (FNV-1a).
    pub fn run_id(&self) -> String {
        let mut hash: u64 = 0xcbf29ce484222325;
        for byte in self.to_text().bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        format!("{hash:012x}")
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme={}", self.scheme)?;
        writeln!(f, "kind={}", self.kind.tag())?;
        writeln!(f, "model={}", self.model)?;
        if self.model == "flory-huggins" {
            writeln!(f, "theta={}", self.theta)?;
            writeln!(f, "theta_c={}", self.theta_c)?;
        }
        writeln!(f, "eps={}", self.eps)?;
        writeln!(f, "dim={}", self.dim)?;
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "h={}", self.h)?;
        writeln!(f, "origin_x={}", self.origin[0])?;
        if self.dim == 2 {
            writeln!(f, "origin_y={}", self.origin[1])?;
        }
        writeln!(f, "tau={}", self.tau)?;
        writeln!(f, "t_final={}", self.t_final)?;
        writeln!(f, "kappa={}", self.kappa)?;
        writeln!(f, "ic={}", self.ic)?;
        writeln!(f, "stride={}", self.stride)?;
        writeln!(f, "modified_energy={}", self.modified_energy)?;
        writeln!(f, "stage_energies={}", self.stage_energies)
    }
}
