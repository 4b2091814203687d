//! Nonlinear reaction terms, their potentials and the discrete energies.

use crate::scalarfun;
use crate::specop::{GridFunction, OperatorError, SpectralOperator};

/// Margin kept away from the Flory-Huggins log singularities at `u = +-1`.
pub const FLORY_HUGGINS_CLIP: f64 = 1e-11;

/// A reaction model `g(u) = -G'(u)` together with a suggested Lipschitz
/// scale for choosing the stabilization parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// `g(u) = u - u^3`, `G(u) = (u^2 - 1)^2 / 4`.
    DoubleWell,
    /// `g(u) = (theta/2) ln((1-u)/(1+u)) + theta_c u`, valid for `|u| < 1`
    /// and `0 < theta < theta_c`.
    FloryHuggins { theta: f64, theta_c: f64 },
}

impl Model {
    /// Suggested Lipschitz scale of `g` on the physically relevant range.
    /// For the double well this is `max |g'| = 2` on `[-1, 1]`; the
    /// Flory-Huggins slope is unbounded near `+-1`, so the hint is only the
    /// interior scale and the stabilization parameter stays a config input.
    pub fn lipschitz_hint(&self) -> f64 {
        match *self {
            Model::DoubleWell => 2.0,
            Model::FloryHuggins { theta, theta_c } => theta + theta_c,
        }
    }

    fn clip(&self, u: f64) -> (f64, bool) {
        match self {
            Model::DoubleWell => (u, false),
            Model::FloryHuggins { .. } => {
                let limit = 1.0 - FLORY_HUGGINS_CLIP;
                if u > limit {
                    (limit, true)
                } else if u < -limit {
                    (-limit, true)
                } else {
                    (u, false)
                }
            }
        }
    }

    /// Pointwise reaction term; Flory-Huggins arguments are clipped to
    /// `|u| <= 1 - 1e-11` first.
    pub fn g_scalar(&self, u: f64) -> f64 {
        match *self {
            Model::DoubleWell => u - u * u * u,
            Model::FloryHuggins { theta, theta_c } => {
                let (u, _) = self.clip(u);
                0.5 * theta * ((1.0 - u) / (1.0 + u)).ln() + theta_c * u
            }
        }
    }

    /// Pointwise potential `G(u)`, clipped the same way as [`g_scalar`].
    ///
    /// [`g_scalar`]: Model::g_scalar
    pub fn potential_scalar(&self, u: f64) -> f64 {
        match *self {
            Model::DoubleWell => {
                let w = u * u - 1.0;
                0.25 * w * w
            }
            Model::FloryHuggins { theta, theta_c } => {
                let (u, _) = self.clip(u);
                0.5 * theta * ((1.0 + u) * (1.0 + u).ln() + (1.0 - u) * (1.0 - u).ln())
                    - 0.5 * theta_c * u * u
            }
        }
    }
}

/// Pointwise `g(u)`; the second value counts nodes whose argument hit the
/// Flory-Huggins clip limit, so silent saturation stays observable.
pub fn g_eval(m: &Model, u: &GridFunction) -> (GridFunction, usize) {
    let mut clipped = 0;
    let values = u
        .values
        .iter()
        .map(|&x| {
            if m.clip(x).1 {
                clipped += 1;
            }
            m.g_scalar(x)
        })
        .collect();
    (GridFunction::new(values), clipped)
}

/// Stabilized reaction term `g_kappa(u) = kappa*u + g(u)`.
pub fn g_kappa(m: &Model, kappa: f64, u: &GridFunction) -> (GridFunction, usize) {
    let (mut g, clipped) = g_eval(m, u);
    for (gv, &uv) in g.values.iter_mut().zip(&u.values) {
        *gv += kappa * uv;
    }
    (g, clipped)
}

/// Discrete original energy
/// `E[u] = h^dim * (1/2 <u, L_h u> + sum_i G(u_i))`, which approximates the
/// continuum integral.
pub fn energy(op: &SpectralOperator, m: &Model, u: &GridFunction) -> Result<f64, OperatorError> {
    let lu = op.apply_linear(0.0, u)?;
    let quad: f64 = u.values.iter().zip(&lu.values).map(|(a, b)| a * b).sum();
    let pot: f64 = u.values.iter().map(|&x| m.potential_scalar(x)).sum();
    Ok(op.grid().cell_measure() * (0.5 * quad + pot))
}

/// Modified energy of the first-order integrating-factor scheme:
/// `E[u] + (1/(2 tau)) h^dim <(e^{tau L_kappa} - tau L_kappa - I) u, u>`.
/// The added quadratic term is nonnegative, so this always dominates `E`.
pub fn modified_energy_if1(
    op: &SpectralOperator,
    m: &Model,
    tau: f64,
    kappa: f64,
    u: &GridFunction,
) -> Result<f64, OperatorError> {
    assert!(tau > 0.0, "step size must be positive");
    let bu = op.apply_fn(scalarfun::beta, tau, kappa, u)?;
    Ok(energy(op, m, u)? + op.inner(&bu, u) / (2.0 * tau))
}

/// Per-step diagnostics of one trajectory: times, original energy, optional
/// modified energy and maximum norms.
#[derive(Debug, Clone)]
pub struct EnergyTrace {
    pub tau: f64,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub modified_energy: Option<Vec<f64>>,
    pub max_norm: Vec<f64>,
}

impl EnergyTrace {
    pub fn new(tau: f64, with_modified: bool) -> Self {
        Self {
            tau,
            times: Vec::new(),
            energy: Vec::new(),
            modified_energy: with_modified.then(Vec::new),
            max_norm: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, e: f64, e_mod: Option<f64>, max_norm: f64) {
        if let Some(last) = self.times.last() {
            assert!(t > *last, "trace times must be strictly increasing");
        }
        self.times.push(t);
        self.energy.push(e);
        if let Some(col) = self.modified_energy.as_mut() {
            col.push(e_mod.expect("modified energy column is enabled"));
        }
        self.max_norm.push(max_norm);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of upward jumps of the energy column larger than `tol`.
    pub fn energy_increase_events(&self, tol: f64) -> usize {
        self.energy.windows(2).filter(|w| w[1] - w[0] > tol).count()
    }
}
