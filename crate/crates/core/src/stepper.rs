//! One-step maps and trajectory integration for the stabilized
//! integrating-factor schemes and their corrected variants.
//!
//! A [`Stepper`] precomputes every diagonal multiplier array a scheme needs
//! for fixed `(tableau, kind, tau, kappa, operator)`, so each stage of a
//! step costs one forward and one inverse transform.

use rustfft::num_complex::Complex64;
use thiserror::Error;

use crate::models::{self, EnergyTrace, Model};
use crate::scalarfun::{self, CoefficientError, CorrectionKind};
use crate::specop::{GridFunction, OperatorError, SpectralOperator};
use crate::tableau::{validate, ButcherTableau};

#[derive(Debug, Error)]
pub enum StepError {
    #[error("operation does not accept correction kind {kind:?}")]
    WrongKind { kind: CorrectionKind },
    #[error("non-finite state at step {step}, stage {stage} (blow-up)")]
    NonFinite { step: usize, stage: usize },
    #[error("integration needs at least one step")]
    ZeroSteps,
    #[error("tableau `{name}` fails structural validation")]
    InvalidTableau { name: String },
    #[error("step size must be positive, got {tau}")]
    NonPositiveTau { tau: f64 },
    #[error("stabilization parameter must be nonnegative, got {kappa}")]
    NegativeKappa { kappa: f64 },
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// A tableau bound to a correction kind, a stabilization parameter and a
/// fixed step size.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    pub tableau: ButcherTableau,
    pub kind: CorrectionKind,
    pub kappa: f64,
    pub tau: f64,
}

impl SchemeSpec {
    pub fn new(
        tableau: ButcherTableau,
        kind: CorrectionKind,
        kappa: f64,
        tau: f64,
    ) -> Result<Self, StepError> {
        if tau <= 0.0 {
            return Err(StepError::NonPositiveTau { tau });
        }
        if kappa < 0.0 {
            return Err(StepError::NegativeKappa { kappa });
        }
        if !validate(&tableau).passed() {
            return Err(StepError::InvalidTableau { name: tableau.name().to_string() });
        }
        Ok(Self { tableau, kind, kappa, tau })
    }

    /// Conventional method label, e.g. `IF2-Heun`, `TIF3-Ralston`, `NIF1`.
    pub fn label(&self) -> String {
        let base = match self.tableau.name() {
            "IF1" => "IF1".to_string(),
            "Heun2" => "IF2-Heun".to_string(),
            "Ralston2" => "IF2-Ralston".to_string(),
            "Heun3" => "IF3-Heun".to_string(),
            "Ralston3" => "IF3-Ralston".to_string(),
            "Kutta4" => "IF4-Kutta".to_string(),
            other => format!("IF-{other}"),
        };
        match self.kind {
            CorrectionKind::Raw => base,
            CorrectionKind::Telescopic => format!("T{base}"),
            CorrectionKind::NonlinearTranslation => format!("N{base}"),
        }
    }
}

/// All stage values of one step; `stages[0]` is the input state and the
/// last entry is the step output.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub stages: Vec<GridFunction>,
    /// Flory-Huggins clip events encountered while evaluating the step.
    pub clipped_nodes: usize,
}

impl StepResult {
    /// The advanced state `u^n = U^{n,s+1}`.
    pub fn next(&self) -> &GridFunction {
        self.stages.last().expect("step result holds s+1 stages")
    }
}

/// Precomputed per-mode multiplier tables for one scheme on one operator.
struct StepPlan {
    /// `tau * (lambda + kappa)` per mode (`-z`).
    lam_tau: Vec<f64>,
    /// Raw scheme: `e^{c_{i+1} z}` per stage row; unused when corrected.
    exp_stage: Vec<Vec<f64>>,
    /// `coeff[i-1][j-1]`: raw => `tau * a_{i+1,j}(z)`, corrected =>
    /// `ahat_{i+1,j}(z)`.
    coeff: Vec<Vec<Vec<f64>>>,
}

/// A scheme bound to an operator and model, with multiplier caches ready.
pub struct Stepper<'a> {
    spec: &'a SchemeSpec,
    op: &'a SpectralOperator,
    model: &'a Model,
    plan: StepPlan,
}

impl<'a> Stepper<'a> {
    pub fn new(
        spec: &'a SchemeSpec,
        op: &'a SpectralOperator,
        model: &'a Model,
    ) -> Result<Self, StepError> {
        let t = &spec.tableau;
        let s = t.stages();
        let zs: Vec<f64> =
            op.eigenvalues().iter().map(|&lam| -spec.tau * (lam + spec.kappa)).collect();
        let lam_tau: Vec<f64> = zs.iter().map(|&z| -z).collect();
        let mut exp_stage = Vec::new();
        let mut coeff = vec![vec![Vec::new(); s]; s];
        match spec.kind {
            CorrectionKind::Raw => {
                for i in 1..=s {
                    let ci1 = t.c(i + 1);
                    exp_stage.push(zs.iter().map(|&z| (ci1 * z).exp()).collect());
                    for j in 1..=i {
                        coeff[i - 1][j - 1] = zs
                            .iter()
                            .map(|&z| spec.tau * scalarfun::raw_if_coeff(t, i, j, z))
                            .collect();
                    }
                }
            }
            _ => {
                for i in 1..=s {
                    for j in 1..=i {
                        let mut col = Vec::with_capacity(zs.len());
                        for &z in &zs {
                            col.push(scalarfun::corrected_coeff(t, spec.kind, i, j, z)?);
                        }
                        coeff[i - 1][j - 1] = col;
                    }
                }
            }
        }
        Ok(Self { spec, op, model, plan: StepPlan { lam_tau, exp_stage, coeff } })
    }

    pub fn spec(&self) -> &SchemeSpec {
        self.spec
    }

    /// Advances one step, retaining all stage values.
    pub fn step(&self, u: &GridFunction) -> Result<StepResult, StepError> {
        let s = self.spec.tableau.stages();
        let u_hat = self.op.forward(u)?;
        let mut stages = Vec::with_capacity(s + 1);
        stages.push(u.clone());
        let mut rhs_hats: Vec<Vec<Complex64>> = Vec::with_capacity(s);
        let mut clipped = 0usize;
        let corrected = self.spec.kind.is_corrected();
        for i in 1..=s {
            let (gk, c) = models::g_kappa(self.model, self.spec.kappa, &stages[i - 1]);
            clipped += c;
            let mut rhs = self.op.forward(&gk)?;
            if corrected {
                // Residual tau*g_kappa(U^j) - tau*L_kappa U^1, in Fourier space.
                for ((r, &lt), u0) in rhs.iter_mut().zip(&self.plan.lam_tau).zip(&u_hat) {
                    *r = self.spec.tau * *r - lt * u0;
                }
            }
            rhs_hats.push(rhs);
            let mut spec: Vec<Complex64> = if corrected {
                u_hat.clone()
            } else {
                u_hat
                    .iter()
                    .zip(&self.plan.exp_stage[i - 1])
                    .map(|(u0, &e)| e * u0)
                    .collect()
            };
            for j in 1..=i {
                let mults = &self.plan.coeff[i - 1][j - 1];
                for ((acc, &m), r) in spec.iter_mut().zip(mults).zip(&rhs_hats[j - 1]) {
                    *acc += m * r;
                }
            }
            let next = self.op.inverse(&mut spec);
            if !next.all_finite() {
                return Err(StepError::NonFinite { step: 0, stage: i });
            }
            stages.push(next);
        }
        Ok(StepResult { stages, clipped_nodes: clipped })
    }
}

/// One raw stabilized integrating-factor step
/// `U^{n,i+1} = e^{-c_{i+1} tau L_kappa} U^{n,1}
///  + tau sum_j a_{i+1,j}(0) e^{-(c_{i+1}-c_j) tau L_kappa} g_kappa(U^{n,j})`.
pub fn step_raw(
    spec: &SchemeSpec,
    op: &SpectralOperator,
    model: &Model,
    u: &GridFunction,
) -> Result<StepResult, StepError> {
    if spec.kind != CorrectionKind::Raw {
        return Err(StepError::WrongKind { kind: spec.kind });
    }
    Stepper::new(spec, op, model)?.step(u)
}

/// One corrected step
/// `U^{n,i+1} = U^{n,1} + sum_j ahat_{i+1,j}(-tau L_kappa)
///  [tau g_kappa(U^{n,j}) - tau L_kappa U^{n,1}]`.
/// States with `L_h u = g(u)` pointwise are fixed to roundoff at every stage.
pub fn step_corrected(
    spec: &SchemeSpec,
    op: &SpectralOperator,
    model: &Model,
    u: &GridFunction,
) -> Result<StepResult, StepError> {
    if !spec.kind.is_corrected() {
        return Err(StepError::WrongKind { kind: spec.kind });
    }
    Stepper::new(spec, op, model)?.step(u)
}

/// What [`integrate`] records along the trajectory.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegrateOptions {
    /// Also record the first-order modified energy.
    pub record_modified_energy: bool,
    /// Record `E[U^{n,j+1}]` for every stage of every step.
    pub record_stage_energies: bool,
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub final_state: GridFunction,
    pub trace: EnergyTrace,
    /// Per step, the stage energies `E[U^{n,2}]..E[U^{n,s+1}]`.
    pub stage_energies: Option<Vec<Vec<f64>>>,
    pub clipped_nodes: usize,
    pub steps: usize,
}

/// Advances `n_steps` fixed steps, recording the diagnostics selected in
/// `opts`. Aborts with the step index if any stage goes non-finite.
pub fn integrate(
    spec: &SchemeSpec,
    op: &SpectralOperator,
    model: &Model,
    u0: &GridFunction,
    n_steps: usize,
    opts: IntegrateOptions,
) -> Result<IntegrationResult, StepError> {
    integrate_with(spec, op, model, u0, n_steps, opts, |_, _| {})
}

/// [`integrate`] with a per-step observer; the observer sees the step index
/// (1-based) and the full stage set, which makes snapshotting and stage-law
/// checks possible without retaining the whole trajectory.
pub fn integrate_with(
    spec: &SchemeSpec,
    op: &SpectralOperator,
    model: &Model,
    u0: &GridFunction,
    n_steps: usize,
    opts: IntegrateOptions,
    mut observe: impl FnMut(usize, &StepResult),
) -> Result<IntegrationResult, StepError> {
    if n_steps == 0 {
        return Err(StepError::ZeroSteps);
    }
    let stepper = Stepper::new(spec, op, model)?;
    let mut trace = EnergyTrace::new(spec.tau, opts.record_modified_energy);
    let mut stage_energies = opts.record_stage_energies.then(Vec::new);
    let record = |u: &GridFunction,
                  t: f64,
                  trace: &mut EnergyTrace|
     -> Result<(), StepError> {
        let e = models::energy(op, model, u)?;
        let e_mod = if opts.record_modified_energy {
            Some(models::modified_energy_if1(op, model, spec.tau, spec.kappa, u)?)
        } else {
            None
        };
        trace.push(t, e, e_mod, u.max_norm());
        Ok(())
    };
    let mut u = u0.clone();
    record(&u, 0.0, &mut trace)?;
    let mut clipped = 0usize;
    for n in 1..=n_steps {
        let result = stepper.step(&u).map_err(|e| match e {
            StepError::NonFinite { stage, .. } => StepError::NonFinite { step: n, stage },
            other => other,
        })?;
        clipped += result.clipped_nodes;
        if let Some(all) = stage_energies.as_mut() {
            let mut per_stage = Vec::with_capacity(result.stages.len() - 1);
            for stage in &result.stages[1..] {
                per_stage.push(models::energy(op, model, stage)?);
            }
            all.push(per_stage);
        }
        observe(n, &result);
        u = result.stages.into_iter().last().expect("stages");
        record(&u, n as f64 * spec.tau, &mut trace)?;
    }
    Ok(IntegrationResult {
        final_state: u,
        trace,
        stage_energies,
        clipped_nodes: clipped,
        steps: n_steps,
    })
}
