//! Temporal convergence studies: maximum-norm errors against a reference
//! trajectory sampled at shared times, and the observed orders.

use std::collections::HashMap;

use gradflow_core::par;
use gradflow_core::specop::{build_operator, GridFunction, SpectralOperator};
use gradflow_core::stepper::{self, IntegrateOptions, SchemeSpec};
use gradflow_core::tableau::registry_get;
use gradflow_core::Model;

use crate::config::RunConfig;
use crate::error::CliError;

/// Choice of reference trajectory.
#[derive(Debug, Clone)]
pub enum Reference {
    /// Same scheme at `min(taus) / divide`.
    SelfFinest { divide: u32 },
    /// An explicit reference step size (same scheme).
    FixedTau { tau: f64 },
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub scheme_label: String,
    pub taus: Vec<f64>,
    /// `e(tau) = max_n |u^n - u*(t_n)|_inf` per step size.
    pub errors: Vec<f64>,
    /// `log2(e(2 tau) / e(tau))` per adjacent pair.
    pub pair_orders: Vec<f64>,
    /// Mean of the pairwise orders (the slope across the whole ladder).
    pub mean_order: f64,
    pub ref_tau: f64,
}

impl ConvergenceTable {
    pub fn text_table(&self) -> String {
        let mut out = format!(
            "{} (reference tau = {})\n{:>12} {:>14} {:>8}\n",
            self.scheme_label, self.ref_tau, "tau", "error", "order"
        );
        for (i, (tau, err)) in self.taus.iter().zip(&self.errors).enumerate() {
            let order = if i == 0 {
                "-".to_string()
            } else {
                format!("{:.3}", self.pair_orders[i - 1])
            };
            out.push_str(&format!("{tau:>12.6} {err:>14.6e} {order:>8}\n"));
        }
        out.push_str(&format!("mean order: {:.3}\n", self.mean_order));
        out
    }

    pub fn csv_string(&self) -> String {
        let mut out = String::from("tau,error,order\n");
        for (i, (tau, err)) in self.taus.iter().zip(&self.errors).enumerate() {
            let order = if i == 0 {
                String::new()
            } else {
                format!("{:.16e}", self.pair_orders[i - 1])
            };
            out.push_str(&format!("{tau:.16e},{err:.16e},{order}\n"));
        }
        out
    }
}

fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Number of reference steps per step of size `tau`, or an error when the
/// grids do not nest.
fn nesting(tau: f64, ref_tau: f64) -> Result<usize, CliError> {
    let ratio = tau / ref_tau;
    if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
        return Err(CliError::Usage(format!(
            "time grids do not nest: tau = {tau} is not an integer multiple of reference {ref_tau}"
        )));
    }
    Ok(ratio.round() as usize)
}

/// Runs the scheme at each `tau` and measures the maximum-norm error over
/// all of its steps against the reference trajectory at the shared times.
pub fn converge(
    config: &RunConfig,
    taus: &[f64],
    reference: Reference,
) -> Result<ConvergenceTable, CliError> {
    config.validate()?;
    if taus.len() < 2 {
        return Err(CliError::Usage("need at least two step sizes".into()));
    }
    for w in taus.windows(2) {
        let ratio = w[0] / w[1];
        if (ratio - 2.0).abs() > 1e-9 {
            return Err(CliError::Usage(format!(
                "step sizes must halve: got consecutive taus {} and {}",
                w[0], w[1]
            )));
        }
    }
    let tau_min = *taus.last().expect("nonempty");
    let ref_tau = match reference {
        Reference::SelfFinest { divide } => tau_min / divide as f64,
        Reference::FixedTau { tau } => tau,
    };
    if ref_tau >= tau_min {
        return Err(CliError::Usage(format!(
            "reference tau {ref_tau} must be strictly smaller than the smallest step size {tau_min}"
        )));
    }

    let grid = config.grid()?;
    let op = build_operator(grid, config.eps2()).map_err(|e| CliError::Usage(e.to_string()))?;
    let model = config.model();
    let tableau = registry_get(&config.scheme).map_err(|e| CliError::Usage(e.to_string()))?;
    let u0 = crate::initial::build(&config.ic, &grid, config.eps)?;

    // Reference steps at which some coarse run needs a state.
    let n_ref = (config.t_final / ref_tau).round() as usize;
    let mut needed: Vec<usize> = Vec::new();
    for &tau in taus {
        let stride = nesting(tau, ref_tau)?;
        let n = (config.t_final / tau).round() as usize;
        for k in 1..=n {
            needed.push(k * stride);
        }
    }
    needed.sort_unstable();
    needed.dedup();
    if let Some(&last) = needed.last() {
        if last > n_ref {
            return Err(CliError::Usage(
                "reference horizon shorter than a coarse run (non-nesting grids)".into(),
            ));
        }
    }

    let make_spec = |tau: f64| -> Result<SchemeSpec, CliError> {
        SchemeSpec::new(tableau.clone(), config.kind, config.kappa, tau)
            .map_err(|e| CliError::Usage(e.to_string()))
    };

    let ref_spec = make_spec(ref_tau)?;
    let mut ref_states: HashMap<usize, GridFunction> = HashMap::new();
    let needed_set: std::collections::HashSet<usize> = needed.iter().copied().collect();
    stepper::integrate_with(
        &ref_spec,
        &op,
        &model,
        &u0,
        n_ref,
        IntegrateOptions::default(),
        |step, res| {
            if needed_set.contains(&step) {
                ref_states.insert(step, res.next().clone());
            }
        },
    )
    .map_err(|e| CliError::Numerical(format!("reference run failed: {e}")))?;

    let errors_or: Vec<Result<f64, CliError>> = par::map_collect(taus, |&tau| {
        run_error(config, &op, &model, &u0, make_spec(tau)?, ref_tau, &ref_states)
    });
    let mut errors = Vec::with_capacity(taus.len());
    for e in errors_or {
        errors.push(e?);
    }

    let pair_orders: Vec<f64> =
        errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let mean_order = pair_orders.iter().sum::<f64>() / pair_orders.len() as f64;
    let label = make_spec(taus[0])?.label();
    Ok(ConvergenceTable {
        scheme_label: label,
        taus: taus.to_vec(),
        errors,
        pair_orders,
        mean_order,
        ref_tau,
    })
}

fn run_error(
    config: &RunConfig,
    op: &SpectralOperator,
    model: &Model,
    u0: &GridFunction,
    spec: SchemeSpec,
    ref_tau: f64,
    ref_states: &HashMap<usize, GridFunction>,
) -> Result<f64, CliError> {
    let stride = nesting(spec.tau, ref_tau)?;
    let n = (config.t_final / spec.tau).round() as usize;
    let mut err = 0.0f64;
    stepper::integrate_with(
        &spec,
        op,
        model,
        u0,
        n,
        IntegrateOptions::default(),
        |step, res| {
            let reference = ref_states
                .get(&(step * stride))
                .expect("reference state collected for every shared time");
            err = err.max(max_diff(res.next(), reference));
        },
    )
    .map_err(|e| CliError::Numerical(format!("run at tau={} failed: {e}", spec.tau)))?;
    Ok(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;

    fn mini_config() -> RunConfig {
        let mut cfg = preset("example1-desk").unwrap();
        // Shrink further so the unit test is instant.
        cfg.apply_overrides(&["m=32".into(), format!("h={}", 2.0 / 32.0), "t_final=1".into()])
            .unwrap();
        cfg
    }

    #[test]
    fn identical_scheme_at_reference_tau_has_zero_error() {
        let mut cfg = mini_config();
        cfg.set("scheme", "if1").unwrap();
        cfg.set("kind", "N").unwrap();
        // Reference exactly shadows the finest run when divide=1 is illegal,
        // so compare a run against itself through FixedTau at tau/2 and
        // check the finest error is tiny relative to the coarse one.
        let taus = [0.1, 0.05];
        let t = converge(&cfg, &taus, Reference::FixedTau { tau: 0.025 }).unwrap();
        assert!(t.errors[1] < t.errors[0]);
    }

    #[test]
    fn first_order_scheme_shows_first_order() {
        let mut cfg = mini_config();
        cfg.set("scheme", "if1").unwrap();
        cfg.set("kind", "N").unwrap();
        let taus = [0.1, 0.05, 0.025, 0.0125];
        let t = converge(&cfg, &taus, Reference::SelfFinest { divide: 10 }).unwrap();
        assert!((t.mean_order - 1.0).abs() <= 0.2, "order {}", t.mean_order);
    }

    #[test]
    fn non_halving_taus_are_rejected() {
        let cfg = mini_config();
        let err = converge(&cfg, &[0.1, 0.03], Reference::SelfFinest { divide: 10 });
        assert!(matches!(err, Err(CliError::Usage(_))));
    }

    #[test]
    fn reference_must_be_finer_than_the_ladder() {
        let cfg = mini_config();
        let err = converge(&cfg, &[0.1, 0.05], Reference::FixedTau { tau: 0.05 });
        assert!(matches!(err, Err(CliError::Usage(_))));
    }
}
