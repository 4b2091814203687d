//! Executes one configured run and writes its artifacts: energy trace,
//! snapshot CSVs at the configured stride and a reproducibility manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use gradflow_core::specop::build_operator;
use gradflow_core::stepper::{self, IntegrateOptions, SchemeSpec, StepError};
use gradflow_core::tableau::registry_get;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::initial;
use crate::output;

pub struct RunArtifacts {
    pub run_id: String,
    pub dir: PathBuf,
    pub trace_path: PathBuf,
    pub manifest_path: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub result: stepper::IntegrationResult,
}

/// Integrates the configured trajectory and writes all artifacts under
/// `<out_root>/<run_id>/`. Deterministic given the config; a blow-up abort
/// is recorded in the manifest before the error is returned.
pub fn run(config: &RunConfig, out_root: &Path) -> Result<RunArtifacts, CliError> {
    config.validate()?;
    let started = Instant::now();
    let run_id = config.run_id();
    let dir = out_root.join(&run_id);
    std::fs::create_dir_all(&dir)?;

    let grid = config.grid()?;
    let op = build_operator(grid, config.eps2()).map_err(|e| CliError::Usage(e.to_string()))?;
    let model = config.model();
    let tableau = registry_get(&config.scheme).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = SchemeSpec::new(tableau, config.kind, config.kappa, config.tau)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let u0 = initial::build(&config.ic, &grid, config.eps)?;

    let mut snapshots = Vec::new();
    let mut snap = |step: usize, u: &gradflow_core::GridFunction| -> Result<(), CliError> {
        let path = dir.join(format!("{run_id}_t{step}.csv"));
        output::write_snapshot(&path, &grid, u)?;
        snapshots.push(path);
        Ok(())
    };
    if config.stride > 0 {
        snap(0, &u0)?;
    }

    let n_steps = config.n_steps();
    let opts = IntegrateOptions {
        record_modified_energy: config.modified_energy,
        record_stage_energies: config.stage_energies,
    };
    let mut snap_err = None;
    let outcome = stepper::integrate_with(&spec, &op, &model, &u0, n_steps, opts, |step, res| {
        let due = config.stride > 0 && (step % config.stride == 0 || step == n_steps);
        if due && snap_err.is_none() {
            if let Err(e) = snap(step, res.next()) {
                snap_err = Some(e);
            }
        }
    });
    if let Some(e) = snap_err {
        return Err(e);
    }

    let manifest_path = dir.join("manifest.txt");
    let wall = started.elapsed().as_secs_f64();
    match outcome {
        Ok(result) => {
            let trace_path = dir.join("trace.csv");
            output::write_trace(&trace_path, &result.trace)?;
            if let Some(stages) = &result.stage_energies {
                output::write_stage_energies(&dir.join("stages.csv"), stages)?;
            }
            output::write_manifest(
                &manifest_path,
                &config.to_text(),
                &[
                    ("run_id", run_id.clone()),
                    ("steps", result.steps.to_string()),
                    ("clipped_nodes", result.clipped_nodes.to_string()),
                    ("status", "ok".into()),
                    ("wall_time_s", format!("{wall:.3}")),
                ],
            )?;
            Ok(RunArtifacts { run_id, trace_path, manifest_path, snapshots, result, dir })
        }
        Err(StepError::NonFinite { step, stage }) => {
            output::write_manifest(
                &manifest_path,
                &config.to_text(),
                &[
                    ("run_id", run_id.clone()),
                    ("status", "aborted".into()),
                    ("aborted_at_step", step.to_string()),
                    ("aborted_at_stage", stage.to_string()),
                    ("wall_time_s", format!("{wall:.3}")),
                ],
            )?;
            Err(CliError::Numerical(format!(
                "blow-up: non-finite state at step {step}, stage {stage} (recorded in {})",
                manifest_path.display()
            )))
        }
        Err(e) => Err(CliError::Numerical(e.to_string())),
    }
}
