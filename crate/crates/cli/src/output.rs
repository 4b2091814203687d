//! CSV and manifest emission. All floats are written with 17 significant
//! digits so identical configs produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gradflow_core::models::EnergyTrace;
use gradflow_core::specop::{Grid, GridFunction};

use crate::error::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output root: explicit argument, else `GRADFLOW_OUT`, else `./gradflow-out`.
pub fn out_root(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os("GRADFLOW_OUT") {
        Some(v) => PathBuf::from(v),
        None => PathBuf::from("gradflow-out"),
    }
}

/// `t,E,E_modified,max_norm` rows; the modified column is empty when the
/// run did not record it.
pub fn write_trace(path: &Path, trace: &EnergyTrace) -> Result<(), CliError> {
    let mut out = String::from("t,E,E_modified,max_norm\n");
    for i in 0..trace.len() {
        let e_mod = trace
            .modified_energy
            .as_ref()
            .map(|col| fmt_f64(col[i]))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(trace.times[i]),
            fmt_f64(trace.energy[i]),
            e_mod,
            fmt_f64(trace.max_norm[i]),
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// One row per node: `i,value` in 1D and `i,j,value` in 2D, row-major.
pub fn write_snapshot(path: &Path, grid: &Grid, u: &GridFunction) -> Result<(), CliError> {
    let mut out = String::new();
    if grid.dim() == 1 {
        out.push_str("i,value\n");
        for (i, v) in u.values.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", fmt_f64(*v)));
        }
    } else {
        out.push_str("i,j,value\n");
        let m = grid.points_per_axis();
        for i in 0..m {
            for j in 0..m {
                out.push_str(&format!("{i},{j},{}\n", fmt_f64(u.values[i * m + j])));
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// `step,stage,energy` rows for the per-stage energy diagnostic.
pub fn write_stage_energies(path: &Path, per_step: &[Vec<f64>]) -> Result<(), CliError> {
    let mut out = String::from("step,stage,energy\n");
    for (step, row) in per_step.iter().enumerate() {
        for (stage, e) in row.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", step + 1, stage + 1, fmt_f64(*e)));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Appends `key=value` manifest lines to the config echo and writes it.
pub fn write_manifest(path: &Path, config_text: &str, extra: &[(&str, String)]) -> Result<(), CliError> {
    let mut f = fs::File::create(path)?;
    f.write_all(config_text.as_bytes())?;
    for (k, v) in extra {
        writeln!(f, "{k}={v}")?;
    }
    Ok(())
}
