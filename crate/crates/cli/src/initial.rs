//! Initial data, keyed by id. Each is a closed-form function evaluated at
//! the grid nodes; all stay inside [-1, 1].

use gradflow_core::specop::{Grid, GridFunction};

use crate::error::CliError;

pub const IDS: [(&str, usize, &str); 3] = [
    ("tanh-pair", 1, "product of two tanh wells centered at +-0.3"),
    ("tanh-gauss", 1, "tanh(2 sin x)/3 with three Gaussian bumps on (0, 2pi)"),
    ("four-bubbles", 2, "product of four tanh bubbles of radius 0.2"),
];

pub fn check(id: &str, dim: usize) -> Result<(), CliError> {
    match IDS.iter().find(|(name, _, _)| *name == id) {
        None => Err(CliError::Usage(format!(
            "unknown initial condition `{id}`; known: tanh-pair, tanh-gauss, four-bubbles"
        ))),
        Some((_, want_dim, _)) if *want_dim != dim => Err(CliError::Usage(format!(
            "initial condition `{id}` is {want_dim}-dimensional but dim={dim}"
        ))),
        _ => Ok(()),
    }
}

/// Samples the named initial condition on a grid. The interface width of
/// the tanh profiles is set by `eps`.
pub fn build(id: &str, grid: &Grid, eps: f64) -> Result<GridFunction, CliError> {
    check(id, grid.dim())?;
    let u = match id {
        "tanh-pair" => GridFunction::sample_1d(grid, |x| {
            -((((x - 0.3) * (x - 0.3) - 0.04) / eps).tanh())
                * ((((x + 0.3) * (x + 0.3) - 0.04) / eps).tanh())
        }),
        "tanh-gauss" => GridFunction::sample_1d(grid, |x| {
            let pi = std::f64::consts::PI;
            (2.0 * x.sin()).tanh() / 3.0 - (-23.5 * (x - pi / 2.0).powi(2)).exp()
                + (-27.0 * (x - 4.2).powi(2)).exp()
                + (-38.0 * (x - 5.4).powi(2)).exp()
        }),
        "four-bubbles" => GridFunction::sample_2d(grid, |x, y| {
            let bump = |cx: f64, cy: f64| (((x - cx).powi(2) + (y - cy).powi(2) - 0.04) / eps).tanh();
            -bump(0.3, 0.0) * bump(-0.3, 0.0) * bump(0.0, 0.3) * bump(0.0, -0.3)
        }),
        _ => unreachable!("checked above"),
    };
    Ok(u)
}
