//! Experiment presets. Full-scale presets mirror the reference simulations;
//! `-desk` variants shrink the grid and final time to laptop scale.

use crate::config::RunConfig;
use crate::error::CliError;

pub const NAMES: [(&str, &str); 8] = [
    ("example1", "1D double well on (-1,1), eps=0.1, h=0.01, two-well tanh datum"),
    ("example1-desk", "example1 at h=1/128 and T=2"),
    ("example3", "1D double well on (0,2pi), h=pi/320, tanh+Gaussian datum"),
    ("example3-desk", "example3 at h=pi/80 and T=8"),
    ("example4", "1D Flory-Huggins (theta=0.8, theta_c=1) on (0,2pi), h=pi/320"),
    ("example4-desk", "example4 at h=pi/80 and T=8"),
    ("bubbles2d", "2D four-bubble merging on (-1,1)^2, h=1/32, T=60, kappa=6"),
    ("bubbles2d-desk", "bubbles2d at 32x32 and T=10"),
];

pub fn preset(name: &str) -> Result<RunConfig, CliError> {
    let pi = std::f64::consts::PI;
    let mut cfg = RunConfig::default();
    let assign = |cfg: &mut RunConfig, pairs: &[(&str, String)]| -> Result<(), CliError> {
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(())
    };
    match name {
        "example1" | "example1-desk" => {
            assign(
                &mut cfg,
                &[
                    ("scheme", "if1".into()),
                    ("kind", "N".into()),
                    ("model", "double-well".into()),
                    ("eps", "0.1".into()),
                    ("dim", "1".into()),
                    ("m", "200".into()),
                    ("h", "0.01".into()),
                    ("origin_x", "-1".into()),
                    ("tau", "0.05".into()),
                    ("t_final", "20".into()),
                    ("kappa", "4".into()),
                    ("ic", "tanh-pair".into()),
                ],
            )?;
            if name.ends_with("-desk") {
                assign(
                    &mut cfg,
                    &[
                        ("m", "256".into()),
                        ("h", (1.0 / 128.0).to_string()),
                        ("t_final", "2".into()),
                    ],
                )?;
            }
        }
        "example3" | "example3-desk" | "example4" | "example4-desk" => {
            assign(
                &mut cfg,
                &[
                    ("scheme", "heun3".into()),
                    ("kind", "N".into()),
                    ("model", "double-well".into()),
                    ("eps", "0.1".into()),
                    ("dim", "1".into()),
                    ("m", "640".into()),
                    ("h", (pi / 320.0).to_string()),
                    ("origin_x", "0".into()),
                    ("tau", "0.5".into()),
                    ("t_final", "80".into()),
                    ("kappa", "4".into()),
                    ("ic", "tanh-gauss".into()),
                ],
            )?;
            if name.starts_with("example4") {
                assign(
                    &mut cfg,
                    &[
                        ("model", "flory-huggins".into()),
                        ("theta", "0.8".into()),
                        ("theta_c", "1".into()),
                        ("tau", "0.1".into()),
                        ("t_final", "40".into()),
                    ],
                )?;
            }
            if name.ends_with("-desk") {
                assign(
                    &mut cfg,
                    &[
                        ("m", "160".into()),
                        ("h", (pi / 80.0).to_string()),
                        ("t_final", "8".into()),
                    ],
                )?;
            }
        }
        "bubbles2d" | "bubbles2d-desk" => {
            assign(
                &mut cfg,
                &[
                    ("scheme", "ralston3".into()),
                    ("kind", "N".into()),
                    ("model", "double-well".into()),
                    ("eps", "0.05".into()),
                    ("dim", "2".into()),
                    ("m", "64".into()),
                    ("h", (1.0 / 32.0).to_string()),
                    ("origin_x", "-1".into()),
                    ("origin_y", "-1".into()),
                    ("tau", "0.1".into()),
                    ("t_final", "60".into()),
                    ("kappa", "6".into()),
                    ("ic", "four-bubbles".into()),
                ],
            )?;
            if name.ends_with("-desk") {
                assign(
                    &mut cfg,
                    &[
                        ("m", "32".into()),
                        ("h", (1.0 / 16.0).to_string()),
                        ("t_final", "10".into()),
                    ],
                )?;
            }
        }
        other => {
            let known: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Usage(format!(
                "unknown preset `{other}`; known: {}",
                known.join(", ")
            )));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for (name, _) in NAMES {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn bubbles_preset_matches_the_reference_parameters() {
        let cfg = preset("bubbles2d").unwrap();
        assert_eq!(cfg.dim, 2);
        assert_eq!(cfg.eps, 0.05);
        assert_eq!(cfg.h, 1.0 / 32.0);
        assert_eq!(cfg.kappa, 6.0);
        assert_eq!(cfg.tau, 0.1);
        assert_eq!(cfg.t_final, 60.0);
    }

    #[test]
    fn example1_preset_matches_the_reference_parameters() {
        let cfg = preset("example1").unwrap();
        assert_eq!(cfg.eps, 0.1);
        assert_eq!(cfg.origin[0], -1.0);
        assert_eq!(cfg.m as f64 * cfg.h, 2.0);
        assert_eq!(cfg.ic, "tanh-pair");
    }

    #[test]
    fn example4_uses_the_flory_huggins_parameters() {
        let cfg = preset("example4").unwrap();
        assert_eq!(cfg.model, "flory-huggins");
        assert_eq!(cfg.theta, 0.8);
        assert_eq!(cfg.theta_c, 1.0);
    }

    #[test]
    fn unknown_preset_is_a_usage_error() {
        assert!(matches!(preset("example9"), Err(CliError::Usage(_))));
    }

    #[test]
    fn desk_variants_shrink_grid_and_horizon() {
        let full = preset("bubbles2d").unwrap();
        let desk = preset("bubbles2d-desk").unwrap();
        assert!(desk.m < full.m && desk.t_final < full.t_final);
        assert_eq!(desk.m, 32);
        assert_eq!(desk.t_final, 10.0);
    }
}
