//! Reproduces the closed-form differentiation matrices of every corrected
//! scheme in the registry, and checks the scan minima against the known
//! lower bounds of their symmetric-part minors.

use gradflow_core::analyzer::{certify, diff_matrix, AuxFunction, Definiteness};
use gradflow_core::scalarfun::CorrectionKind;
use gradflow_core::tableau::registry_get;

const T: CorrectionKind = CorrectionKind::Telescopic;
const N: CorrectionKind = CorrectionKind::NonlinearTranslation;

/// Closed-form entries of each corrected scheme's differentiation matrix,
/// written out exactly as published.
fn closed_form(name: &str, kind: CorrectionKind, z: f64) -> Vec<Vec<f64>> {
    let e = f64::exp;
    let em1 = f64::exp_m1; // stable e^x - 1
    match (name, kind) {
        ("IF1", T) => vec![vec![1.0 - z / 2.0]],
        ("IF1", N) => vec![vec![z / em1(z) + z / 2.0]],
        ("Heun2", T) => vec![
            vec![1.0 - z / 2.0, 0.0],
            vec![e(z), e(z) * (2.0 - z) - z / 2.0],
        ],
        ("Heun2", N) => vec![
            vec![z / em1(z) + z / 2.0, 0.0],
            vec![
                e(z) * z / em1(z),
                (z * z * e(z) - 2.0 * z * (e(z) + 1.0)) / (2.0 * e(z) * (z - 2.0) + 4.0),
            ],
        ],
        ("Ralston2", T) => vec![
            vec![1.5 - z / 2.0, 0.0],
            vec![
                5.0 / 6.0 * e(2.0 * z / 3.0),
                (4.0 - z) / 3.0 * e(2.0 * z / 3.0) - z / 2.0,
            ],
        ],
        ("Ralston2", N) => vec![
            vec![z / em1(2.0 * z / 3.0) + z / 2.0, 0.0],
            vec![
                e(z) * (e(2.0 * z / 3.0) * (z - 4.0) + 4.0) * z
                    / (em1(2.0 * z / 3.0) * (e(z) * (z - 4.0) + 4.0)),
                (e(z) * (z - 4.0) - 4.0) * z / (2.0 * e(z) * (z - 4.0) + 8.0),
            ],
        ],
        ("Heun3", T) => vec![
            vec![3.0 - z / 2.0, 0.0, 0.0],
            vec![1.5 * e(z / 3.0), 1.5 * e(z / 3.0) - z / 2.0, 0.0],
            vec![
                e(2.0 * z / 3.0) / 3.0,
                e(2.0 * z / 3.0) * (4.0 - z) / 3.0,
                e(2.0 * z / 3.0) * (4.0 - z) / 3.0 - z / 2.0,
            ],
        ],
        ("Heun3", N) => vec![
            vec![z / em1(z / 3.0) + z / 2.0, 0.0, 0.0],
            vec![
                z / em1(2.0 * z / 3.0) + z,
                z / em1(2.0 * z / 3.0) + z / 2.0,
                0.0,
            ],
            vec![
                e(z) * (e(z / 3.0) * (z - 4.0) + 4.0) * z
                    / (em1(z / 3.0) * (e(z) * (z - 4.0) + 4.0)),
                e(z) * (z - 4.0) * z / (e(z) * (z - 4.0) + 4.0),
                (e(z) * (z - 4.0) - 4.0) * z / (2.0 * e(z) * (z - 4.0) + 8.0),
            ],
        ],
        ("Ralston3", T) => vec![
            vec![2.0 - z / 2.0, 0.0, 0.0],
            vec![4.0 / 3.0 * e(z / 2.0), 4.0 / 3.0 * e(z / 2.0) - z / 2.0, 0.0],
            vec![
                e(3.0 * z / 4.0) / 4.0,
                e(3.0 * z / 4.0) * (5.0 - 2.0 * z) / 4.0,
                -0.75 * e(z / 4.0) * z - z / 2.0 + e(3.0 * z / 4.0) * (9.0 - 2.0 * z) / 4.0,
            ],
        ],
        ("Ralston3", N) => {
            let den = 3.0 * e(z / 2.0) * z + e(z) * (2.0 * z - 9.0) + 9.0;
            vec![
                vec![z / em1(z / 2.0) + z / 2.0, 0.0, 0.0],
                vec![
                    z / em1(3.0 * z / 4.0) + z,
                    z / em1(3.0 * z / 4.0) + z / 2.0,
                    0.0,
                ],
                vec![
                    e(z) * z
                        * (5.0 * e(z / 2.0) * z
                            + 3.0 * e(z / 4.0) * (z + 3.0)
                            + e(3.0 * z / 4.0) * (2.0 * z - 9.0)
                            + e(z) * (2.0 * z - 9.0)
                            + 9.0)
                        / (em1(z / 4.0)
                            * (e(z / 4.0) + 1.0)
                            * (e(z / 4.0) + e(z / 2.0) + 1.0)
                            * den),
                    e(z) * z
                        * (3.0 * e(z / 4.0) * z - 2.0 * z + e(3.0 * z / 4.0) * (2.0 * z - 9.0)
                            + 9.0)
                        / (em1(z / 4.0) * (e(z / 4.0) + e(z / 2.0) + 1.0) * den),
                    z / 2.0 - 9.0 * z / den,
                ],
            ]
        }
        _ => panic!("no closed form recorded for {name} {kind:?}"),
    }
}

fn pairs() -> Vec<(&'static str, CorrectionKind)> {
    let mut v = Vec::new();
    for name in ["IF1", "Heun2", "Ralston2", "Heun3", "Ralston3"] {
        v.push((name, T));
        v.push((name, N));
    }
    v
}

#[test]
fn diff_matrix_reproduces_every_closed_form() {
    // 20 deterministic pseudo-random arguments in [-50, 0).
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut zs = Vec::new();
    for _ in 0..20 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        zs.push(-50.0 * ((state % 1_000_000) as f64 + 1.0) / 1_000_001.0);
    }
    for (name, kind) in pairs() {
        let t = registry_get(name).unwrap();
        for &z in &zs {
            let got = diff_matrix(&t, kind, z).unwrap();
            let want = closed_form(name, kind, z);
            for r in 0..got.len() {
                for c in 0..got.len() {
                    let err = (got[r][c] - want[r][c]).abs();
                    // Relative for O(1)-and-larger entries; the triangular
                    // solve is accurate to an absolute ulp of the matrix
                    // scale, which bounds the tiny far-field entries.
                    let tol = 1e-10 * want[r][c].abs().max(1.0);
                    assert!(
                        err <= tol,
                        "{name} {kind:?} z={z} entry ({r},{c}): {} vs {} (err {err:.3e})",
                        got[r][c],
                        want[r][c]
                    );
                }
            }
        }
    }
}

#[test]
fn scan_minima_respect_the_published_lower_bounds() {
    // Per scheme/kind: the lower bounds of the leading principal minors of
    // the symmetric part over z <= 0. Entries of 0.0 encode ">= 0".
    let bounds: Vec<(&str, CorrectionKind, Vec<f64>)> = vec![
        ("IF1", T, vec![1.0]),
        ("IF1", N, vec![1.0]),
        ("Heun2", T, vec![1.0, 7.0 / 4.0]),
        ("Heun2", N, vec![1.0, 0.0]),
        ("Ralston2", T, vec![1.5, 263.0 / 144.0]),
        ("Ralston2", N, vec![1.5, 0.0]),
        ("Heun3", T, vec![3.0, 63.0 / 16.0, 47.0 / 12.0]),
        ("Heun3", N, vec![3.0, 9.0 / 16.0, 0.0]),
        ("Ralston3", T, vec![2.0, 20.0 / 9.0, 413.0 / 96.0]),
        ("Ralston3", N, vec![2.0, 4.0 / 9.0, 0.0]),
    ];
    for (name, kind, mins) in bounds {
        let t = registry_get(name).unwrap();
        let report = certify(&t, kind, -50.0, 10_000).unwrap();
        assert_ne!(report.verdict, Definiteness::Indefinite, "{name} {kind:?}");
        for (k, bound) in mins.iter().enumerate() {
            assert!(
                report.minima[k].min >= bound - 1e-8,
                "{name} {kind:?} minor {}: min {:.12e} below bound {bound}",
                k + 1,
                report.minima[k].min
            );
        }
    }
}

#[test]
fn telescopic_scans_certify_positive_definite() {
    for name in ["IF1", "Heun2", "Ralston2", "Heun3", "Ralston3"] {
        let t = registry_get(name).unwrap();
        let report = certify(&t, T, -50.0, 10_000).unwrap();
        assert_eq!(report.verdict, Definiteness::PositiveDefinite, "{name}");
    }
}

#[test]
fn kutta4_corrections_are_indefinite_with_the_sign_change_near_zero() {
    for kind in [T, N] {
        let t = registry_get("Kutta4").unwrap();
        let report = certify(&t, kind, -50.0, 10_000).unwrap();
        assert_eq!(report.verdict, Definiteness::Indefinite, "{kind:?}");
        assert!(
            report
                .samples
                .iter()
                .any(|row| row.z > -0.5 && row.z < 0.0 && row.minors[3] < -report.tol),
            "{kind:?}: fourth minor never negative inside (-0.5, 0)"
        );
    }
}

#[test]
fn auxiliary_functions_nonnegative_on_the_standard_scan() {
    for k in 0..=10_000 {
        let z = -50.0 * k as f64 / 10_000.0;
        for name in [AuxFunction::N2R, AuxFunction::N3H, AuxFunction::N3R] {
            let v = gradflow_core::analyzer::auxiliary_g(name, z);
            assert!(v >= -1e-10, "{name:?}(z={z}) = {v}");
        }
    }
}
