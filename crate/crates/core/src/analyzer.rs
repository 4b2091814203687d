//! Differentiation-matrix diagnostics.
//!
//! For a corrected scheme with coefficient matrix `Ahat(z)` the
//! differentiation matrix is
//!
//! ```text
//! D(z) = Ahat(z)^{-1} E_s + z E_s - (z/2) I,      E_s = lower-triangular ones,
//! ```
//!
//! and positive (semi-)definiteness of its symmetric part over `z <= 0`
//! certifies that the scheme dissipates the original energy at every stage.
//! [`certify`] scans a z-grid and reports per-minor minima and a verdict;
//! [`stage_energy_check`] evaluates the stage energy inequality on actual
//! step data.

use thiserror::Error;

use crate::models::{self, Model};
use crate::par;
use crate::scalarfun::{stage_coefficients, CoefficientError, CorrectionKind};
use crate::specop::{GridFunction, OperatorError, SpectralOperator};
use crate::stepper::{SchemeSpec, StepResult};
use crate::tableau::ButcherTableau;

#[derive(Debug, Error)]
pub enum AnalyzerError {
    #[error("coefficient matrix diagonal vanishes at stage {stage}, z = {z}")]
    Singular { stage: usize, z: f64 },
    #[error("stage energy law needs a corrected scheme, got the raw kind")]
    RawScheme,
    #[error("step holds {got} stage values but the scheme needs {expected}")]
    StageMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// `D(z)` as a dense row-major `s x s` table (it is lower triangular).
pub fn diff_matrix(
    t: &ButcherTableau,
    kind: CorrectionKind,
    z: f64,
) -> Result<Vec<Vec<f64>>, AnalyzerError> {
    let s = t.stages();
    let ahat = stage_coefficients(t, kind, z)?.ahat;
    for (i, row) in ahat.iter().enumerate() {
        if row[i] == 0.0 {
            return Err(AnalyzerError::Singular { stage: i + 1, z });
        }
    }
    // Forward substitution for X = Ahat^{-1} E_s, one column at a time.
    let mut d = vec![vec![0.0; s]; s];
    for c in 0..s {
        for r in 0..s {
            let e = if r >= c { 1.0 } else { 0.0 };
            let mut acc = e;
            for k in 0..r {
                acc -= ahat[r][k] * d[k][c];
            }
            d[r][c] = acc / ahat[r][r];
        }
    }
    for r in 0..s {
        for c in 0..=r {
            d[r][c] += z;
        }
        d[r][r] -= 0.5 * z;
    }
    Ok(d)
}

/// Leading principal minors of the symmetric part `S = (D + D^T)/2`,
/// computed by Gaussian elimination with partial pivoting.
pub fn sym_minors(d: &[Vec<f64>]) -> Vec<f64> {
    let s = d.len();
    let sym: Vec<Vec<f64>> = (0..s)
        .map(|r| (0..s).map(|c| 0.5 * (d[r][c] + d[c][r])).collect())
        .collect();
    (1..=s).map(|k| det_leading(&sym, k)).collect()
}

fn det_leading(m: &[Vec<f64>], k: usize) -> f64 {
    let mut a: Vec<Vec<f64>> = (0..k).map(|r| m[r][..k].to_vec()).collect();
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .expect("nonempty block");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            for c in col..k {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// The differentiation matrix and its symmetric-part minors at one `z`.
#[derive(Debug, Clone)]
pub struct DiffMatrixSample {
    pub z: f64,
    pub d: Vec<Vec<f64>>,
    pub sym_minors: Vec<f64>,
}

pub fn sample(
    t: &ButcherTableau,
    kind: CorrectionKind,
    z: f64,
) -> Result<DiffMatrixSample, AnalyzerError> {
    let d = diff_matrix(t, kind, z)?;
    let sym_minors = sym_minors(&d);
    Ok(DiffMatrixSample { z, d, sym_minors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemiDefinite,
    Indefinite,
}

impl std::fmt::Display for Definiteness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Definiteness::PositiveDefinite => "PositiveDefinite",
            Definiteness::PositiveSemiDefinite => "PositiveSemiDefinite",
            Definiteness::Indefinite => "Indefinite",
        };
        f.write_str(s)
    }
}

/// Minimum of one minor over the scan, with its location. Ties prefer the
/// sample closer to zero.
#[derive(Debug, Clone, Copy)]
pub struct MinorExtremum {
    pub min: f64,
    pub argmin_z: f64,
}

/// One scan row: the spectral argument and the `s` leading minors there.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub z: f64,
    pub minors: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DiffMatrixReport {
    pub scheme: String,
    pub kind: CorrectionKind,
    pub z_min: f64,
    pub n_points: usize,
    pub tol: f64,
    /// All scan rows, ascending in `z` (from `z_min` to 0).
    pub samples: Vec<ScanRow>,
    /// Per-minor minima over the scan, index `k-1` for minor `k`.
    pub minima: Vec<MinorExtremum>,
    pub verdict: Definiteness,
}

impl DiffMatrixReport {
    /// CSV table `z,minor_1..minor_s` with deterministic 17-significant-digit
    /// formatting.
    pub fn csv_string(&self) -> String {
        let s = self.minima.len();
        let mut out = String::from("z");
        for k in 1..=s {
            out.push_str(&format!(",minor_{k}"));
        }
        out.push('\n');
        for row in &self.samples {
            out.push_str(&format!("{:.16e}", row.z));
            for v in &row.minors {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Human-readable summary block.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "scheme {} ({kind}) over z in [{z_min}, 0], {n} samples\n",
            self.scheme,
            kind = self.kind.tag(),
            z_min = self.z_min,
            n = self.samples.len(),
        );
        for (k, ext) in self.minima.iter().enumerate() {
            out.push_str(&format!(
                "  minor {}: min {:+.12e} at z = {:.6e}\n",
                k + 1,
                ext.min,
                ext.argmin_z
            ));
        }
        out.push_str(&format!("  verdict: {}\n", self.verdict));
        out
    }
}

/// Default scan tolerance separating roundoff from a genuine sign change.
pub const CERTIFY_TOL: f64 = 1e-9;

/// Scans `z` over `[z_min, 0]` on `n_points` uniform samples plus a
/// logarithmic refinement `z = -10^{-k}`, `k = 1..12`, near the origin.
/// The verdict is `Indefinite` iff some minor drops below `-tol` anywhere
/// on the scan, and `PositiveSemiDefinite` when the smallest minimum sits
/// inside `[-tol, tol]`.
pub fn certify(
    t: &ButcherTableau,
    kind: CorrectionKind,
    z_min: f64,
    n_points: usize,
) -> Result<DiffMatrixReport, AnalyzerError> {
    assert!(z_min < 0.0, "scan lower bound must be negative");
    assert!(n_points >= 2, "scan needs at least two points");
    let mut zs: Vec<f64> = (0..n_points)
        .map(|k| z_min * (n_points - 1 - k) as f64 / (n_points - 1) as f64)
        .collect();
    for k in 1..=12 {
        let z = -10.0f64.powi(-k);
        if z > z_min {
            zs.push(z);
        }
    }
    zs.sort_by(|a, b| a.total_cmp(b));

    let rows = par::map_collect(&zs, |&z| {
        sample(t, kind, z).map(|s| ScanRow { z: s.z, minors: s.sym_minors })
    });
    let s = t.stages();
    let mut samples = Vec::with_capacity(rows.len());
    let mut minima = vec![MinorExtremum { min: f64::INFINITY, argmin_z: 0.0 }; s];
    for row in rows {
        let row = row?;
        for (k, &v) in row.minors.iter().enumerate() {
            // `<=` so that ties resolve to the later sample, which is the
            // one with smaller |z| in ascending order.
            if v <= minima[k].min {
                minima[k] = MinorExtremum { min: v, argmin_z: row.z };
            }
        }
        samples.push(row);
    }
    let tol = CERTIFY_TOL;
    let global_min = minima.iter().map(|m| m.min).fold(f64::INFINITY, f64::min);
    let verdict = if global_min < -tol {
        Definiteness::Indefinite
    } else if global_min <= tol {
        Definiteness::PositiveSemiDefinite
    } else {
        Definiteness::PositiveDefinite
    };
    Ok(DiffMatrixReport {
        scheme: t.name().to_string(),
        kind,
        z_min,
        n_points,
        tol,
        samples,
        minima,
        verdict,
    })
}

/// Auxiliary nonnegative functions used by the definiteness arguments for
/// the nonlinear-translation corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxFunction {
    /// Two-stage Ralston correction.
    N2R,
    /// Three-stage Heun correction.
    N3H,
    /// Three-stage Ralston correction.
    N3R,
}

/// Evaluates the named auxiliary function; each is `>= 0` for `z <= 0`.
pub fn auxiliary_g(name: AuxFunction, z: f64) -> f64 {
    debug_assert!(z <= 0.0);
    let e = f64::exp;
    match name {
        AuxFunction::N2R => {
            -e(2.0 * z) * z * z
                + 16.0 * (1.0 - e(2.0 * z / 3.0)) * (1.0 - e(2.0 * z))
                + 8.0 * (1.0 - e(2.0 * z / 3.0)) * e(2.0 * z) * (z + 2.0 * (e(-4.0 * z / 3.0) - 1.0))
        }
        AuxFunction::N3H => {
            e(2.0 * z) * z * z * (-2.0 * e(z / 3.0) + e(2.0 * z / 3.0) - e(z) - 2.0)
                - 8.0 * e(2.0 * z) * z * (-e(z / 3.0) + 3.0 * e(2.0 * z / 3.0) - 2.0)
                + 16.0
                    * (e(z / 3.0) - 2.0 * e(4.0 * z / 3.0) - 3.0 * e(2.0 * z) - e(7.0 * z / 3.0)
                        + 4.0 * e(8.0 * z / 3.0)
                        + 1.0)
        }
        AuxFunction::N3R => {
            e(z) * z
                * z
                * (-21.0 * e(z / 2.0) - 20.0 * e(z) + 12.0 * e(5.0 * z / 4.0)
                    - 8.0 * e(3.0 * z / 2.0)
                    + 8.0 * e(7.0 * z / 4.0)
                    - 4.0 * e(2.0 * z)
                    - 9.0)
                - 18.0
                    * z
                    * e(3.0 * z / 2.0)
                    * (-7.0 * e(z / 2.0) + 6.0 * e(3.0 * z / 4.0) - 2.0 * e(z)
                        + 6.0 * e(5.0 * z / 4.0)
                        - 3.0)
                + 81.0
                    * (e(z / 2.0) - 2.0 * e(3.0 * z / 2.0) - 3.0 * e(2.0 * z) - e(5.0 * z / 2.0)
                        + 4.0 * e(11.0 * z / 4.0)
                        + 1.0)
        }
    }
}

/// The per-mode differentiation-matrix entries `d_{kl}(-tau L_kappa)` for a
/// fixed scheme, operator, `tau` and `kappa`; build once, reuse across steps.
pub struct DiffMatrixOperator {
    s: usize,
    tau: f64,
    /// `entries[k-1][l-1][mode]` for `l <= k`.
    entries: Vec<Vec<Vec<f64>>>,
}

impl DiffMatrixOperator {
    pub fn new(
        t: &ButcherTableau,
        kind: CorrectionKind,
        op: &SpectralOperator,
        tau: f64,
        kappa: f64,
    ) -> Result<Self, AnalyzerError> {
        if !kind.is_corrected() {
            return Err(AnalyzerError::RawScheme);
        }
        let s = t.stages();
        let n = op.eigenvalues().len();
        let mut entries = vec![vec![vec![0.0; n]; s]; s];
        for (mode, &lam) in op.eigenvalues().iter().enumerate() {
            let d = diff_matrix(t, kind, -tau * (lam + kappa))?;
            for k in 0..s {
                for l in 0..=k {
                    entries[k][l][mode] = d[k][l];
                }
            }
        }
        Ok(Self { s, tau, entries })
    }

    /// Evaluates the stage energy law on one step: for each `j = 1..s`,
    /// `lhs = E[U^{n,j+1}] - E[U^{n,1}]` against the quadratic bound
    /// `rhs = -(1/tau) h^dim sum_{k,l <= j} <dU^{k+1}, d_{kl} dU^{l+1}>`.
    /// The reported excess `lhs - rhs` should be nonpositive (up to
    /// roundoff) for schemes whose scan verdict is positive (semi-)definite.
    pub fn check(
        &self,
        op: &SpectralOperator,
        model: &Model,
        step: &StepResult,
    ) -> Result<StageEnergyReport, AnalyzerError> {
        let s = self.s;
        if step.stages.len() != s + 1 {
            return Err(AnalyzerError::StageMismatch { expected: s + 1, got: step.stages.len() });
        }
        let diffs: Vec<GridFunction> = (0..s)
            .map(|l| {
                GridFunction::new(
                    step.stages[l + 1]
                        .values
                        .iter()
                        .zip(&step.stages[l].values)
                        .map(|(a, b)| a - b)
                        .collect(),
                )
            })
            .collect();
        // term[k][l] = h^dim <dU^{k+1}, d_{kl}(-tau L_kappa) dU^{l+1}>
        let mut term = vec![vec![0.0; s]; s];
        for k in 0..s {
            for l in 0..=k {
                let w = op.apply_multiplier(&self.entries[k][l], &diffs[l])?;
                term[k][l] = op.inner(&diffs[k], &w);
            }
        }
        let e0 = models::energy(op, model, &step.stages[0])?;
        let mut entries = Vec::with_capacity(s);
        for j in 1..=s {
            let lhs = models::energy(op, model, &step.stages[j])? - e0;
            let mut quad = 0.0;
            for k in 0..j {
                for l in 0..=k {
                    quad += term[k][l];
                }
            }
            let rhs = -quad / self.tau;
            entries.push(StageEnergyEntry { stage: j, lhs, rhs, excess: lhs - rhs });
        }
        Ok(StageEnergyReport { entries })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StageEnergyEntry {
    /// Stage index `j`, comparing `U^{n,j+1}` against `U^{n,1}`.
    pub stage: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; the energy law holds when this is `<=` roundoff.
    pub excess: f64,
}

#[derive(Debug, Clone)]
pub struct StageEnergyReport {
    pub entries: Vec<StageEnergyEntry>,
}

impl StageEnergyReport {
    pub fn max_excess(&self) -> f64 {
        self.entries.iter().fold(f64::NEG_INFINITY, |acc, e| acc.max(e.excess))
    }
}

/// Convenience wrapper building the per-mode table for one check.
pub fn stage_energy_check(
    spec: &SchemeSpec,
    op: &SpectralOperator,
    model: &Model,
    step: &StepResult,
) -> Result<StageEnergyReport, AnalyzerError> {
    let diffop = DiffMatrixOperator::new(&spec.tableau, spec.kind, op, spec.tau, spec.kappa)?;
    diffop.check(op, model, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specop::{build_operator, Grid};
    use crate::stepper::{step_corrected, SchemeSpec};
    use crate::tableau::registry_get;

    #[test]
    fn if1_diff_matrices_match_the_scalar_forms() {
        let if1 = registry_get("IF1").unwrap();
        for &z in &[0.0, -0.5, -7.0, -50.0] {
            let d = diff_matrix(&if1, CorrectionKind::Telescopic, z).unwrap();
            assert!((d[0][0] - (1.0 - z / 2.0)).abs() < 1e-13, "z={z}");
        }
        let d = diff_matrix(&if1, CorrectionKind::NonlinearTranslation, -2.0).unwrap();
        assert!((d[0][0] - 1.3130352854993312).abs() < 1e-13);
    }

    #[test]
    fn heun2_nonlinear_subdiagonal_entry() {
        let heun2 = registry_get("Heun2").unwrap();
        for &z in &[-0.3, -2.0, -11.0] {
            let d = diff_matrix(&heun2, CorrectionKind::NonlinearTranslation, z).unwrap();
            let expect = z.exp() * z / z.exp_m1();
            assert!((d[1][0] - expect).abs() < 1e-12 * expect.abs().max(1.0), "z={z}");
        }
    }

    #[test]
    fn sym_minors_of_identity() {
        let eye = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_eq!(sym_minors(&eye), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn heun2_telescopic_minors_at_zero() {
        let heun2 = registry_get("Heun2").unwrap();
        let minors = sample(&heun2, CorrectionKind::Telescopic, 0.0).unwrap().sym_minors;
        assert!((minors[0] - 1.0).abs() < 1e-14);
        assert!((minors[1] - 1.75).abs() < 1e-14);
    }

    #[test]
    fn minors_match_cofactor_expansion() {
        // Deterministic pseudo-random symmetric 4x4 checked against a
        // brute-force cofactor determinant.
        fn cofactor_det(m: &[Vec<f64>]) -> f64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut acc = 0.0;
            for c in 0..n {
                let minor: Vec<Vec<f64>> = (1..n)
                    .map(|r| (0..n).filter(|&cc| cc != c).map(|cc| m[r][cc]).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * m[0][c] * cofactor_det(&minor);
            }
            acc
        }
        let mut state = 88172645463325252u64;
        let mut rand = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 2000) as f64 / 1000.0 - 1.0
        };
        for _ in 0..25 {
            let mut a = vec![vec![0.0; 4]; 4];
            for r in 0..4 {
                for c in 0..=r {
                    let v = rand();
                    a[r][c] = v;
                    a[c][r] = v;
                }
            }
            let minors = sym_minors(&a);
            for k in 1..=4 {
                let block: Vec<Vec<f64>> = (0..k).map(|r| a[r][..k].to_vec()).collect();
                let expect = cofactor_det(&block);
                assert!((minors[k - 1] - expect).abs() <= 1e-12, "k={k}");
            }
        }
    }

    #[test]
    fn inverse_identity_holds_across_the_scan() {
        // Ahat(z) * (D(z) - z E_s + (z/2) I) = E_s validates the solve.
        for name in ["IF1", "Heun2", "Ralston3", "Kutta4"] {
            let t = registry_get(name).unwrap();
            let s = t.stages();
            for kind in [CorrectionKind::Telescopic, CorrectionKind::NonlinearTranslation] {
                for k in 0..=100 {
                    let z = -50.0 * k as f64 / 100.0;
                    let d = diff_matrix(&t, kind, z).unwrap();
                    let ahat = stage_coefficients(&t, kind, z).unwrap().ahat;
                    for r in 0..s {
                        for c in 0..s {
                            let mut x_rc = 0.0;
                            for m in 0..s {
                                let mut x_mc = d[m][c];
                                if m >= c {
                                    x_mc -= z;
                                }
                                if m == c {
                                    x_mc += 0.5 * z;
                                }
                                x_rc += ahat[r][m] * x_mc;
                            }
                            let e = if r >= c { 1.0 } else { 0.0 };
                            assert!(
                                (x_rc - e).abs() <= 1e-11,
                                "{name} {kind:?} z={z} ({r},{c}): {x_rc}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn certify_heun3_telescopic_is_positive_definite() {
        let t = registry_get("Heun3").unwrap();
        let report = certify(&t, CorrectionKind::Telescopic, -50.0, 2000).unwrap();
        assert_eq!(report.verdict, Definiteness::PositiveDefinite);
        let bounds = [3.0, 63.0 / 16.0, 47.0 / 12.0];
        for (ext, b) in report.minima.iter().zip(bounds) {
            assert!(ext.min >= b - 1e-8, "min {} vs bound {b}", ext.min);
        }
    }

    #[test]
    fn certify_kutta4_is_indefinite_near_zero() {
        let t = registry_get("Kutta4").unwrap();
        for kind in [CorrectionKind::Telescopic, CorrectionKind::NonlinearTranslation] {
            let report = certify(&t, kind, -50.0, 2000).unwrap();
            assert_eq!(report.verdict, Definiteness::Indefinite, "{kind:?}");
            let neg = report
                .samples
                .iter()
                .find(|row| row.z > -0.5 && row.z < 0.0 && row.minors[3] < -report.tol);
            assert!(neg.is_some(), "{kind:?}: no negative fourth minor in (-0.5, 0)");
        }
    }

    #[test]
    fn certify_csv_has_header_and_rows() {
        let t = registry_get("IF1").unwrap();
        let report = certify(&t, CorrectionKind::Telescopic, -1.0, 5).unwrap();
        let csv = report.csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "z,minor_1");
        assert!(csv.lines().count() >= 6);
        assert!(report.summary().contains("verdict"));
    }

    #[test]
    fn auxiliary_functions_vanish_at_zero_and_stay_nonnegative() {
        assert_eq!(auxiliary_g(AuxFunction::N2R, 0.0), 0.0);
        assert!(auxiliary_g(AuxFunction::N2R, -1.0) > 0.0);
        assert!(auxiliary_g(AuxFunction::N3H, -5.0) > 0.0);
        for k in 0..=2000 {
            let z = -50.0 * k as f64 / 2000.0;
            for name in [AuxFunction::N2R, AuxFunction::N3H, AuxFunction::N3R] {
                assert!(auxiliary_g(name, z) >= -1e-10, "{name:?} at z={z}");
            }
        }
    }

    #[test]
    fn stage_energy_check_on_a_steady_state_is_exactly_balanced() {
        let grid = Grid::new_1d(16, 0.125, -1.0).unwrap();
        let op = build_operator(grid, 0.01).unwrap();
        let m = Model::DoubleWell;
        let spec = SchemeSpec::new(
            registry_get("Heun2").unwrap(),
            CorrectionKind::NonlinearTranslation,
            4.0,
            0.5,
        )
        .unwrap();
        let u = GridFunction::constant(&grid, 1.0);
        let step = step_corrected(&spec, &op, &m, &u).unwrap();
        let report = stage_energy_check(&spec, &op, &m, &step).unwrap();
        for e in &report.entries {
            assert!(e.lhs.abs() < 1e-12 && e.rhs.abs() < 1e-12);
        }
    }

    #[test]
    fn stage_energy_check_rejects_raw_schemes() {
        let grid = Grid::new_1d(8, 0.25, 0.0).unwrap();
        let op = build_operator(grid, 0.01).unwrap();
        let err = DiffMatrixOperator::new(
            &registry_get("IF1").unwrap(),
            CorrectionKind::Raw,
            &op,
            0.1,
            1.0,
        );
        assert!(matches!(err, Err(AnalyzerError::RawScheme)));
    }

    #[test]
    fn stage_energy_law_holds_on_a_dissipating_step() {
        let grid = Grid::new_1d(32, 2.0 / 32.0, -1.0).unwrap();
        let op = build_operator(grid, 0.01).unwrap();
        let m = Model::DoubleWell;
        let eps = 0.1;
        let u0 = GridFunction::sample_1d(&grid, |x| {
            -((((x - 0.3) * (x - 0.3) - 0.04) / eps).tanh())
                * ((((x + 0.3) * (x + 0.3) - 0.04) / eps).tanh())
        });
        let spec = SchemeSpec::new(
            registry_get("IF1").unwrap(),
            CorrectionKind::NonlinearTranslation,
            4.0,
            0.1,
        )
        .unwrap();
        let step = step_corrected(&spec, &op, &m, &u0).unwrap();
        let report = stage_energy_check(&spec, &op, &m, &step).unwrap();
        assert!(report.max_excess() <= 1e-9, "excess {}", report.max_excess());
    }
}
