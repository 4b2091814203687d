//! Scalar coefficient functions of the spectral argument `z = -tau*lambda`.
//!
//! Everything a scheme needs pointwise on the spectrum lives here: the raw
//! integrating-factor coefficients `a_{i+1,j}(z)`, the telescopic and
//! nonlinear-translation correction factors `chi_{i+1}(z)` and the corrected
//! coefficients `ahat_{i+1,j}(z)`. Functions with a removable singularity at
//! `z = 0` switch to a truncated Taylor series below [`SERIES_THRESHOLD`].

use thiserror::Error;

use crate::tableau::ButcherTableau;

/// How (or whether) a scheme's stage updates are corrected to fix the
/// discrete equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionKind {
    /// Plain stabilized integrating-factor coefficients; equilibria drift.
    Raw,
    /// Each stage output is rescaled by a telescopic factor.
    Telescopic,
    /// The newest nonlinear-term coefficient is replaced at each stage.
    NonlinearTranslation,
}

impl CorrectionKind {
    pub fn is_corrected(self) -> bool {
        self != CorrectionKind::Raw
    }

    /// Short tag used in scheme labels and file names: "raw", "T" or "N".
    pub fn tag(self) -> &'static str {
        match self {
            CorrectionKind::Raw => "raw",
            CorrectionKind::Telescopic => "T",
            CorrectionKind::NonlinearTranslation => "N",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoefficientError {
    #[error("corrected coefficients are undefined for the raw scheme")]
    RawUnsupported,
    #[error("telescopic factor chi_{stage}(z) vanishes at z = {z}")]
    TelescopicFactorZero { stage: usize, z: f64 },
}

/// Below this magnitude the removable-singularity functions are evaluated by
/// a degree-6 Taylor polynomial; truncation error is far below 1e-16 there
/// while direct evaluation would lose a few digits.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `phi_1(z) = (e^z - 1)/z`, the basic entire function of exponential
/// integrators; equals 1 at `z = 0` and lies in (0, 1] for `z <= 0`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < SERIES_THRESHOLD {
        // 1 + z/2 + z^2/6 + z^3/24 + z^4/120 + z^5/720 + z^6/5040
        let mut acc = 1.0 / 5040.0;
        for k in (1..=6).rev() {
            acc = acc * z + 1.0 / factorial(k);
        }
        acc
    } else {
        z.exp_m1() / z
    }
}

/// `beta(z) = e^{-z} + z - 1`, the spectral symbol of the modified-energy
/// operator `e^{tau*L} - tau*L - I`; nonnegative for all real `z`.
pub fn beta(z: f64) -> f64 {
    if z.abs() < SERIES_THRESHOLD {
        // z^2/2 - z^3/6 + z^4/24 - z^5/120 + z^6/720
        let mut acc = 1.0 / 720.0;
        for k in (2..=5).rev() {
            acc = acc * (-z) + 1.0 / factorial(k);
        }
        acc * z * z
    } else {
        (-z).exp_m1() + z
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Raw integrating-factor coefficient `a_{i+1,j}(z) = a_{i+1,j}(0)
/// e^{(c_{i+1}-c_j) z}` for `1 <= j <= i <= s`.
pub fn raw_if_coeff(t: &ButcherTableau, i: usize, j: usize, z: f64) -> f64 {
    assert!(
        1 <= j && j <= i && i <= t.stages(),
        "stage indices ({i},{j}) outside the lower triangle of a {}-stage tableau",
        t.stages()
    );
    t.a(i, j) * ((t.c(i + 1) - t.c(j)) * z).exp()
}

/// Correction factor `chi_{i+1}(z)` of the requested kind at stage `i`.
///
/// Telescopic: `e^{c_{i+1} z} - z * sum_{j<=i} a_{i+1,j}(z)`.
/// Nonlinear translation: `c_{i+1} phi_1(c_{i+1} z) - sum_{j<i} a_{i+1,j}(z)`.
pub fn chi(
    t: &ButcherTableau,
    kind: CorrectionKind,
    i: usize,
    z: f64,
) -> Result<f64, CoefficientError> {
    assert!(
        (1..=t.stages()).contains(&i),
        "stage index {i} out of range 1..={}",
        t.stages()
    );
    let ci1 = t.c(i + 1);
    match kind {
        CorrectionKind::Raw => Err(CoefficientError::RawUnsupported),
        CorrectionKind::Telescopic => {
            let sum: f64 = (1..=i).map(|j| raw_if_coeff(t, i, j, z)).sum();
            Ok((ci1 * z).exp() - z * sum)
        }
        CorrectionKind::NonlinearTranslation => {
            let sum: f64 = (1..i).map(|j| raw_if_coeff(t, i, j, z)).sum();
            Ok(ci1 * phi1(ci1 * z) - sum)
        }
    }
}

/// Corrected coefficient `ahat_{i+1,j}(z)`; tends to `a_{i+1,j}(0)` as
/// `z -> 0` for both kinds.
pub fn corrected_coeff(
    t: &ButcherTableau,
    kind: CorrectionKind,
    i: usize,
    j: usize,
    z: f64,
) -> Result<f64, CoefficientError> {
    assert!(
        1 <= j && j <= i && i <= t.stages(),
        "stage indices ({i},{j}) outside the lower triangle of a {}-stage tableau",
        t.stages()
    );
    match kind {
        CorrectionKind::Raw => Err(CoefficientError::RawUnsupported),
        CorrectionKind::Telescopic => {
            let denom = chi(t, kind, i, z)?;
            if denom == 0.0 {
                return Err(CoefficientError::TelescopicFactorZero { stage: i + 1, z });
            }
            Ok(raw_if_coeff(t, i, j, z) / denom)
        }
        CorrectionKind::NonlinearTranslation => {
            if j < i {
                Ok(raw_if_coeff(t, i, j, z))
            } else {
                chi(t, kind, i, z)
            }
        }
    }
}

/// The full corrected stage-coefficient table at one spectral argument.
#[derive(Debug, Clone)]
pub struct StageCoefficients {
    pub z: f64,
    /// Lower triangular `s x s`; `ahat[i-1][j-1]` is `ahat_{i+1,j}(z)`.
    pub ahat: Vec<Vec<f64>>,
    /// `chi[i-1]` is the correction factor `chi_{i+1}(z)`.
    pub chi: Vec<f64>,
}

/// Evaluates the whole triangular coefficient array and the factor vector
/// consistently with [`corrected_coeff`] and [`chi`].
pub fn stage_coefficients(
    t: &ButcherTableau,
    kind: CorrectionKind,
    z: f64,
) -> Result<StageCoefficients, CoefficientError> {
    let s = t.stages();
    let mut ahat = vec![vec![0.0; s]; s];
    let mut chis = vec![0.0; s];
    for i in 1..=s {
        chis[i - 1] = chi(t, kind, i, z)?;
        for j in 1..=i {
            ahat[i - 1][j - 1] = corrected_coeff(t, kind, i, j, z)?;
        }
    }
    Ok(StageCoefficients { z, ahat, chi: chis })
}
