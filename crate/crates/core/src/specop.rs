//! Periodic second-order central-difference Laplacian, represented through
//! its Fourier eigenstructure.
//!
//! `L_h` is the circulant operator with stencil `(eps^2/h^2)(-1, 2, -1)` in
//! 1D (tensor sum of two copies in 2D), so any scalar function of
//! `-tau*(L_h + kappa*I)` acts diagonally on the discrete Fourier basis.
//! `apply_fn` transforms, multiplies by `f(-tau*(lambda + kappa))` per mode
//! and transforms back; `apply_linear` applies the stencil directly and is
//! used for residuals and energies.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("grid needs at least 2 points per axis, got {m}")]
    TooFewPoints { m: usize },
    #[error("grid dimension must be 1 or 2, got {dim}")]
    BadDimension { dim: usize },
    #[error("grid function has {got} values but the grid has {expected} nodes")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("negative diffusion coefficient eps^2 = {eps2}")]
    NegativeDiffusion { eps2: f64 },
}

/// A uniform periodic grid: `M` points per axis with spacing `h`, covering
/// `[origin, origin + M*h)` along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    m: usize,
    h: f64,
    origin: [f64; 2],
}

impl Grid {
    pub fn new_1d(m: usize, h: f64, origin: f64) -> Result<Self, OperatorError> {
        if m < 2 {
            return Err(OperatorError::TooFewPoints { m });
        }
        Ok(Self { dim: 1, m, h, origin: [origin, 0.0] })
    }

    pub fn new_2d(m: usize, h: f64, origin: [f64; 2]) -> Result<Self, OperatorError> {
        if m < 2 {
            return Err(OperatorError::TooFewPoints { m });
        }
        Ok(Self { dim: 2, m, h, origin })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points_per_axis(&self) -> usize {
        self.m
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    /// Domain length per axis, `M * h`.
    pub fn extent(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Total number of nodes, `M^dim`.
    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `h^dim` of one node.
    pub fn cell_measure(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Coordinate of node `i` on a 1D grid.
    pub fn coord_1d(&self, i: usize) -> f64 {
        self.origin[0] + i as f64 * self.h
    }

    /// Coordinates of node `(i, j)` on a 2D grid (row `i`, column `j`).
    pub fn coord_2d(&self, i: usize, j: usize) -> (f64, f64) {
        (self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h)
    }
}

/// A real-valued field on a grid, stored flat in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self { values: vec![value; grid.len()] }
    }

    /// Samples `f(x)` at the nodes of a 1D grid.
    pub fn sample_1d(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        assert_eq!(grid.dim(), 1, "sample_1d on a {}-d grid", grid.dim());
        Self { values: (0..grid.len()).map(|i| f(grid.coord_1d(i))).collect() }
    }

    /// Samples `f(x, y)` at the nodes of a 2D grid.
    pub fn sample_2d(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(grid.dim(), 2, "sample_2d on a {}-d grid", grid.dim());
        let m = grid.points_per_axis();
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..m {
            for j in 0..m {
                let (x, y) = grid.coord_2d(i, j);
                values.push(f(x, y));
            }
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// `L_h` (and its stabilized shifts `L_kappa = L_h + kappa*I`) in diagonal
/// Fourier form. Immutable after construction and freely shareable.
#[derive(Clone)]
pub struct SpectralOperator {
    grid: Grid,
    eps2: f64,
    /// Per-axis eigenvalues `lambda_m = (eps^2/h^2)(2 - 2cos(2 pi m / M))`.
    lambda_axis: Vec<f64>,
    /// Flattened eigenvalues of `L_h` on the full grid (tensor sum in 2D).
    lambda: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOperator")
            .field("grid", &self.grid)
            .field("eps2", &self.eps2)
            .finish_non_exhaustive()
    }
}

/// Builds the diagonalized periodic Laplacian `L_h` on a grid.
pub fn build_operator(grid: Grid, eps2: f64) -> Result<SpectralOperator, OperatorError> {
    if eps2 < 0.0 {
        return Err(OperatorError::NegativeDiffusion { eps2 });
    }
    let m = grid.points_per_axis();
    let scale = eps2 / (grid.spacing() * grid.spacing());
    let lambda_axis: Vec<f64> = (0..m)
        .map(|k| scale * (2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / m as f64).cos()))
        .collect();
    let lambda = match grid.dim() {
        1 => lambda_axis.clone(),
        2 => {
            let mut full = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    full.push(lambda_axis[i] + lambda_axis[j]);
                }
            }
            full
        }
        dim => return Err(OperatorError::BadDimension { dim }),
    };
    let mut planner = FftPlanner::new();
    Ok(SpectralOperator {
        grid,
        eps2,
        lambda_axis,
        lambda,
        fwd: planner.plan_fft_forward(m),
        inv: planner.plan_fft_inverse(m),
    })
}

impl SpectralOperator {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    /// Eigenvalues of `L_h`, one per grid node, in mode order (tensor order
    /// of per-axis mode indices in 2D).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    pub fn eigenvalues_axis(&self) -> &[f64] {
        &self.lambda_axis
    }

    fn check_shape(&self, v: &GridFunction) -> Result<(), OperatorError> {
        if v.len() != self.grid.len() {
            return Err(OperatorError::ShapeMismatch { expected: self.grid.len(), got: v.len() });
        }
        Ok(())
    }

    /// The diagonal multiplier array `f(-tau*(lambda + kappa))`, one entry
    /// per mode. Callers that apply the same function every step should
    /// compute this once and reuse it with [`apply_multiplier`].
    ///
    /// [`apply_multiplier`]: SpectralOperator::apply_multiplier
    pub fn multiplier(&self, f: impl Fn(f64) -> f64, tau: f64, kappa: f64) -> Vec<f64> {
        self.lambda.iter().map(|&lam| f(-tau * (lam + kappa))).collect()
    }

    /// Applies `f(-tau*L_kappa)` to `v` through the Fourier basis. The
    /// output is real; conjugate symmetry is preserved because the
    /// multiplier depends on the mode only through `lambda_m = lambda_{M-m}`.
    pub fn apply_fn(
        &self,
        f: impl Fn(f64) -> f64,
        tau: f64,
        kappa: f64,
        v: &GridFunction,
    ) -> Result<GridFunction, OperatorError> {
        let mult = self.multiplier(f, tau, kappa);
        self.apply_multiplier(&mult, v)
    }

    /// Applies a precomputed diagonal multiplier to `v`.
    pub fn apply_multiplier(
        &self,
        mult: &[f64],
        v: &GridFunction,
    ) -> Result<GridFunction, OperatorError> {
        let mut spec = self.forward(v)?;
        for (s, &m) in spec.iter_mut().zip(mult) {
            *s *= m;
        }
        Ok(self.inverse(&mut spec))
    }

    /// Forward discrete Fourier transform of a real field (unnormalized).
    pub fn forward(&self, v: &GridFunction) -> Result<Vec<Complex64>, OperatorError> {
        self.check_shape(v)?;
        let mut buf: Vec<Complex64> = v.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        match self.grid.dim() {
            1 => self.fwd.process(&mut buf),
            _ => self.transform_2d(&mut buf, &self.fwd),
        }
        Ok(buf)
    }

    /// Inverse transform back to a real field; normalizes by `M^dim` and
    /// drops the (roundoff-level) imaginary part.
    pub fn inverse(&self, spec: &mut [Complex64]) -> GridFunction {
        match self.grid.dim() {
            1 => self.inv.process(spec),
            _ => self.transform_2d(spec, &self.inv),
        }
        let norm = 1.0 / self.grid.len() as f64;
        GridFunction::new(spec.iter().map(|c| c.re * norm).collect())
    }

    /// Row FFTs followed by column FFTs (via transposes) on an `M x M`
    /// row-major buffer.
    fn transform_2d(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let m = self.grid.points_per_axis();
        for row in buf.chunks_exact_mut(m) {
            plan.process(row);
        }
        let mut t = vec![Complex64::new(0.0, 0.0); m * m];
        transpose(buf, &mut t, m);
        for row in t.chunks_exact_mut(m) {
            plan.process(row);
        }
        transpose(&t, buf, m);
    }

    /// `L_kappa v` through the difference stencil directly (not spectrally):
    /// `(L_h v)_i = (eps^2/h^2)(2 v_i - v_{i-1} - v_{i+1})` with periodic
    /// wraparound, plus `kappa v`.
    pub fn apply_linear(&self, kappa: f64, v: &GridFunction) -> Result<GridFunction, OperatorError> {
        self.check_shape(v)?;
        let m = self.grid.points_per_axis();
        let scale = self.eps2 / (self.grid.spacing() * self.grid.spacing());
        let x = &v.values;
        let mut out = vec![0.0; x.len()];
        match self.grid.dim() {
            1 => {
                for i in 0..m {
                    let left = x[(i + m - 1) % m];
                    let right = x[(i + 1) % m];
                    out[i] = scale * (2.0 * x[i] - left - right) + kappa * x[i];
                }
            }
            _ => {
                for i in 0..m {
                    let up = (i + m - 1) % m;
                    let down = (i + 1) % m;
                    for j in 0..m {
                        let left = (j + m - 1) % m;
                        let right = (j + 1) % m;
                        let c = x[i * m + j];
                        out[i * m + j] = scale
                            * (4.0 * c
                                - x[up * m + j]
                                - x[down * m + j]
                                - x[i * m + left]
                                - x[i * m + right])
                            + kappa * c;
                    }
                }
            }
        }
        Ok(GridFunction::new(out))
    }

    /// Weighted inner product `h^dim * sum_i u_i v_i`.
    pub fn inner(&self, u: &GridFunction, v: &GridFunction) -> f64 {
        let dot: f64 = u.values.iter().zip(&v.values).map(|(a, b)| a * b).sum();
        self.grid.cell_measure() * dot
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in 0..m {
            dst[j * m + i] = src[i * m + j];
        }
    }
}
