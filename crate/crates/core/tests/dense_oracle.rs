//! Spectral/dense equivalence: everything the library applies through the
//! Fourier diagonalization is checked against a dense route that assembles
//! the operator from its stencil and eigendecomposes it with nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use gradflow_core::models::{energy, modified_energy_if1, Model};
use gradflow_core::scalarfun::{self, CorrectionKind};
use gradflow_core::specop::{build_operator, Grid, GridFunction, SpectralOperator};
use gradflow_core::tableau::registry_get;

/// Dense `L_kappa` assembled column by column from the stencil route.
fn assemble_dense(op: &SpectralOperator, kappa: f64) -> DMatrix<f64> {
    let n = op.grid().len();
    let mut mat = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let out = op.apply_linear(kappa, &GridFunction::new(e)).unwrap();
        for row in 0..n {
            mat[(row, col)] = out.values[row];
        }
    }
    mat
}

/// Dense `f(-tau * L_kappa) v` through a symmetric eigendecomposition.
fn dense_apply(
    lk: &DMatrix<f64>,
    f: impl Fn(f64) -> f64,
    tau: f64,
    v: &[f64],
) -> Vec<f64> {
    let eig = SymmetricEigen::new(lk.clone());
    let vt_v = eig.eigenvectors.transpose() * DVector::from_column_slice(v);
    let scaled = DVector::from_iterator(
        v.len(),
        eig.eigenvalues.iter().zip(vt_v.iter()).map(|(&lam, &c)| f(-tau * lam) * c),
    );
    (&eig.eigenvectors * scaled).iter().copied().collect()
}

fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed | 1;
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 2_000_000) as f64 / 1_000_000.0 - 1.0
        })
        .collect()
}

/// Scalar functions exercised by the equivalence check: the exponential,
/// phi_1 and every coefficient entry of the nonlinear-translation corrected
/// three-stage Heun scheme.
fn function_set() -> Vec<(String, Box<dyn Fn(f64) -> f64>)> {
    let mut fs: Vec<(String, Box<dyn Fn(f64) -> f64>)> = vec![
        ("exp".into(), Box::new(f64::exp)),
        ("phi1".into(), Box::new(scalarfun::phi1)),
    ];
    let heun3 = registry_get("Heun3").unwrap();
    for i in 1..=3usize {
        for j in 1..=i {
            let t = heun3.clone();
            fs.push((
                format!("ahat_{}{}", i + 1, j),
                Box::new(move |z| {
                    scalarfun::corrected_coeff(&t, CorrectionKind::NonlinearTranslation, i, j, z)
                        .unwrap()
                }),
            ));
        }
    }
    fs
}

#[test]
fn one_d_spectral_matches_dense_eigendecomposition() {
    let grid = Grid::new_1d(8, 0.4, 0.0).unwrap();
    let op = build_operator(grid, 0.7).unwrap();
    let (tau, kappa) = (0.37, 1.3);
    let lk = assemble_dense(&op, kappa);
    let v = GridFunction::new(pseudo_random(8, 42));
    for (name, f) in function_set() {
        let spectral = op.apply_fn(&f, tau, kappa, &v).unwrap();
        let dense = dense_apply(&lk, &f, tau, &v.values);
        for (a, b) in spectral.values.iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-12, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn two_d_spectral_matches_dense_eigendecomposition() {
    let grid = Grid::new_2d(4, 0.5, [-1.0, -1.0]).unwrap();
    let op = build_operator(grid, 0.2).unwrap();
    let (tau, kappa) = (0.8, 2.0);
    let lk = assemble_dense(&op, kappa);
    let v = GridFunction::new(pseudo_random(16, 7));
    for (name, f) in function_set() {
        let spectral = op.apply_fn(&f, tau, kappa, &v).unwrap();
        let dense = dense_apply(&lk, &f, tau, &v.values);
        for (a, b) in spectral.values.iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-12, "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn circulant_eigenvalues_match_the_dense_spectrum() {
    let grid = Grid::new_1d(4, 1.0, 0.0).unwrap();
    let op = build_operator(grid, 1.0).unwrap();
    let dense = assemble_dense(&op, 0.0);
    let mut dense_eigs: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    dense_eigs.sort_by(f64::total_cmp);
    let mut spectral = op.eigenvalues().to_vec();
    spectral.sort_by(f64::total_cmp);
    for (a, b) in spectral.iter().zip(&dense_eigs) {
        assert!((a - b).abs() <= 1e-12);
    }
    for (a, b) in spectral.iter().zip([0.0, 2.0, 2.0, 4.0]) {
        assert!((a - b).abs() <= 1e-14, "{spectral:?}");
    }
}

#[test]
fn energy_matches_the_dense_quadratic_form() {
    let grid = Grid::new_1d(8, 0.25, 0.0).unwrap();
    let op = build_operator(grid, 0.05).unwrap();
    let m = Model::DoubleWell;
    let lh = assemble_dense(&op, 0.0);
    let u = GridFunction::new(pseudo_random(8, 99));
    let uv = DVector::from_column_slice(&u.values);
    let quad = 0.5 * (uv.transpose() * &lh * &uv)[(0, 0)];
    let pot: f64 = u.values.iter().map(|&x| 0.25 * (x * x - 1.0) * (x * x - 1.0)).sum();
    let expect = grid.cell_measure() * (quad + pot);
    let got = energy(&op, &m, &u).unwrap();
    assert!((got - expect).abs() <= 1e-12, "{got} vs {expect}");
}

#[test]
fn modified_energy_matches_the_dense_route() {
    let grid = Grid::new_1d(8, 0.25, 0.0).unwrap();
    let op = build_operator(grid, 0.05).unwrap();
    let m = Model::DoubleWell;
    let (tau, kappa) = (0.5, 2.0);
    let lk = assemble_dense(&op, kappa);
    let u = GridFunction::new(pseudo_random(8, 1234));
    // beta(tau L_kappa) u with beta(x) = e^x - x - 1, via the dense spectrum.
    let bu = dense_apply(&lk, |z| (-z).exp() + z - 1.0, tau, &u.values);
    let quad: f64 = u.values.iter().zip(&bu).map(|(a, b)| a * b).sum();
    let expect =
        energy(&op, &m, &u).unwrap() + grid.cell_measure() * quad / (2.0 * tau);
    let got = modified_energy_if1(&op, &m, tau, kappa, &u).unwrap();
    assert!((got - expect).abs() <= 1e-11, "{got} vs {expect}");
}
