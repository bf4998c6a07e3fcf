//! Williamson normal form `V = S diag(nu_1, nu_1, ..., nu_M, nu_M) S^T`
//! with `S` symplectic, and Gaussian purification built from it.

use nalgebra::{Complex, DMatrix, DVector};

use crate::eigen::{hermitian_eigen, symmetric_eigen};
use crate::error::{Error, Result};
use crate::form::{symplectic_form, symplectic_residual};
use crate::gaussian::GaussianState;
use crate::tol::DECOMPOSITION_TOL;

/// Result of [`williamson`]: `state.sigma() = symplectic * D * symplectic^T`
/// where `D` repeats each `nu[j]` twice, and `symplectic` preserves the form.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    /// Symplectic congruence matrix `S`.
    pub symplectic: DMatrix<f64>,
    /// Symplectic eigenvalues, descending, one per mode.
    pub nu: Vec<f64>,
}

impl WilliamsonDecomposition {
    /// The diagonal thermal matrix `D = diag(nu_1, nu_1, ...)`.
    pub fn thermal_covariance(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self.nu.iter().flat_map(|&n| [n, n]).collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    /// Max-abs-entry residuals of the two defining identities
    /// `(S Delta S^T - Delta, S D S^T - V)`.
    pub fn residuals(&self, v: &DMatrix<f64>) -> (f64, f64) {
        let form = symplectic_residual(&self.symplectic);
        let recon = (&self.symplectic * self.thermal_covariance() * self.symplectic.transpose()
            - v)
            .abs()
            .max();
        (form, recon)
    }
}

/// Symmetric square root and inverse square root of a positive-definite matrix.
fn sqrt_and_inv_sqrt(v: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = symmetric_eigen(v)?;
    let min = eig.values[0];
    if min <= 0.0 {
        return Err(Error::numerical(format!(
            "matrix must be positive definite (min eigenvalue {min:.3e})"
        )));
    }
    let u = &eig.vectors;
    let root = u * DMatrix::from_diagonal(&eig.values.map(f64::sqrt)) * u.transpose();
    let inv_root =
        u * DMatrix::from_diagonal(&eig.values.map(|x| 1.0 / x.sqrt())) * u.transpose();
    Ok((root, inv_root))
}

/// Computes the Williamson normal form of the state's covariance matrix.
///
/// Route: `Gamma = V^{-1/2} Delta V^{-1/2}` is antisymmetric, so `i Gamma` is
/// Hermitian and its eigenpairs come in `(+lambda, u)`, `(-lambda, conj u)`
/// pairs with `lambda = 1/nu`. Writing `u = x + i y`, the real columns
/// `(sqrt(2) y, sqrt(2) x)` are orthonormal and bring `Gamma` to normal form,
/// from which `S = V^{1/2} O D_lambda^{1/2}`.
pub fn williamson(state: &GaussianState) -> Result<WilliamsonDecomposition> {
    let v = state.sigma();
    let m = state.modes();
    if m == 0 {
        return Ok(WilliamsonDecomposition {
            symplectic: DMatrix::zeros(0, 0),
            nu: Vec::new(),
        });
    }
    let (root, inv_root) = sqrt_and_inv_sqrt(v)?;
    let gamma = &inv_root * symplectic_form(m) * &inv_root;
    // i * Gamma as an explicit Hermitian complex matrix.
    let hermitian = DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        Complex::new(0.0, (gamma[(i, j)] - gamma[(j, i)]) / 2.0)
    });
    let eig = hermitian_eigen(&hermitian)?;

    // The spectrum is +-lambda pairs, ascending; the upper half holds the
    // positive eigenvalues in ascending order, so nu = 1/lambda comes out
    // descending.
    let mut o = DMatrix::zeros(2 * m, 2 * m);
    let mut lambda = Vec::with_capacity(m);
    for pair in 0..m {
        let col = m + pair;
        let lam = eig.values[col];
        if lam <= 0.0 {
            return Err(Error::numerical(format!(
                "normal-form spectrum not strictly paired (lambda = {lam:.3e})"
            )));
        }
        lambda.push(lam);
        let u = eig.vectors.column(col);
        for row in 0..2 * m {
            o[(row, 2 * pair)] = std::f64::consts::SQRT_2 * u[row].im;
            o[(row, 2 * pair + 1)] = std::f64::consts::SQRT_2 * u[row].re;
        }
    }

    let d_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * m,
        lambda.iter().flat_map(|&l| [l.sqrt(), l.sqrt()]),
    ));
    let symplectic = root * o * d_sqrt;
    let nu: Vec<f64> = lambda.iter().map(|&l| 1.0 / l).collect();

    let decomposition = WilliamsonDecomposition { symplectic, nu };
    let (form_residual, recon_residual) = decomposition.residuals(v);
    if form_residual > DECOMPOSITION_TOL || recon_residual > DECOMPOSITION_TOL {
        return Err(Error::numerical(format!(
            "normal form failed self-check (form residual {form_residual:.3e}, \
             reconstruction residual {recon_residual:.3e})"
        )));
    }
    Ok(decomposition)
}

/// Gaussian purification: extends the state with a purifier subsystem of the
/// same mode count so that the joint state is pure and its marginal on the
/// original labels is the input.
///
/// Construction: with `V = S D S^T`, the pure covariance is
/// `blockdiag(S, S) [[D, E], [E^T, D]] blockdiag(S, S)^T` where
/// `E = diag_blocks(sqrt(nu_j^2 - 1/4) sigma_z)` — a product of two-mode
/// squeezed pairs, one per mode.
pub fn purification(state: &GaussianState, purifier_label: &str) -> Result<GaussianState> {
    state.require_valid()?;
    let m = state.modes();
    let decomposition = williamson(state)?;
    let partition = state.partition().extended(purifier_label, m)?;

    let dim = 2 * m;
    let mut core = DMatrix::zeros(2 * dim, 2 * dim);
    for (j, &nu) in decomposition.nu.iter().enumerate() {
        let q = 2 * j;
        let e = (nu * nu - 0.25).max(0.0).sqrt();
        core[(q, q)] = nu;
        core[(q + 1, q + 1)] = nu;
        core[(dim + q, dim + q)] = nu;
        core[(dim + q + 1, dim + q + 1)] = nu;
        core[(q, dim + q)] = e;
        core[(dim + q, q)] = e;
        core[(q + 1, dim + q + 1)] = -e;
        core[(dim + q + 1, q + 1)] = -e;
    }

    let mut big_s = DMatrix::zeros(2 * dim, 2 * dim);
    big_s.view_mut((0, 0), (dim, dim)).copy_from(&decomposition.symplectic);
    big_s
        .view_mut((dim, dim), (dim, dim))
        .copy_from(&decomposition.symplectic);
    let sigma = &big_s * core * big_s.transpose();
    let sigma = (&sigma + sigma.transpose()) / 2.0;
    GaussianState::new(partition, sigma)
}
