//! The standard symplectic form on phase space.
//!
//! Quadratures are ordered `(Q_1, P_1, Q_2, P_2, ...)`, so the form is the
//! direct sum of `M` copies of `[[0, 1], [-1, 0]]`.

use nalgebra::DMatrix;

/// `2M x 2M` symplectic form for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut delta = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        delta[(2 * m, 2 * m + 1)] = 1.0;
        delta[(2 * m + 1, 2 * m)] = -1.0;
    }
    delta
}

/// Max-abs-entry residual of the symplectic identity `S Delta S^T = Delta`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(s.nrows(), s.ncols());
    debug_assert_eq!(s.nrows() % 2, 0);
    let delta = symplectic_form(s.nrows() / 2);
    (s * &delta * s.transpose() - delta).abs().max()
}
