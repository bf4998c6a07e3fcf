//! Shared numerical tolerances.

/// Covariance matrices must be symmetric to this tolerance on ingestion;
/// the stored matrix is the symmetrized average.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Physicality slack on eigenvalue checks: `sigma + (i/2) Delta` must have
/// min eigenvalue `>= -PHYSICALITY_TOL`, symplectic eigenvalues
/// `>= 1/2 - PHYSICALITY_TOL`. Absorbs round-off from matrix products.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Williamson / purification invariants (orthogonal and symplectic
/// identities built from iterative eigensolvers).
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// `g_inverse` residual: `|g(x) - y|` after root refinement.
pub const G_INVERSE_TOL: f64 = 1e-12;

/// Hermiticity tolerance for Fock operators flagged Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues of nominally PSD Fock operators are clipped at zero; below
/// this they are treated as a real physicality violation, not round-off.
pub const FOCK_PSD_TOL: f64 = 1e-7;
