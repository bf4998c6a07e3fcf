//! Numerical checkers for two operator inequalities behind the phase-space
//! entropy bounds: Jensen's trace inequality over frames, and the
//! Berezin–Lieb inequality with a memory system (lower-symbol direction).
//!
//! Both checkers return `(lhs, rhs)` so callers can assert
//! `lhs >= rhs - tolerance` with whatever tolerance fits their grid.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{heterodyne_condition, FockOperator, FockSpace};
use crate::quadrature::QuadratureGrid;

type C64 = Complex<f64>;

/// Completeness tolerance for frames: `Σ |φ_k><φ_k|` must match the identity
/// entrywise within this bound.
pub const FRAME_TOL: f64 = 1e-8;

/// Slack below which the spectrum of a Berezin–Lieb test operator may leave
/// `[0, 1]` before it is rejected.
pub const SPECTRUM_TOL: f64 = 1e-9;

/// A concave function on `[0, 1]`, nonnegative at the endpoints. The library
/// ships the two closed forms used by the entropy bounds plus a piecewise
/// linear family for property tests that sample over "all concave f".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConcaveFunction {
    /// `f(x) = -x ln x`, extended by continuity with `f(0) = 0`.
    EntropyTerm,
    /// `f(x) = x (1 - x)`.
    Quadratic,
    /// Linear interpolation through `(x, f(x))` knots with decreasing slopes.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl ConcaveFunction {
    /// Validates knots: x strictly increasing from 0 to 1, slopes
    /// nonincreasing (concavity), endpoint values nonnegative.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 || knots[0].0 != 0.0 || knots[knots.len() - 1].0 != 1.0 {
            return Err(Error::precondition(
                "piecewise-linear knots must run from x = 0 to x = 1",
            ));
        }
        if knots[0].1 < 0.0 || knots[knots.len() - 1].1 < 0.0 {
            return Err(Error::precondition(
                "piecewise-linear endpoint values must be nonnegative",
            ));
        }
        let mut previous_slope = f64::INFINITY;
        for pair in knots.windows(2) {
            let dx = pair[1].0 - pair[0].0;
            if dx <= 0.0 {
                return Err(Error::precondition("knot abscissae must increase"));
            }
            let slope = (pair[1].1 - pair[0].1) / dx;
            if slope > previous_slope + 1e-12 {
                return Err(Error::precondition(
                    "knot slopes must be nonincreasing (concavity)",
                ));
            }
            previous_slope = slope;
        }
        Ok(Self::PiecewiseLinear { knots })
    }

    /// A random concave piecewise-linear function with `f(0) = 0` and
    /// `f(1) >= 0` (hence `f >= 0` on all of `[0, 1]`). Pinning `f(0) = 0`
    /// keeps phase-space integrals of `f(<z|X|z>)` finite.
    pub fn random_piecewise_linear(rng: &mut impl Rng, segments: usize) -> Self {
        let segments = segments.clamp(2, 16);
        let mut xs: Vec<f64> = (0..segments - 1).map(|_| rng.gen::<f64>()).collect();
        xs.push(0.0);
        xs.push(1.0);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let mut slopes: Vec<f64> = (0..xs.len() - 1)
            .map(|_| rng.gen_range(-3.0..3.0))
            .collect();
        slopes.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // Lift all slopes so that f(1) >= 0; concavity is unaffected.
        let f1: f64 = slopes
            .iter()
            .zip(xs.windows(2))
            .map(|(s, w)| s * (w[1] - w[0]))
            .sum();
        let lift = (-f1).max(0.0);
        let mut knots = Vec::with_capacity(xs.len());
        let mut value = 0.0;
        knots.push((0.0, 0.0));
        for (slope, w) in slopes.iter().zip(xs.windows(2)) {
            value += (slope + lift) * (w[1] - w[0]);
            knots.push((w[1], value));
        }
        knots.last_mut().unwrap().0 = 1.0;
        Self::PiecewiseLinear { knots }
    }

    /// Evaluates the function; the argument is clamped to `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Self::EntropyTerm => {
                if x > 0.0 {
                    -x * x.ln()
                } else {
                    0.0
                }
            }
            Self::Quadratic => x * (1.0 - x),
            Self::PiecewiseLinear { knots } => {
                let upper = knots
                    .iter()
                    .position(|&(kx, _)| kx >= x)
                    .unwrap_or(knots.len() - 1)
                    .max(1);
                let (x0, y0) = knots[upper - 1];
                let (x1, y1) = knots[upper];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

/// Σ f(λ) over the clipped-to-[0, 1] spectrum of a Hermitian matrix.
fn trace_of_applied(matrix: &DMatrix<C64>, f: &ConcaveFunction) -> f64 {
    let values = crate::eigen::hermitian_eigenvalues(matrix)
        .expect("finite Hermitian matrix by construction");
    values.iter().map(|&l| f.eval(l)).sum()
}

/// Jensen's trace inequality over a frame: for vectors with
/// `Σ |φ_k><φ_k| = I`, weights `a_k ∈ [0, 1]`, and concave `f`,
///
/// `lhs = Tr f(Σ a_k |φ_k><φ_k|)  >=  Σ f(a_k) <φ_k|φ_k> = rhs`
///
/// (up to round-off). Returns `(lhs, rhs)`; errors if the frame is not
/// complete within `FRAME_TOL`.
pub fn jensen_check(
    frame: &[DVector<C64>],
    a: &[f64],
    f: &ConcaveFunction,
) -> Result<(f64, f64)> {
    if frame.is_empty() || frame.len() != a.len() {
        return Err(Error::precondition(format!(
            "frame has {} vectors but {} weights",
            frame.len(),
            a.len()
        )));
    }
    let dim = frame[0].len();
    if frame.iter().any(|v| v.len() != dim) {
        return Err(Error::precondition("frame vectors differ in dimension"));
    }
    for &weight in a {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Domain {
                what: "frame weight (requires 0 <= a_k <= 1)",
                value: weight,
            });
        }
    }
    let mut completeness = DMatrix::<C64>::zeros(dim, dim);
    let mut weighted = DMatrix::<C64>::zeros(dim, dim);
    for (vector, &weight) in frame.iter().zip(a) {
        let projector = vector * vector.adjoint();
        completeness += &projector;
        weighted += projector * Complex::new(weight, 0.0);
    }
    let deficit = (&completeness - DMatrix::<C64>::identity(dim, dim))
        .map(|c| c.norm())
        .max();
    if deficit > FRAME_TOL {
        return Err(Error::precondition(format!(
            "frame is not complete: max deviation from identity {deficit:.3e}"
        )));
    }
    let lhs = trace_of_applied(&weighted, f);
    let rhs: f64 = frame
        .iter()
        .zip(a)
        .map(|(v, &weight)| f.eval(weight) * v.norm_squared())
        .sum();
    Ok((lhs, rhs))
}

/// Berezin–Lieb inequality with memory (lower-symbol direction): for an
/// operator `0 <= X <= I` on `A ⊗ B` (the grid's modes address `A`) and a
/// concave `f: [0,1] -> [0,∞)`,
///
/// `lhs = ∫ Tr_B f(<z| X |z>) d^{2M}z/π^M  >=  Tr f(X) = rhs`
///
/// up to the grid's quadrature error. `f` acts on the Hermitian conditional
/// operators by eigendecomposition. Returns `(lhs, rhs)`.
pub fn berezin_lieb_check(
    x: &FockOperator,
    f: &ConcaveFunction,
    grid: &QuadratureGrid,
) -> Result<(f64, f64)> {
    let modes_a = grid.modes();
    if modes_a > x.space().modes() {
        return Err(Error::precondition(format!(
            "grid addresses {modes_a} modes but the operator has {}",
            x.space().modes()
        )));
    }
    let spectrum = x.eigenvalues()?;
    let (min, max) = (spectrum[0], spectrum[spectrum.len() - 1]);
    if min < -SPECTRUM_TOL || max > 1.0 + SPECTRUM_TOL {
        return Err(Error::precondition(format!(
            "operator spectrum [{min:.3e}, {max:.3e}] leaves [0, 1]"
        )));
    }
    let rhs: f64 = spectrum.iter().map(|&l| f.eval(l)).sum();
    let lhs = grid.integrate(|z| {
        let conditional =
            heterodyne_condition(x, modes_a, z).expect("split checked above");
        trace_of_applied(conditional.matrix(), f)
    });
    Ok((lhs, rhs))
}

/// A random Parseval frame: `count` complex vectors of dimension `dim` with
/// `Σ |φ_k><φ_k| = I` exactly (up to linear algebra round-off), built by
/// whitening random Gaussian vectors with `S^{-1/2}`.
pub fn random_parseval_frame(
    dim: usize,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<DVector<C64>>> {
    if dim == 0 || count < dim {
        return Err(Error::precondition(
            "a frame needs at least as many vectors as dimensions",
        ));
    }
    let raw: Vec<DVector<C64>> = (0..count)
        .map(|_| {
            DVector::from_fn(dim, |_, _| {
                Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
        })
        .collect();
    let mut overlap = DMatrix::<C64>::zeros(dim, dim);
    for v in &raw {
        overlap += v * v.adjoint();
    }
    let eig = crate::eigen::hermitian_eigen(&overlap)?;
    if eig.values.iter().any(|&l| l < 1e-10) {
        return Err(Error::numerical(
            "random frame vectors are numerically rank-deficient",
        ));
    }
    let inv_sqrt = &eig.vectors
        * DMatrix::from_diagonal(
            &eig.values.map(|l| Complex::new(1.0 / l.sqrt(), 0.0)),
        )
        * eig.vectors.adjoint();
    Ok(raw.into_iter().map(|v| &inv_sqrt * v).collect())
}

/// A random Hermitian operator with spectrum drawn uniformly from `[0, 1]`,
/// conjugated by a random unitary — a generic `0 <= X <= I` test operator.
pub fn random_bounded_operator(space: FockSpace, rng: &mut impl Rng) -> FockOperator {
    let n = space.dim();
    let gaussian_ish = DMatrix::<C64>::from_fn(n, n, |_, _| {
        Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let hermitian = (&gaussian_ish + gaussian_ish.adjoint()) * Complex::new(0.5, 0.0);
    let basis = crate::eigen::hermitian_eigen(&hermitian)
        .expect("finite random Hermitian matrix")
        .vectors;
    let spectrum =
        DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| {
            Complex::new(rng.gen::<f64>(), 0.0)
        }));
    let matrix = &basis * spectrum * basis.adjoint();
    FockOperator::from_matrix(space, matrix).expect("dimensions match by construction")
}
