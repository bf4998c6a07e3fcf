//! Constructors for the Gaussian state families used throughout: thermal
//! states, two-mode squeezed pairs, their amplified variants, and seeded
//! random states for property tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::partition::ModePartition;

/// Thermal product state with one symplectic eigenvalue per mode
/// (`nu = 1/2` is vacuum).
pub fn thermal(partition: ModePartition, nu: &[f64]) -> Result<GaussianState> {
    if nu.len() != partition.total_modes() {
        return Err(Error::structure(format!(
            "expected {} thermal eigenvalues, got {}",
            partition.total_modes(),
            nu.len()
        )));
    }
    for &v in nu {
        if !(v >= 0.5) || !v.is_finite() {
            return Err(Error::Domain {
                what: "thermal symplectic eigenvalue (requires nu >= 1/2)",
                value: v,
            });
        }
    }
    let diag: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
    let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    GaussianState::new(partition, sigma)
}

/// Product of `modes_per_side` two-mode squeezed pairs across subsystems
/// `A` and `B`: per pair, diagonal blocks `a/2 * I` and off-diagonal
/// `sqrt(a^2 - 1)/2 * diag(1, -1)`. Pure, with thermal marginals `nu = a/2`;
/// `a = 1` is the vacuum.
pub fn two_mode_squeezed(a: f64, modes_per_side: usize) -> Result<GaussianState> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "two-mode squeezing parameter (requires a >= 1)",
            value: a,
        });
    }
    if modes_per_side == 0 {
        return Err(Error::precondition("mode count must be positive"));
    }
    let m = modes_per_side;
    let partition = ModePartition::bipartite("A", m, "B", m)?;
    let c = (a * a - 1.0).sqrt() / 2.0;
    let mut sigma = DMatrix::identity(4 * m, 4 * m) * (a / 2.0);
    for k in 0..m {
        let (qa, qb) = (2 * k, 2 * (m + k));
        sigma[(qa, qb)] = c;
        sigma[(qb, qa)] = c;
        sigma[(qa + 1, qb + 1)] = -c;
        sigma[(qb + 1, qa + 1)] = -c;
    }
    GaussianState::new(partition, sigma)
}

/// The amplified two-mode squeezed family saturating the memory-assisted
/// phase-space bound in the limit `a -> infinity`: a two-mode squeezed state
/// with subsystem `A` passed through a quantum-limited amplifier of gain
/// `kappa = e^{s/M} + 1`, so that `S(A|B)` tends to `s` as `a` grows.
///
/// Covariance blocks per mode pair: `(kappa a + kappa - 1)/2 * I` on `A`,
/// `sqrt(kappa (a^2 - 1))/2 * diag(1, -1)` across, `a/2 * I` on `B`.
pub fn optimal_sequence_state(s: f64, a: f64, modes_per_side: usize) -> Result<GaussianState> {
    if !s.is_finite() {
        return Err(Error::Domain {
            what: "target conditional entropy",
            value: s,
        });
    }
    let kappa = (s / modes_per_side as f64).exp() + 1.0;
    two_mode_squeezed(a, modes_per_side)?.amplify("A", kappa)
}

/// Embeds a 2x2 single-mode operation at mode `i` of an identity on `m` modes.
fn embed_single(m: usize, i: usize, op: [[f64; 2]; 2]) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * m, 2 * m);
    for r in 0..2 {
        for c in 0..2 {
            s[(2 * i + r, 2 * i + c)] = op[r][c];
        }
    }
    s
}

/// Beam-splitter-style rotation by `phi` between modes `i` and `j`
/// (orthogonal and symplectic).
fn embed_beam_splitter(m: usize, i: usize, j: usize, phi: f64) -> DMatrix<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    let mut bs = DMatrix::identity(2 * m, 2 * m);
    for q in 0..2 {
        bs[(2 * i + q, 2 * i + q)] = c;
        bs[(2 * j + q, 2 * j + q)] = c;
        bs[(2 * i + q, 2 * j + q)] = s;
        bs[(2 * j + q, 2 * i + q)] = -s;
    }
    bs
}

/// A smooth six-parameter chart over bipartite (1 + 1 mode) Gaussian states,
/// built for derivative-free optimizers: every parameter vector in R^6 maps
/// to a valid state, covering product, squeezed, and entangled regimes.
///
/// `params = [x1, x2, r, phi, theta1, theta2]`: thermal occupations
/// `nu_i = 1/2 + x_i^2`, opposite local squeezers `exp(±r)` mixed by a beam
/// splitter of angle `phi`, then local phase rotations.
pub fn parameterized_two_mode_state(params: &[f64; 6]) -> GaussianState {
    let [x1, x2, r, phi, theta1, theta2] = *params;
    let nu = [0.5 + x1 * x1, 0.5 + x2 * x2];
    let mut d = DMatrix::zeros(4, 4);
    for (i, &v) in nu.iter().enumerate() {
        d[(2 * i, 2 * i)] = v;
        d[(2 * i + 1, 2 * i + 1)] = v;
    }
    let rotation = |theta: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        [[c, s], [-s, c]]
    };
    let squeeze = |z: f64| [[z.exp(), 0.0], [0.0, (-z).exp()]];
    let generator = embed_single(2, 0, rotation(theta1))
        * embed_single(2, 1, rotation(theta2))
        * embed_beam_splitter(2, 0, 1, phi)
        * embed_single(2, 0, squeeze(r))
        * embed_single(2, 1, squeeze(-r));
    let sigma = &generator * d * generator.transpose();
    let sigma = (&sigma + sigma.transpose()) / 2.0;
    let partition = ModePartition::bipartite("A", 1, "B", 1).expect("static labels");
    GaussianState::new(partition, sigma).expect("congruence of a valid diagonal state")
}

/// Seeded random valid Gaussian state: `sigma = S D S^T` with thermal
/// eigenvalues uniform in `[1/2, max_nu]` and `S` a product of per-mode phase
/// rotations, per-mode squeezers with log-squeeze uniform in
/// `[-max_squeeze, max_squeeze]`, and beam-splitter rotations over all mode
/// pairs. Deterministic in `seed`.
pub fn random_state(
    partition: ModePartition,
    seed: u64,
    max_nu: f64,
    max_squeeze: f64,
) -> Result<GaussianState> {
    if !(max_nu >= 0.5) || !max_nu.is_finite() {
        return Err(Error::Domain {
            what: "max_nu (requires >= 1/2)",
            value: max_nu,
        });
    }
    if !(max_squeeze >= 0.0) || !max_squeeze.is_finite() {
        return Err(Error::Domain {
            what: "max_squeeze (requires >= 0)",
            value: max_squeeze,
        });
    }
    let m = partition.total_modes();
    if m == 0 {
        return Err(Error::precondition("partition must have at least one mode"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let nu: Vec<f64> = (0..m)
        .map(|_| {
            if max_nu > 0.5 {
                rng.gen_range(0.5..=max_nu)
            } else {
                0.5
            }
        })
        .collect();
    let diag: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));

    let mut s = DMatrix::identity(2 * m, 2 * m);
    let rotation = |theta: f64| {
        let (c, sn) = (theta.cos(), theta.sin());
        [[c, sn], [-sn, c]]
    };
    for i in 0..m {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        s = embed_single(m, i, rotation(theta)) * s;
    }
    for i in 0..m {
        let r = if max_squeeze > 0.0 {
            rng.gen_range(-max_squeeze..=max_squeeze)
        } else {
            0.0
        };
        s = embed_single(m, i, [[r.exp(), 0.0], [0.0, (-r).exp()]]) * s;
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            s = embed_beam_splitter(m, i, j, phi) * s;
        }
    }
    for i in 0..m {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        s = embed_single(m, i, rotation(theta)) * s;
    }

    let sigma = &s * d * s.transpose();
    let sigma = (&sigma + sigma.transpose()) / 2.0;
    GaussianState::new(partition, sigma)
}
