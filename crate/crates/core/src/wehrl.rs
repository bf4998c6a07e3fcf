//! Wehrl (Husimi) entropies of Gaussian states: closed forms for the Husimi
//! function, its differential entropy, and the heterodyne-conditional
//! entropy `S(Z|B)` obtained when one subsystem is measured with coherent
//! states while another is kept as quantum side information.

use nalgebra::{Cholesky, Complex, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::gaussian::GaussianState;
use crate::quadrature::QuadratureGrid;

/// Which computational route produced an [`EntropyBundle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "gaussian-closed-form")]
    GaussianClosedForm,
    #[serde(rename = "fock-quadrature")]
    FockQuadrature,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::GaussianClosedForm => write!(f, "gaussian-closed-form"),
            Method::FockQuadrature => write!(f, "fock-quadrature"),
        }
    }
}

/// Joint, memory, and conditional entropies of the heterodyne outcome `Z`
/// with quantum memory `B`: `S(Z|B) = S(ZB) - S(B)` by construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyBundle {
    pub s_zb: f64,
    pub s_b: f64,
    pub s_z_given_b: f64,
    pub method: Method,
    /// Estimated numerical error: quadrature budget for the Fock route,
    /// effectively zero for closed forms.
    pub error_budget: f64,
    /// Reliability caveat (e.g. excessive truncation loss), if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

impl EntropyBundle {
    pub(crate) fn from_parts(s_zb: f64, s_b: f64, method: Method, error_budget: f64) -> Self {
        Self {
            s_zb,
            s_b,
            s_z_given_b: s_zb - s_b,
            method,
            error_budget,
            warning: None,
        }
    }
}

/// Cholesky factor of `Sigma + I/2`, the Husimi covariance.
fn husimi_cholesky(state: &GaussianState) -> Result<Cholesky<f64, Dyn>> {
    let n = state.dim();
    let shifted = state.sigma() + DMatrix::identity(n, n) * 0.5;
    Cholesky::new(shifted).ok_or_else(|| {
        Error::numerical("Husimi covariance Sigma + I/2 is not positive definite")
    })
}

fn ln_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
}

/// Husimi function `Q(z) = <z|rho|z>` of a Gaussian state:
/// `det(Sigma + I/2)^{-1/2} exp(-r^T (Sigma + I/2)^{-1} r / 2)` with
/// `r = sqrt(2) (Re z_1, Im z_1, ...)`. Normalized so that
/// `∫ Q d^{2M}z/pi^M = 1`.
pub fn husimi_gaussian(state: &GaussianState, z: &[Complex<f64>]) -> Result<f64> {
    if z.len() != state.modes() {
        return Err(Error::precondition(format!(
            "phase-space point has {} entries for {} modes",
            z.len(),
            state.modes()
        )));
    }
    let chol = husimi_cholesky(state)?;
    let r = DVector::from_iterator(
        2 * state.modes(),
        z.iter()
            .flat_map(|c| [std::f64::consts::SQRT_2 * c.re, std::f64::consts::SQRT_2 * c.im]),
    );
    let solved = chol.solve(&r);
    let quad_form = r.dot(&solved);
    Ok((-0.5 * (ln_det(&chol) + quad_form)).exp())
}

/// Wehrl entropy of a Gaussian state:
/// `S_W = M + (1/2) ln det(Sigma + I/2)`, the differential entropy of the
/// heterodyne outcome. Its minimum over all states is `M` (coherent states).
pub fn wehrl_entropy_gaussian(state: &GaussianState) -> Result<f64> {
    let chol = husimi_cholesky(state)?;
    Ok(state.modes() as f64 + 0.5 * ln_det(&chol))
}

/// Covariance of the `memory` subsystem after a heterodyne measurement of
/// `target`: `Sigma_B - Sigma_AB^T (Sigma_A + I/2)^{-1} Sigma_AB`.
/// Independent of the outcome `z`, as for any Gaussian conditioning.
pub(crate) fn heterodyne_conditioned_memory(
    state: &GaussianState,
    target: &[&str],
    memory: &[&str],
) -> Result<GaussianState> {
    let idx_a = state.partition().quadrature_indices_of(target)?;
    let idx_b = state.partition().quadrature_indices_of(memory)?;
    let sigma = state.sigma();
    let cross = DMatrix::from_fn(idx_a.len(), idx_b.len(), |r, c| {
        sigma[(idx_a[r], idx_b[c])]
    });
    let sigma_a = state.marginal(target)?;
    let chol = husimi_cholesky(&sigma_a)?;
    let conditioned = state.marginal(memory)?.sigma() - cross.transpose() * chol.solve(&cross);
    let conditioned = (&conditioned + conditioned.transpose()) / 2.0;
    GaussianState::new(state.partition().restriction(memory)?, conditioned)
}

/// Conditional Wehrl entropy of a Gaussian state: heterodyne the `target`
/// subsystem (outcome `Z`) while holding `memory` as quantum side
/// information. Computed through the chain
/// `S(Z|B) = S(B|Z) + S_W(target marginal) - S(B)`, all in closed form.
pub fn conditional_wehrl_gaussian(
    state: &GaussianState,
    target: &[&str],
    memory: &[&str],
) -> Result<EntropyBundle> {
    state.partition().check_disjoint(target, memory)?;
    let wehrl_a = wehrl_entropy_gaussian(&state.marginal(target)?)?;
    if memory.is_empty() {
        return Ok(EntropyBundle::from_parts(
            wehrl_a,
            0.0,
            Method::GaussianClosedForm,
            0.0,
        ));
    }
    let s_b_given_z = heterodyne_conditioned_memory(state, target, memory)?
        .von_neumann_entropy()?;
    let s_b = state.marginal(memory)?.von_neumann_entropy()?;
    let s_z_given_b = s_b_given_z + wehrl_a - s_b;
    Ok(EntropyBundle::from_parts(
        s_z_given_b + s_b,
        s_b,
        Method::GaussianClosedForm,
        0.0,
    ))
}

/// Builds a grid adapted to the `target` marginal of a state: the scale is
/// the mean diagonal of its Husimi covariance `Sigma_A + I/2`.
pub fn adapted_grid(
    state: &GaussianState,
    target: &[&str],
    radial_order: usize,
    angular_order: usize,
) -> Result<QuadratureGrid> {
    let marginal = state.marginal(target)?;
    let scale = marginal.sigma().diagonal().mean() + 0.5;
    QuadratureGrid::build(marginal.modes(), radial_order, angular_order, scale)
}

/// Conditional Wehrl entropy straight from a truncated Fock density
/// operator, with no Gaussian assumptions: heterodyne the leading `modes_a`
/// modes (the grid must address exactly those), keep the rest as memory.
///
/// `S(ZB) = ∫ (-Tr[<z|rho|z> ln <z|rho|z>]) d^{2M}z/pi^M` by quadrature of
/// the unnormalized matrix entropy; `S(B)` from the B-marginal's spectrum.
pub fn conditional_wehrl_fock(
    rho: &FockOperator,
    modes_a: usize,
    grid: &QuadratureGrid,
) -> Result<EntropyBundle> {
    conditional_wehrl_fock_amplified(rho, modes_a, 1.0, grid)
}

/// Same as [`conditional_wehrl_fock`] but with a quantum-limited amplifier
/// of gain `kappa` applied to the measured modes first, realized through the
/// exact conditional-rescaling identity (see
/// [`crate::fock::amplified_conditional`]). The memory marginal is untouched
/// because the amplifier acts on the measured side only.
pub fn conditional_wehrl_fock_amplified(
    rho: &FockOperator,
    modes_a: usize,
    kappa: f64,
    grid: &QuadratureGrid,
) -> Result<EntropyBundle> {
    use crate::fock::{
        amplified_conditional, matrix_entropy, matrix_entropy_unnormalized, partial_trace_a,
    };
    if grid.modes() != modes_a {
        return Err(Error::precondition(format!(
            "grid addresses {} modes but {} are being measured",
            grid.modes(),
            modes_a
        )));
    }
    // A full spectral check of rho would cost O(dim^3) on the joint space;
    // Hermiticity + trace are checked here, and positivity is enforced
    // per-node, where every conditional's spectrum is clipped with a hard
    // error below the round-off threshold.
    let residual = rho.hermiticity_residual();
    if residual > crate::tol::HERMITICITY_TOL {
        return Err(Error::structure(format!(
            "density operator is not Hermitian (residual {residual:.3e})"
        )));
    }
    let trace = rho.trace();
    if !(1.0 - 1e-3..=1.0 + 1e-9).contains(&trace) {
        return Err(Error::precondition(format!(
            "density trace {trace} too far from 1"
        )));
    }
    // Validate the split and the gain once, so the integrand cannot fail.
    amplified_conditional(rho, modes_a, &vec![Complex::new(0.0, 0.0); modes_a], kappa)?;
    let truncation_loss = (1.0_f64 - trace).max(0.0);

    let s_zb = grid.integrate(|z| {
        let conditional = amplified_conditional(rho, modes_a, z, kappa)
            .expect("split and gain validated above");
        matrix_entropy_unnormalized(&conditional)
            .expect("conditional operators inherit positivity from the density check")
    });
    let s_b = if modes_a == rho.space().modes() {
        0.0
    } else {
        matrix_entropy(&partial_trace_a(rho, modes_a)?)?
    };
    // Quadrature budget scaled to the result, plus a first-order bound on
    // the entropy shifted by the missing tail mass.
    let loss_term = if truncation_loss > 0.0 {
        truncation_loss * (1.0 + truncation_loss.ln().abs())
    } else {
        0.0
    };
    let budget = grid.error_budget() * s_zb.abs().max(1.0) + loss_term;
    let mut bundle = EntropyBundle::from_parts(s_zb, s_b, Method::FockQuadrature, budget);
    if truncation_loss > 1e-4 {
        bundle.warning = Some(format!(
            "truncation loss {truncation_loss:.3e} exceeds 1e-4; raise the Fock cutoff"
        ));
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{optimal_sequence_state, random_state, thermal, two_mode_squeezed};
    use crate::partition::ModePartition;
    use approx::assert_relative_eq;

    fn vacuum(modes: usize) -> GaussianState {
        GaussianState::vacuum(ModePartition::single("A", modes).unwrap())
    }

    #[test]
    fn husimi_of_vacuum_is_exponential() {
        let state = vacuum(1);
        let at = |re: f64, im: f64| {
            husimi_gaussian(&state, &[Complex::new(re, im)]).unwrap()
        };
        assert_relative_eq!(at(0.0, 0.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(at(1.0, 0.0), (-1.0_f64).exp(), epsilon = 1e-14);
        assert_relative_eq!(at(0.6, -0.8), (-1.0_f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn husimi_of_thermal_matches_closed_form() {
        // nu = kappa - 1/2: Q(z) = e^{-|z|^2/kappa} / kappa.
        let kappa = 2.0_f64;
        let state = thermal(
            ModePartition::single("A", 1).unwrap(),
            &[kappa - 0.5],
        )
        .unwrap();
        for z in [Complex::new(0.0, 0.0), Complex::new(1.2, -0.4)] {
            let expected = (-z.norm_sqr() / kappa).exp() / kappa;
            assert_relative_eq!(
                husimi_gaussian(&state, &[z]).unwrap(),
                expected,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn husimi_normalizes_on_adapted_grids() {
        let thermal_state =
            thermal(ModePartition::single("A", 1).unwrap(), &[1.5]).unwrap();
        let grid = adapted_grid(&thermal_state, &["A"], 20, 16).unwrap();
        let total = grid.integrate(|z| husimi_gaussian(&thermal_state, z).unwrap());
        assert_relative_eq!(total, 1.0, epsilon = 1e-9);

        let tmsv = two_mode_squeezed(3.0, 1).unwrap();
        let grid = adapted_grid(&tmsv, &["A", "B"], 24, 20).unwrap();
        let total = grid.integrate(|z| husimi_gaussian(&tmsv, z).unwrap());
        assert!((total - 1.0).abs() < 1e-6);
        assert!((total - 1.0).abs() < grid.error_budget());
    }

    #[test]
    fn wehrl_entropy_closed_forms() {
        assert_relative_eq!(wehrl_entropy_gaussian(&vacuum(1)).unwrap(), 1.0);
        assert_relative_eq!(wehrl_entropy_gaussian(&vacuum(2)).unwrap(), 2.0);
        let state = thermal(ModePartition::single("A", 1).unwrap(), &[1.5]).unwrap();
        assert_relative_eq!(
            wehrl_entropy_gaussian(&state).unwrap(),
            1.0 + std::f64::consts::LN_2,
            epsilon = 1e-14
        );
    }

    #[test]
    fn wehrl_entropy_of_amplified_marginal_matches_formula() {
        // A-marginal of the amplified two-mode squeezed family:
        // S_W = M ln(kappa (a+1)/2) + M.
        for (s, a, m) in [(0.0, 3.0, 1usize), (1.3, 2.0, 2), (-0.5, 1.5, 1)] {
            let kappa = (s / m as f64).exp() + 1.0;
            let state = optimal_sequence_state(s, a, m).unwrap();
            let marginal = state.marginal(&["A"]).unwrap();
            let expected = m as f64 * ((kappa * (a + 1.0) / 2.0).ln() + 1.0);
            assert_relative_eq!(
                wehrl_entropy_gaussian(&marginal).unwrap(),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn wehrl_entropy_via_quadrature_matches_closed_form() {
        let state = thermal(ModePartition::single("A", 1).unwrap(), &[1.5]).unwrap();
        let grid = adapted_grid(&state, &["A"], 24, 16).unwrap();
        let integral = -grid.integrate(|z| {
            let q = husimi_gaussian(&state, z).unwrap().max(1e-300);
            q * q.ln()
        });
        assert_relative_eq!(
            integral,
            wehrl_entropy_gaussian(&state).unwrap(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn wehrl_is_at_least_mode_count_on_random_states() {
        for seed in 0..50 {
            let state = random_state(
                ModePartition::bipartite("A", 1, "B", 1).unwrap(),
                seed,
                2.5,
                1.0,
            )
            .unwrap();
            let wehrl = wehrl_entropy_gaussian(&state).unwrap();
            assert!(
                wehrl >= 2.0 - 1e-12,
                "seed {seed}: Wehrl {wehrl} below mode count"
            );
        }
    }

    #[test]
    fn conditioning_a_pure_state_leaves_pure_memory() {
        // Heterodyning half of a two-mode squeezed state projects the other
        // half onto a pure (coherent-like) state: S(B|Z) = 0.
        for &a in &[1.5, 3.0, 10.0] {
            let state = two_mode_squeezed(a, 1).unwrap();
            let conditioned =
                heterodyne_conditioned_memory(&state, &["A"], &["B"]).unwrap();
            assert_relative_eq!(
                conditioned.von_neumann_entropy().unwrap(),
                0.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn conditional_wehrl_of_reference_state_is_exactly_one() {
        // kappa = 2, a = 3: S(Z|B) = ln 4 + 1 - 2 ln 2 = 1.
        let state = optimal_sequence_state(0.0, 3.0, 1).unwrap();
        let bundle = conditional_wehrl_gaussian(&state, &["A"], &["B"]).unwrap();
        assert_relative_eq!(bundle.s_z_given_b, 1.0, epsilon = 1e-10);
        assert_relative_eq!(bundle.s_zb - bundle.s_b, bundle.s_z_given_b);
        assert_eq!(bundle.method, Method::GaussianClosedForm);
    }

    #[test]
    fn conditional_wehrl_of_product_state_drops_memory() {
        // sigma = sigma_A ⊗ sigma_B with no correlation: S(Z|B) = S_W(A).
        let part = ModePartition::bipartite("A", 1, "B", 1).unwrap();
        let state = thermal(part, &[1.5, 2.5]).unwrap();
        let bundle = conditional_wehrl_gaussian(&state, &["A"], &["B"]).unwrap();
        let wehrl_a = wehrl_entropy_gaussian(&state.marginal(&["A"]).unwrap()).unwrap();
        assert_relative_eq!(bundle.s_z_given_b, wehrl_a, epsilon = 1e-12);
    }

    #[test]
    fn empty_memory_reduces_to_wehrl_entropy() {
        let state = thermal(ModePartition::single("A", 1).unwrap(), &[1.5]).unwrap();
        let bundle = conditional_wehrl_gaussian(&state, &["A"], &[]).unwrap();
        assert_relative_eq!(
            bundle.s_z_given_b,
            1.0 + std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        assert_relative_eq!(bundle.s_b, 0.0);
    }

    #[test]
    fn chain_rule_agrees_with_direct_hybrid_integration() {
        // Direct route: S(ZB) = ∫ p(z) [S(Sigma_{B|Z}) - ln p(z)] d^2z/pi,
        // with p the Husimi of the A-marginal. Must match the closed-form
        // bundle within quadrature error.
        let state = optimal_sequence_state(0.7, 2.2, 1).unwrap();
        let bundle = conditional_wehrl_gaussian(&state, &["A"], &["B"]).unwrap();
        let marginal_a = state.marginal(&["A"]).unwrap();
        let s_cond = heterodyne_conditioned_memory(&state, &["A"], &["B"])
            .unwrap()
            .von_neumann_entropy()
            .unwrap();
        let grid = adapted_grid(&state, &["A"], 28, 20).unwrap();
        let s_zb_direct = grid.integrate(|z| {
            let p = husimi_gaussian(&marginal_a, z).unwrap().max(1e-300);
            p * (s_cond - p.ln())
        });
        assert_relative_eq!(s_zb_direct, bundle.s_zb, epsilon = 1e-6);
    }

    #[test]
    fn unconditioned_phase_space_bound_on_random_states() {
        // S_W >= M ln(g^{-1}(S/M) + 1) + M for every valid state.
        use crate::entropy::g_inverse;
        for seed in 0..250 {
            for modes in [1usize, 2] {
                let state = random_state(
                    ModePartition::single("A", modes).unwrap(),
                    seed,
                    3.0,
                    1.2,
                )
                .unwrap();
                let m = modes as f64;
                let s = state.von_neumann_entropy().unwrap();
                let bound = m * (g_inverse(s / m).unwrap() + 1.0).ln() + m;
                let wehrl = wehrl_entropy_gaussian(&state).unwrap();
                assert!(
                    wehrl >= bound - 1e-9,
                    "seed {seed}, modes {modes}: {wehrl} < {bound}"
                );
            }
        }
    }

    #[test]
    fn fock_route_recovers_thermal_wehrl_entropy() {
        // Trivial memory: S(Z) is the plain Wehrl entropy, 1 + ln 2 for
        // a single thermal mode with nu = 3/2.
        let space = crate::fock::FockSpace::new(1, 35).unwrap();
        let rho = crate::fock::thermal_fock(&[1.5], space).unwrap();
        let grid = QuadratureGrid::build(1, 24, 16, 2.0).unwrap();
        let bundle = conditional_wehrl_fock(&rho, 1, &grid).unwrap();
        assert_relative_eq!(
            bundle.s_z_given_b,
            1.0 + std::f64::consts::LN_2,
            epsilon = 1e-4
        );
        assert_eq!(bundle.s_b, 0.0);
        assert_eq!(bundle.method, Method::FockQuadrature);
        assert!(bundle.warning.is_none());
    }

    #[test]
    fn fock_route_on_product_with_vacuum_measured_gives_one() {
        let space = crate::fock::FockSpace::new(2, 30).unwrap();
        let (space_a, space_b) = space.split(1).unwrap();
        let vac = crate::fock::coherent_vector(&[Complex::new(0.0, 0.0)], space_a)
            .unwrap()
            .density();
        let tau = crate::fock::thermal_fock(&[1.0], space_b).unwrap();
        let joint = crate::fock::FockOperator::from_matrix(
            space,
            vac.matrix().kronecker(tau.matrix()),
        )
        .unwrap();
        let grid = QuadratureGrid::build(1, 20, 16, 1.0).unwrap();
        let bundle = conditional_wehrl_fock(&joint, 1, &grid).unwrap();
        assert_relative_eq!(bundle.s_z_given_b, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn fock_route_matches_reference_conditional_value() {
        // Measuring the amplified arm (gain 2) of a two-mode squeezed state
        // with a = 3 must give S(Z|B) = 1, matching the closed form.
        let space = crate::fock::FockSpace::new(2, 40).unwrap();
        let rho = crate::fock::tmsv_fock(3.0, space).unwrap().density();
        let grid = QuadratureGrid::build(1, 24, 20, 4.0).unwrap();
        let bundle = conditional_wehrl_fock_amplified(&rho, 1, 2.0, &grid).unwrap();
        assert_relative_eq!(bundle.s_z_given_b, 1.0, epsilon = 2e-3);
        assert!(bundle.warning.is_none());
    }

    #[test]
    fn fock_and_gaussian_routes_agree_on_cross_validation_set() {
        let tolerance = |bundle: &EntropyBundle| (10.0 * bundle.error_budget).max(1e-3);

        // Unconditioned single modes: vacuum and two thermal occupations.
        for &nu in &[0.5, 1.0, 1.5] {
            let space = crate::fock::FockSpace::new(1, 40).unwrap();
            let rho = crate::fock::thermal_fock(&[nu], space).unwrap();
            let grid = QuadratureGrid::build(1, 20, 16, nu + 0.5).unwrap();
            let fock = conditional_wehrl_fock(&rho, 1, &grid).unwrap();
            let gaussian = wehrl_entropy_gaussian(
                &thermal(ModePartition::single("A", 1).unwrap(), &[nu]).unwrap(),
            )
            .unwrap();
            let delta = (fock.s_z_given_b - gaussian).abs();
            assert!(delta <= tolerance(&fock), "nu {nu}: delta {delta}");
        }

        // Two-mode squeezed states, optionally amplified on the measured arm.
        for &a in &[1.5, 3.0] {
            let cutoff = if a < 2.0 { 30 } else { 40 };
            let space = crate::fock::FockSpace::new(2, cutoff).unwrap();
            let rho = crate::fock::tmsv_fock(a, space).unwrap().density();
            for &kappa in &[1.0, 1.5, 2.0] {
                let amplified = two_mode_squeezed(a, 1)
                    .unwrap()
                    .amplify("A", kappa)
                    .unwrap();
                let gaussian =
                    conditional_wehrl_gaussian(&amplified, &["A"], &["B"]).unwrap();
                let grid = adapted_grid(&amplified, &["A"], 20, 16).unwrap();
                let fock =
                    conditional_wehrl_fock_amplified(&rho, 1, kappa, &grid).unwrap();
                let dz = (fock.s_z_given_b - gaussian.s_z_given_b).abs();
                let dj = (fock.s_zb - gaussian.s_zb).abs();
                assert!(
                    dz <= tolerance(&fock) && dj <= tolerance(&fock),
                    "a {a}, kappa {kappa}: conditional delta {dz}, joint delta {dj}"
                );
            }
        }
    }

    #[test]
    fn fock_route_warns_about_heavy_truncation() {
        // Cutoff 10 leaves ~5e-4 of a = 3 squeezing outside the space:
        // enough to warn, not enough to reject.
        let space = crate::fock::FockSpace::new(2, 10).unwrap();
        let rho = crate::fock::tmsv_fock(3.0, space).unwrap().density();
        let grid = QuadratureGrid::build(1, 16, 12, 2.0).unwrap();
        let bundle = conditional_wehrl_fock(&rho, 1, &grid).unwrap();
        assert!(bundle.warning.is_some());
        assert!(bundle.error_budget > 1e-4);
    }
}
