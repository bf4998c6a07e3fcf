//! Gaussian states as covariance matrices over a labelled mode partition.
//!
//! Conventions: `hbar = 1`, quadratures ordered `(Q_1, P_1, Q_2, P_2, ...)`,
//! vacuum covariance `I/2`. A matrix is a physical covariance matrix iff
//! `sigma + (i/2) Delta >= 0`.

use nalgebra::{Complex, DMatrix};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eigen::{hermitian_eigenvalues, symmetric_eigen, symmetric_eigenvalues};
use crate::entropy::g_clamped;
use crate::error::{Error, Result};
use crate::form::symplectic_form;
use crate::partition::ModePartition;
use crate::tol::{PHYSICALITY_TOL, SYMMETRY_TOL};

/// Outcome of the physicality check `sigma + (i/2) Delta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// True iff the minimum eigenvalue clears `-PHYSICALITY_TOL`.
    pub is_valid: bool,
    /// Minimum eigenvalue of the Hermitian matrix `sigma + (i/2) Delta`.
    pub min_eigenvalue: f64,
}

/// A zero-mean Gaussian state: a mode partition plus a covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    partition: ModePartition,
    sigma: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from a covariance matrix, which must be square of side
    /// `2 * total_modes` and symmetric to within [`SYMMETRY_TOL`]; the stored
    /// matrix is the symmetrized average. Physicality is *not* enforced here:
    /// use [`validate`](Self::validate) / [`require_valid`](Self::require_valid).
    pub fn new(partition: ModePartition, sigma: DMatrix<f64>) -> Result<Self> {
        let dim = 2 * partition.total_modes();
        if sigma.nrows() != dim || sigma.ncols() != dim {
            return Err(Error::structure(format!(
                "covariance must be {dim}x{dim} for {} modes, got {}x{}",
                partition.total_modes(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let asym = (&sigma - sigma.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::structure(format!(
                "covariance asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e}"
            )));
        }
        let sigma = (&sigma + sigma.transpose()) / 2.0;
        Ok(Self { partition, sigma })
    }

    /// Vacuum state (`sigma = I/2`) on the given partition.
    pub fn vacuum(partition: ModePartition) -> Self {
        let dim = 2 * partition.total_modes();
        Self {
            partition,
            sigma: DMatrix::identity(dim, dim) * 0.5,
        }
    }

    pub fn partition(&self) -> &ModePartition {
        &self.partition
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn modes(&self) -> usize {
        self.partition.total_modes()
    }

    /// Phase-space dimension `2 * modes`.
    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    /// Checks `sigma + (i/2) Delta >= 0` by Hermitian eigendecomposition.
    pub fn validate(&self) -> ValidityReport {
        if self.modes() == 0 {
            return ValidityReport {
                is_valid: true,
                min_eigenvalue: 0.0,
            };
        }
        let delta = symplectic_form(self.modes());
        let h = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            Complex::new(self.sigma[(i, j)], 0.5 * delta[(i, j)])
        });
        // A covariance with non-finite entries is reported as invalid rather
        // than panicking.
        match hermitian_eigenvalues(&h) {
            Ok(values) => ValidityReport {
                is_valid: values[0] >= -PHYSICALITY_TOL,
                min_eigenvalue: values[0],
            },
            Err(_) => ValidityReport {
                is_valid: false,
                min_eigenvalue: f64::NAN,
            },
        }
    }

    /// Errors with [`Error::Physicality`] unless [`validate`](Self::validate) passes.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid {
            Ok(())
        } else {
            Err(Error::Physicality {
                min_eigenvalue: report.min_eigenvalue,
            })
        }
    }

    /// Symplectic eigenvalues in descending order (one per mode).
    ///
    /// Computed as the positive spectrum of `i K` with
    /// `K = sigma^{1/2} Delta sigma^{1/2}`, which is similar to
    /// `sigma Delta` but manifestly antisymmetric, so the squared spectrum
    /// is recovered from the symmetric PSD matrix `K^T K`.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let m = self.modes();
        if m == 0 {
            return Ok(Vec::new());
        }
        let eig = symmetric_eigen(&self.sigma)?;
        let min = eig.values[0];
        if min <= 0.0 {
            return Err(Error::numerical(format!(
                "covariance must be positive definite for the symplectic spectrum \
                 (min eigenvalue {min:.3e})"
            )));
        }
        let sqrt_sigma = &eig.vectors
            * DMatrix::from_diagonal(&eig.values.map(f64::sqrt))
            * eig.vectors.transpose();
        let k = &sqrt_sigma * symplectic_form(m) * &sqrt_sigma;
        let gram = k.transpose() * &k;
        let mut squared: Vec<f64> = symmetric_eigenvalues(&gram)?
            .iter()
            .map(|&x| x.max(0.0))
            .collect();
        squared.sort_by(|a, b| b.total_cmp(a));
        // Each symplectic eigenvalue appears twice; average the paired roots.
        let nu = (0..m)
            .map(|j| (squared[2 * j].sqrt() + squared[2 * j + 1].sqrt()) / 2.0)
            .collect();
        Ok(nu)
    }

    /// Von Neumann entropy `sum_j g(nu_j - 1/2)` in nats.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let mut total = 0.0;
        for nu in self.symplectic_eigenvalues()? {
            total += g_clamped(nu - 0.5, PHYSICALITY_TOL)?;
        }
        Ok(total)
    }

    /// Marginal state on the named subsystems (kept in partition order,
    /// whatever the order of `labels`).
    pub fn marginal(&self, labels: &[&str]) -> Result<GaussianState> {
        if labels.is_empty() {
            return Err(Error::precondition("marginal requires at least one label"));
        }
        let partition = self.partition.restriction(labels)?;
        let idx = self.partition.quadrature_indices_of(labels)?;
        let sigma = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.sigma[(idx[r], idx[c])]);
        Ok(GaussianState { partition, sigma })
    }

    /// Conditional von Neumann entropy `S(target | memory) =
    /// S(target, memory) - S(memory)`. The label sets must be disjoint;
    /// an empty `memory` reduces to the marginal entropy of `target`.
    pub fn conditional_entropy(&self, target: &[&str], memory: &[&str]) -> Result<f64> {
        self.partition.check_disjoint(target, memory)?;
        if memory.is_empty() {
            return self.marginal(target)?.von_neumann_entropy();
        }
        let mut joint: Vec<&str> = Vec::with_capacity(target.len() + memory.len());
        joint.extend_from_slice(target);
        joint.extend_from_slice(memory);
        let s_joint = self.marginal(&joint)?.von_neumann_entropy()?;
        let s_memory = self.marginal(memory)?.von_neumann_entropy()?;
        Ok(s_joint - s_memory)
    }

    /// Quantum-limited amplifier channel of gain `kappa >= 1` applied to one
    /// named subsystem: on its quadratures the covariance block maps to
    /// `kappa * block + (kappa - 1)/2 * I`, cross-covariances with untouched
    /// modes scale by `sqrt(kappa)`, and the rest is unchanged.
    pub fn amplify(&self, target: &str, kappa: f64) -> Result<GaussianState> {
        if !(kappa >= 1.0) || !kappa.is_finite() {
            return Err(Error::Domain {
                what: "amplifier gain (requires kappa >= 1)",
                value: kappa,
            });
        }
        let idx = self.partition.quadrature_indices_of(&[target])?;
        let mut hit = vec![false; self.dim()];
        for &i in &idx {
            hit[i] = true;
        }
        let root = kappa.sqrt();
        let mut sigma = self.sigma.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                match (hit[i], hit[j]) {
                    (true, true) => {
                        sigma[(i, j)] *= kappa;
                        if i == j {
                            sigma[(i, j)] += (kappa - 1.0) / 2.0;
                        }
                    }
                    (true, false) | (false, true) => sigma[(i, j)] *= root,
                    (false, false) => {}
                }
            }
        }
        Ok(GaussianState {
            partition: self.partition.clone(),
            sigma,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    partition: ModePartition,
    /// Row-major entries of the covariance matrix.
    sigma: Vec<f64>,
}

impl Serialize for GaussianState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let sigma = (0..n)
            .flat_map(|i| (0..n).map(move |j| self.sigma[(i, j)]))
            .collect();
        StateRepr {
            partition: self.partition.clone(),
            sigma,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let n = 2 * repr.partition.total_modes();
        if repr.sigma.len() != n * n {
            return Err(D::Error::custom(format!(
                "sigma has {} entries, expected {}",
                repr.sigma.len(),
                n * n
            )));
        }
        let sigma = DMatrix::from_row_slice(n, n, &repr.sigma);
        GaussianState::new(repr.partition, sigma).map_err(D::Error::custom)
    }
}

/// Convenience: diagonal covariance from per-quadrature variances.
#[cfg(test)]
pub(crate) fn diagonal_state(partition: ModePartition, diag: &[f64]) -> GaussianState {
    let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag));
    GaussianState::new(partition, sigma).expect("diagonal covariance is square and symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::ModePartition;
    use approx::assert_relative_eq;

    fn one_mode(label: &str) -> ModePartition {
        ModePartition::single(label, 1).unwrap()
    }

    #[test]
    fn vacuum_is_valid_with_zero_margin() {
        let state = GaussianState::vacuum(one_mode("A"));
        let report = state.validate();
        assert!(report.is_valid);
        // Eigenvalues of I/2 + (i/2) Delta are exactly {0, 1}.
        assert_relative_eq!(report.min_eigenvalue, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quarter_identity_is_invalid_by_one_quarter() {
        let state = diagonal_state(one_mode("A"), &[0.25, 0.25]);
        let report = state.validate();
        assert!(!report.is_valid);
        assert_relative_eq!(report.min_eigenvalue, -0.25, epsilon = 1e-12);
        assert!(matches!(
            state.require_valid(),
            Err(Error::Physicality { .. })
        ));
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let mut sigma = DMatrix::identity(2, 2);
        sigma[(0, 1)] = 1e-3;
        assert!(matches!(
            GaussianState::new(one_mode("A"), sigma),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let sigma = DMatrix::identity(4, 4);
        assert!(GaussianState::new(one_mode("A"), sigma).is_err());
    }

    #[test]
    fn thermal_symplectic_eigenvalue_and_entropy() {
        // diag(3/2, 3/2) has nu = 3/2 and entropy g(1) = 2 ln 2.
        let state = diagonal_state(one_mode("A"), &[1.5, 1.5]);
        let nu = state.symplectic_eigenvalues().unwrap();
        assert_eq!(nu.len(), 1);
        assert_relative_eq!(nu[0], 1.5, epsilon = 1e-12);
        assert_relative_eq!(
            state.von_neumann_entropy().unwrap(),
            2.0 * std::f64::consts::LN_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        // diag(e^{2r}, e^{-2r})/2 is symplectically vacuum: nu = 1/2.
        let r: f64 = 0.7;
        let state = diagonal_state(
            one_mode("A"),
            &[(2.0 * r).exp() / 2.0, (-2.0 * r).exp() / 2.0],
        );
        let nu = state.symplectic_eigenvalues().unwrap();
        assert_relative_eq!(nu[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(state.von_neumann_entropy().unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn two_mode_squeezed_is_pure_with_thermal_marginals() {
        let a = 3.0_f64;
        let c = (a * a - 1.0).sqrt() / 2.0;
        let sigma = DMatrix::from_row_slice(
            4,
            4,
            &[
                a / 2.0,
                0.0,
                c,
                0.0,
                0.0,
                a / 2.0,
                0.0,
                -c,
                c,
                0.0,
                a / 2.0,
                0.0,
                0.0,
                -c,
                0.0,
                a / 2.0,
            ],
        );
        let state =
            GaussianState::new(ModePartition::bipartite("A", 1, "B", 1).unwrap(), sigma).unwrap();
        assert!(state.validate().is_valid);
        let nu = state.symplectic_eigenvalues().unwrap();
        assert_relative_eq!(nu[0], 0.5, epsilon = 1e-10);
        assert_relative_eq!(nu[1], 0.5, epsilon = 1e-10);
        // Marginals are thermal with nu = a/2.
        let marginal = state.marginal(&["B"]).unwrap();
        assert_relative_eq!(
            marginal.symplectic_eigenvalues().unwrap()[0],
            a / 2.0,
            epsilon = 1e-10
        );
        // Pure joint state: S(A|B) = -S(B) = -g((a-1)/2) = -2 ln 2 at a = 3.
        assert_relative_eq!(
            state.conditional_entropy(&["A"], &["B"]).unwrap(),
            -2.0 * std::f64::consts::LN_2,
            epsilon = 1e-10
        );
    }

    #[test]
    fn conditional_entropy_rejects_overlapping_labels() {
        let state = GaussianState::vacuum(ModePartition::bipartite("A", 1, "B", 1).unwrap());
        assert!(state.conditional_entropy(&["A"], &["A"]).is_err());
    }

    #[test]
    fn amplifier_on_vacuum_gives_thermal() {
        let state = GaussianState::vacuum(one_mode("A"));
        let out = state.amplify("A", 2.0).unwrap();
        // kappa/2 + (kappa-1)/2 = 3/2 on the diagonal.
        assert_relative_eq!(out.sigma()[(0, 0)], 1.5, epsilon = 1e-15);
        assert_relative_eq!(out.sigma()[(1, 1)], 1.5, epsilon = 1e-15);
        assert!(out.validate().is_valid);
    }

    #[test]
    fn amplifier_composes_multiplicatively() {
        let a = 2.0;
        let c = (a * a - 1.0f64).sqrt() / 2.0;
        let sigma = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, c, 0.0, //
                0.0, 1.0, 0.0, -c, //
                c, 0.0, 1.0, 0.0, //
                0.0, -c, 0.0, 1.0,
            ],
        );
        let state =
            GaussianState::new(ModePartition::bipartite("A", 1, "B", 1).unwrap(), sigma).unwrap();
        let twice = state
            .amplify("A", 1.7)
            .unwrap()
            .amplify("A", 1.3)
            .unwrap();
        let once = state.amplify("A", 1.7 * 1.3).unwrap();
        assert!((twice.sigma() - once.sigma()).abs().max() < 1e-12);
    }

    #[test]
    fn amplifier_rejects_gain_below_one() {
        let state = GaussianState::vacuum(one_mode("A"));
        assert!(matches!(
            state.amplify("A", 0.9),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn marginal_order_follows_partition_not_labels() {
        let state = diagonal_state(
            ModePartition::bipartite("A", 1, "B", 1).unwrap(),
            &[0.5, 0.5, 1.5, 1.5],
        );
        let ab = state.marginal(&["B", "A"]).unwrap();
        assert_eq!(ab.partition().subsystems()[0].label, "A");
        assert_relative_eq!(ab.sigma()[(0, 0)], 0.5);
        assert_relative_eq!(ab.sigma()[(2, 2)], 1.5);
    }

    #[test]
    fn json_round_trip_preserves_state() {
        let state = diagonal_state(
            ModePartition::bipartite("A", 1, "B", 2).unwrap(),
            &[0.5, 0.5, 1.5, 1.5, 2.5, 2.5],
        );
        let text = serde_json::to_string(&state).unwrap();
        let back: GaussianState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, state);
    }

    #[test]
    fn json_rejects_wrong_entry_count() {
        let text = r#"{"partition":[{"label":"A","modes":1}],"sigma":[0.5,0.0,0.5]}"#;
        assert!(serde_json::from_str::<GaussianState>(text).is_err());
    }
}
