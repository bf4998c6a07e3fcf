//! Brute-force oracle in truncated Fock space.
//!
//! Everything here is independent of the covariance-matrix machinery: states
//! are explicit amplitude vectors over `|n_1 ... n_M>` with per-mode cutoff
//! `N`, and operators are dense Hermitian matrices. The point is to validate
//! the Gaussian closed forms against direct linear algebra, with explicit
//! truncation-loss accounting in place of the infinite-dimensional space.
//!
//! Index convention: mode 0 is the most significant digit, so for a bipartite
//! `A (modes_a) ⊗ B` split the global index is `i_A * dim_B + i_B`.

use nalgebra::{Complex, DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, QuadratureGrid};
use crate::tol::{FOCK_PSD_TOL, HERMITICITY_TOL};

type C64 = Complex<f64>;

/// A truncated multi-mode Fock space: `modes` modes, each of dimension
/// `cutoff + 1`. Zero modes is the trivial one-dimensional space (useful as
/// the result of conditioning away every mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::precondition("Fock cutoff must be at least 1"));
        }
        let space = Self { modes, cutoff };
        if space.dim() == 0 || space.dim() > 1 << 24 {
            return Err(Error::precondition(format!(
                "Fock dimension {} out of range",
                (cutoff + 1) as f64, // avoid overflow in the message itself
            )));
        }
        Ok(space)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim_per_mode(&self) -> usize {
        self.cutoff + 1
    }

    /// Total dimension `(cutoff + 1)^modes`.
    pub fn dim(&self) -> usize {
        self.dim_per_mode().checked_pow(self.modes as u32).unwrap_or(0)
    }

    /// Basis index of an occupation vector (mode 0 most significant).
    pub fn index(&self, occupations: &[usize]) -> usize {
        debug_assert_eq!(occupations.len(), self.modes);
        occupations
            .iter()
            .fold(0, |acc, &n| acc * self.dim_per_mode() + n)
    }

    /// Occupation vector of a basis index.
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut n = vec![0; self.modes];
        for m in (0..self.modes).rev() {
            n[m] = index % self.dim_per_mode();
            index /= self.dim_per_mode();
        }
        n
    }

    /// Index stride of one excitation in `mode`.
    fn stride(&self, mode: usize) -> usize {
        self.dim_per_mode().pow((self.modes - 1 - mode) as u32)
    }

    /// The space of the first `modes_a` modes and of the rest.
    pub fn split(&self, modes_a: usize) -> Result<(FockSpace, FockSpace)> {
        if modes_a > self.modes {
            return Err(Error::precondition(format!(
                "cannot split off {modes_a} of {} modes",
                self.modes
            )));
        }
        Ok((
            FockSpace {
                modes: modes_a,
                cutoff: self.cutoff,
            },
            FockSpace {
                modes: self.modes - modes_a,
                cutoff: self.cutoff,
            },
        ))
    }
}

/// A pure state as an amplitude vector, with the reported truncation loss
/// `1 - |amplitudes|^2` of whatever infinite-dimensional state it truncates.
#[derive(Debug, Clone)]
pub struct FockState {
    space: FockSpace,
    amplitudes: DVector<C64>,
    truncation_loss: f64,
}

impl FockState {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    /// The projector `|psi><psi|` as an operator.
    pub fn density(&self) -> FockOperator {
        FockOperator {
            space: self.space,
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &FockState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// A dense operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    matrix: DMatrix<C64>,
}

impl FockOperator {
    pub fn from_matrix(space: FockSpace, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::structure(format!(
                "operator must be {0}x{0}, got {1}x{2}",
                space.dim(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: FockSpace) -> Self {
        Self {
            space,
            matrix: DMatrix::identity(space.dim(), space.dim()),
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.matrix.nrows() {
            for j in i..self.matrix.ncols() {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Real eigenvalues, ascending; errors if not Hermitian within tolerance.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let residual = self.hermiticity_residual();
        if residual > HERMITICITY_TOL {
            return Err(Error::structure(format!(
                "operator is not Hermitian (residual {residual:.3e})"
            )));
        }
        let values = crate::eigen::hermitian_eigenvalues(&self.matrix)?;
        Ok(values.iter().copied().collect())
    }

    /// Errors unless Hermitian, PSD within `-FOCK_PSD_TOL`, and of trace in
    /// `[1 - loss_tolerance, 1 + 1e-9]`.
    pub fn check_density(&self, loss_tolerance: f64) -> Result<()> {
        let min = *self
            .eigenvalues()?
            .first()
            .ok_or_else(|| Error::structure("empty operator"))?;
        if min < -FOCK_PSD_TOL {
            return Err(Error::Physicality {
                min_eigenvalue: min,
            });
        }
        let trace = self.trace();
        if trace > 1.0 + 1e-9 || trace < 1.0 - loss_tolerance {
            return Err(Error::precondition(format!(
                "density trace {trace} outside [1 - {loss_tolerance:.1e}, 1]"
            )));
        }
        Ok(())
    }
}

impl Serialize for FockOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            modes: usize,
            cutoff: usize,
            /// Interleaved re/im entries, row-major.
            data: &'a [f64],
        }
        let n = self.matrix.nrows();
        let mut data = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.matrix[(i, j)].re);
                data.push(self.matrix[(i, j)].im);
            }
        }
        Repr {
            modes: self.space.modes,
            cutoff: self.space.cutoff,
            data: &data,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            modes: usize,
            cutoff: usize,
            data: Vec<f64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let space = FockSpace::new(repr.modes, repr.cutoff).map_err(D::Error::custom)?;
        let n = space.dim();
        if repr.data.len() != 2 * n * n {
            return Err(D::Error::custom(format!(
                "expected {} interleaved entries, got {}",
                2 * n * n,
                repr.data.len()
            )));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            Complex::new(repr.data[k], repr.data[k + 1])
        });
        Ok(Self { space, matrix })
    }
}

/// Coherent state `|z> = e^{-|z|^2/2} Σ z^n / sqrt(n!) |n>` per mode,
/// truncated at the cutoff; the norm deficit is reported as truncation loss.
pub fn coherent_vector(z: &[C64], space: FockSpace) -> Result<FockState> {
    if z.len() != space.modes() {
        return Err(Error::precondition(format!(
            "coherent point has {} entries for {} modes",
            z.len(),
            space.modes()
        )));
    }
    let d = space.dim_per_mode();
    let mut per_mode: Vec<Vec<C64>> = Vec::with_capacity(space.modes());
    for &zm in z {
        let mut amps = Vec::with_capacity(d);
        let mut c = Complex::new((-zm.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..d {
            if n > 0 {
                c *= zm / (n as f64).sqrt();
            }
            amps.push(c);
        }
        per_mode.push(amps);
    }
    let amplitudes = DVector::from_fn(space.dim(), |i, _| {
        space
            .occupations(i)
            .iter()
            .enumerate()
            .map(|(m, &n)| per_mode[m][n])
            .product::<C64>()
    });
    let truncation_loss = (1.0_f64 - amplitudes.norm_squared()).max(0.0);
    Ok(FockState {
        space,
        amplitudes,
        truncation_loss,
    })
}

/// Two-mode squeezed vacuum in Schmidt form:
/// `sqrt(1 - lambda^2) Σ lambda^n |n, n>` with
/// `lambda = sqrt((a-1)/(a+1))`; truncation loss `lambda^{2(N+1)}`.
pub fn tmsv_fock(a: f64, space: FockSpace) -> Result<FockState> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "two-mode squeezing parameter (requires a >= 1)",
            value: a,
        });
    }
    if space.modes() != 2 {
        return Err(Error::precondition("two-mode squeezed state needs 2 modes"));
    }
    let lambda = ((a - 1.0) / (a + 1.0)).sqrt();
    let norm = (1.0 - lambda * lambda).sqrt();
    let mut amplitudes = DVector::zeros(space.dim());
    let mut coeff = norm;
    for n in 0..space.dim_per_mode() {
        amplitudes[space.index(&[n, n])] = Complex::new(coeff, 0.0);
        coeff *= lambda;
    }
    Ok(FockState {
        space,
        amplitudes,
        truncation_loss: lambda.powi(2 * (space.cutoff() as i32 + 1)),
    })
}

/// Thermal product state, diagonal geometric occupation per mode:
/// `p_n = (1 - q) q^n` with `q = (nu - 1/2)/(nu + 1/2)`.
pub fn thermal_fock(nu: &[f64], space: FockSpace) -> Result<FockOperator> {
    if nu.len() != space.modes() {
        return Err(Error::precondition(format!(
            "expected {} thermal eigenvalues, got {}",
            space.modes(),
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
    let q: Vec<f64> = nu.iter().map(|&v| (v - 0.5) / (v + 0.5)).collect();
    let mut matrix = DMatrix::zeros(space.dim(), space.dim());
    for i in 0..space.dim() {
        let p: f64 = space
            .occupations(i)
            .iter()
            .enumerate()
            .map(|(m, &n)| (1.0 - q[m]) * q[m].powi(n as i32))
            .product();
        matrix[(i, i)] = Complex::new(p, 0.0);
    }
    Ok(FockOperator { space, matrix })
}

/// The unnormalized post-heterodyne operator `<z| rho |z>` on the trailing
/// `B` modes, where `z` addresses the leading `modes_a` modes. Its trace is
/// the Husimi function of the `A` marginal at `z`.
pub fn heterodyne_condition(
    rho: &FockOperator,
    modes_a: usize,
    z: &[C64],
) -> Result<FockOperator> {
    let (space_a, space_b) = rho.space.split(modes_a)?;
    let c = coherent_vector(z, space_a)?;
    let (da, db) = (space_a.dim(), space_b.dim());
    // out[ib, jb] = Σ_{ia, ja} conj(c[ia]) rho[ia*db + ib, ja*db + jb] c[ja]
    // done in two passes to keep the inner loops contiguous.
    let mut half = DMatrix::<C64>::zeros(rho.space.dim(), db);
    for jb in 0..db {
        for ja in 0..da {
            let amp = c.amplitudes[ja];
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let col = ja * db + jb;
            for row in 0..rho.space.dim() {
                half[(row, jb)] += rho.matrix[(row, col)] * amp;
            }
        }
    }
    let mut matrix = DMatrix::<C64>::zeros(db, db);
    for jb in 0..db {
        for ia in 0..da {
            let amp = c.amplitudes[ia].conj();
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..db {
                matrix[(ib, jb)] += amp * half[(ia * db + ib, jb)];
            }
        }
    }
    Ok(FockOperator {
        space: space_b,
        matrix,
    })
}

/// The conditional operator of the state after a quantum-limited amplifier
/// of gain `kappa` on the `A` modes, via the exact rescaling identity
/// `<z| (A_kappa ⊗ I) rho |z> = kappa^{-M_A} <z/sqrt(kappa)| rho |z/sqrt(kappa)>`
/// — no Kraus decomposition, no extra truncation error.
pub fn amplified_conditional(
    rho: &FockOperator,
    modes_a: usize,
    z: &[C64],
    kappa: f64,
) -> Result<FockOperator> {
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::Domain {
            what: "amplifier gain (requires kappa >= 1)",
            value: kappa,
        });
    }
    let root = kappa.sqrt();
    let rescaled: Vec<C64> = z.iter().map(|&c| c / root).collect();
    let mut conditioned = heterodyne_condition(rho, modes_a, &rescaled)?;
    let factor = kappa.powi(-(modes_a as i32));
    conditioned.matrix *= Complex::new(factor, 0.0);
    Ok(conditioned)
}

/// Clips round-off negatives to zero; errors below `-FOCK_PSD_TOL`.
fn clipped_spectrum(rho: &FockOperator) -> Result<Vec<f64>> {
    let values = rho.eigenvalues()?;
    if let Some(&min) = values.first() {
        if min < -FOCK_PSD_TOL {
            return Err(Error::Physicality {
                min_eigenvalue: min,
            });
        }
    }
    Ok(values.into_iter().map(|v| v.max(0.0)).collect())
}

/// Von Neumann entropy `-Σ p ln p` of `rho / Tr rho` (eigenvalues clipped at
/// zero, `0 ln 0 = 0`).
pub fn matrix_entropy(rho: &FockOperator) -> Result<f64> {
    let spectrum = clipped_spectrum(rho)?;
    let trace: f64 = spectrum.iter().sum();
    if trace <= 0.0 {
        return Err(Error::numerical("entropy of a zero-trace operator"));
    }
    Ok(spectrum
        .iter()
        .map(|&p| {
            let p = p / trace;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum())
}

/// Unnormalized entropy integrand `-Σ lambda ln lambda` over the clipped
/// spectrum of an (unnormalized) conditional operator.
pub fn matrix_entropy_unnormalized(rho: &FockOperator) -> Result<f64> {
    let spectrum = clipped_spectrum(rho)?;
    Ok(spectrum
        .iter()
        .map(|&l| if l > 0.0 { -l * l.ln() } else { 0.0 })
        .sum())
}

/// Partial trace over the leading `modes_a` modes (keeps `B`).
pub fn partial_trace_a(rho: &FockOperator, modes_a: usize) -> Result<FockOperator> {
    let (space_a, space_b) = rho.space.split(modes_a)?;
    let (da, db) = (space_a.dim(), space_b.dim());
    let mut matrix = DMatrix::<C64>::zeros(db, db);
    for ia in 0..da {
        for ib in 0..db {
            for jb in 0..db {
                matrix[(ib, jb)] += rho.matrix[(ia * db + ib, ia * db + jb)];
            }
        }
    }
    Ok(FockOperator {
        space: space_b,
        matrix,
    })
}

/// Partial trace over the trailing modes (keeps the leading `modes_a`).
pub fn partial_trace_b(rho: &FockOperator, modes_a: usize) -> Result<FockOperator> {
    let (space_a, space_b) = rho.space.split(modes_a)?;
    let (da, db) = (space_a.dim(), space_b.dim());
    let mut matrix = DMatrix::<C64>::zeros(da, da);
    for ib in 0..db {
        for ia in 0..da {
            for ja in 0..da {
                matrix[(ia, ja)] += rho.matrix[(ia * db + ib, ja * db + ib)];
            }
        }
    }
    Ok(FockOperator {
        space: space_a,
        matrix,
    })
}

/// Applies the annihilation operator of `mode` to an amplitude vector.
fn apply_annihilation(space: FockSpace, psi: &DVector<C64>, mode: usize) -> DVector<C64> {
    let stride = space.stride(mode);
    let d = space.dim_per_mode();
    let mut out = DVector::zeros(space.dim());
    for i in 0..space.dim() {
        let n = (i / stride) % d;
        if n > 0 {
            out[i - stride] += (n as f64).sqrt() * psi[i];
        }
    }
    out
}

/// Applies the creation operator of `mode`; excitations above the cutoff are
/// dropped (truncation).
fn apply_creation(space: FockSpace, psi: &DVector<C64>, mode: usize) -> DVector<C64> {
    let stride = space.stride(mode);
    let d = space.dim_per_mode();
    let mut out = DVector::zeros(space.dim());
    for i in 0..space.dim() {
        let n = (i / stride) % d;
        if n + 1 < d {
            out[i + stride] += ((n + 1) as f64).sqrt() * psi[i];
        }
    }
    out
}

/// Covariance matrix of a pure Fock state from second moments of the
/// quadratures `Q_m = (a + a^dag)/sqrt(2)`, `P_m = -i (a - a^dag)/sqrt(2)`:
/// `sigma_ij = Re <psi| R_i R_j |psi> - mu_i mu_j`.
pub fn covariance_of_state(state: &FockState) -> DMatrix<f64> {
    let space = state.space;
    let m = space.modes();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut applied: Vec<DVector<C64>> = Vec::with_capacity(2 * m);
    for mode in 0..m {
        let a = apply_annihilation(space, &state.amplitudes, mode);
        let adag = apply_creation(space, &state.amplitudes, mode);
        applied.push((&a + &adag) * Complex::new(inv_sqrt2, 0.0));
        applied.push((&a - &adag) * Complex::new(0.0, -inv_sqrt2));
    }
    let mu: Vec<f64> = applied
        .iter()
        .map(|phi| state.amplitudes.dotc(phi).re)
        .collect();
    DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        applied[i].dotc(&applied[j]).re - mu[i] * mu[j]
    })
}

/// The quadrature approximation to the coherent-state resolution of identity
/// `∫ |z><z| d^{2M}z/pi^M = I`, as an explicit operator. How far it is from
/// the identity on a low-Fock block quantifies grid + truncation quality.
pub fn resolution_of_identity(space: FockSpace, grid: &QuadratureGrid) -> Result<FockOperator> {
    if grid.modes() != space.modes() {
        return Err(Error::precondition(format!(
            "grid has {} modes, space has {}",
            grid.modes(),
            space.modes()
        )));
    }
    let n = space.dim();
    let mut terms: Vec<Vec<(f64, f64)>> = Vec::new(); // per-entry (re, im) terms
    terms.resize_with(n * n, Vec::new);
    grid.for_each(|z, w| {
        let ket = coherent_vector(z, space).expect("grid and space mode counts match");
        for i in 0..n {
            for j in 0..n {
                let v = ket.amplitudes[i] * ket.amplitudes[j].conj() * w;
                terms[i * n + j].push((v.re, v.im));
            }
        }
    });
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        let entry = &terms[i * n + j];
        let mut re: Vec<f64> = entry.iter().map(|t| t.0).collect();
        let mut im: Vec<f64> = entry.iter().map(|t| t.1).collect();
        Complex::new(pairwise_sum(&mut re), pairwise_sum(&mut im))
    });
    Ok(FockOperator { space, matrix })
}
