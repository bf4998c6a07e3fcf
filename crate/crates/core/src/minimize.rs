//! Derivative-free minimization of the bipartite-relation gap
//! `S(Z|B) - M ln(exp(S(A|B)/M) + 1)` over state families: golden-section
//! search along the amplified-squeezing family, and a penalized
//! Nelder–Mead simplex over a smooth chart of two-mode states.
//!
//! The relation makes the gap nonnegative for every state; the interest is
//! in how close to zero each family can push it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eur::{verify_bipartite, StateDescriptor};
use crate::families::{optimal_sequence_state, parameterized_two_mode_state};

/// Evaluation budget and convergence tolerance for the searches.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_evaluations: usize,
    /// Convergence width (in the search coordinate) below which the search
    /// stops early.
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 2000,
            tolerance: 1e-10,
        }
    }
}

/// Which family of states to search over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SearchFamily {
    /// The amplified-squeezing family at the given target entropy,
    /// one-dimensional in `a ∈ [1, a_max]`.
    OptimalSequence { a_max: f64 },
    /// A six-parameter chart of bipartite 1 + 1 mode states, searched with
    /// restarts seeded from the given seed, constrained to
    /// `S(A|B) ≈ s` by a quadratic penalty.
    Random { seed: u64 },
}

/// Outcome of a gap search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub family: String,
    /// Best (smallest) gap value found, without any penalty terms.
    pub infimum: f64,
    /// Coordinates of the best point: `[a]` for the one-parameter family,
    /// the six chart parameters otherwise.
    pub argmin: Vec<f64>,
    /// `S(A|B)` at the best point.
    pub s_ab_cond: f64,
    pub evaluations: usize,
    /// True if the evaluation budget ran out before the tolerance was met;
    /// the result is then best-so-far.
    pub budget_exhausted: bool,
}

/// Gap and conditional entropy of one amplified-squeezing state.
fn family_gap(s: f64, a: f64, m: usize) -> Result<(f64, f64)> {
    let state = optimal_sequence_state(s, a, m)?;
    let record = verify_bipartite(
        &state,
        &["A"],
        &["B"],
        StateDescriptor::new("optimal-sequence", m).with_s(s).with_a(a),
    )?;
    Ok((record.gap, record.s_ab_cond))
}

/// Minimizes the gap over the requested family. For the one-parameter
/// family the search is a coarse logarithmic scan followed by golden-section
/// refinement; the infimum decreases with `a_max` and stays positive. For
/// the chart family it is a multi-start Nelder–Mead with the quadratic
/// penalty `50 (S(A|B) - s)^2` enforcing the entropy constraint.
pub fn minimize_gap(
    s: f64,
    m: usize,
    family: SearchFamily,
    config: &OptimizerConfig,
) -> Result<MinimizeResult> {
    match family {
        SearchFamily::OptimalSequence { a_max } => golden_section(s, m, a_max, config),
        SearchFamily::Random { seed } => simplex_search(s, seed, config),
    }
}

fn golden_section(
    s: f64,
    m: usize,
    a_max: f64,
    config: &OptimizerConfig,
) -> Result<MinimizeResult> {
    if !(a_max >= 1.0) || !a_max.is_finite() {
        return Err(crate::error::Error::Domain {
            what: "search range end (requires a_max >= 1)",
            value: a_max,
        });
    }
    let mut evaluations = 0usize;
    let mut best = (f64::INFINITY, 1.0, 0.0); // (gap, a, s_ab)
    fn evaluate(
        s: f64,
        m: usize,
        a: f64,
        evaluations: &mut usize,
        best: &mut (f64, f64, f64),
    ) -> Result<f64> {
        *evaluations += 1;
        let (gap, s_ab) = family_gap(s, a, m)?;
        if gap < best.0 {
            *best = (gap, a, s_ab);
        }
        Ok(gap)
    }

    // Coarse scan in u = ln a to bracket the minimum (the gap need not be
    // unimodal a priori, so don't hand golden-section the whole range).
    let u_max = a_max.ln();
    let coarse = 17.min(config.max_evaluations.max(2));
    let mut coarse_values = Vec::with_capacity(coarse);
    for i in 0..coarse {
        let u = u_max * i as f64 / (coarse - 1) as f64;
        coarse_values.push((u, evaluate(s, m, u.exp(), &mut evaluations, &mut best)?));
    }
    let best_index = coarse_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut lo = coarse_values[best_index.saturating_sub(1)].0;
    let mut hi = coarse_values[(best_index + 1).min(coarse - 1)].0;

    // Golden-section refinement on [lo, hi].
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut u1 = hi - phi * (hi - lo);
    let mut u2 = lo + phi * (hi - lo);
    let mut f1 = evaluate(s, m, u1.exp(), &mut evaluations, &mut best)?;
    let mut f2 = evaluate(s, m, u2.exp(), &mut evaluations, &mut best)?;
    let mut budget_exhausted = false;
    while hi - lo > config.tolerance {
        if evaluations >= config.max_evaluations {
            budget_exhausted = true;
            break;
        }
        if f1 <= f2 {
            hi = u2;
            u2 = u1;
            f2 = f1;
            u1 = hi - phi * (hi - lo);
            f1 = evaluate(s, m, u1.exp(), &mut evaluations, &mut best)?;
        } else {
            lo = u1;
            u1 = u2;
            f1 = f2;
            u2 = lo + phi * (hi - lo);
            f2 = evaluate(s, m, u2.exp(), &mut evaluations, &mut best)?;
        }
    }
    Ok(MinimizeResult {
        family: "optimal-sequence".into(),
        infimum: best.0,
        argmin: vec![best.1],
        s_ab_cond: best.2,
        evaluations,
        budget_exhausted,
    })
}

/// Penalized objective over the chart: the gap plus `50 (S(A|B) - s)^2`;
/// numerically invalid corners of the chart evaluate to infinity so the
/// simplex retreats from them.
fn chart_objective(params: &[f64; 6], s: f64) -> (f64, f64, f64) {
    let state = parameterized_two_mode_state(params);
    match verify_bipartite(&state, &["A"], &["B"], StateDescriptor::new("chart", 1)) {
        Ok(record) => {
            let penalty = 50.0 * (record.s_ab_cond - s).powi(2);
            (record.gap + penalty, record.gap, record.s_ab_cond)
        }
        Err(_) => (f64::INFINITY, f64::INFINITY, f64::NAN),
    }
}

fn simplex_search(s: f64, seed: u64, config: &OptimizerConfig) -> Result<MinimizeResult> {
    const DIM: usize = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0usize;
    let mut best_penalized = f64::INFINITY;
    let mut best = (f64::INFINITY, [0.0; DIM], f64::NAN); // (gap, params, s_ab)

    let restarts = 8usize;
    let per_restart = (config.max_evaluations / restarts).max(DIM + 2);
    for _ in 0..restarts {
        if evaluations >= config.max_evaluations {
            break;
        }
        // Random initial simplex around a random center.
        let center: [f64; DIM] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let mut simplex: Vec<([f64; DIM], f64)> = Vec::with_capacity(DIM + 1);
        for k in 0..=DIM {
            let mut point = center;
            if k > 0 {
                point[k - 1] += rng.gen_range(0.3..0.7);
            }
            let (value, gap, s_ab) = chart_objective(&point, s);
            evaluations += 1;
            if value < best_penalized {
                best_penalized = value;
                best = (gap, point, s_ab);
            }
            simplex.push((point, value));
        }

        let mut used = DIM + 1;
        while used < per_restart && evaluations < config.max_evaluations {
            simplex.sort_by(|x, y| x.1.total_cmp(&y.1));
            let spread = simplex[DIM].1 - simplex[0].1;
            if spread.abs() < config.tolerance {
                break;
            }
            // Centroid of all but the worst vertex.
            let mut centroid = [0.0; DIM];
            for vertex in &simplex[..DIM] {
                for (c, v) in centroid.iter_mut().zip(&vertex.0) {
                    *c += v / DIM as f64;
                }
            }
            let worst = simplex[DIM];
            let shifted = |t: f64| -> [f64; DIM] {
                std::array::from_fn(|i| centroid[i] + t * (centroid[i] - worst.0[i]))
            };
            let try_point = |point: [f64; DIM],
                                 evaluations: &mut usize,
                                 best_penalized: &mut f64,
                                 best: &mut (f64, [f64; DIM], f64)|
             -> f64 {
                let (value, gap, s_ab) = chart_objective(&point, s);
                *evaluations += 1;
                if value < *best_penalized {
                    *best_penalized = value;
                    *best = (gap, point, s_ab);
                }
                value
            };

            let reflected = shifted(1.0);
            let fr = try_point(reflected, &mut evaluations, &mut best_penalized, &mut best);
            used += 1;
            if fr < simplex[0].1 {
                // Try expanding further along the same direction.
                let expanded = shifted(2.0);
                let fe = try_point(expanded, &mut evaluations, &mut best_penalized, &mut best);
                used += 1;
                simplex[DIM] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[DIM - 1].1 {
                simplex[DIM] = (reflected, fr);
            } else {
                // Contract toward the centroid; shrink everything if even
                // that fails to improve on the worst vertex.
                let contracted = shifted(-0.5);
                let fc = try_point(contracted, &mut evaluations, &mut best_penalized, &mut best);
                used += 1;
                if fc < simplex[DIM].1 {
                    simplex[DIM] = (contracted, fc);
                } else {
                    let anchor = simplex[0].0;
                    for vertex in simplex.iter_mut().skip(1) {
                        let point: [f64; DIM] =
                            std::array::from_fn(|i| anchor[i] + 0.5 * (vertex.0[i] - anchor[i]));
                        let value =
                            try_point(point, &mut evaluations, &mut best_penalized, &mut best);
                        used += 1;
                        *vertex = (point, value);
                    }
                }
            }
        }
    }

    Ok(MinimizeResult {
        family: "random".into(),
        infimum: best.0,
        argmin: best.1.to_vec(),
        s_ab_cond: best.2,
        evaluations,
        budget_exhausted: evaluations >= config.max_evaluations,
    })
}
