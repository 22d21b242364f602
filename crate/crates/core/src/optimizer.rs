//! Optimal cap partition and recovery strengths for a given depolarization.
//!
//! For fixed β the two caps share no recovery parameter, so `k` and `k'` are
//! independent one-dimensional problems with a closed-form solution. The
//! outer problem in β has two competing local maxima: the hemisphere split
//! at β = π/2 and an interior one. Both are always evaluated, which is what
//! makes the jump in the optimal β visible instead of being tracked past.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::fidelity::{
    average_fidelity_closed_form, cap_coefficients, no_op_fidelity, CapCoefficients,
    SchemeConfig, CLASSICAL_ONLY_FIDELITY,
};
use crate::numerics::golden_section_max;

pub const DEFAULT_BETA_GRID: usize = 2001;

/// Bracket width for golden-section refinement of β.
pub const BETA_TOLERANCE: f64 = 1e-10;

/// Minimum drop in β between adjacent sweep rows that counts as a jump.
pub const KINK_BETA_DROP: f64 = 0.1;

/// Bisection stops once the α bracket is narrower than this.
pub const KINK_ALPHA_TOLERANCE: f64 = 1e-4;

/// Which of the two competing maxima in β won.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// β = π/2: Alice only announces the hemisphere.
    Boundary,
    Interior,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Boundary => "boundary_beta",
            Branch::Interior => "interior_beta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    pub alpha: f64,
    pub beta_opt: f64,
    pub k_opt: f64,
    pub k_prime_opt: f64,
    pub f_bar: f64,
    pub branch: Branch,
}

impl OptimizationResult {
    pub fn config(&self) -> SchemeConfig {
        SchemeConfig {
            alpha: self.alpha,
            beta: self.beta_opt,
            k: self.k_opt,
            k_prime: self.k_prime_opt,
        }
    }
}

/// One line of an α sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta_opt: f64,
    pub k_opt: f64,
    pub k_prime_opt: f64,
    pub f_bar: f64,
    pub f_noop: f64,
    pub f_classical: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub alpha_kink: f64,
    /// Interior-branch β just above the jump.
    pub beta_jump_to: f64,
    pub bracket_width: f64,
}

/// Maximizes `α√(1-k)·p + α(1-k)·q + k·r` over `k ∈ [0, 1]`.
///
/// The objective is concave in `k`. If its slope at 0, `r - αq - αp/2`, is not
/// positive the optimum is `k = 0`; otherwise the stationary point
/// `1 - (αp / (2(r - αq)))²` is taken, clamped to `[0, 1]`.
pub fn optimal_k_cap(alpha: f64, p: f64, q: f64, r: f64) -> Result<f64> {
    for (name, value) in [("alpha", alpha), ("P", p), ("Q", q), ("R", r)] {
        if !(value >= 0.0) {
            return Err(Error::Negative { name, value });
        }
    }
    let slope = r - alpha * q;
    if slope - 0.5 * alpha * p <= 0.0 {
        return Ok(0.0);
    }
    let root = alpha * p / (2.0 * slope);
    Ok((1.0 - root * root).clamp(0.0, 1.0))
}

fn best_k(alpha: f64, cap: &CapCoefficients) -> f64 {
    optimal_k_cap(alpha, cap.p, cap.q, cap.r).expect("cap coefficients are non-negative")
}

/// Inner-optimal `(k, k', F̄)` at a fixed β.
pub fn best_recovery_at(alpha: f64, beta: f64) -> (f64, f64, f64) {
    let (north, south) = cap_coefficients(beta);
    let k = best_k(alpha, &north);
    let k_prime = best_k(alpha, &south);
    let f = north.contribution(alpha, k) + south.contribution(alpha, k_prime);
    (k, k_prime, f)
}

/// Global optimum over `(β, k, k')` for depolarization `alpha`.
///
/// Scans a uniform β grid on `[0, π/2]`, refines the best interior local
/// maximum by golden-section search, and compares it with the exact
/// β = π/2 candidate. Ties go to the boundary.
pub fn optimize_at_alpha(alpha: f64, beta_grid_size: usize) -> Result<OptimizationResult> {
    let alpha = check_range("alpha", alpha, 0.0, 1.0)?;
    if beta_grid_size < 3 {
        return Err(Error::TooFew {
            what: "beta grid points",
            got: beta_grid_size,
            min: 3,
        });
    }
    if alpha == 1.0 {
        // Noiseless: F̄ = 1 for every β with k = k' = 0. Report the limit of
        // the interior branch (β → 0) rather than whatever rounding favours.
        let (k, k_prime, f_bar) = best_recovery_at(alpha, 0.0);
        return Ok(OptimizationResult {
            alpha,
            beta_opt: 0.0,
            k_opt: k,
            k_prime_opt: k_prime,
            f_bar,
            branch: Branch::Interior,
        });
    }
    let objective = |beta: f64| best_recovery_at(alpha, beta).2;

    let step = FRAC_PI_2 / (beta_grid_size - 1) as f64;
    let values: Vec<f64> = (0..beta_grid_size)
        .map(|i| objective(i as f64 * step))
        .collect();

    let last = beta_grid_size - 1;
    let interior = (0..last)
        .filter(|&i| (i == 0 || values[i] >= values[i - 1]) && values[i] > values[i + 1])
        .max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)));

    let (bk, bkp, bf) = best_recovery_at(alpha, FRAC_PI_2);
    let mut best = OptimizationResult {
        alpha,
        beta_opt: FRAC_PI_2,
        k_opt: bk,
        k_prime_opt: bkp,
        f_bar: bf,
        branch: Branch::Boundary,
    };

    if let Some(i) = interior {
        let lo = i.saturating_sub(1) as f64 * step;
        let hi = (i + 1) as f64 * step;
        let (mut beta, mut f) = golden_section_max(objective, lo, hi, BETA_TOLERANCE);
        if values[i] > f {
            beta = i as f64 * step;
            f = values[i];
        }
        if f > best.f_bar && FRAC_PI_2 - beta > 1e-9 {
            let (k, k_prime, f) = best_recovery_at(alpha, beta);
            best = OptimizationResult {
                alpha,
                beta_opt: beta,
                k_opt: k,
                k_prime_opt: k_prime,
                f_bar: f,
                branch: Branch::Interior,
            };
        }
    }
    debug_assert!(
        (best.f_bar - average_fidelity_closed_form(&best.config())).abs() < 1e-12
    );
    Ok(best)
}

/// Uniform α grid of `steps` points between `alpha_min` and `alpha_max`.
pub fn alpha_grid(alpha_min: f64, alpha_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0 <= alpha_min && alpha_min < alpha_max && alpha_max <= 1.0) {
        return Err(Error::InvalidRange {
            min: alpha_min,
            max: alpha_max,
        });
    }
    if steps < 2 {
        return Err(Error::TooFew {
            what: "sweep steps",
            got: steps,
            min: 2,
        });
    }
    let width = alpha_max - alpha_min;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                alpha_max
            } else {
                alpha_min + width * i as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

pub fn sweep_row(alpha: f64, beta_grid_size: usize) -> Result<SweepRow> {
    let opt = optimize_at_alpha(alpha, beta_grid_size)?;
    Ok(SweepRow {
        alpha,
        beta_opt: opt.beta_opt,
        k_opt: opt.k_opt,
        k_prime_opt: opt.k_prime_opt,
        f_bar: opt.f_bar,
        f_noop: no_op_fidelity(alpha)?,
        f_classical: CLASSICAL_ONLY_FIDELITY,
        branch: opt.branch,
    })
}

/// Optimizes every point of a uniform α grid. Points run in parallel; rows
/// come back in α order.
pub fn sweep_alpha(
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    beta_grid_size: usize,
) -> Result<Vec<SweepRow>> {
    alpha_grid(alpha_min, alpha_max, steps)?
        .into_par_iter()
        .map(|alpha| {
            sweep_row(alpha, beta_grid_size).map_err(|e| Error::AtAlpha {
                alpha,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Finds the first jump in β (a drop larger than [`KINK_BETA_DROP`]) and
/// bisects on the branch label until the α bracket is below
/// [`KINK_ALPHA_TOLERANCE`].
pub fn locate_kink(rows: &[SweepRow], beta_grid_size: usize) -> Result<Kink> {
    let no_kink = || Error::NoKinkFound {
        min: rows.first().map_or(f64::NAN, |r| r.alpha),
        max: rows.last().map_or(f64::NAN, |r| r.alpha),
    };
    let pair = rows
        .windows(2)
        .find(|w| w[0].beta_opt - w[1].beta_opt > KINK_BETA_DROP)
        .ok_or_else(no_kink)?;

    let (mut lo, mut hi) = (pair[0].alpha, pair[1].alpha);
    let lo_branch = optimize_at_alpha(lo, beta_grid_size)?.branch;
    let mut upper = optimize_at_alpha(hi, beta_grid_size)?;
    if lo_branch == upper.branch {
        return Err(no_kink());
    }
    while hi - lo >= KINK_ALPHA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let at_mid = optimize_at_alpha(mid, beta_grid_size)?;
        if at_mid.branch == lo_branch {
            lo = mid;
        } else {
            hi = mid;
            upper = at_mid;
        }
    }
    Ok(Kink {
        alpha_kink: 0.5 * (lo + hi),
        beta_jump_to: upper.beta_opt,
        bracket_width: hi - lo,
    })
}

/// `3/4 + α²/(3(3 - 2α))`: the optimum on the β = π/2 branch.
pub fn analytic_low_alpha_fidelity(alpha: f64) -> Result<f64> {
    let alpha = check_range("alpha", alpha, 0.0, 1.0)?;
    Ok(0.75 + alpha * alpha / (3.0 * (3.0 - 2.0 * alpha)))
}
