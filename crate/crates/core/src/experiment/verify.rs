//! Self-checks run by the `verify` command.
//!
//! Each check compares two independent routes to the same quantity (closed
//! form vs quadrature vs Monte Carlo, Choi spectrum vs necessary conditions)
//! and reports the measured discrepancy. All randomness derives from the
//! caller's seed.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::fmt_sig;
use crate::bloch::{bloch_to_density, density_to_bloch, fidelity_pure_vs_mixed, sample_uniform_sphere};
use crate::channel::{
    amplitude_damping_channel, contracts_ball, is_completely_positive, AffineQubitChannel,
    DiagonalChannelParams, Pole, PSD_TOLERANCE,
};
use crate::fidelity::{
    average_fidelity_closed_form, average_fidelity_monte_carlo, average_fidelity_quadrature,
    no_op_fidelity, no_op_scheme, SchemeConfig, CLASSICAL_ONLY_FIDELITY,
};
use crate::optimizer::{analytic_low_alpha_fidelity, best_recovery_at, optimize_at_alpha};

pub const QUADRATURE_AGREEMENT: f64 = 1e-12;
pub const ORACLE_CONFIGS: usize = 50;
pub const MC_MIN_INSIDE: usize = 47;
pub const MC_SIGMA_BAND: f64 = 3.0;
pub const CP_GRID_POINTS: usize = 20;
pub const CP_GRID_MAX: f64 = 1.2;
pub const CP_VIOLATION_MARGIN: f64 = 0.01;
pub const ANALYTIC_TOLERANCE: f64 = 1e-8;
pub const BETA_TOLERANCE: f64 = 1e-6;
pub const DECOUPLING_GRID: usize = 100;
pub const DECOUPLING_POINTS: [(f64, f64); 3] = [(0.3, FRAC_PI_2), (0.6, 1.1), (0.9, 0.7)];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Samples per Monte Carlo estimate; 0 skips the Monte Carlo checks.
    pub mc_samples: usize,
    pub beta_grid_size: usize,
    /// Adds a channel violating `γ ≤ √(1-k)` to the recovery set.
    pub inject_broken_channel: bool,
}

/// Uniformly random configs in the valid parameter box.
pub fn random_configs(seed: u64, count: usize) -> Vec<SchemeConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let alpha = rng.random_range(0.0..=1.0);
            let beta = rng.random_range(0.0..=FRAC_PI_2);
            let k = rng.random_range(0.0..=1.0);
            let k_prime = rng.random_range(0.0..=1.0);
            SchemeConfig::new(alpha, beta, k, k_prime).expect("sampled inside the box")
        })
        .collect()
}

/// Seed used for the Monte Carlo estimate of config `index`.
pub fn config_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn check_bloch_round_trip(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let r = sample_uniform_sphere(&mut rng) * rng.random_range(0.0..=1.0);
        let back = bloch_to_density(r)
            .and_then(|rho| density_to_bloch(&rho))
            .map(|b| (b - r).norm())
            .unwrap_or(f64::INFINITY);
        worst = worst.max(back);
    }
    CheckResult::new(
        "bloch_round_trip",
        worst <= 1e-12,
        format!("max deviation {} over 100 states", fmt_sig(worst)),
    )
}

pub fn check_fidelity_trace_formula(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = sample_uniform_sphere(&mut rng);
        let r = sample_uniform_sphere(&mut rng) * rng.random_range(0.0..=1.0);
        let rho_n = bloch_to_density(n).expect("unit vector");
        let rho_r = bloch_to_density(r).expect("inside ball");
        let (a, b) = (rho_n.entries(), rho_r.entries());
        let trace: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (a[i][j] * b[j][i]).re)
            .sum();
        let dot = fidelity_pure_vs_mixed(n, r).expect("valid inputs");
        worst = worst.max((trace - dot).abs());
    }
    CheckResult::new(
        "fidelity_trace_formula",
        worst <= 1e-12,
        format!("max deviation {} over 100 pairs", fmt_sig(worst)),
    )
}

/// The broken channel used by the injection path.
pub fn broken_channel() -> AffineQubitChannel {
    DiagonalChannelParams {
        gamma: 0.9,
        delta: 0.5,
        k: 0.5,
        pole: Pole::North,
    }
    .to_channel()
}

pub fn check_recovery_channels(inject_broken: bool) -> CheckResult {
    let mut channels = Vec::new();
    for i in 0..=100 {
        let k = i as f64 / 100.0;
        for pole in [Pole::North, Pole::South] {
            channels.push(amplitude_damping_channel(k, pole).expect("k in range"));
        }
    }
    if inject_broken {
        channels.push(broken_channel());
    }
    let failing = channels
        .iter()
        .filter(|ch| !is_completely_positive(ch, PSD_TOLERANCE) || !contracts_ball(ch))
        .count();
    CheckResult::new(
        "cp_recovery_channels",
        failing == 0,
        format!("{failing} of {} recovery channels fail Choi-PSD or ball contraction", channels.len()),
    )
}

/// Every grid point of `(γ, δ, k) ∈ [0, 1.2]³` that fails the necessary
/// conditions must fail the Choi test.
pub fn check_necessary_condition_grid() -> CheckResult {
    let step = CP_GRID_MAX / (CP_GRID_POINTS - 1) as f64;
    let (mut violating, mut clear_violations, mut inconsistent) = (0, 0, 0);
    for a in 0..CP_GRID_POINTS {
        for b in 0..CP_GRID_POINTS {
            for c in 0..CP_GRID_POINTS {
                let p = DiagonalChannelParams {
                    gamma: a as f64 * step,
                    delta: b as f64 * step,
                    k: c as f64 * step,
                    pole: Pole::North,
                };
                let violation = p.condition_violation();
                if violation <= 0.0 {
                    continue;
                }
                violating += 1;
                if violation > CP_VIOLATION_MARGIN {
                    clear_violations += 1;
                }
                if is_completely_positive(&p.to_channel(), PSD_TOLERANCE) {
                    inconsistent += 1;
                }
            }
        }
    }
    CheckResult::new(
        "cp_necessary_condition_grid",
        inconsistent == 0,
        format!(
            "{inconsistent} of {violating} violating grid points pass Choi-PSD ({clear_violations} violate by more than {})",
            fmt_sig(CP_VIOLATION_MARGIN)
        ),
    )
}

pub fn check_inverse_depolarizing() -> CheckResult {
    let inverse = AffineQubitChannel::diagonal([2.0; 3], [0.0; 3]);
    let cp = is_completely_positive(&inverse, PSD_TOLERANCE);
    CheckResult::new(
        "cp_inverse_depolarizing",
        !cp,
        format!("inverse depolarizing map (A = 2I) completely positive: {cp}"),
    )
}

pub fn check_classical_only() -> CheckResult {
    let cfg = SchemeConfig::new(0.0, FRAC_PI_2, 1.0, 1.0).expect("valid");
    let f = average_fidelity_closed_form(&cfg);
    CheckResult::new(
        "classical_only_baseline",
        (f - CLASSICAL_ONLY_FIDELITY).abs() <= 1e-15,
        format!("closed form at alpha=0, k=k'=1 gives {}", fmt_sig(f)),
    )
}

pub fn check_quadrature(seed: u64) -> CheckResult {
    let worst = random_configs(seed, ORACLE_CONFIGS)
        .iter()
        .map(|cfg| (average_fidelity_closed_form(cfg) - average_fidelity_quadrature(cfg, 1e-14)).abs())
        .fold(0.0, f64::max);
    CheckResult::new(
        "closed_form_vs_quadrature",
        worst <= QUADRATURE_AGREEMENT,
        format!("max deviation {} over {ORACLE_CONFIGS} configs", fmt_sig(worst)),
    )
}

/// Number of configs whose Monte Carlo estimate lies within the 3σ band, and
/// the largest deviation in units of σ.
pub fn monte_carlo_agreement(seed: u64, samples: usize) -> (usize, f64) {
    let mut inside = 0;
    let mut worst_sigma: f64 = 0.0;
    for (i, cfg) in random_configs(seed, ORACLE_CONFIGS).iter().enumerate() {
        let exact = average_fidelity_closed_form(cfg);
        let scheme = cfg.to_general_scheme().expect("amplitude damping recoveries are valid");
        let est = average_fidelity_monte_carlo(&scheme, samples, config_seed(seed, i))
            .expect("sample count validated by caller");
        let dev = (est.estimate - exact).abs();
        let sigmas = if est.std_error > 0.0 { dev / est.std_error } else if dev <= 1e-12 { 0.0 } else { f64::INFINITY };
        worst_sigma = worst_sigma.max(sigmas);
        if sigmas <= MC_SIGMA_BAND {
            inside += 1;
        }
    }
    (inside, worst_sigma)
}

pub fn check_monte_carlo(seed: u64, samples: usize) -> CheckResult {
    let (inside, worst) = monte_carlo_agreement(seed, samples);
    CheckResult::new(
        "closed_form_vs_monte_carlo",
        inside >= MC_MIN_INSIDE,
        format!(
            "{inside}/{ORACLE_CONFIGS} configs within 3 standard errors at {samples} samples (worst {} sigma)",
            fmt_sig(worst)
        ),
    )
}

pub fn check_no_op_monte_carlo(seed: u64, samples: usize) -> CheckResult {
    let alpha = 0.5;
    let exact = no_op_fidelity(alpha).expect("valid alpha");
    let est = average_fidelity_monte_carlo(&no_op_scheme(alpha).expect("valid"), samples, seed)
        .expect("sample count validated by caller");
    let dev = (est.estimate - exact).abs();
    CheckResult::new(
        "no_op_monte_carlo",
        dev <= (MC_SIGMA_BAND * est.std_error).max(1e-12),
        format!("deviation {} (std error {})", fmt_sig(dev), fmt_sig(est.std_error)),
    )
}

pub fn check_analytic_branch(beta_grid_size: usize) -> CheckResult {
    let (mut worst_f, mut worst_beta): (f64, f64) = (0.0, 0.0);
    for i in 0..ORACLE_CONFIGS {
        let alpha = 0.5 * i as f64 / (ORACLE_CONFIGS - 1) as f64;
        match optimize_at_alpha(alpha, beta_grid_size) {
            Ok(r) => {
                let analytic = analytic_low_alpha_fidelity(alpha).expect("valid alpha");
                worst_f = worst_f.max((r.f_bar - analytic).abs());
                worst_beta = worst_beta.max((r.beta_opt - FRAC_PI_2).abs());
            }
            Err(_) => worst_f = f64::INFINITY,
        }
    }
    CheckResult::new(
        "analytic_low_alpha_branch",
        worst_f <= ANALYTIC_TOLERANCE && worst_beta <= BETA_TOLERANCE,
        format!(
            "max |f_bar - analytic| {}, max |beta_opt - pi/2| {} over 50 alphas in [0, 0.5]",
            fmt_sig(worst_f),
            fmt_sig(worst_beta)
        ),
    )
}

/// Joint grid optimum over `(k, k')` at `(alpha, beta)`: `(k, k', F̄)`.
pub fn joint_grid_search(alpha: f64, beta: f64, points: usize) -> (f64, f64, f64) {
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..points {
        for j in 0..points {
            let k = i as f64 / (points - 1) as f64;
            let kp = j as f64 / (points - 1) as f64;
            let cfg = SchemeConfig { alpha, beta, k, k_prime: kp };
            let f = average_fidelity_closed_form(&cfg);
            if f > best.2 {
                best = (k, kp, f);
            }
        }
    }
    best
}

pub fn check_decoupling() -> CheckResult {
    let resolution = 1.0 / (DECOUPLING_GRID - 1) as f64;
    let mut worst_k: f64 = 0.0;
    let mut value_ok = true;
    for (alpha, beta) in DECOUPLING_POINTS {
        let (k, kp, f) = best_recovery_at(alpha, beta);
        let (gk, gkp, gf) = joint_grid_search(alpha, beta, DECOUPLING_GRID);
        worst_k = worst_k.max((k - gk).abs()).max((kp - gkp).abs());
        value_ok &= f >= gf - 1e-12;
    }
    CheckResult::new(
        "k_decoupling",
        worst_k <= resolution && value_ok,
        format!(
            "max |k - k_grid| {} (grid step {}) at 3 points",
            fmt_sig(worst_k),
            fmt_sig(resolution)
        ),
    )
}

/// Runs every check in a fixed order.
pub fn run_checks(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut checks = vec![
        check_bloch_round_trip(opts.seed),
        check_fidelity_trace_formula(opts.seed),
        check_recovery_channels(opts.inject_broken_channel),
        check_necessary_condition_grid(),
        check_inverse_depolarizing(),
        check_classical_only(),
        check_quadrature(opts.seed),
    ];
    if opts.mc_samples > 0 {
        checks.push(check_monte_carlo(opts.seed, opts.mc_samples));
        checks.push(check_no_op_monte_carlo(opts.seed, opts.mc_samples));
    }
    checks.push(check_analytic_branch(opts.beta_grid_size));
    checks.push(check_decoupling());
    checks
}
