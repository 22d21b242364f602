//! The command-line experiments, as plain functions returning their output.
//!
//! `main.rs` only parses flags into a [`RunConfig`] and prints the
//! [`Outcome`]; everything observable lives here so it can be tested
//! without spawning a process.

pub mod format;
pub mod svg;
pub mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::optimizer::{locate_kink, optimize_at_alpha, sweep_alpha, SweepRow, DEFAULT_BETA_GRID};
use format::fmt_sig;
use verify::{run_checks, VerifyOptions};

pub const CSV_HEADER: &str = "alpha,beta_opt,k_opt,k_prime_opt,f_bar,f_noop,f_classical";
pub const FIG1_FILE: &str = "fig1.svg";
pub const FIG2_FILE: &str = "fig2.svg";

pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const MAX_STEPS: usize = 1_000_000;
pub const MAX_BETA_GRID: usize = 10_000_000;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Optimize,
    Verify,
    Kink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: Option<f64>,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub steps: usize,
    pub beta_grid_size: usize,
    pub mc_samples: usize,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub inject_broken_channel: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            alpha: None,
            alpha_min: 0.0,
            alpha_max: 1.0,
            steps: DEFAULT_STEPS,
            beta_grid_size: DEFAULT_BETA_GRID,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: None,
            output: None,
            format: OutputFormat::Csv,
            inject_broken_channel: false,
        }
    }

    /// Flag-level validation; failures are usage errors.
    pub fn validate(&self) -> Result<(), String> {
        if !(3..=MAX_BETA_GRID).contains(&self.beta_grid_size) {
            return Err(format!("--beta-grid must be in [3, {MAX_BETA_GRID}]"));
        }
        match self.command {
            Command::Optimize => match self.alpha {
                None => return Err("optimize requires --alpha".into()),
                Some(a) if !(0.0..=1.0).contains(&a) => {
                    return Err(format!("--alpha {a} is outside [0, 1]"));
                }
                _ => {}
            },
            Command::Sweep | Command::Kink => {
                if !(0.0 <= self.alpha_min && self.alpha_min < self.alpha_max && self.alpha_max <= 1.0) {
                    return Err(format!(
                        "invalid alpha range [{}, {}]: need 0 <= min < max <= 1",
                        self.alpha_min, self.alpha_max
                    ));
                }
                if !(2..=MAX_STEPS).contains(&self.steps) {
                    return Err(format!("--steps must be in [2, {MAX_STEPS}]"));
                }
                if self.command == Command::Sweep && self.format == OutputFormat::Svg && self.output.is_none() {
                    return Err("--format svg requires --output".into());
                }
            }
            Command::Verify => {
                if self.mc_samples > 0 && self.mc_samples < crate::fidelity::MIN_MC_SAMPLES {
                    return Err(format!(
                        "--mc-samples must be 0 or at least {}",
                        crate::fidelity::MIN_MC_SAMPLES
                    ));
                }
                if self.mc_samples > 0 && self.seed.is_none() {
                    return Err("--seed is required when --mc-samples > 0".into());
                }
            }
        }
        Ok(())
    }
}

/// What a command produced: exit code plus text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_SUCCESS, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Self { code, stdout, stderr }
    }
}

/// Runs one command.
pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(msg) = cfg.validate() {
        return Outcome::fail(EXIT_USAGE, String::new(), format!("error: {msg}\n"));
    }
    match cfg.command {
        Command::Sweep => cmd_sweep(cfg),
        Command::Optimize => cmd_optimize(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Kink => cmd_kink(cfg),
    }
}

fn error_outcome(err: &Error) -> Outcome {
    let code = match err {
        Error::OutOfRange { .. } | Error::InvalidRange { .. } | Error::TooFew { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    };
    Outcome::fail(code, String::new(), format!("error: {err}\n"))
}

/// CSV text for a sweep: header plus one LF-terminated row per point.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.alpha, r.beta_opt, r.k_opt, r.k_prime_opt, r.f_bar, r.f_noop, r.f_classical];
        let line: Vec<String> = fields.iter().map(|&v| fmt_sig(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Outcome {
    let rows = match sweep_alpha(cfg.alpha_min, cfg.alpha_max, cfg.steps, cfg.beta_grid_size) {
        Ok(rows) => rows,
        Err(e) => return error_outcome(&e),
    };
    let csv = sweep_csv(&rows);
    let Some(path) = &cfg.output else {
        return Outcome::ok(csv);
    };
    let mut written = vec![path.clone()];
    if let Err(msg) = write_file(path, &csv) {
        return Outcome::fail(EXIT_FAILURE, String::new(), format!("error: {msg}\n"));
    }
    if cfg.format == OutputFormat::Svg {
        let dir = path.parent().unwrap_or_else(|| Path::new(""));
        let figures = [
            (dir.join(FIG1_FILE), svg::fidelity_chart(&rows).render()),
            (dir.join(FIG2_FILE), svg::beta_chart(&rows).render()),
        ];
        for (file, body) in figures {
            if let Err(msg) = write_file(&file, &body) {
                return Outcome::fail(EXIT_FAILURE, String::new(), format!("error: {msg}\n"));
            }
            written.push(file);
        }
    }
    let mut report = String::new();
    for p in written {
        let _ = writeln!(report, "wrote {}", p.display());
    }
    let _ = writeln!(report, "rows={}", rows.len());
    Outcome::ok(report)
}

pub fn cmd_optimize(cfg: &RunConfig) -> Outcome {
    let alpha = cfg.alpha.expect("validated");
    match optimize_at_alpha(alpha, cfg.beta_grid_size) {
        Ok(r) => {
            let mut s = String::new();
            let _ = writeln!(s, "alpha={}", fmt_sig(r.alpha));
            let _ = writeln!(s, "beta_opt={}", fmt_sig(r.beta_opt));
            let _ = writeln!(s, "k_opt={}", fmt_sig(r.k_opt));
            let _ = writeln!(s, "k_prime_opt={}", fmt_sig(r.k_prime_opt));
            let _ = writeln!(s, "f_bar={}", fmt_sig(r.f_bar));
            let _ = writeln!(s, "branch={}", r.branch);
            Outcome::ok(s)
        }
        Err(e) => error_outcome(&e),
    }
}

pub fn cmd_kink(cfg: &RunConfig) -> Outcome {
    let result = sweep_alpha(cfg.alpha_min, cfg.alpha_max, cfg.steps, cfg.beta_grid_size)
        .and_then(|rows| locate_kink(&rows, cfg.beta_grid_size));
    match result {
        Ok(k) => {
            let mut s = String::new();
            let _ = writeln!(s, "alpha_kink={}", fmt_sig(k.alpha_kink));
            let _ = writeln!(s, "beta_jump_to={}", fmt_sig(k.beta_jump_to));
            let _ = writeln!(s, "bracket_width={}", fmt_sig(k.bracket_width));
            Outcome::ok(s)
        }
        Err(Error::NoKinkFound { .. }) => Outcome::fail(
            EXIT_FAILURE,
            String::new(),
            format!(
                "no kink found in alpha range [{}, {}]\n",
                fmt_sig(cfg.alpha_min),
                fmt_sig(cfg.alpha_max)
            ),
        ),
        Err(e) => error_outcome(&e),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let opts = VerifyOptions {
        seed: cfg.seed.unwrap_or(0),
        mc_samples: cfg.mc_samples,
        beta_grid_size: cfg.beta_grid_size,
        inject_broken_channel: cfg.inject_broken_channel,
    };
    let checks = run_checks(&opts);
    let mut report = String::new();
    let _ = writeln!(
        report,
        "verify seed={} mc_samples={} beta_grid={}",
        opts.seed, opts.mc_samples, opts.beta_grid_size
    );
    for c in &checks {
        let _ = writeln!(report, "{}", c.line());
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(report, "{passed}/{} checks passed", checks.len());
    match checks.iter().find(|c| !c.passed) {
        None => Outcome::ok(report),
        Some(first) => Outcome::fail(
            EXIT_FAILURE,
            report,
            format!("verification failed: {}\n", first.name),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_rows() {
        let rows = sweep_alpha(0.0, 1.0, 5, 201).unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0,1.570796327,1,1,0.75,0.5,0.75"));
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn usage_errors() {
        let mut cfg = RunConfig::new(Command::Optimize);
        assert_eq!(run(&cfg).code, EXIT_USAGE);
        cfg.alpha = Some(1.5);
        assert_eq!(run(&cfg).code, EXIT_USAGE);

        let mut sweep = RunConfig::new(Command::Sweep);
        sweep.alpha_min = 0.8;
        sweep.alpha_max = 0.2;
        assert_eq!(run(&sweep).code, EXIT_USAGE);
        sweep.alpha_min = 0.0;
        sweep.steps = 1;
        assert_eq!(run(&sweep).code, EXIT_USAGE);

        let verify = RunConfig::new(Command::Verify);
        let out = run(&verify);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("--seed"));
    }

    #[test]
    fn optimize_report_lines() {
        let mut cfg = RunConfig::new(Command::Optimize);
        cfg.alpha = Some(0.5);
        let out = run(&cfg);
        assert_eq!(out.code, EXIT_SUCCESS);
        assert!(out.stdout.contains("beta_opt=1.570796327\n"));
        assert!(out.stdout.contains("k_opt=0.75\n"));
        assert!(out.stdout.contains("f_bar=0.7916666667\n"));
        assert!(out.stdout.contains("branch=boundary_beta\n"));
    }

    #[test]
    fn kink_absent_in_low_range() {
        let mut cfg = RunConfig::new(Command::Kink);
        cfg.alpha_max = 0.3;
        cfg.steps = 31;
        let out = run(&cfg);
        assert_eq!(out.code, EXIT_FAILURE);
        assert!(out.stderr.contains("no kink found"));
    }

    #[test]
    fn svg_needs_output_path() {
        let mut cfg = RunConfig::new(Command::Sweep);
        cfg.format = OutputFormat::Svg;
        assert_eq!(run(&cfg).code, EXIT_USAGE);
    }
}
