//! The non-benchmark subcommands.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use segment_upgrade::algebra::MonomialOrder;
use segment_upgrade::datagen::{add_noise, gen_float_instance, gen_template_instance, GenerationConfig};
use segment_upgrade::solver::{build_template, default_precision, solve, Outcome, SolverTemplate, UpgradeSolution};
use segment_upgrade::upgrade::SegmentInstance;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Integer coordinates and lengths, for building solvers.
    Template,
    /// Float data on the one-decimal grid; noisy when `sigma > 0`.
    Float,
}

/// A template instance, or a float instance with optional noise seeded by
/// `noise_seed`.
pub fn gen_instance(
    kind: InstanceKind,
    config: &GenerationConfig,
    noise_seed: u64,
) -> Result<SegmentInstance, CliError> {
    config.validate()?;
    match kind {
        InstanceKind::Template if config.sigma > 0.0 => {
            Err(CliError::Usage("noise applies to float instances only".into()))
        }
        InstanceKind::Template => Ok(gen_template_instance(config)?),
        InstanceKind::Float => {
            let exact = gen_float_instance(config)?;
            if config.sigma > 0.0 {
                Ok(add_noise(&exact, config.sigma, noise_seed)?)
            } else {
                Ok(exact)
            }
        }
    }
}

pub fn parse_order(s: &str) -> Result<MonomialOrder, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad order `{s}`: {e}")))
}

/// Builds a solver and reports how long it took.
pub fn gen_solver(instance: &SegmentInstance, order: MonomialOrder) -> Result<(SolverTemplate, Duration), CliError> {
    let start = Instant::now();
    let t = build_template(instance, order)?;
    Ok((t, start.elapsed()))
}

pub fn solver_summary(t: &SolverTemplate, elapsed: Option<Duration>) -> String {
    let mut s = format!(
        "N {}  order {}\nbasis size {}  multi-reductions {}  reduced basis {}\n",
        t.n, t.order, t.stats.basis_len, t.stats.multi_reductions, t.stats.reduced_len
    );
    if let Some(e) = elapsed {
        let _ = writeln!(s, "time {:.3} ms", e.as_secs_f64() * 1e3);
    }
    s
}

/// Noisy data can never meet the length tolerance, so for it four real
/// solutions count as success.
pub fn requires_lengths(instance: &SegmentInstance) -> bool {
    instance.kind != "noisy"
}

pub struct SolveRun {
    pub precision_bits: u32,
    pub result: Result<UpgradeSolution, segment_upgrade::solver::SolverError>,
    pub outcome: Outcome,
}

pub fn run_solve(template: &SolverTemplate, instance: &SegmentInstance, precision_bits: Option<u32>) -> SolveRun {
    let precision_bits = precision_bits.unwrap_or_else(|| default_precision(instance.n()));
    let result = solve(template, instance, precision_bits);
    let outcome = Outcome::classify(&result, requires_lengths(instance));
    SolveRun {
        precision_bits,
        result,
        outcome,
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.3e}"))
}

/// Human-readable report of a solve: the four parameter vectors with
/// their diagnostics, or the failure.
pub fn solve_report(run: &SolveRun) -> String {
    let mut s = format!("precision {} bits\n", run.precision_bits);
    match &run.result {
        Ok(sol) => {
            for v in &sol.solutions {
                let sign = |x: i8| if x < 0 { '-' } else { '+' };
                let _ = writeln!(s, "solution ({}{})", sign(v.signs[0]), sign(v.signs[1]));
                for (k, h) in v.params.h.iter().enumerate() {
                    let _ = writeln!(s, "  h{} {}", k + 1, h.to_decimal(25));
                }
                if let Some(h10) = &v.params.h10 {
                    let _ = writeln!(s, "  h10 {}", h10.to_decimal(25));
                }
                let _ = writeln!(
                    s,
                    "  max |d - d'| {}  length error {}  consistency {:.3e}",
                    opt(v.max_length_residual),
                    opt(v.length_error),
                    v.consistency
                );
                if let Some(p) = v.pattern {
                    let _ = writeln!(s, "  pattern ({}{})  deviation {:.3e}", sign(p.signs[0]), sign(p.signs[1]), p.deviation);
                }
            }
        }
        Err(e) => {
            let _ = writeln!(s, "error: {e}");
        }
    }
    let _ = writeln!(s, "outcome {}", run.outcome);
    s
}
