//! The benchmark harness. Solver `i` is built from the template instance
//! with seed `solver_seed + i`; data set `j` is the float instance with
//! seed `data_seed + j`, noised with the same seed in noise mode, so every
//! solver sees the same data sets.

use std::time::Instant;

use rayon::prelude::*;
use segment_upgrade::algebra::MonomialOrder;
use segment_upgrade::datagen::{add_noise, gen_float_instance, gen_template_instance, GenerationConfig};
use segment_upgrade::solver::{build_template, default_precision, solve, Outcome, SolverError, SolverTemplate};
use segment_upgrade::upgrade::SegmentInstance;

use crate::report::{BenchmarkReport, Mode, RunRecord};
use crate::CliError;

/// Bisection granularity for the precision sweep.
pub const PRECISION_STEP: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub mode: Mode,
    pub ns: Vec<usize>,
    pub solvers: usize,
    pub datasets: usize,
    pub solver_seed: u64,
    pub data_seed: u64,
    pub sigma: f64,
    /// Fixed precision; otherwise [`default_precision`]. In precision mode
    /// the upper end of the sweep.
    pub precision_bits: Option<u32>,
    pub order: MonomialOrder,
    pub timings: bool,
}

impl BenchConfig {
    pub fn new(mode: Mode, ns: Vec<usize>) -> BenchConfig {
        BenchConfig {
            mode,
            ns,
            solvers: 20,
            datasets: 20,
            solver_seed: 0,
            data_seed: 1000,
            sigma: 0.001,
            precision_bits: None,
            order: MonomialOrder::default(),
            timings: false,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.ns.is_empty() || self.solvers == 0 {
            return Err(CliError::Usage("need at least one N and one solver".into()));
        }
        if matches!(self.mode, Mode::Exact | Mode::Noise) && self.datasets == 0 {
            return Err(CliError::Usage("need at least one data set".into()));
        }
        if self.mode == Mode::Noise && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(CliError::Usage("noise mode needs a positive sigma".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < segment_upgrade::upgrade::MIN_SEGMENTS) {
            return Err(CliError::Usage(format!("N = {n} is below 9")));
        }
        Ok(())
    }
}

struct Built {
    n: usize,
    seed: u64,
    instance: SegmentInstance,
    template: Result<SolverTemplate, SolverError>,
    time_ms: f64,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn build(config: &BenchConfig) -> Result<Vec<Built>, CliError> {
    let cells: Vec<(usize, u64)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..config.solvers as u64).map(move |i| (n, config.solver_seed + i)))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, seed)| {
            let instance = gen_template_instance(&GenerationConfig::new(n, seed))?;
            let start = Instant::now();
            let template = build_template(&instance, config.order);
            Ok(Built {
                n,
                seed,
                instance,
                template,
                time_ms: ms(start),
            })
        })
        .collect()
}

fn base_record(config: &BenchConfig, b: &Built) -> RunRecord {
    let (basis_len, multi_reductions) = match &b.template {
        Ok(t) => (t.stats.basis_len, t.stats.multi_reductions),
        Err(_) => (0, 0),
    };
    RunRecord {
        mode: config.mode,
        n: b.n,
        solver_seed: b.seed,
        data_seed: None,
        sigma: 0.0,
        precision_bits: None,
        outcome: match &b.template {
            Ok(_) => Outcome::Success.to_string(),
            Err(_) => "degenerate-template".into(),
        },
        length_error: None,
        max_residual: None,
        basis_len,
        multi_reductions,
        time_ms: config.timings.then_some(b.time_ms),
    }
}

/// Smallest multiple of [`PRECISION_STEP`] up to `max_bits` at which the
/// residual test passes, assuming success is monotone in precision.
pub fn minimal_precision(
    template: &SolverTemplate,
    instance: &SegmentInstance,
    max_bits: u32,
) -> Option<u32> {
    let ok = |k: u32| Outcome::classify(&solve(template, instance, k * PRECISION_STEP), true) == Outcome::Success;
    let (mut lo, mut hi) = (0, max_bits / PRECISION_STEP);
    if hi == 0 || !ok(hi) {
        return None;
    }
    // lo fails (or is zero bits), hi succeeds
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi * PRECISION_STEP)
}

fn data_sets(config: &BenchConfig, n: usize) -> Result<Vec<(u64, SegmentInstance)>, CliError> {
    (0..config.datasets as u64)
        .into_par_iter()
        .map(|j| {
            let seed = config.data_seed + j;
            let exact = gen_float_instance(&GenerationConfig::new(n, seed))?;
            let inst = if config.mode == Mode::Noise { add_noise(&exact, config.sigma, seed)? } else { exact };
            Ok((seed, inst))
        })
        .collect()
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchmarkReport, CliError> {
    config.validate()?;
    let built = build(config)?;
    let records = match config.mode {
        Mode::Construct => built.iter().map(|b| base_record(config, b)).collect(),
        Mode::Precision => {
            let max_bits = config.precision_bits.unwrap_or(2048);
            built
                .par_iter()
                .map(|b| {
                    let mut r = base_record(config, b);
                    if let Ok(t) = &b.template {
                        let start = Instant::now();
                        r.precision_bits = minimal_precision(t, &b.instance, max_bits);
                        if r.precision_bits.is_none() {
                            r.outcome = Outcome::Inaccurate.to_string();
                        }
                        r.time_ms = config.timings.then(|| ms(start));
                    }
                    r
                })
                .collect()
        }
        Mode::Exact | Mode::Noise => {
            let mut records = Vec::new();
            for &n in &config.ns {
                let data = data_sets(config, n)?;
                let cells: Vec<(&Built, &(u64, SegmentInstance))> = built
                    .iter()
                    .filter(|b| b.n == n)
                    .flat_map(|b| data.iter().map(move |d| (b, d)))
                    .collect();
                let rows: Vec<RunRecord> = cells
                    .into_par_iter()
                    .map(|(b, (seed, inst))| solve_cell(config, b, *seed, inst))
                    .collect();
                records.extend(rows);
            }
            records
        }
    };
    Ok(BenchmarkReport {
        mode: config.mode,
        records,
        timings: config.timings,
    })
}

fn solve_cell(config: &BenchConfig, b: &Built, seed: u64, inst: &SegmentInstance) -> RunRecord {
    let mut r = base_record(config, b);
    r.data_seed = Some(seed);
    r.sigma = if config.mode == Mode::Noise { config.sigma } else { 0.0 };
    let Ok(t) = &b.template else {
        return r;
    };
    let bits = config.precision_bits.unwrap_or_else(|| default_precision(b.n));
    r.precision_bits = Some(bits);
    let start = Instant::now();
    let result = solve(t, inst, bits);
    r.time_ms = config.timings.then(|| ms(start));
    r.outcome = Outcome::classify(&result, config.mode == Mode::Exact).to_string();
    if let Ok(sol) = &result {
        r.length_error = sol.length_error();
        r.max_residual = sol.max_length_residual();
    }
    r
}
