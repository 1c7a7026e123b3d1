use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use segment_upgrade::datagen::GenerationConfig;
use segment_upgrade::solver::{Outcome, SolverTemplate};
use segment_upgrade::upgrade::SegmentInstance;
use segment_upgrade_cli::bench::{run_bench, BenchConfig};
use segment_upgrade_cli::commands::{self, InstanceKind};
use segment_upgrade_cli::report::{Format, Mode};
use segment_upgrade_cli::{output_path, read_file, write_file, CliError};

/// Euclidean upgrade of projective reconstructions from segments of known
/// length.
///
/// Without `--out`, files go to `$SEGUP_OUT_DIR` or the working directory.
#[derive(Parser)]
#[command(name = "segup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Template,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Construct,
    Precision,
    Exact,
    Noise,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a template (integer) or float instance.
    GenInstance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "template")]
        kind: KindArg,
        /// Noise on float instances.
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Defaults to `--seed`.
        #[arg(long)]
        noise_seed: Option<u64>,
        /// Generation parameters as `key = value` lines.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a solver from a template instance, generated or read from a file.
    GenSolver {
        #[arg(long, required_unless_present = "instance")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, conflicts_with = "n")]
        instance: Option<PathBuf>,
        /// Monomial order, e.g. `grevlex:h2,h3,h8,h9,h7,h1,h4,h5,h6,h10`.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Apply a solver to an instance. Exits 0 only on success.
    Solve {
        #[arg(long)]
        solver: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        precision_bits: Option<u32>,
    },
    /// Run a benchmark and write per-run records.
    Bench {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',', default_value = "9,12,15,25,50")]
        n: Vec<usize>,
        /// First solver seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        solvers: usize,
        #[arg(long, default_value_t = 20)]
        datasets: usize,
        /// First data-set seed.
        #[arg(long, default_value_t = 1000)]
        data_seed: u64,
        #[arg(long, default_value_t = 0.001)]
        sigma: f64,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Add wall-clock columns; output is then no longer reproducible.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn order(s: Option<String>) -> Result<segment_upgrade::algebra::MonomialOrder, CliError> {
    s.map_or_else(|| Ok(Default::default()), |s| commands::parse_order(&s))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenInstance {
            n,
            seed,
            kind,
            sigma,
            noise_seed,
            config,
            out,
        } => {
            let mut c = match config {
                Some(p) => GenerationConfig::from_toml(&read_file(&p)?)?,
                None => GenerationConfig::default(),
            };
            c.n = n;
            c.seed = seed;
            c.sigma = sigma;
            let kind = match kind {
                KindArg::Template => InstanceKind::Template,
                KindArg::Float => InstanceKind::Float,
            };
            let inst = commands::gen_instance(kind, &c, noise_seed.unwrap_or(seed))?;
            let path = output_path(out.as_deref(), &format!("instance-{}-n{n}-s{seed}.txt", inst.kind));
            write_file(&path, &inst.to_text())?;
            println!("{}", path.display());
        }
        Command::GenSolver {
            n,
            seed,
            instance,
            order: o,
            out,
            timings,
        } => {
            let inst = match instance {
                Some(p) => SegmentInstance::from_text(&read_file(&p)?).map_err(|e| CliError::Parse {
                    path: p,
                    message: e.to_string(),
                })?,
                None => commands::gen_instance(
                    InstanceKind::Template,
                    &GenerationConfig::new(n.expect("required by clap"), seed),
                    seed,
                )?,
            };
            let (t, elapsed) = commands::gen_solver(&inst, order(o)?)?;
            let path = output_path(out.as_deref(), &format!("solver-n{}-s{seed}.txt", t.n));
            write_file(&path, &t.to_text())?;
            print!("{}", commands::solver_summary(&t, timings.then_some(elapsed)));
            println!("{}", path.display());
        }
        Command::Solve {
            solver,
            instance,
            precision_bits,
        } => {
            let t = SolverTemplate::from_text(&read_file(&solver)?).map_err(|e| CliError::Parse {
                path: solver,
                message: e.to_string(),
            })?;
            let inst = SegmentInstance::from_text(&read_file(&instance)?).map_err(|e| CliError::Parse {
                path: instance,
                message: e.to_string(),
            })?;
            let run = commands::run_solve(&t, &inst, precision_bits);
            print!("{}", commands::solve_report(&run));
            match run.result {
                Err(e @ segment_upgrade::solver::SolverError::Usage(_)) => return Err(e.into()),
                _ if run.outcome != Outcome::Success => return Err(CliError::Failed(run.outcome)),
                _ => {}
            }
        }
        Command::Bench {
            mode,
            n,
            seed,
            solvers,
            datasets,
            data_seed,
            sigma,
            precision_bits,
            order: o,
            format,
            timings,
            out,
        } => {
            let mode = match mode {
                ModeArg::Construct => Mode::Construct,
                ModeArg::Precision => Mode::Precision,
                ModeArg::Exact => Mode::Exact,
                ModeArg::Noise => Mode::Noise,
            };
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Md => Format::Md,
            };
            let config = BenchConfig {
                solvers,
                datasets,
                solver_seed: seed,
                data_seed,
                sigma,
                precision_bits,
                order: order(o)?,
                timings,
                ..BenchConfig::new(mode, n)
            };
            let report = run_bench(&config)?;
            let ext = match format {
                Format::Csv => "csv",
                Format::Md => "md",
            };
            let path = output_path(out.as_deref(), &format!("bench-{}.{ext}", mode.as_str()));
            write_file(&path, &report.render(format))?;
            print!("{}", report.summary_markdown());
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("segup: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
