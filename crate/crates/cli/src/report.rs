//! Benchmark records and the tables derived from them.
//!
//! CSV columns, in order:
//!
//! ```text
//! mode,n,solver_seed,data_seed,sigma,precision_bits,outcome,length_error,max_residual,basis_len,multi_reductions[,time_ms]
//! ```
//!
//! Empty cells mean "not applicable" (no data set in construct mode, no
//! error without a solution). `time_ms` is present only with timings
//! enabled, so that the default output depends on the seeds alone.
//! Markdown output carries the same records plus tables aggregated per `N`
//! and, for solve modes, the per-solver success grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Solver construction statistics.
    Construct,
    /// Minimal precision on the solver's own template data.
    Precision,
    /// Solvers applied to exact float data.
    Exact,
    /// Solvers applied to noisy float data.
    Noise,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Construct => "construct",
            Mode::Precision => "precision",
            Mode::Exact => "exact",
            Mode::Noise => "noise",
        }
    }
}

impl FromStr for Mode {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Mode, CliError> {
        Ok(match s {
            "construct" => Mode::Construct,
            "precision" => Mode::Precision,
            "exact" => Mode::Exact,
            "noise" => Mode::Noise,
            _ => return Err(CliError::Usage(format!("unknown mode `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Md,
}

/// One (solver, data set) cell, or one solver in construct and precision
/// modes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub mode: Mode,
    pub n: usize,
    pub solver_seed: u64,
    pub data_seed: Option<u64>,
    pub sigma: f64,
    /// Precision used; in precision mode the smallest sufficient one.
    pub precision_bits: Option<u32>,
    /// An outcome class, or `degenerate-template`.
    pub outcome: String,
    pub length_error: Option<f64>,
    pub max_residual: Option<f64>,
    pub basis_len: usize,
    pub multi_reductions: usize,
    pub time_ms: Option<f64>,
}

impl RunRecord {
    pub fn is_success(&self) -> bool {
        self.outcome == "success"
    }
}

pub const CSV_COLUMNS: [&str; 11] = [
    "mode",
    "n",
    "solver_seed",
    "data_seed",
    "sigma",
    "precision_bits",
    "outcome",
    "length_error",
    "max_residual",
    "basis_len",
    "multi_reductions",
];

fn cell<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// Shortest round-trip form, always with an exponent.
fn float_cell(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

/// Aggregate row for one `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub n: usize,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean over successful runs that report an error.
    pub mean_length_error: Option<f64>,
    pub mean_basis_len: f64,
    pub mean_multi_reductions: f64,
    /// Largest precision over the runs that report one: the precision that
    /// suffices for all of them.
    pub max_precision_bits: Option<u32>,
    pub mean_time_ms: Option<f64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, c) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (c > 0).then(|| s / c as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkReport {
    pub mode: Mode,
    pub records: Vec<RunRecord>,
    pub timings: bool,
}

impl BenchmarkReport {
    /// Recomputed from the records on every call.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut by_n: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
        for r in &self.records {
            by_n.entry(r.n).or_default().push(r);
        }
        by_n.into_iter()
            .map(|(n, rs)| {
                let successes = rs.iter().filter(|r| r.is_success()).count();
                Aggregate {
                    n,
                    runs: rs.len(),
                    successes,
                    success_rate: successes as f64 / rs.len() as f64,
                    mean_length_error: mean(
                        rs.iter().filter(|r| r.is_success()).filter_map(|r| r.length_error),
                    ),
                    mean_basis_len: mean(rs.iter().map(|r| r.basis_len as f64)).unwrap_or(0.0),
                    mean_multi_reductions: mean(rs.iter().map(|r| r.multi_reductions as f64)).unwrap_or(0.0),
                    max_precision_bits: rs.iter().filter_map(|r| r.precision_bits).max(),
                    mean_time_ms: mean(rs.iter().filter_map(|r| r.time_ms)),
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
        if self.timings {
            header.push("time_ms");
        }
        w.write_record(&header).expect("in-memory write");
        for r in &self.records {
            let mut row = vec![
                r.mode.as_str().to_string(),
                r.n.to_string(),
                r.solver_seed.to_string(),
                cell(r.data_seed),
                format!("{:e}", r.sigma),
                cell(r.precision_bits),
                r.outcome.clone(),
                float_cell(r.length_error),
                float_cell(r.max_residual),
                r.basis_len.to_string(),
                r.multi_reductions.to_string(),
            ];
            if self.timings {
                row.push(float_cell(r.time_ms));
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Parses what [`BenchmarkReport::to_csv`] wrote.
    pub fn from_csv(text: &str) -> Result<BenchmarkReport, CliError> {
        let bad = |m: String| CliError::Usage(format!("bad benchmark csv: {m}"));
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
        let timings = header.len() == CSV_COLUMNS.len() + 1;
        if header.iter().take(CSV_COLUMNS.len()).ne(CSV_COLUMNS) {
            return Err(bad("unexpected columns".into()));
        }
        fn num<T: FromStr>(s: &str) -> Result<T, CliError> {
            s.parse().map_err(|_| CliError::Usage(format!("bad benchmark csv: `{s}` is not a number")))
        }
        fn opt<T: FromStr>(s: &str) -> Result<Option<T>, CliError> {
            if s.is_empty() { Ok(None) } else { num(s).map(Some) }
        }
        let mut records = Vec::new();
        let mut mode = None;
        for row in rd.records() {
            let row = row.map_err(|e| bad(e.to_string()))?;
            let m: Mode = row[0].parse()?;
            if mode.is_some_and(|x| x != m) {
                return Err(bad("mixed modes".into()));
            }
            mode = Some(m);
            records.push(RunRecord {
                mode: m,
                n: num(&row[1])?,
                solver_seed: num(&row[2])?,
                data_seed: opt(&row[3])?,
                sigma: num(&row[4])?,
                precision_bits: opt(&row[5])?,
                outcome: row[6].to_string(),
                length_error: opt(&row[7])?,
                max_residual: opt(&row[8])?,
                basis_len: num(&row[9])?,
                multi_reductions: num(&row[10])?,
                time_ms: if timings { opt(&row[11])? } else { None },
            });
        }
        Ok(BenchmarkReport {
            mode: mode.ok_or_else(|| bad("no records".into()))?,
            records,
            timings,
        })
    }

    /// The aggregate table alone.
    pub fn summary_markdown(&self) -> String {
        let mut s = String::new();
        let timed = self.timings;
        let (head, rule) = match self.mode {
            Mode::Construct => ("| N | runs | built | basis size | multi-reductions |", "|---|---|---|---|---|"),
            Mode::Precision => ("| N | runs | solved | precision in bit |", "|---|---|---|---|"),
            Mode::Exact | Mode::Noise => ("| N | runs | success rate | mean error |", "|---|---|---|---|"),
        };
        let _ = writeln!(s, "{head}{}", if timed { " time in ms |" } else { "" });
        let _ = writeln!(s, "{rule}{}", if timed { "---|" } else { "" });
        for a in self.aggregates() {
            let row = match self.mode {
                Mode::Construct => format!(
                    "| {} | {} | {} | {:.1} | {:.1} |",
                    a.n, a.runs, a.successes, a.mean_basis_len, a.mean_multi_reductions
                ),
                Mode::Precision => format!(
                    "| {} | {} | {} | {} |",
                    a.n,
                    a.runs,
                    a.successes,
                    cell(a.max_precision_bits)
                ),
                Mode::Exact | Mode::Noise => format!(
                    "| {} | {} | {:.0}% | {} |",
                    a.n,
                    a.runs,
                    100.0 * a.success_rate,
                    a.mean_length_error.map_or_else(|| "-".into(), |e| format!("{e:.2e}"))
                ),
            };
            let t = if timed { format!(" {} |", a.mean_time_ms.map_or_else(|| "-".into(), |t| format!("{t:.1}"))) } else { String::new() };
            let _ = writeln!(s, "{row}{t}");
        }
        s
    }

    /// Success (`+`) or failure (`.`) per solver and data set, with row sums.
    pub fn grid_markdown(&self) -> String {
        let mut s = String::new();
        let mut by_n: BTreeMap<usize, BTreeMap<u64, Vec<&RunRecord>>> = BTreeMap::new();
        for r in self.records.iter().filter(|r| r.data_seed.is_some()) {
            by_n.entry(r.n).or_default().entry(r.solver_seed).or_default().push(r);
        }
        for (n, solvers) in by_n {
            let _ = writeln!(s, "N = {n}\n\n```text");
            for (seed, mut cells) in solvers {
                cells.sort_by_key(|r| r.data_seed);
                let marks: String = cells.iter().map(|r| if r.is_success() { '+' } else { '.' }).collect();
                let sum = cells.iter().filter(|r| r.is_success()).count();
                let _ = writeln!(s, "solver {seed:>4}  {marks}  {sum}");
            }
            let _ = writeln!(s, "```\n");
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# {} benchmark\n\n{}\n", self.mode.as_str(), self.summary_markdown());
        if matches!(self.mode, Mode::Exact | Mode::Noise) {
            s.push_str(&self.grid_markdown());
        }
        s.push_str("## Runs\n\n");
        let csv = self.to_csv();
        let mut lines = csv.lines();
        if let Some(h) = lines.next() {
            let cols = h.split(',').count();
            let _ = writeln!(s, "| {} |", h.replace(',', " | "));
            let _ = writeln!(s, "|{}", "---|".repeat(cols));
        }
        for l in lines {
            let _ = writeln!(s, "| {} |", l.replace(',', " | "));
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Md => self.to_markdown(),
        }
    }
}
