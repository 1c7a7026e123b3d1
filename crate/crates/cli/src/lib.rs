//! Library side of the `segup` binary: instance and solver generation,
//! solving, and the benchmark harness that regenerates the construction,
//! precision, exact-data and noisy-data experiments.

pub mod bench;
pub mod commands;
pub mod report;

use std::path::{Path, PathBuf};

use segment_upgrade::datagen::DatagenError;
use segment_upgrade::solver::{Outcome, SolverError};
use segment_upgrade::upgrade::UpgradeError;
use thiserror::Error;

/// Directory used for outputs when `--out` is not given.
pub const OUT_DIR_ENV: &str = "SEGUP_OUT_DIR";

/// Process exit codes. Each solve failure class has its own.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DEGENERATE_TEMPLATE: i32 = 3;
    pub const NO_REAL_SOLUTION: i32 = 4;
    pub const ZERO_DIVISION: i32 = 5;
    pub const SHAPE_MISMATCH: i32 = 6;
    pub const INACCURATE: i32 = 7;
    pub const OTHER: i32 = 8;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Datagen(#[from] DatagenError),
    /// The solve ran but did not succeed.
    #[error("solve failed: {0}")]
    Failed(Outcome),
}

impl From<UpgradeError> for CliError {
    fn from(e: UpgradeError) -> Self {
        CliError::Solver(e.into())
    }
}

fn outcome_code(o: Outcome) -> i32 {
    match o {
        Outcome::Success => exit::OK,
        Outcome::Inaccurate => exit::INACCURATE,
        Outcome::NoRealSolution => exit::NO_REAL_SOLUTION,
        Outcome::ZeroDivision => exit::ZERO_DIVISION,
        Outcome::ShapeMismatch => exit::SHAPE_MISMATCH,
        Outcome::Other => exit::OTHER,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Solver(SolverError::Usage(_)) => exit::USAGE,
            CliError::Datagen(DatagenError::InvalidConfig(_)) => exit::USAGE,
            CliError::Io { .. } | CliError::Parse { .. } => exit::IO,
            CliError::Solver(SolverError::DegenerateTemplate(_)) => exit::DEGENERATE_TEMPLATE,
            CliError::Solver(e) => outcome_code(Outcome::classify(&Err(e.clone()), true)),
            CliError::Datagen(_) => exit::OTHER,
            CliError::Failed(o) => outcome_code(*o),
        }
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// `out` if given, else `name` inside [`OUT_DIR_ENV`] or the working
/// directory.
pub fn output_path(out: Option<&Path>, name: &str) -> PathBuf {
    match out {
        Some(p) => p.to_owned(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_default()
            .join(name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_classes_have_distinct_codes() {
        let codes: Vec<i32> = Outcome::ALL.iter().map(|&o| CliError::Failed(o).exit_code()).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
        assert_eq!(codes[0], exit::OK);
        assert_eq!(
            CliError::Solver(SolverError::DegenerateTemplate("x".into())).exit_code(),
            exit::DEGENERATE_TEMPLATE
        );
        assert_eq!(CliError::Solver(SolverError::ZeroDivision).exit_code(), exit::ZERO_DIVISION);
        assert_eq!(CliError::Solver(SolverError::Usage("n".into())).exit_code(), exit::USAGE);
    }

    #[test]
    fn explicit_out_wins() {
        assert_eq!(output_path(Some(Path::new("a/b.txt")), "c.txt"), Path::new("a/b.txt"));
    }
}
