//! File formats for the `skyscraper` command: `skypres v1` presentations,
//! store CSV, face CSV and landscape CSV.

mod presentation;
mod tables;

pub use presentation::{emit_presentation, parse_presentation, read_presentation};
pub use tables::{read_store, write_faces, write_landscape, write_store, FACES_HEADER, LANDSCAPE_HEADER, STORE_HEADER};

use skyscraper_core::grmat::{parse_rat, Degree, Rat};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Engine(#[from] skyscraper_core::Error),

    #[error("{0}")]
    Violation(String),
}

impl CliError {
    /// 2 for malformed input, 3 when a computation fails, 4 when `check`
    /// finds a problem.
    pub fn exit_code(&self) -> u8 {
        use skyscraper_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Engine(E::Config(_) | E::NotBelow { .. } | E::NotPrime(_)) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Engine(_) => 3,
            CliError::Violation(_) => 4,
        }
    }
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

/// Parses a comma-separated list of exact rationals.
pub fn parse_rats(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|t| parse_rat(t).ok_or_else(|| CliError::Usage(format!("`{t}` is not a rational number"))))
        .collect()
}

/// Parses `X,Y`.
pub fn parse_point(s: &str) -> Result<Degree, CliError> {
    match parse_rats(s)?[..] {
        [x, y] => Ok(Degree::new(x, y)),
        _ => Err(CliError::Usage(format!("expected X,Y, got `{s}`"))),
    }
}

/// Parses `X0,Y0,X1,Y1`.
pub fn parse_box(s: &str) -> Result<(Degree, Degree), CliError> {
    match parse_rats(s)?[..] {
        [x0, y0, x1, y1] => Ok((Degree::new(x0, y0), Degree::new(x1, y1))),
        _ => Err(CliError::Usage(format!("expected X0,Y0,X1,Y1, got `{s}`"))),
    }
}
