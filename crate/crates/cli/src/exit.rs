use std::io;
use std::process::ExitCode;

use wdm_core::{ExperimentError, MatrixError, SpectralError, TheoryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Usage = 1,
    Data = 2,
    Numerical = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Data,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Numerical,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::data(e.to_string())
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Disconnected { .. } | MatrixError::DimensionMismatch(..) => {
                Self::data(e.to_string())
            }
            MatrixError::InvalidProbability(_) => Self::usage(e.to_string()),
            MatrixError::Weight { .. } | MatrixError::Degenerate => Self::numerical(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        Self::numerical(e.to_string())
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        match e {
            TheoryError::Eval(_) => Self::numerical(e.to_string()),
            _ => Self::usage(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(_)
            | ExperimentError::Weight(_)
            | ExperimentError::NoHistogram(_) => Self::usage(e.to_string()),
            ExperimentError::Graph(_) => Self::usage(e.to_string()),
            ExperimentError::Matrix(m) => m.into(),
            ExperimentError::Theory(t) => t.into(),
            ExperimentError::Spectral(s) => s.into(),
            ExperimentError::TooManyRejections { .. }
            | ExperimentError::Io(_)
            | ExperimentError::Csv(_)
            | ExperimentError::Json(_) => Self::data(e.to_string()),
        }
    }
}
