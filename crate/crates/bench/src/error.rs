use nlquad::QuadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Quad(#[from] QuadError),
}

impl CliError {
    /// 2 usage/config, 3 I/O, 4 domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } | CliError::Grid(_) => 2,
            CliError::Io(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Quad(e) => match e.root() {
                QuadError::Config(_) | QuadError::Length { .. } | QuadError::OrderTooLarge(_) => 2,
                _ => 4,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
