use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("a seed is mandatory; pass --seed")]
    MissingSeed,
    #[error("command `{command}` needs {what}")]
    MissingParam { command: &'static str, what: &'static str },
    #[error("invalid input document: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] lemlab_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("report schema version {found} is not supported (this build reads version {expected})")]
    SchemaMismatch { found: u64, expected: u32 },
    #[error("replay payload differs from the stored one: {detail}")]
    ReplayMismatch { detail: String },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}
