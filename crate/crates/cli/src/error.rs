use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] freecomp_core::Error),
    #[error("plots are drawn for k = 2 or k = 3 only (got k = {0}); use --csv output instead")]
    UnsupportedK(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::UnsupportedK(_) => "unsupported_k",
            CliError::Io(_) | CliError::Csv(_) => "io_error",
        }
    }
}
