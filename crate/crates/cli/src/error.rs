use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(iso_zmc::Error),
}

impl CliError {
    /// 2 for usage, configuration and i/o problems, 3 for numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Degenerate(_) => 3,
            CliError::Core(e) => match e {
                iso_zmc::Error::DegenerateMetric { .. }
                | iso_zmc::Error::Pole { .. }
                | iso_zmc::Error::Degenerate(_)
                | iso_zmc::Error::NonFinite(_) => 3,
                _ => 2,
            },
        }
    }
}

impl From<iso_zmc::Error> for CliError {
    fn from(e: iso_zmc::Error) -> Self {
        CliError::Core(e)
    }
}
