use std::path::PathBuf;

use ordo_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("missing artifacts (run the producing commands or pass --run-all): {}", .0.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "))]
    MissingArtifacts(Vec<PathBuf>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 config, 3 numeric non-convergence, 4 missing artifact, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::MissingArtifacts(_) => 4,
            Self::Io(_) => 1,
            Self::Core(e) => match e {
                CoreError::NoConvergence { .. } | CoreError::ConjugatePoint { .. } | CoreError::Overflow { .. } | CoreError::Eigen(_) => 3,
                CoreError::Io(_) => 1,
                _ => 2,
            },
        }
    }
}
