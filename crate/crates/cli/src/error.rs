use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] udwsim::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for physics-domain failures, 2 for configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Physics(_) | Self::Io(_) => 1,
        }
    }
}

impl From<udwsim::QuadError> for CliError {
    fn from(e: udwsim::QuadError) -> Self {
        Self::Physics(e.into())
    }
}
