use fakenews::corpus::CorpusError;
use fakenews::features::FeatureError;
use fakenews::models::ModelError;
use fakenews::resources::ResourceError;
use fakenews::search::{GridError, PersistError, PipelineError};

/// Exit code 2 for bad input, 3 for everything else.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ResourceError> for CliError {
    fn from(e: ResourceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        match e {
            FeatureError::DimensionMismatch { expected, found } => {
                CliError::Input(format!("DimensionMismatch: expected {expected}, found {found}"))
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NonFiniteLoss { .. } => CliError::Internal(e.to_string()),
            ModelError::DimensionMismatch { expected, found } => {
                CliError::Input(format!("DimensionMismatch: expected {expected}, found {found}"))
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Feature(e) => e.into(),
            PipelineError::Model(e) => e.into(),
            PipelineError::Corpus(e) => e.into(),
            PipelineError::Eval(e) => CliError::Input(e.to_string()),
            PipelineError::Config(msg) => CliError::Input(format!("invalid config: {msg}")),
        }
    }
}

impl From<PersistError> for CliError {
    fn from(e: PersistError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::ThreadPool(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
