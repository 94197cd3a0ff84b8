use std::path::PathBuf;

use helly_core::crystal::CrystalError;
use helly_core::exactcore::ExactError;
use helly_core::extension::ExtensionError;
use helly_core::hellygraph::HellyGraphError;
use helly_core::hyperoct::HyperoctError;
use helly_core::nilpotent::NilpotentError;
use helly_core::stablenorm::StableNormError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_HELLY: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) | Self::Read { .. } => EXIT_INPUT,
            Self::Budget(_) => EXIT_BUDGET,
            Self::Verify(_) | Self::Internal(_) | Self::Write { .. } => EXIT_FAILURE,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::GroupTooLarge { .. } => Self::Budget(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<CrystalError> for CliError {
    fn from(e: CrystalError) -> Self {
        match e {
            CrystalError::Group(inner) => inner.into(),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<HyperoctError> for CliError {
    fn from(e: HyperoctError) -> Self {
        match e {
            HyperoctError::DimensionTooLarge { .. } | HyperoctError::SearchBudgetExceeded { .. } => {
                Self::Budget(e.to_string())
            }
            _ => Self::Internal(e.to_string()),
        }
    }
}

impl From<StableNormError> for CliError {
    fn from(e: StableNormError) -> Self {
        match e {
            StableNormError::BudgetExceeded { .. } => Self::Budget(e.to_string()),
            StableNormError::Crystal(inner) => inner.into(),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<HellyGraphError> for CliError {
    fn from(e: HellyGraphError) -> Self {
        match e {
            HellyGraphError::GraphTooLarge { .. } => Self::Budget(e.to_string()),
            HellyGraphError::StableNorm(inner) => inner.into(),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::Internal(_) => Self::Internal(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<NilpotentError> for CliError {
    fn from(e: NilpotentError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Input(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
    }
}
