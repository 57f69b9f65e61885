use liectrl_core::bilinear_form::FormError;
use liectrl_core::catalog::CatalogError;
use liectrl_core::closure::ClosureError;
use liectrl_core::decide::DecideError;
use liectrl_core::matrep::MatrepError;
use liectrl_core::pauli::PauliError;
use liectrl_core::symmetry::SymmetryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("resource cap: {0}")]
    ResourceCap(String),
    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::ResourceCap(_) => 3,
            CliError::Inconsistent(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Form(f) => f.into(),
            e if e.is_resource_cap() => CliError::ResourceCap(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::TooManyQubits { .. }
            | SymmetryError::Matrep(MatrepError::CapExceeded { .. })
            | SymmetryError::Pauli(PauliError::DenseCapExceeded { .. }) => CliError::ResourceCap(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::TooLarge { .. } | FormError::Pauli(PauliError::DenseCapExceeded { .. }) => {
                CliError::ResourceCap(e.to_string())
            }
            FormError::Inconsistent(why) => CliError::Inconsistent(why),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::CapExceeded { .. } => CliError::ResourceCap(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}
