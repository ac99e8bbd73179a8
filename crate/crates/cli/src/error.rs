use entroscale_core::{CaseTag, Error};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0} is outside Cases 2-5; density, sweep and oracle refuse this model")]
    WrongCase(CaseTag),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::WrongCase(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Oracle(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::WrongCase(c) => CliError::WrongCase(c),
            Error::InvalidModel(m) | Error::InvalidFermi(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        }
    }
}
