use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// The run finished without a decision (undecided classification or a
    /// bracket that does not straddle).
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("cannot write results: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Undecided(_) => 4,
        }
    }
}

impl From<radial_core::Error> for CliError {
    fn from(e: radial_core::Error) -> Self {
        match e {
            radial_core::Error::InvalidArgument(m) => CliError::Config(m),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<solitons::Error> for CliError {
    fn from(e: solitons::Error) -> Self {
        match e {
            solitons::Error::InvalidArgument(m) => CliError::Config(m),
            solitons::Error::Core(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<halfline_spectral::Error> for CliError {
    fn from(e: halfline_spectral::Error) -> Self {
        match e {
            halfline_spectral::Error::InvalidArgument(m) => CliError::Config(m),
            halfline_spectral::Error::Core(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<nls_linearized::Error> for CliError {
    fn from(e: nls_linearized::Error) -> Self {
        use nls_linearized::Error as E;
        match e {
            E::InvalidArgument(m) => CliError::Config(m),
            E::InvalidBracket(m) => CliError::Undecided(format!("invalid bracket: {m}")),
            E::Core(e) => e.into(),
            E::Soliton(e) => e.into(),
            E::Spectral(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<resolvent_expansion::Error> for CliError {
    fn from(e: resolvent_expansion::Error) -> Self {
        use resolvent_expansion::Error as E;
        match e {
            E::InvalidArgument(m) => CliError::Config(m),
            E::Core(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<wave_dynamics::Error> for CliError {
    fn from(e: wave_dynamics::Error) -> Self {
        use wave_dynamics::Error as E;
        match e {
            E::InvalidArgument(m) => CliError::Config(m),
            e @ E::Cfl { .. } => CliError::Config(e.to_string()),
            e @ E::BracketTooSmall(_) => CliError::Undecided(e.to_string()),
            E::Core(e) => e.into(),
            E::Soliton(e) => e.into(),
            e => CliError::Numeric(e.to_string()),
        }
    }
}
