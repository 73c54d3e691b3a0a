use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Core(mixdisc::Error),
    Io(String),
    Parse(String),
}

impl CliError {
    /// 1: rejected input or domain, 2: resource cap or non-convergence, 3: I/O or parse failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mixdisc::Error::Input(_) | mixdisc::Error::Domain(_)) => 1,
            CliError::Core(mixdisc::Error::Resource(_) | mixdisc::Error::Convergence { .. }) => 2,
            CliError::Io(_) | CliError::Parse(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(mixdisc::Error::Input(_)) => "input",
            CliError::Core(mixdisc::Error::Domain(_)) => "domain",
            CliError::Core(mixdisc::Error::Resource(_)) => "resource",
            CliError::Core(mixdisc::Error::Convergence { .. }) => "convergence",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Parse(m) => f.write_str(m),
        }
    }
}

impl From<mixdisc::Error> for CliError {
    fn from(e: mixdisc::Error) -> Self {
        CliError::Core(e)
    }
}

pub fn input_error<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Core(mixdisc::Error::Input(msg.into())))
}
