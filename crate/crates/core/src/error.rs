use std::path::PathBuf;

/// Everything that can go wrong in this crate.
///
/// The variants line up with the CLI exit codes: `Input`/`Parse`/`Io` map to
/// 2, `Domain`/`Numerical` to 3 and `Capacity` to 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error in {}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity error: {what} requires a cap of at least {required}, configured cap is {cap}")]
    Capacity {
        what: String,
        required: u128,
        cap: u64,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse { .. } | Error::Io(_) => 2,
            Error::Domain(_) | Error::Numerical(_) => 3,
            Error::Capacity { .. } => 4,
        }
    }
}
