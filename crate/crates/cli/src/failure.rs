use std::fmt;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Config = 2,
    Numerical = 3,
    Io = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub kind: ExitKind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        Failure { kind: ExitKind::Config, error: error.into() }
    }

    pub fn numerical(error: impl Into<anyhow::Error>) -> Self {
        Failure { kind: ExitKind::Numerical, error: error.into() }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Failure { kind: ExitKind::Io, error: error.into() }
    }

    pub fn code(&self) -> i32 {
        self.kind as i32
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

/// Library errors: file-system problems are I/O failures, everything else
/// means the inputs were unusable.
impl From<photonwalk::Error> for Failure {
    fn from(e: photonwalk::Error) -> Self {
        if e.is_io() {
            Failure::io(e)
        } else {
            Failure::config(e)
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

/// Attaches a message to a library error while keeping its exit class.
pub trait Context<T> {
    fn context(self, msg: impl fmt::Display) -> CmdResult<T>;
    /// Reading an input file: any failure, I/O included, is a config error.
    fn input(self, msg: impl fmt::Display) -> CmdResult<T>;
}

impl<T> Context<T> for Result<T, photonwalk::Error> {
    fn context(self, msg: impl fmt::Display) -> CmdResult<T> {
        self.map_err(|e| {
            let f = Failure::from(e);
            Failure { kind: f.kind, error: f.error.context(msg.to_string()) }
        })
    }

    fn input(self, msg: impl fmt::Display) -> CmdResult<T> {
        self.map_err(|e| Failure::config(anyhow::Error::from(e).context(msg.to_string())))
    }
}
