use crate::time::Time;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("horizon mismatch: {0} vs {1}")]
    HorizonMismatch(Time, Time),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("sample instant {at} outside [0, {horizon})")]
    SampleOutOfRange { at: Time, horizon: Time },

    #[error("invalid clock: {0}")]
    InvalidClock(String),

    #[error("invalid LFSR: {0}")]
    InvalidLfsr(String),

    #[error("stream needs {needed} but the clock horizon is {horizon}")]
    HorizonOverflow { needed: Time, horizon: Time },

    #[error("{what}: expected {expected} streams, got {got}")]
    Arity {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("fault rate {0} outside [0, 1]")]
    InvalidRate(f64),

    #[error("invalid netlist: {0}")]
    Netlist(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("image error: {0}")]
    Image(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code for the command-line front end: 1 for configuration
    /// problems, 2 for I/O, 3 for invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Csv(_) | Error::Image(_) => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
