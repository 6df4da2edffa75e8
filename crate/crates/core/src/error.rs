use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("missing species data: {0}")]
    MissingData(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The state sits in a degenerate manifold and shifts linearly with field.
    #[error("linear Stark regime: {0}")]
    LinearStark(String),

    #[error("ill-posed steady state: {0}")]
    IllPosed(String),

    /// Fewer than two transmission peaks were found.
    #[error("below ATS threshold: found {peaks} peak(s)")]
    BelowAtsThreshold { peaks: usize },

    #[error("zero-gain LO bias: transmission slope {slope:e} below threshold")]
    ZeroGainBias { slope: f64 },

    #[error("image overlap: IF {f_if} Hz must exceed bandwidth {bandwidth} Hz")]
    ImageOverlap { f_if: f64, bandwidth: f64 },

    #[error("aliasing configuration: rate {rate} Hz below Nyquist rate {nyquist} Hz")]
    AliasingConfig { rate: f64, nyquist: f64 },

    #[error("DOA unidentifiable with a single element")]
    Unidentifiable,

    #[error("DOA estimation failure: {0}")]
    EstimationFailure(String),

    #[error("species data parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
