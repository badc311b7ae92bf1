use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported wavelet family/order: {0}")]
    UnsupportedFamily(String),
    #[error("filter pair violates QMF invariants: {0}")]
    InvalidFilter(String),
    #[error("input length {0} is odd")]
    OddLength(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("length {len} is not divisible by 2^{levels}")]
    BadLength { len: usize, levels: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sample span too small: need +/-{needed:.6e}, have +/-{have:.6e}")]
    SpanTooSmall { needed: f64, have: f64 },
    #[error("time grid does not align with the requested shifts: {0}")]
    GridMismatch(String),
    #[error("two-scale filter did not converge: {0}")]
    NotConverged(String),
    #[error("spectrum is empty or identically zero")]
    EmptySpectrum,
    #[error("mother wavelet undersampled: {0}")]
    UndersampledMother(String),
    #[error("bit count {bits} is not a multiple of {per_symbol}")]
    BitCountMismatch { bits: usize, per_symbol: usize },
    #[error("config invariant violated: {0}")]
    ConfigInvariantViolated(String),
    #[error("symbol period {period:.6e} shorter than pulse support {support:.6e}")]
    PeriodTooShort { period: f64, support: f64 },
    #[error("{streams} symbol streams for {pulses} pulses")]
    StreamPulseCountMismatch { streams: usize, pulses: usize },
    #[error("frame is empty")]
    EmptyFrame,
    #[error("tap delay {delay} exceeds frame length {len}")]
    DelayExceedsFrame { delay: usize, len: usize },
    #[error("channel response {magnitude:.3e} below epsilon at bin {bin}")]
    SingularChannel { bin: usize, magnitude: f64 },
    #[error("frame has zero energy")]
    ZeroEnergy,
    #[error("reference symbol {0} has zero magnitude")]
    ZeroReferenceSymbol(usize),
    #[error("frame of {len} samples shorter than segment {segment}")]
    FrameTooShort { len: usize, segment: usize },
    #[error("bandwidth is zero")]
    ZeroBandwidth,
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
