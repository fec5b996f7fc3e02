use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("prime {p} divides the discriminant: reduction is bad")]
    BadReduction { p: u64 },

    #[error("model is not minimal at {p} (v_p(c4) = {v_c4}, v_p(disc) = {v_disc})")]
    NonminimalModel { p: u64, v_c4: u32, v_disc: u32 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("family size estimate {estimate} exceeds the cap {cap}")]
    OutOfMemory { estimate: u64, cap: u64 },

    #[error("conductor {conductor} shares a factor with the curve conductor {curve_conductor}")]
    ConductorClash { conductor: u64, curve_conductor: u64 },

    #[error("family is empty")]
    EmptyFamily,

    #[error("need {required} coefficients, have {available}")]
    InsufficientCoefficients { required: usize, available: usize },

    #[error("root number system is ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("no derivative of order <= {max_order} exceeds the zero threshold")]
    RankOverflow { max_order: u32 },

    #[error("coefficient box {given} cannot reach discriminant bound {x} (need {required})")]
    EnumerationBoundTooSmall { x: f64, given: i64, required: i64 },

    #[error("splitting at index prime {p} could not be decided")]
    IndexPrime { p: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cache corruption: {0}")]
    CacheCorruption(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in error records and by the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadReduction { .. } => "BadReduction",
            Error::NonminimalModel { .. } => "NonminimalModel",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::OutOfMemory { .. } => "OutOfMemory",
            Error::ConductorClash { .. } => "ConductorClash",
            Error::EmptyFamily => "EmptyFamily",
            Error::InsufficientCoefficients { .. } => "InsufficientCoefficients",
            Error::IllConditioned(_) => "IllConditioned",
            Error::RankOverflow { .. } => "RankOverflow",
            Error::EnumerationBoundTooSmall { .. } => "EnumerationBoundTooSmall",
            Error::IndexPrime { .. } => "IndexPrime",
            Error::Config(_) => "ConfigError",
            Error::CacheCorruption(_) => "CacheCorruption",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
