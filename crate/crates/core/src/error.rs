use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("letter {letter} out of range for alphabet size {m}")]
    InvalidLetter { letter: u32, m: u32 },

    #[error("alphabet size {0} is too small (need m >= 2)")]
    AlphabetTooSmall(u32),

    #[error("precision cap exceeded while {context}")]
    PrecisionCap { context: String },

    #[error("sector {sector} of m={m} did not converge within the iteration cap")]
    SectorNoConvergence { m: u32, sector: u32 },

    #[error("truncation cap exceeded for (m={m}, a={a}); best interval [{lo}, {hi}]")]
    TruncationCap { m: u32, a: u32, lo: String, hi: String },

    #[error("witness recipe error: {0}")]
    Recipe(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn precision(context: impl Into<String>) -> Self {
        Error::PrecisionCap {
            context: context.into(),
        }
    }
}
