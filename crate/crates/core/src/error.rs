use std::fmt;

/// A violated parameter constraint on a single NIG parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainError {
    pub field: &'static str,
    pub value: f64,
    pub constraint: &'static str,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} violates {}", self.field, self.value, self.constraint)
    }
}

impl std::error::Error for DomainError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),

    #[error("domain error at pixel ({x}, {y}): {source}")]
    PixelDomain {
        x: usize,
        y: usize,
        #[source]
        source: DomainError,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("shape mismatch: {expected:?} vs {found:?} (width, height)")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("empty mask: no jointly valid pixels")]
    EmptyMask,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("bad config: {0}")]
    BadConfig(String),

    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_pixel(source: DomainError, x: usize, y: usize) -> Self {
        Error::PixelDomain { x, y, source }
    }

    pub(crate) fn shape(expected: (usize, usize), found: (usize, usize)) -> Self {
        Error::ShapeMismatch { expected, found }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
