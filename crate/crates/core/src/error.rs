use thiserror::Error;

/// Errors produced by decoding, integral queries and the tone-mapping pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Format(String),

    #[error("truncated input: {0}")]
    Truncated(String),

    #[error("unsupported resolution orientation `{0}` (only `-Y H +X W` is supported)")]
    UnsupportedOrientation(String),

    #[error("invalid pixel value at ({x}, {y}): {reason}")]
    InvalidPixel { x: usize, y: usize, reason: String },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("value {value} outside [0, 1] at index {index}")]
    Range { index: usize, value: f64 },

    #[error("image {width}x{height} exceeds the reference limit of {limit}x{limit}")]
    SizeGuard {
        width: usize,
        height: usize,
        limit: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("png encoding failed: {0}")]
    Png(#[from] png::EncodingError),
}

pub type Result<T> = std::result::Result<T, Error>;
