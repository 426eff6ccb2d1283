use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("IoError: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("FormatError: {0}")]
    Format(String),
    #[error("DegenerateImage: {rows}x{cols} is smaller than 2x2")]
    DegenerateImage { rows: usize, cols: usize },
    #[error("EmptySet: no images found in the {0} set")]
    EmptySet(&'static str),
    #[error("DuplicateStem: stem {stem:?} appears twice in the {set} set")]
    DuplicateStem { set: &'static str, stem: String },
    #[error("NoPairs: no stem is shared by the real and generated sets")]
    NoPairs,
    #[error("ShapeMismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("TooSmall: {rows}x{cols} is below the required {min}x{min}")]
    TooSmall {
        rows: usize,
        cols: usize,
        min: usize,
    },
    #[error("EmptyInput: nothing to aggregate")]
    EmptyInput,
    #[error("AlreadyCentered: map is already center-shifted")]
    AlreadyCentered,
    #[error("NotCentered: map must be center-shifted first")]
    NotCentered,
    #[error("BadSide: crop side {side} must be odd and at most {max}")]
    BadSide { side: usize, max: usize },
    #[error("DegenerateAutocorr: {0}")]
    DegenerateAutocorr(String),
    #[error("InvalidValue: {0}")]
    InvalidValue(String),
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "IoError",
            Error::Format(_) => "FormatError",
            Error::DegenerateImage { .. } => "DegenerateImage",
            Error::EmptySet(_) => "EmptySet",
            Error::DuplicateStem { .. } => "DuplicateStem",
            Error::NoPairs => "NoPairs",
            Error::ShapeMismatch(..) => "ShapeMismatch",
            Error::TooSmall { .. } => "TooSmall",
            Error::EmptyInput => "EmptyInput",
            Error::AlreadyCentered => "AlreadyCentered",
            Error::NotCentered => "NotCentered",
            Error::BadSide { .. } => "BadSide",
            Error::DegenerateAutocorr(_) => "DegenerateAutocorr",
            Error::InvalidValue(_) => "InvalidValue",
            Error::Json(_) => "Json",
        }
    }
}
