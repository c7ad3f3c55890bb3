use std::path::PathBuf;

use thiserror::Error;

use crate::ontology::{LabelSet, OntologyError, PartLabelError};
use crate::raster::BBox;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed netpbm data: {0}")]
    Format(String),

    #[error("malformed JSON in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Ontology(#[from] OntologyError),

    #[error(transparent)]
    PartLabel(#[from] PartLabelError),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("label id {id} is outside the {set} label set")]
    UnknownLabel { id: u16, set: LabelSet },

    #[error("shape mismatch: expected {expected_w}x{expected_h}, got {actual_w}x{actual_h}")]
    ShapeMismatch {
        expected_w: usize,
        expected_h: usize,
        actual_w: usize,
        actual_h: usize,
    },

    #[error("expected a map tagged `{expected}`, got `{actual}`")]
    TagMismatch { expected: LabelSet, actual: LabelSet },

    #[error("box {bbox} does not fit in a {width}x{height} raster")]
    OutOfBounds { bbox: BBox, width: usize, height: usize },

    #[error("mask pixel ({x}, {y}) lies outside box {bbox}")]
    MaskOutsideBox { x: usize, y: usize, bbox: BBox },

    #[error("seed at ({x}, {y}) lies outside the object mask")]
    SeedOutsideMask { x: usize, y: usize },

    #[error("crop callback for box {bbox} returned {width}x{height} maps")]
    CallbackShapeMismatch { bbox: BBox, width: usize, height: usize },

    #[error("no crop maps available for box {0}")]
    MissingCrop(BBox),

    #[error("dataset contains no images with any present part")]
    EmptyDataset,

    #[error("{n_objects} objects do not fit on a {width}x{height} canvas")]
    DoesNotFit { n_objects: usize, width: usize, height: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn shape(expected: (usize, usize), actual: (usize, usize)) -> Self {
        Error::ShapeMismatch {
            expected_w: expected.0,
            expected_h: expected.1,
            actual_w: actual.0,
            actual_h: actual.1,
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}
