use crate::field::Point2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate critical point at ({}, {}): |det Hessian| = {hessian_det:e}", .location.x, .location.y)]
    NonMorseField { location: Point2, hessian_det: f64 },

    #[error("field has identically zero gradient")]
    ZeroGradientField,

    #[error("degenerate Hessian (det = {det:e})")]
    DegenerateHessian { det: f64 },

    #[error("bounding box must have positive width and height")]
    DegenerateBox,

    #[error("vertex `{vertex}`: {source}")]
    AtVertex {
        vertex: String,
        #[source]
        source: Box<Error>,
    },

    #[error("vertex `{vertex}` has no critical points inside the bounding box")]
    NoCriticalPoints { vertex: String },

    #[error("vertex `{vertex}` is mapped to infinity")]
    PointAtInfinity { vertex: String },

    #[error("projective transform is singular")]
    SingularTransform,

    #[error("field is identically zero")]
    IdenticallyZeroField,

    #[error("grid resolution {0} is below the minimum of 8")]
    InvalidResolution(usize),

    #[error("stress has {found} entries but the graph has {expected} edges")]
    StressLength { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid document: {0}")]
    Validation(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numeric,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::DegenerateBox
            | Error::StressLength { .. }
            | Error::InvalidResolution(_) => ErrorKind::Validation,
            Error::AtVertex { source, .. } => source.kind(),
            _ => ErrorKind::Numeric,
        }
    }

    pub(crate) fn at_vertex(vertex: &str, source: Error) -> Error {
        Error::AtVertex {
            vertex: vertex.to_string(),
            source: Box::new(source),
        }
    }
}
