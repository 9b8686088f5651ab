use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("label {0} not present in mask")]
    NotFound(u32),
    #[error("label {label} forms {components} disconnected components")]
    AmbiguousRegion { label: u32, components: usize },
    #[error("region too small: {vertices} boundary vertices (need at least {min})")]
    TooSmall { vertices: usize, min: usize },
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("degenerate boundary vertex {0}: zero tangent")]
    DegenerateVertex(usize),
    #[error("boundary has {vertices} vertices, curvature stencil needs {needed}")]
    BoundaryTooShort { vertices: usize, needed: usize },
    #[error("no seed points given")]
    EmptySeeds,
    #[error("seeds {0} and {1} coincide")]
    DuplicateSeed(usize, usize),
    #[error("points admit no triangulation (fewer than 3 or all collinear)")]
    EmptyTriangulation,
    #[error("empty scalar field")]
    EmptyField,
    #[error("seed {index} at ({x}, {y}) is not inside the boundary")]
    SeedOutsideBoundary { index: usize, x: f64, y: f64 },
    #[error("raster shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("clump generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
