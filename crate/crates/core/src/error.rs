use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid index ({x}, {y}) outside 1..={size_x} x 1..={size_y}")]
    GridIndex {
        x: usize,
        y: usize,
        size_x: usize,
        size_y: usize,
    },

    #[error("incidence zenith {0} rad is not on the front side of the panel (must be < pi/2)")]
    GrazingIncidence(f64),

    #[error("exit zenith {0} rad is not on the front side of the panel (must be < pi/2)")]
    BackSideExit(f64),

    #[error("reflection coefficient modulus {0} is not 1")]
    NotUnitModulus(f64),

    #[error("phase mask is {mask_x}x{mask_y} but panel is {panel_x}x{panel_y}")]
    MaskDimensions {
        mask_x: usize,
        mask_y: usize,
        panel_x: usize,
        panel_y: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty pattern cut")]
    EmptyCut,

    #[error("unsupported scenario `{0}`")]
    UnsupportedScenario(String),

    #[error("sub-channel endpoints coincide")]
    CoincidentEndpoints,

    #[error("sub-channel has no rays")]
    EmptySubChannel,

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("antenna index out of range: p={p}, q={q}")]
    AntennaIndex { p: usize, q: usize },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("output directory {0} is locked by another run")]
    Locked(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
