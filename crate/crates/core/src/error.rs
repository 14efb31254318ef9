use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("grid of {m} points is too small; at least {required} are needed")]
    GridTooSmall { m: usize, required: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("leading coefficient A_m must be non-singular (|det| = {det:e} after scaling)")]
    SingularLeading { det: f64 },

    #[error("resonance scan bound k* = {k_star} exceeds the hard cap of {cap}; the input is probably ill-scaled")]
    ScanBoundExceeded { k_star: u64, cap: u64 },

    #[error("frequency {k} was declared resonant but its symbol has no numerical kernel")]
    KernelInconsistent { k: i64 },

    #[error("right-hand side is not in the image of L: defect {defect:e} at frequency {k}")]
    NotInImage { k: i64, defect: f64 },

    #[error("direction has a zero component; the limit is only defined off a null set")]
    NullSetDirection,

    #[error("nonlinearity lacks closed-form limits at infinity: {0}")]
    MissingLimits(String),

    #[error("projected limit map vanishes at a kernel sphere point (coords {witness:?})")]
    ProjectedMapVanishes { witness: Vec<f64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("winding refinement exhausted near parameter {at}; the map is discontinuous or vanishes")]
    RefinementExhausted { at: f64 },

    #[error("kernel blocks are coupled (off-block energy {energy:e}); use the sphere sampling report instead")]
    Coupled { energy: f64 },

    #[error("block {block} has non-positive Lazer-Leach margin {margin}")]
    BlockMargin { block: usize, margin: f64 },

    #[error("nonlinearity or kernel is not componentwise: {0}")]
    NonComponentwise(String),

    #[error("unknown example id {0:?}")]
    UnknownExample(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid problem: {0}")]
    Semantic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
