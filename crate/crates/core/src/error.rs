use std::fmt;

use thiserror::Error;

use crate::moebius::ElementClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A sample pair `(x, y)` of angles, used to report order violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub x: f64,
    pub y: f64,
}

impl fmt::Display for AnglePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.12} -> {:.12})", self.x, self.y)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-positive determinant {0}")]
    InvalidMatrix(f64),
    #[error("element is {0}, expected hyperbolic")]
    NotHyperbolic(ElementClass),
    #[error("two points of the triple coincide")]
    DegenerateTriple,
    #[error("triple is negatively oriented")]
    NegativelyOriented,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot parse word `{0}`")]
    WordParse(String),
    #[error("depth {depth} exceeds the configured cap {cap}")]
    DepthExceedsCap { depth: usize, cap: usize },
    #[error("ball of projected size {projected} exceeds the budget {budget}")]
    BallTooLarge { projected: u128, budget: usize },
    #[error("elliptic element found: `{0}` (group cannot be torsion-free discrete)")]
    EllipticFound(String),
    #[error("sink sample is empty")]
    EmptySample,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
    #[error("no twist metadata for cuff `{0}`")]
    UnknownCuff(String),
    #[error("generator lists differ")]
    GeneratorMismatch,
    #[error("type mismatch on `{word}`: {base} in base, {target} in target")]
    TypeMismatch {
        word: String,
        base: ElementClass,
        target: ElementClass,
    },
    #[error("monotonicity violation, witness {} {} {}", .0[0], .0[1], .0[2])]
    MonotonicityViolation([AnglePair; 3]),
    #[error("a circle map needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("anchor `{0}` is not hyperbolic")]
    AnchorNotHyperbolic(String),
    #[error("anchor sinks are not distinct")]
    AnchorSinksDegenerate,
    #[error("anchor sinks are negatively oriented")]
    AnchorOrientationNegative,
    #[error("characters use different anchors or generators")]
    AnchorMismatch,
    #[error("no anchor triple found in the ball")]
    NoAnchors,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("barycenter iteration did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("boundary measure is degenerate")]
    DegenerateMeasure,
    #[error("point is not inside the unit disk")]
    OutsideDisk,
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    ///
    /// 2 input, 3 type mismatch, 4 monotonicity, 5 automorphism, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TypeMismatch { .. } => 3,
            Error::MonotonicityViolation(_) => 4,
            Error::InvalidAutomorphism(_) => 5,
            Error::InvalidMatrix(_)
            | Error::UnknownGenerator(_)
            | Error::WordParse(_)
            | Error::InvalidRepresentation(_)
            | Error::InvalidGluing(_)
            | Error::GeneratorMismatch
            | Error::DepthExceedsCap { .. }
            | Error::Input(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
