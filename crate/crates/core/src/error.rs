use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("unknown chord `{0}`")]
    UnknownChord(String),

    #[error("unknown piece `{0}`")]
    UnknownPiece(String),

    #[error("cannot parse action `{0}`")]
    BadAction(String),

    #[error("cannot parse disk word: {0}")]
    BadWord(String),

    #[error("a formal disk needs at least one puncture")]
    EmptyWord,

    #[error("arc mismatch: puncture {left} ({left_token}) leaves on `{out}` but puncture {right} ({right_token}) enters on `{inc}`")]
    ArcMismatch {
        left: usize,
        left_token: String,
        out: String,
        right: usize,
        right_token: String,
        inc: String,
    },

    #[error("disk [{0}] is not admissible")]
    NotAdmissible(String),

    #[error("no boundary arc of [{disk}] lies on piece `{piece}`")]
    NoArcOnPiece { disk: String, piece: String },

    #[error("non-admissible: >2 mixed piece-punctures in [{0}]")]
    TooManyMixed(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("cannot glue: {0}")]
    GlueMismatch(String),

    #[error("zero-action cycle risk: [{0}] has non-positive action")]
    ZeroActionCycle(String),

    #[error("cannot project to {beta}: vector is only known up to {alpha}")]
    ProjectAbove { beta: String, alpha: String },

    #[error("invalid cobordism data: {0}")]
    InvalidCobordism(String),

    #[error("invalid deformation scenario: {0}")]
    InvalidScenario(String),

    #[error("increment recursion did not stabilize after {0} rounds")]
    NoStabilization(usize),

    #[error("action gap of the chain isomorphism is not positive")]
    NoActionGap,

    #[error("truncation leak: {0}")]
    Leak(String),

    #[error("d^2 != 0: {0}")]
    DSquared(String),

    #[error("not a filtered chain map: {0}")]
    NotChainMap(String),

    #[error("cannot parse {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Whether the failure lies in the input itself rather than in the mathematics.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidBoundary(_)
                | Error::UnknownChord(_)
                | Error::UnknownPiece(_)
                | Error::BadAction(_)
                | Error::BadWord(_)
                | Error::EmptyWord
                | Error::ArcMismatch { .. }
                | Error::NotAdmissible(_)
                | Error::Parse(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
