use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Errors produced by the geometric and combinatorial layers.
///
/// `Internal` is reserved for violated invariants that would indicate a bug
/// in this crate (for example the simplicial box polynomial disagreeing with
/// the brute-force count); everything else reports a problem with the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,

    #[error("matrix columns are linearly dependent")]
    RankDeficient,

    #[error("generators span a cone containing a line")]
    NotPointed,

    #[error("cones {a} and {b} intersect in a non-face (rays {rays_a} vs {rays_b})")]
    InvalidFan {
        a: usize,
        b: usize,
        rays_a: String,
        rays_b: String,
    },

    #[error("no rational linear functional takes value 1 on all rays{}", cone_suffix(.cone))]
    NoRationalSolution { cone: Option<usize> },

    #[error(
        "level function is not integral on the span lattice{}: witness {witness} has value {value}",
        cone_suffix(.cone)
    )]
    NonIntegral {
        cone: Option<usize>,
        witness: String,
        value: BigRational,
    },

    #[error("conewise level functions disagree on a shared face")]
    Mismatch,

    #[error("no cone with id {id} in this fan")]
    UnknownCone { id: usize },

    #[error("cones {lo} and {hi} are not comparable in the face order")]
    NotComparable { lo: usize, hi: usize },

    #[error("poset is not bounded and graded: {reason}")]
    NotGraded { reason: String },

    #[error("poset is not Eulerian")]
    NotEulerian,

    #[error("cone with {rays} rays and dimension {dim} is not simplicial")]
    NotSimplicial { rays: usize, dim: usize },

    #[error("fan is not Gorenstein: {source}")]
    NotGorenstein { source: Box<Error> },

    #[error("fan is not complete")]
    NotComplete,

    #[error("parse error: {message}")]
    Parse { message: String },

    #[error("internal invariant violated: {message}")]
    Internal { message: String },
}

fn cone_suffix(cone: &Option<usize>) -> String {
    match cone {
        Some(id) => format!(" (cone {id})"),
        None => String::new(),
    }
}

impl Error {
    /// Attach a cone id to Gorenstein solve errors bubbling out of a fan check.
    pub(crate) fn with_cone(self, id: usize) -> Error {
        match self {
            Error::NoRationalSolution { .. } => Error::NoRationalSolution { cone: Some(id) },
            Error::NonIntegral {
                witness, value, ..
            } => Error::NonIntegral {
                cone: Some(id),
                witness,
                value,
            },
            other => other,
        }
    }

    pub(crate) fn internal(message: impl Into<String>) -> Error {
        Error::Internal {
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Convenience used by tests and the CLI: an integer rendered for messages.
pub(crate) fn fmt_bigint_vec(v: &[BigInt]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(", "))
}
