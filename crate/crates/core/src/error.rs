use thiserror::Error;

use crate::perm::MAX_DEGREE;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message} (near `{token}`)")]
    Parse {
        offset: usize,
        token: String,
        message: String,
    },

    #[error("point {point} is out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point {0} is repeated within one cycle")]
    RepeatedPoint(usize),

    #[error("image table is not a bijection of 1..={0}")]
    NotBijection(usize),

    #[error("degree {0} is unsupported (expected 1..={max})", max = MAX_DEGREE)]
    InvalidDegree(usize),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("malformed input: {0}")]
    Input(String),

    #[error("group of order {order} exceeds the enumeration cap of {cap} elements")]
    CapExceeded { order: u128, cap: usize },

    #[error("group of order {0} is not a 2-group")]
    NotTwoGroup(u128),

    #[error("the 2-group is trivial and has no subgroup of index 2")]
    TrivialGroup,

    #[error("not a subgroup: generator {0} is not a member of the ambient group")]
    NotSubgroup(String),

    #[error("subgroup is not proper, so no index-2 subgroup can contain it")]
    NotProperSubgroup,

    #[error("group fixes point {0}; its stabilizer is the whole group and has no proper index-2 overgroup")]
    HasFixedPoint(usize),

    #[error("degree {0} is below 5; the orbit-parity criterion is only established for n >= 5")]
    DegreeBelowFive(usize),

    #[error("degree {degree} exceeds the configured classification ceiling {max}")]
    DegreeAboveCeiling { degree: usize, max: usize },

    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),

    #[error("points are not pairwise distinct")]
    CoincidentPoints,

    #[error("(0 : 0) is not a point of the projective line")]
    ZeroPoint,

    #[error("matrix is singular (ad - bc = 0)")]
    SingularMatrix,

    #[error("certificate check failed: {0}")]
    Certificate(String),
}

impl Error {
    /// True for errors caused by unreadable input text, as opposed to
    /// well-formed input that violates an operation's precondition.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::PointOutOfRange { .. }
                | Error::RepeatedPoint(_)
                | Error::NotBijection(_)
                | Error::InvalidDegree(_)
                | Error::Input(_)
                | Error::ZeroPoint
        )
    }

    pub(crate) fn parse(offset: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            token: token.into(),
            message: message.into(),
        }
    }
}
