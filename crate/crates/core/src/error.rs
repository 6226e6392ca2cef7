//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::lattice::Point;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by construction, parsing and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree {0} is out of range (supported: 1..={max})", max = crate::lattice::MAX_DEGREE)]
    DegreeOutOfRange(u32),

    #[error("point ({}, {}) is not a lattice point of the triangle of degree {degree}", point.0, point.1)]
    PointOutsideTriangle { point: Point, degree: u32 },

    #[error("triangle {index} is not unimodular (twice its area is {double_area})")]
    NotUnimodular { index: usize, double_area: i64 },

    #[error("triangulation of degree {degree} has {found} triangles, expected {expected}")]
    WrongTriangleCount { degree: u32, found: usize, expected: usize },

    #[error("triangles do not cover the triangle of degree {degree} exactly: {detail}")]
    NotATriangulation { degree: u32, detail: String },

    #[error("edge ({}, {})-({}, {}) is not an interior edge", edge.0.0, edge.0.1, edge.1.0, edge.1.1)]
    NotAnInteriorEdge { edge: (Point, Point) },

    #[error("edge ({}, {})-({}, {}) is not flippable: its quadrangle is not strictly convex", edge.0.0, edge.0.1, edge.1.0, edge.1.1)]
    NotFlippable { edge: (Point, Point) },

    #[error("sign string has {found} bits, expected {expected} for degree {degree}")]
    SignLength { degree: u32, found: usize, expected: usize },

    #[error("invalid character {0:?} in sign string")]
    SignCharacter(char),

    #[error("class index {index} exceeds the class count {count} for degree {degree}")]
    ClassIndexOutOfRange { degree: u32, index: u128, count: u128 },

    #[error("scheme parse error at byte {position}: {message}")]
    SchemeParse { position: usize, message: String },

    #[error("real schemes are only enumerated for degrees 1..=7, got {0}")]
    SchemeEnumerationUnsupported(u32),

    #[error("unknown catalog triangulation {0:?}")]
    UnknownCatalogKey(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("family {family} is not defined for degree {degree}: {reason}")]
    FamilyDegree { family: String, degree: u32, reason: String },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("the triangulation is not regular: no lifting exists")]
    NoLifting,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
