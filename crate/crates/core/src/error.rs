use std::fmt;

use thiserror::Error;

/// A single problem found while validating a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DimensionMismatch { ray: usize, len: usize },
    ZeroRay { ray: usize },
    NotPrimitive { ray: usize },
    DuplicateRay { first: usize, second: usize },
    UnusedRay { ray: usize },
    BadIndex { cone: usize, index: usize },
    EmptyCone { cone: usize },
    NotStronglyConvex { cone: usize },
    NonExtremalRay { cone: usize, ray: usize },
    ImproperIntersection { first: usize, second: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DimensionMismatch { ray, len } => {
                write!(f, "ray {ray} has {len} entries, expected the fan dimension")
            }
            Diagnostic::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Diagnostic::NotPrimitive { ray } => write!(f, "ray {ray} not primitive"),
            Diagnostic::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} are equal")
            }
            Diagnostic::UnusedRay { ray } => write!(f, "ray {ray} lies in no cone"),
            Diagnostic::BadIndex { cone, index } => {
                write!(f, "cone {cone} references missing ray {index}")
            }
            Diagnostic::EmptyCone { cone } => write!(f, "cone {cone} has no rays"),
            Diagnostic::NotStronglyConvex { cone } => {
                write!(f, "cone {cone} is not strongly convex")
            }
            Diagnostic::NonExtremalRay { cone, ray } => {
                write!(f, "ray {ray} is not an extremal ray of cone {cone}")
            }
            Diagnostic::ImproperIntersection { first, second } => {
                write!(f, "improper intersection of cones {first} and {second}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fan: {}", join(.0))]
    InvalidFan(Vec<Diagnostic>),
    #[error("fan is not complete; use graded_piece_dim for graded pieces")]
    NotComplete,
    #[error("fan is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("cone {0:?} is not simplicial")]
    NonSimplicialCone(crate::RaySet),
    #[error("divisor is not Q-Cartier")]
    NotQCartier,
    #[error("divisor has {got} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, got: usize },
    #[error("region is unbounded")]
    Unbounded,
    #[error("{rays} rays exceed the subset cap of {cap}")]
    CapExceeded { rays: usize, cap: usize },
    #[error("class is outside the effective cone (P_D is empty)")]
    NotEffective,
    #[error("divisor lies on a chamber wall")]
    OnWall,
    #[error("finite-difference step bound underflowed")]
    StepUnderflow,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ray {0:?} of the target fan is not a ray of the source fan")]
    RayMismatch(Vec<i64>),
    #[error("divisor is not a member of the GKZ cone: {0}")]
    NotMember(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

fn join(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
