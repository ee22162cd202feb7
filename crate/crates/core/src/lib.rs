//! Exact toric divisor toolkit.
//!
//! Given a complete toric variety as a rational fan and a torus-invariant
//! Weil divisor `D = Σ d_ρ D_ρ`, this crate computes cohomology dimensions
//! `h^i(D)`, Euler characteristics, asymptotic cohomological functions
//! `ĥ^i(D)`, top self-intersection numbers and the chamber structure of the
//! effective cone. All arithmetic is exact over `ℚ`.
//!
//! The weight space `M_ℝ` is cut into half-open regions
//! `P_{D,I} = {u : ⟨u, v_ρ⟩ ≥ -d_ρ exactly for ρ ∈ I}`. Every lattice point of
//! a bounded region contributes the local cohomology ranks of the subfan
//! `Δ_I`, which are computed as reduced homology of `|Δ_I| ∩ S`.

pub mod asymptotics;
pub mod cohomology;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod gkz;
pub mod homology;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod rational;
pub mod rayset;

pub use error::{Diagnostic, Error, Result};
pub use fan::{Cone, Fan, RawFan};
pub use divisor::{CartierData, TWeilDivisor};
pub use rational::Q;
pub use rayset::RaySet;
