//! Exact symbolic engine for the boundary residue form of the middle-degree
//! conformal operator on a four-manifold whose metric is warped (non-product)
//! near the boundary.
//!
//! Everything is computed over Gaussian rationals: exterior-algebra operators
//! as exact matrices, radial-rational symbols and their cotangent derivatives,
//! the half-line (Wiener-Hopf) projections in the normal covariable, and
//! closed-form sphere integrals. Final coefficients come out as exact
//! rationals times `pi^2` times the metric jet `h1`.

pub mod engine;
pub mod error;
pub mod exterior;
pub mod halfline;
pub mod poly;
pub mod radial;
pub mod scalar;
pub mod sphere;
pub mod traces;

pub use engine::{CaseEval, CaseIndex, CaseLabel, CoeffMatrix, OmegaReport};
pub use error::{CoreError, Result};
pub use exterior::{CliffordKind, Covector, ExtOp, FormBasis};
pub use halfline::HalfDecomp;
pub use poly::{Mono, PolyQ, Var};
pub use radial::{RadialRational, SphereRational};
pub use scalar::{GaussRat, Rat};
pub use sphere::{ExactScalar, ExactSum, GaussSum};
