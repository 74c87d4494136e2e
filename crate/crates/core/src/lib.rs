//! Geometry of 2-ruled hypersurfaces in four-dimensional Walker manifolds.
//!
//! The Walker metric on `(u1, u2, u3, u4)` is
//! `g = 2 du1 du3 + 2 du2 du4 + 2 f(u3, u4) du3 du4`. Hypersurfaces are given
//! either as arbitrary parametric immersions ([`hypersurface`]) or as ruled
//! maps `α(u1) + u2 β(u1) + u3 γ(u1)` ([`ruled`]), for which closed-form
//! invariants are available. [`oracle`] recomputes everything from the metric
//! and reports disagreements.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod hypersurface;
pub mod jets;
pub mod linalg;
pub mod oracle;
pub mod ruled;
pub mod walker;

pub use error::{GeometryError, Result};
pub use hypersurface::{FirstForm, Hypersurface, Immersion, InvariantBundle, ParametricImmersion, Params, SecondForm};
pub use jets::{CurveJet, ScalarField2};
pub use ruled::{RuledHypersurface, RuledType};
pub use walker::{CausalCharacter, ChartPoint, TangentVector, WalkerMetric};
