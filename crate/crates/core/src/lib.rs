//! Exact computations around the `Sq^2` obstruction to algebraizing rank-2
//! topological vector bundles on hypersurface complements in products of
//! projective spaces.
//!
//! Layers, bottom up:
//!
//! * [`linalg`]: arbitrary-precision integer matrices, Smith and Hermite forms.
//! * [`abelian`]: finitely generated abelian groups by generators and relations.
//! * [`chow`]: the truncated polynomial Chow ring of `P^{n_1} × ... × P^{n_k}`.
//! * [`complement`]: Chow groups of `Y \ Z` as quotients, with certificates.
//! * [`steenrod`]: `Sq^2` on mod-2 Chow classes.
//! * [`obstruction`]: `θ = Sq^2 c2 + c1 ∪ c2` and the three-valued verdict.

pub mod abelian;
pub mod chow;
pub mod complement;
pub mod error;
pub mod json;
pub mod linalg;
pub mod obstruction;
pub mod presets;
pub mod steenrod;

pub use abelian::{AbelianPresentation, GroupElement};
pub use chow::{AmbientSpace, ChowClass};
pub use complement::{ComplementModel, ExactnessStatus, PushforwardAssumption};
pub use error::{Error, Result};
pub use linalg::{IntegerMatrix, SnfDecomposition};
pub use obstruction::{ChernPair, ObstructionReport, Verdict};
pub use steenrod::Mod2ChowClass;
