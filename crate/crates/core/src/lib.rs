//! Characteristic forms of the Hodge bundle over Siegel upper half space, and
//! the linear algebra of symmetric maps whose evaluation maps are never injective.
//!
//! Modules, bottom up:
//! - [`linalg`]: complex matrices, Siegel points, subspaces, numerical rank.
//! - [`extform`]: the exterior algebra at a point and matrices of forms.
//! - [`hodge`]: metric and curvature of the Hodge bundle and its dual.
//! - [`segre`]: Chern and Segre forms by three routes, with positivity checks.
//! - [`symmap`]: exact and randomized checks on spaces of symmetric maps.
//! - [`slice`]: affine slices of Siegel space and the real symplectic picture.
//! - [`runner`]: suite execution and JSON reports for the `hodge-verify` CLI.

pub mod error;
pub mod extform;
pub mod hodge;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod runner;
pub mod sampling;
pub mod segre;
pub mod slice;
pub mod symmap;

pub use error::{Error, Result};
pub use extform::{ExtForm, FormMatrix, GeneratorIndex};
pub use hodge::CurvaturePackage;
pub use linalg::{LinSubspace, SiegelPoint, SymMap};
pub use report::VerificationReport;
