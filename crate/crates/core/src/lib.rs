//! Touchard (exponential) polynomials: exact evaluation and large-order
//! asymptotics by the method of steepest descents.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact`]: Stirling tables, exact rational evaluation of `T_n(z)`, the
//!   scaled value `T_n(z)/n!`, and the large-`|z|` expansion for fixed `n`.
//! - [`saddle`]: real Lambert-W branches and the complex saddles of
//!   `t e^t = mu e^{-i theta}`.
//! - [`stokes`]: the phase function, steepest-path tracing, Stokes angles,
//!   interval boundaries and the set of contributing saddles.
//! - [`series`]: expansion coefficients (closed form and Bell-polynomial
//!   route), per-saddle series and the assembled asymptotic value.
//! - [`cli`]: the command-line front end and the reference tables.
//!
//! Values that span hundreds of decades are carried as [`LogComplex`].

pub mod cli;
pub mod error;
pub mod exact;
pub mod hp;
pub mod logcomplex;
pub mod saddle;
pub mod series;
pub mod stokes;

pub use error::{Error, Result};
pub use exact::{ExactComplexRational, ScaleRemoved, ScaledValue, StirlingTable};
pub use logcomplex::LogComplex;
pub use saddle::{ExpansionParams, SaddleGeometry, SaddlePoint};
pub use series::{AssemblyMode, JkExpansion, LocalExpansion};
pub use stokes::{ContributorySet, PathPolyline};
