//! Self-stress spaces of planar tensegrity frameworks and of their
//! generalization to graphs whose vertices carry bivariate Morse functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`forms`]: constant-coefficient 1-forms and 2-forms on R³.
//! - [`field`] and [`critical`]: polynomial scalar fields, their critical
//!   points and Morse indices.
//! - [`classical`]: point frameworks, equilibrium matrices and the 2-form
//!   reformulation of the equilibrium condition.
//! - [`morse`]: function tensegrities, where each vertex is a scalar field and
//!   the equilibrium condition is a signed sum over its critical points.
//! - [`forcelines`]: tracing of the curves where two gradients are parallel.
//! - [`io`] and [`render`]: JSON documents, CSV output and SVG figures.

pub mod classical;
pub mod critical;
mod error;
pub mod field;
pub mod forcelines;
pub mod forms;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod render;

pub use classical::{ClassicalFramework, StressBasis, StressVector};
pub use critical::{find_critical_points, morse_index, CriticalPoint, SolverParams};
pub use error::{Error, ErrorKind, Result};
pub use field::{BBox, Point2, ScalarField};
pub use forcelines::{ForceLine, ForceLineComponent, Polyline, Tag};
pub use forms::{OneForm, TwoForm};
pub use graph::Graph;
pub use morse::{AssemblyMode, MorseEquilibriumSystem, Scene};
