//! High-order solver for hyperbolic systems with stiff source terms.
//!
//! Space is discretized with third-order finite-difference WENO; time with
//! IMEX Runge-Kutta schemes given by a double Butcher tableau. Domain
//! boundaries that do not coincide with grid nodes are handled by an
//! inverse Lax-Wendroff ghost-point treatment that stays third-order
//! accurate through the intermediate stages. Supported geometries are 1D
//! intervals and 2D rectangles with axis-aligned rectangular obstacles.

pub mod boundary1d;
pub mod boundary2d;
pub mod discretization;
pub mod driver;
pub mod error;
pub mod extrapolation;
pub mod grid;
pub mod grid2d;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod stepper;
pub mod tableau;

pub use error::{Result, SolverError};
