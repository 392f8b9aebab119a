//! Reconstruction and stability analysis for discrete tomography on
//! rectangular grids, the square torus, and the continuous rectangle.
//!
//! A grid `g` on `A = {0..m} x {0..n}` is observed only through its line
//! sums along a set of lattice directions. The real solutions form an
//! affine space whose direction is spanned by switching elements; this
//! crate computes the minimum-norm solution `f0`, bounds how far binary
//! solutions can be from the rounded `f0` and from each other, and builds
//! integer solutions close to any real solution.

pub mod continuous;
pub mod direction;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod grid;
pub mod instance;
pub mod lattice;
pub mod lines;
pub mod projection;
pub mod rational;
pub mod solver;
pub mod stability;
pub mod switching;
pub mod torus;

pub use direction::{Direction, DirectionSet};
pub use error::{Error, Result};
pub use grid::Grid;
pub use lines::{compute_line_sums, LineSumTable};
pub use rational::Q;
