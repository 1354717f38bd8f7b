//! Spectral condition numbers of Vandermonde matrices with nodes on the unit
//! circle, with emphasis on node sets containing nearly-colliding pairs.
//!
//! Layers, bottom-up:
//!
//! * [`extprec`]: double-double scalar arithmetic and `sin(πx)`.
//! * [`kernel`]: the Dirichlet kernel `D_n`, its derivatives and envelopes.
//! * [`nodes`]: node sets, wrap-around separation, classification and the
//!   randomized generators.
//! * [`spectral`]: Gram/Vandermonde matrices, Jacobi eigen/SVD solvers,
//!   Schur complements and matrix-inequality checks.
//! * [`bounds`]: closed-form lower/upper bounds with applicability flags.
//! * [`experiments`]: reproducible randomized experiments, CSV and SVG output.

pub mod bounds;
pub mod experiments;
pub mod extprec;
pub mod kernel;
pub mod nodes;
pub mod selftest;
pub mod spectral;

pub use extprec::ExtReal;
pub use kernel::Bandwidth;
pub use nodes::NodeSet;
