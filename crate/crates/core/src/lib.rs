//! Mesh-free solvers for the Dirichlet problem of the 2-D Laplace equation.
//!
//! The crate implements the dipole simulation method (DSM), a variant of the
//! method of fundamental solutions whose basis functions are normal
//! derivatives of the logarithmic fundamental solution, together with its
//! QR-reconditioned form (DSM-QR). On a disk the DSM-QR collocation matrix
//! has the closed-form condition number `2 / (1 + κ^(N-2))`, so it stays
//! bounded as the number of sources grows, whereas the classical DSM
//! matrix degrades exponentially.
//!
//! Modules, bottom-up:
//!
//! - [`complexgeom`]: conformal maps and point layouts.
//! - [`basis`]: kernels, the `B`/`D`/`F` factors, numeric and analytic QR
//!   paths and the explicit DSM-QR functions `ψ_k`.
//! - [`solver`]: collocation assembly, square and least-squares solves,
//!   condition numbers and solution evaluation.
//! - [`spectral`]: Fourier analysis of boundary data, transfer functions
//!   `φ_n` and the a-priori error bound.
//! - [`oracle`]: independent brute-force references used for verification.
//! - [`harness`]: experiment configuration, sweeps, CSV output and slope fits.

pub mod basis;
pub mod complexgeom;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod solver;
pub mod spectral;

pub use basis::DiskParams;
pub use complexgeom::{ComplexValue, ConformalMap, PointLayout};
pub use error::{Error, Result};
pub use solver::{Cond2, Method, SolveResult};
pub use spectral::FourierSeries;
