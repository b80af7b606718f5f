//! Numerical toolkit for the Gelfand-Zeitlin integrable system on `gl(n, C)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: complex matrices, characteristic polynomials, clustered
//!   spectra, Jordan-Chevalley splitting, spectral projectors, centralizers.
//! * [`gz`]: cutoffs, the functions `f_{i,j}`, the Kostant-Wallach map,
//!   Gelfand-Zeitlin vector fields and their exact flows, strong regularity.
//! * [`decomp`]: partitions, regular decomposition data, towers, `Sigma_D`
//!   and `Z_D` dimension bookkeeping, orbit counts.
//! * [`cover`]: points of the cover in `(x, z)` coordinates, lifted
//!   functions and flows, the deck group and the `Z_D` action.
//! * [`hessenberg`]: the Hessenberg section and the inverse of the
//!   Kostant-Wallach map, and trivialization of generic fibers.
//! * [`sample`], [`io`], [`verify`]: seeded sampling, JSON formats and the
//!   verification report used by the command-line tool.

pub mod cover;
pub mod decomp;
pub mod error;
pub mod gz;
pub mod hessenberg;
pub mod io;
pub mod linalg;
pub mod sample;
mod tolerance;
pub mod verify;

pub use error::{GzError, Result};
pub use linalg::CMatrix;
pub use tolerance::Tolerances;
pub use num_complex::Complex64;
