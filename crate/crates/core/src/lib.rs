//! Lattice points on arithmetic c-spheres
//! `S_c(lambda) = { x in Z^3 : floor(|x1|^c) + floor(|x2|^c) + floor(|x3|^c) = lambda }`
//! and their generalizations with regularly varying functions.
//!
//! Modules:
//! - [`regvar`]: exact floor powers, the function catalog, inverses and floor sets.
//! - [`counting`]: representation counts by enumeration and transforms, main terms.
//! - [`expsums`]: exponential sums and their bound checks.
//! - [`surface`]: quadrature on the unit c-sphere, Fourier transform, caps.
//! - [`equidist`]: projected clouds, Weyl sums, discrepancy.
//! - [`averages`]: circle-method kernels, discrete and continuous averages.
//! - [`oracles`]: naive reference computations used by tests.


pub mod averages;
pub mod counting;
pub mod expsums;
pub mod equidist;
pub mod error;
pub mod numeric;
pub mod oracles;
pub mod regvar;
pub mod surface;

pub use error::{Error, Result};
