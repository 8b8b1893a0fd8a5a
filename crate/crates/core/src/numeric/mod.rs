//! Numerical building blocks shared by the modules: summation, phases,
//! Gauss-Legendre rules, transforms, regression, special functions and
//! multiprecision helpers.

pub mod fft;
pub mod gl;
pub mod hp;
pub mod ntt;
pub mod phase;
pub mod regress;
pub mod smooth;
pub mod special;
pub mod sum;
