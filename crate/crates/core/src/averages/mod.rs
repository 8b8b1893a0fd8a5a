//! Circle-method kernels, discrete and continuous spherical averages, the
//! torus ergodic multiplier and r-variation.
//!
//! With kappa = (3 - 4c)/(4c) and Q(x) = sum floor(|x_i|^c):
//!
//! - sigma^M(x) = lambda^kappa eta(x / lambda^{1/c}) psi^(lambda^kappa (Q(x) - lambda)),
//! - sigma^m(x) = eta(x / lambda^{1/c}) int_{-1/2}^{1/2} e((Q(x) - lambda) t) psi~(t / lambda^kappa) dt,
//!
//! and their sum is the indicator of S_c(lambda).

mod bumps;
mod kernels;
mod ops;

#[cfg(test)]
mod tests;

pub use bumps::{direct as psi_transform_direct, BumpConfig, PsiTransform, TABLE_STEP, TAIL_TARGET};
pub use kernels::{
    domination, k_kernel, k_mass, kappa, kernel_field, kernel_norms, level_weights, omega, omega_comparison, ArcSplit,
    Domination, KernelField, KernelId, KernelNorms, KernelValues, OmegaComparison, FIELD_MAGIC, MAX_FIELD_POINTS,
};
pub use ops::{
    continuous_average, discrete_average, golden_vector, lacunary, maximal_profile, minor_arc_profile,
    torus_ergodic_run, variation_seminorm, variation_seminorm_complex, LatticeFn, MaximalProfile, MinorProfile,
    MinorRow, TorusRun,
};
