//! Geometry of the unit c-sphere: the cone measure mu_c, its Fourier
//! transform and cap measures.
//!
//! The positive octant is parametrized by (rho, s) in [0,1]^2 through
//! w = (rho s, rho (1-s), 1-rho) and x_i = w_i^{1/c}; in these coordinates
//! d mu_c = c^{-2} rho^{2/c-1} (1-rho)^{1/c-1} (s(1-s))^{1/c-1} d rho ds.
//! The other octants follow by sign flips.

mod cap;
mod quad;

#[cfg(test)]
mod tests;

pub use cap::{cap_measure, smoothed_cap, CapProfile, CapSolver, CapSpec, IncBeta};
pub use quad::{Axis, QuadSpec, SurfaceEstimate, SurfaceQuadrature};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::numeric::gl::{Grading, Rule1d};
use crate::numeric::special::gamma;
use crate::{Error, Result};

/// The c-norm (sum |x_i|^c)^{1/c}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CNorm {
    pub c: f64,
}

impl CNorm {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::Domain(format!("norm exponent {c} must be positive")));
        }
        Ok(CNorm { c })
    }

    pub fn norm(&self, x: [f64; 3]) -> f64 {
        let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * x.iter().map(|v| (v.abs() / m).powf(self.c)).sum::<f64>().powf(1.0 / self.c)
    }

    /// x / |x|_c.
    pub fn project(&self, x: [f64; 3]) -> [f64; 3] {
        let n = self.norm(x);
        [x[0] / n, x[1] / n, x[2] / n]
    }
}

/// mu_c(S_c) = 8 Gamma(1/c)^3 / (c^2 Gamma(3/c)).
pub fn surface_mass(c: f64) -> f64 {
    8.0 * gamma(1.0 / c).powi(3) / (c * c * gamma(3.0 / c))
}

/// Lebesgue volume of the unit c-ball, (2 Gamma(1 + 1/c))^3 / Gamma(1 + 3/c).
pub fn ball_volume(c: f64) -> f64 {
    (2.0 * gamma(1.0 + 1.0 / c)).powi(3) / gamma(1.0 + 3.0 / c)
}

/// The integral of f over S_c with Richardson-style error estimate from two
/// doublings of `spec`.
pub fn surface_integral<F: Fn([f64; 3]) -> f64 + Sync>(c: f64, spec: QuadSpec, f: F) -> Result<SurfaceEstimate> {
    let levels = [spec, spec.doubled(), spec.doubled().doubled()];
    let vals: Vec<f64> = levels
        .iter()
        .map(|s| SurfaceQuadrature::new(c, *s).map(|q| q.integrate(&f)))
        .collect::<Result<_>>()?;
    Ok(SurfaceEstimate::from_levels(vals[0], vals[1], vals[2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relerr: f64,
}

/// Compares a Cartesian tensor integral of f over [-box, box]^3 with the polar
/// form int_0^{r_max} r^2 int_{S_c} f(r y) d mu_c(y) dr.
pub fn polar_check<F: Fn([f64; 3]) -> f64 + Sync>(
    f: F,
    half_box: f64,
    r_max: f64,
    quad: &SurfaceQuadrature,
) -> Result<PolarCheck> {
    let line = Rule1d::graded(-half_box, half_box, Grading { layers: 0, ..Grading::new(24, 16) });
    let lhs: f64 = line
        .nodes
        .par_iter()
        .zip(&line.weights)
        .map(|(&x, &wx)| {
            let mut s = 0.0;
            for (&y, &wy) in line.nodes.iter().zip(&line.weights) {
                for (&z, &wz) in line.nodes.iter().zip(&line.weights) {
                    s += wy * wz * f([x, y, z]);
                }
            }
            wx * s
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    let radial = Rule1d::graded(0.0, r_max, Grading { layers: 0, ..Grading::new(16, 16) });
    let parts: Vec<f64> = radial
        .nodes
        .par_iter()
        .zip(&radial.weights)
        .map(|(&r, &w)| w * r * r * quad.integrate(|y| f([r * y[0], r * y[1], r * y[2]])))
        .collect();
    let rhs = crate::numeric::sum::pairwise(&parts);
    Ok(PolarCheck { lhs, rhs, relerr: (lhs - rhs).abs() / lhs.abs() })
}

/// F mu_c(xi) = int e(-w . xi) d mu_c(w), real by symmetry.
pub fn fourier_mu(xi: [f64; 3], quad: &SurfaceQuadrature) -> Result<f64> {
    quad.check_frequency(xi)?;
    Ok(quad.fourier(xi))
}

/// F mu_c(xi) with a rule sized for xi.
pub fn fourier_mu_auto(c: f64, xi: [f64; 3]) -> Result<f64> {
    let q = SurfaceQuadrature::new(c, QuadSpec::for_frequency(xi))?;
    fourier_mu(xi, &q)
}

/// Central-difference gradient of F mu_c with step 1e-3 (1 + |xi|)^{-1}.
pub fn fourier_grad(c: f64, xi: [f64; 3]) -> Result<[f64; 3]> {
    let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    let h = 1e-3 / (1.0 + norm);
    let big = xi.map(|v| v.abs() + h);
    let q = SurfaceQuadrature::new(c, QuadSpec::for_frequency(big))?;
    let mut g = [0.0; 3];
    for i in 0..3 {
        let mut a = xi;
        let mut b = xi;
        a[i] += h;
        b[i] -= h;
        g[i] = (fourier_mu(a, &q)? - fourier_mu(b, &q)?) / (2.0 * h);
    }
    Ok(g)
}

/// `n` seeded uniform directions on the Euclidean unit sphere.
pub fn random_directions(n: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-12 {
            out.push(v.map(|x| x / r));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellRow {
    pub radius: f64,
    /// max over the shell of |xi| |F mu_c(xi)|
    pub max_scaled_abs: f64,
    pub argmax_direction: [f64; 3],
    /// max over the shell of |xi| |grad F mu_c(xi)|, when requested
    pub max_scaled_grad: Option<f64>,
}

/// Per-shell maxima of |xi| |F mu_c(xi)| over seeded directions.
pub fn decay_profile(c: f64, radii: &[f64], samples: usize, seed: u64, with_gradient: bool) -> Result<Vec<ShellRow>> {
    let dirs = random_directions(samples, seed);
    radii
        .iter()
        .map(|&r| {
            let vals: Vec<(f64, Option<f64>)> = dirs
                .par_iter()
                .map(|d| {
                    let xi = d.map(|v| v * r);
                    let v = fourier_mu_auto(c, xi)?.abs() * r;
                    let g = if with_gradient {
                        let g = fourier_grad(c, xi)?;
                        Some(r * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt())
                    } else {
                        None
                    };
                    Ok((v, g))
                })
                .collect::<Result<_>>()?;
            let (i, best) = vals
                .iter()
                .enumerate()
                .fold((0, 0.0), |acc, (i, v)| if v.0 > acc.1 { (i, v.0) } else { acc });
            let grad = if with_gradient {
                Some(vals.iter().filter_map(|v| v.1).fold(0.0, f64::max))
            } else {
                None
            };
            Ok(ShellRow { radius: r, max_scaled_abs: best, argmax_direction: dirs[i], max_scaled_grad: grad })
        })
        .collect()
}
