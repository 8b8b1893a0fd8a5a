//! Exponential sums attached to a floor set: the smooth sum F, the floor-set
//! sum G, their uniform gap, van der Corput checks and the auxiliary sums U, V
//! and Pi.

mod sums;
mod vdc;

#[cfg(test)]
mod tests;

pub use sums::{pi_scan, pi_sum, u_sum, v_sum, PiScan, SumBound};
pub use vdc::{vdc_check, FnPhase, Phase, PowerPhase, QuadraticPhase, VdcConfig, VdcReport};

use num_complex::Complex64;
use serde::Serialize;

use crate::numeric::{fft, phase, regress, sum};
use crate::regvar::RegVarFunction;
use crate::{Error, Result};

/// Uniform grid t_j = -1/2 + j/M on the circle, optionally restricted to the
/// minor arc |t| >= cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub resolution: usize,
    pub minor_cutoff: Option<f64>,
}

impl TGrid {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidArgument("grid resolution must be positive".into()));
        }
        Ok(TGrid { resolution, minor_cutoff: None })
    }

    pub fn minor(mut self, cutoff: f64) -> Self {
        self.minor_cutoff = Some(cutoff);
        self
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -0.5 + j as f64 / self.resolution as f64
    }

    pub fn keeps(&self, t: f64) -> bool {
        self.minor_cutoff.is_none_or(|nc| t.abs() >= nc && t.abs() <= 0.5)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.resolution).map(|j| self.node(j)).filter(|&t| self.keeps(t)).collect()
    }
}

/// Exponents attached to the bound for ||F - G||.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpSumBoundSpec {
    pub c: f64,
    pub chi: f64,
    pub kappa: f64,
}

impl ExpSumBoundSpec {
    pub fn new(c: f64, chi: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&c) {
            return Err(Error::Domain(format!("exponent {c} outside [1, 2)")));
        }
        let gamma = 1.0 / c;
        if !(chi > 0.0 && 4.0 * (1.0 - gamma) + 5.0 * chi < 1.0) {
            return Err(Error::InvalidArgument(format!("chi = {chi} is not admissible for c = {c}")));
        }
        let kappa = (3.0 - 4.0 * c) / (4.0 * c);
        debug_assert!(-1.0 < kappa && kappa < 0.0);
        Ok(ExpSumBoundSpec { c, chi, kappa })
    }

    /// The admissible chi used by default: 0.01 inside the boundary.
    pub fn default_chi(c: f64) -> f64 {
        (1.0 - 4.0 * (1.0 - 1.0 / c)) / 5.0 - 0.01
    }

    /// Minor-arc cutoff N_c(N) = (2c)^{-1} (2N)^kappa.
    pub fn minor_cutoff(&self, n: f64) -> f64 {
        (2.0 * n).powf(self.kappa) / (2.0 * self.c)
    }
}

/// Coefficients of F: phi'(n) for N0 <= n <= lambda, indexed by n.
pub fn f_coefficients(h: &RegVarFunction, lambda: u64) -> Result<Vec<f64>> {
    let n0 = h.n0();
    if lambda < n0 {
        return Err(Error::Domain(format!("lambda = {lambda} below N0 = {n0}")));
    }
    let mut a = vec![0.0; lambda as usize + 1];
    for n in n0..=lambda {
        a[n as usize] = h.phi_deriv(n as f64, 1)?;
    }
    Ok(a)
}

/// Indicator of the floor set on [1, lambda], indexed by n.
pub fn g_coefficients(h: &RegVarFunction, lambda: u64) -> Result<Vec<f64>> {
    let set = h.floor_set(lambda)?;
    let mut b = vec![0.0; lambda as usize + 1];
    for &n in set.elements() {
        if n >= 1 && n <= lambda {
            b[n as usize] = 1.0;
        }
    }
    Ok(b)
}

fn direct_sum(coeffs: &[f64], t: f64) -> Complex64 {
    let terms: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0.0)
        .map(|(n, &a)| phase::e_mul(n as i64, t) * a)
        .collect();
    sum::pairwise_c(&terms)
}

/// F_lambda(t) = sum_{N0 <= n <= lambda} phi'(n) e(n t).
pub fn f_sum(h: &RegVarFunction, lambda: u64, t: f64) -> Result<Complex64> {
    Ok(direct_sum(&f_coefficients(h, lambda)?, t))
}

/// G_lambda(t) = sum over floor-set elements n <= lambda of e(n t).
pub fn g_sum(h: &RegVarFunction, lambda: u64, t: f64) -> Result<Complex64> {
    Ok(direct_sum(&g_coefficients(h, lambda)?, t))
}

/// Values of a real-coefficient sum on the full grid (M + 1 nodes).
pub fn grid_values(coeffs: &[f64], grid: &TGrid) -> Result<Vec<Complex64>> {
    if coeffs.len() > grid.resolution {
        return Err(Error::Resolution(format!(
            "grid resolution {} below sum length {}",
            grid.resolution,
            coeffs.len()
        )));
    }
    let c: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    Ok(fft::trig_grid(&c, grid.resolution))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FgGap {
    pub lambda: u64,
    pub sup: f64,
    pub argmax: f64,
    /// phi(lambda) lambda^{-chi}
    pub bound: f64,
    /// sup / bound
    pub fitted: f64,
    /// Upper allowance for the variation between grid nodes.
    pub lipschitz_slack: f64,
    pub resolution: usize,
}

/// Default grid: the least power of two at least 8 lambda.
pub fn default_grid(lambda: u64) -> TGrid {
    TGrid { resolution: (8 * lambda as usize + 8).next_power_of_two(), minor_cutoff: None }
}

/// Grid supremum of |F_lambda - G_lambda|.
pub fn fg_gap(h: &RegVarFunction, lambda: u64, grid: &TGrid, spec: &ExpSumBoundSpec) -> Result<FgGap> {
    if grid.resolution < 8 * lambda as usize {
        return Err(Error::Resolution(format!("resolution {} below 8 lambda", grid.resolution)));
    }
    let a = f_coefficients(h, lambda)?;
    let b = g_coefficients(h, lambda)?;
    let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let vals = grid_values(&d, grid)?;
    let (mut sup, mut argmax) = (0.0, 0.0);
    for (j, v) in vals.iter().enumerate() {
        let t = grid.node(j);
        if grid.keeps(t) && v.norm() > sup {
            sup = v.norm();
            argmax = t;
        }
    }
    let moment: f64 = d.iter().enumerate().map(|(n, x)| n as f64 * x.abs()).sum();
    let lipschitz_slack = std::f64::consts::PI * moment / grid.resolution as f64;
    let bound = h.invert(lambda as f64)? * (lambda as f64).powf(-spec.chi);
    Ok(FgGap {
        lambda,
        sup,
        argmax,
        bound,
        fitted: sup / bound,
        lipschitz_slack,
        resolution: grid.resolution,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FgDecay {
    pub rows: Vec<FgGap>,
    pub slope: f64,
    pub target_slope: f64,
    /// max/min of the fitted constant across the last `window` rows.
    pub constant_spread: f64,
}

/// fg_gap over lambda = 2^k for k in `exps`, with the log-log slope of the sup.
pub fn fg_decay(h: &RegVarFunction, exps: &[u32], spec: &ExpSumBoundSpec, window: usize) -> Result<FgDecay> {
    let mut rows = Vec::with_capacity(exps.len());
    for &k in exps {
        let lambda = 1u64 << k;
        rows.push(fg_gap(h, lambda, &default_grid(lambda), spec)?);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.sup).collect();
    let slope = regress::loglog_slope(&xs, &ys);
    let tail = &rows[rows.len().saturating_sub(window)..];
    let hi = tail.iter().map(|r| r.fitted).fold(0.0, f64::max);
    let lo = tail.iter().map(|r| r.fitted).fold(f64::INFINITY, f64::min);
    Ok(FgDecay { rows, slope, target_slope: 1.0 / spec.c - spec.chi, constant_spread: hi / lo })
}

/// (1/M) sum_j |S(t_j)|^2 over j = 0..M-1.
pub fn grid_l2(values: &[Complex64], resolution: usize) -> f64 {
    let sq: Vec<f64> = values[..resolution].iter().map(|v| v.norm_sqr()).collect();
    sum::pairwise(&sq) / resolution as f64
}
