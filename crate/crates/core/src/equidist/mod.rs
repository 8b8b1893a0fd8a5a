//! Projected clouds P_c(lambda) = lambda^{-1/c} S_c(lambda), Weyl sums and
//! the cap discrepancy.

mod discrepancy;

#[cfg(test)]
mod tests;

pub use discrepancy::{
    discrepancy_binned, discrepancy_decay, discrepancy_decay_dirs, discrepancy_exact, BinnedScan, CapTable, DecayConfig,
    DecayRow, DirectionBracket, DiscrepancyDecay, DiscrepancyResult, ExactScan, DEFAULT_BINS, MAX_EXACT_POINTS,
};

use serde::Serialize;

use crate::counting::{multiplicity, SphereLattice};
use crate::numeric::smooth::mollifier_cdf;
use crate::numeric::sum::Cascade;
use crate::regvar::floor_pow;
use crate::surface::{smoothed_cap, surface_mass, CapSolver, QuadSpec, SurfaceQuadrature};
use crate::{Error, Result};

/// Clouds larger than this are never materialized.
pub const MAX_MATERIALIZE: u64 = 20_000_000;

/// The projected cloud at one lambda; points are visited lazily.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedCloud<'a> {
    lat: &'a SphereLattice,
    lambda: u64,
    scale: f64,
    count: u64,
}

/// Builds the cloud, rejecting lambda = 0 and empty spheres.
pub fn project(lat: &SphereLattice, lambda: u64) -> Result<ProjectedCloud<'_>> {
    if lambda == 0 {
        return Err(Error::Domain("projection needs lambda >= 1".into()));
    }
    if lambda > lat.horizon() {
        return Err(Error::Horizon(format!("lambda = {lambda} beyond lattice horizon {}", lat.horizon())));
    }
    let count = lat.count(lambda);
    if count == 0 {
        return Err(Error::EmptySphere(lambda));
    }
    Ok(ProjectedCloud { lat, lambda, scale: (lambda as f64).powf(-lat.exponent().gamma()), count })
}

impl<'a> ProjectedCloud<'a> {
    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.lat.exponent().c()
    }

    /// lambda^{-1/c}
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// r_c(lambda)
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn lattice(&self) -> &'a SphereLattice {
        self.lat
    }

    /// Visits the nonnegative representatives (x1, x2, x3) of the sphere.
    pub fn for_each_nonneg<F: FnMut(u64, u64, u64)>(&self, f: F) {
        self.lat.for_each_nonneg(self.lambda, f);
    }

    /// All projected points.
    pub fn points(&self) -> Result<Vec<[f64; 3]>> {
        if self.count > MAX_MATERIALIZE {
            return Err(Error::InvalidArgument(format!("cloud of {} points is too large to store", self.count)));
        }
        let s = self.scale;
        let mut out = Vec::with_capacity(self.count as usize);
        self.lat.for_each_point(self.lambda, |x| out.push([x[0] as f64 * s, x[1] as f64 * s, x[2] as f64 * s]));
        Ok(out)
    }

    /// Rechecks every preimage with exact floors and returns
    /// max | |p|_c^c - 1 | over the cloud.
    pub fn verify(&self) -> Result<f64> {
        let c = self.lat.exponent();
        let cf = c.c();
        let l = self.lambda as f64;
        let mut worst = 0.0f64;
        let mut bad = None;
        self.for_each_nonneg(|a, b, d| {
            let s = floor_pow(a, c) + floor_pow(b, c) + floor_pow(d, c);
            if s != self.lambda {
                bad = Some([a, b, d]);
            }
            let real = (a as f64).powf(cf) + (b as f64).powf(cf) + (d as f64).powf(cf);
            worst = worst.max((real / l - 1.0).abs());
        });
        if let Some(x) = bad {
            return Err(Error::Domain(format!("point {x:?} is not on the sphere {}", self.lambda)));
        }
        if worst > 3.0 / l {
            return Err(Error::Tolerance(format!("radial deviation {worst} exceeds 3/lambda")));
        }
        Ok(worst)
    }
}

/// Test functions with known limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TestFn {
    Constant(f64),
    /// e(m . x); the cloud and nu_c are sign symmetric, so this is real.
    Trig([i64; 3]),
    /// x1^k1 x2^k2 x3^k3
    Monomial([u32; 3]),
    /// phi^{+-}_{a, delta}(x . xi); `upper` selects the a - delta shift.
    SmoothCap { xi: [f64; 3], a: f64, delta: f64, upper: bool },
}

impl TestFn {
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        match *self {
            TestFn::Constant(v) => v,
            TestFn::Trig(m) => {
                let t = m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2];
                (std::f64::consts::TAU * t).cos()
            }
            TestFn::Monomial(k) => x[0].powi(k[0] as i32) * x[1].powi(k[1] as i32) * x[2].powi(k[2] as i32),
            TestFn::SmoothCap { xi, a, delta, upper } => {
                let b = if upper { a - delta } else { a + delta };
                mollifier_cdf((x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2] - b) / delta)
            }
        }
    }

    /// int phi d nu_c.
    pub fn limit(&self, c: f64) -> Result<f64> {
        match *self {
            TestFn::Constant(v) => Ok(v),
            TestFn::Monomial(k) if k.iter().any(|e| e % 2 == 1) => Ok(0.0),
            TestFn::Trig(m) => {
                let xi = [m[0] as f64, m[1] as f64, m[2] as f64];
                let q = SurfaceQuadrature::new(c, QuadSpec::for_frequency(xi).doubled())?;
                Ok(q.fourier(xi) / surface_mass(c))
            }
            TestFn::Monomial(_) => {
                let q = SurfaceQuadrature::new(c, QuadSpec::default().doubled())?;
                Ok(q.integrate(|x| self.eval(x)) / surface_mass(c))
            }
            TestFn::SmoothCap { xi, a, delta, upper } => {
                let s = CapSolver::new(c, xi)?;
                Ok(smoothed_cap(|b| s.nu(b), a, delta, upper))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylResult {
    pub lambda: u64,
    pub value: f64,
    pub limit: f64,
    pub gap: f64,
}

/// (1/r) sum over the cloud of phi, against int phi d nu_c.
pub fn weyl_sum(cloud: &ProjectedCloud, phi: &TestFn) -> Result<WeylResult> {
    let limit = phi.limit(cloud.c())?;
    let value = cloud_average(cloud, phi);
    Ok(WeylResult { lambda: cloud.lambda(), value, limit, gap: (value - limit).abs() })
}

/// (1/r) sum over the cloud of phi.
pub fn cloud_average(cloud: &ProjectedCloud, phi: &TestFn) -> f64 {
    let r = cloud.count() as f64;
    match *phi {
        TestFn::Constant(v) => v,
        TestFn::Trig(m) => {
            // sum over sign patterns factors into prod_i (2 cos(2 pi m_i x_i)) on nonzero coordinates
            let s = cloud.scale();
            let xmax = cloud.lattice().floors().len();
            let tables: Vec<Vec<f64>> = (0..3)
                .map(|i| {
                    (0..xmax)
                        .map(|x| if x == 0 { 1.0 } else { 2.0 * (std::f64::consts::TAU * m[i] as f64 * x as f64 * s).cos() })
                        .collect()
                })
                .collect();
            let mut acc = Cascade::new();
            cloud.for_each_nonneg(|a, b, d| acc.push(tables[0][a as usize] * tables[1][b as usize] * tables[2][d as usize]));
            acc.total() / r
        }
        TestFn::Monomial(k) if k.iter().any(|e| e % 2 == 1) => 0.0,
        TestFn::Monomial(k) => {
            let s = cloud.scale();
            let mut acc = Cascade::new();
            cloud.for_each_nonneg(|a, b, d| {
                let v = (a as f64 * s).powi(k[0] as i32) * (b as f64 * s).powi(k[1] as i32) * (d as f64 * s).powi(k[2] as i32);
                acc.push(v * multiplicity(a, b, d) as f64);
            });
            acc.total() / r
        }
        TestFn::SmoothCap { .. } => {
            let s = cloud.scale();
            let mut acc = Cascade::new();
            cloud.lattice().for_each_point(cloud.lambda(), |x| {
                acc.push(phi.eval([x[0] as f64 * s, x[1] as f64 * s, x[2] as f64 * s]))
            });
            acc.total() / r
        }
    }
}
