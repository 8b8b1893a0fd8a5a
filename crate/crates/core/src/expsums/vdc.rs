use num_complex::Complex64;
use serde::Serialize;

use crate::numeric::phase::{e, frac_mul, reduce};
use crate::numeric::sum::pairwise_c;
use crate::{Error, Result};

/// A real phase with a second derivative.
pub trait Phase {
    /// F(k), reduced modulo one or not.
    fn value(&self, k: i64) -> f64;
    fn second(&self, x: f64) -> f64;
}

/// F(k) = alpha k^2 + beta k.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPhase {
    pub alpha: f64,
    pub beta: f64,
}

impl Phase for QuadraticPhase {
    fn value(&self, k: i64) -> f64 {
        reduce(frac_mul(k, frac_mul(k, self.alpha)) + frac_mul(k, self.beta))
    }

    fn second(&self, _x: f64) -> f64 {
        2.0 * self.alpha
    }
}

/// F(k) = m k^c.
#[derive(Debug, Clone, Copy)]
pub struct PowerPhase {
    pub m: f64,
    pub c: f64,
}

impl Phase for PowerPhase {
    fn value(&self, k: i64) -> f64 {
        reduce(self.m * (k as f64).powf(self.c))
    }

    fn second(&self, x: f64) -> f64 {
        self.m * self.c * (self.c - 1.0) * x.powf(self.c - 2.0)
    }
}

/// A phase from two closures.
pub struct FnPhase<F, G> {
    pub f: F,
    pub f2: G,
}

impl<F: Fn(i64) -> f64, G: Fn(f64) -> f64> Phase for FnPhase<F, G> {
    fn value(&self, k: i64) -> f64 {
        (self.f)(k)
    }

    fn second(&self, x: f64) -> f64 {
        (self.f2)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VdcConfig {
    pub c0: f64,
    /// Allowed factor outside [eta, r eta] on the sample mesh.
    pub slack: f64,
    pub mesh: usize,
}

impl Default for VdcConfig {
    fn default() -> Self {
        VdcConfig { c0: 10.0, slack: 100.0, mesh: 1024 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VdcReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub observed_min: f64,
    pub observed_max: f64,
}

/// |sum_{k in [lo, hi]} e(F(k))| against c0 (r |I| eta^{1/2} + eta^{-1/2}).
pub fn vdc_check<P: Phase + ?Sized>(
    phase: &P,
    lo: i64,
    hi: i64,
    eta: f64,
    r: f64,
    cfg: &VdcConfig,
) -> Result<VdcReport> {
    if hi < lo {
        return Err(Error::InvalidArgument("empty interval".into()));
    }
    if !(eta > 0.0) || !(r >= 1.0) {
        return Err(Error::Sandwich(format!("eta = {eta}, r = {r}")));
    }
    let mesh = cfg.mesh.max(2);
    let (mut mn, mut mx) = (f64::INFINITY, 0.0f64);
    for i in 0..=mesh {
        let x = lo as f64 + (hi - lo) as f64 * i as f64 / mesh as f64;
        let v = phase.second(x).abs();
        mn = mn.min(v);
        mx = mx.max(v);
    }
    if mn * cfg.slack < eta || mx > cfg.slack * r * eta {
        return Err(Error::Sandwich(format!(
            "|F''| in [{mn:e}, {mx:e}] against eta = {eta:e}, r = {r}"
        )));
    }
    let terms: Vec<Complex64> = (lo..=hi).map(|k| e(phase.value(k))).collect();
    let lhs = pairwise_c(&terms).norm();
    let len = (hi - lo + 1) as f64;
    let rhs = cfg.c0 * (r * len * eta.sqrt() + 1.0 / eta.sqrt());
    Ok(VdcReport { lhs, rhs, pass: lhs <= rhs, observed_min: mn, observed_max: mx })
}
