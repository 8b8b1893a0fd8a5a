use rayon::prelude::*;
use serde::Serialize;

use crate::numeric::gl::GaussLegendre;
use crate::numeric::sum::pairwise;
use crate::{Error, Result};

/// A rule on [0, 1] that keeps both t and 1 - t exactly, so endpoint
/// weights like (1-t)^{-1/2} never see cancellation.
#[derive(Debug, Clone)]
pub struct Axis {
    pub t: Vec<f64>,
    pub tc: Vec<f64>,
    pub w: Vec<f64>,
}

impl Axis {
    /// Each half [0, 1/2] is integrated in y = t^{1/c}, which turns the
    /// endpoint weights t^{1/c-1} into smooth functions; the y-range is split
    /// into `panels` equal pieces with geometric layers in the first one.
    /// The right half is mirrored.
    pub fn new(c: f64, panels: usize, order: usize, layers: usize, ratio: f64) -> Self {
        let ymax = 0.5f64.powf(1.0 / c);
        let h = ymax / panels as f64;
        let mut breaks: Vec<f64> = vec![0.0];
        for k in (1..=layers).rev() {
            breaks.push(h * ratio.powi(k as i32));
        }
        for k in 1..=panels {
            breaks.push(if k == panels { ymax } else { h * k as f64 });
        }
        let gl = GaussLegendre::new(order);
        let mut u = Vec::new();
        let mut w = Vec::new();
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            let hh = 0.5 * (b - a);
            let m = 0.5 * (a + b);
            for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
                let y = m + hh * x;
                u.push(y.powf(c).min(0.5));
                w.push(wt * hh * c * y.powf(c - 1.0));
            }
        }
        let n = u.len();
        let mut axis = Axis { t: Vec::with_capacity(2 * n), tc: Vec::with_capacity(2 * n), w: Vec::with_capacity(2 * n) };
        for i in 0..n {
            axis.t.push(u[i]);
            axis.tc.push(1.0 - u[i]);
            axis.w.push(w[i]);
        }
        for i in (0..n).rev() {
            axis.t.push(1.0 - u[i]);
            axis.tc.push(u[i]);
            axis.w.push(w[i]);
        }
        axis
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Resolution of a surface rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadSpec {
    pub rho_panels: usize,
    pub s_panels: usize,
    pub order: usize,
    pub layers: usize,
    pub ratio: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { rho_panels: 8, s_panels: 8, order: 16, layers: 8, ratio: 0.15 }
    }
}

/// Minimum quadrature nodes per oscillation.
pub const NODES_PER_CYCLE: f64 = 10.0;

impl QuadSpec {
    pub fn doubled(&self) -> Self {
        QuadSpec { rho_panels: 2 * self.rho_panels, s_panels: 2 * self.s_panels, ..*self }
    }

    /// Enough panels for `NODES_PER_CYCLE` nodes per oscillation of e(-x . xi).
    pub fn for_frequency(xi: [f64; 3]) -> Self {
        let d = QuadSpec::default();
        let l1 = xi[0].abs() + xi[1].abs() + xi[2].abs();
        let l12 = xi[0].abs() + xi[1].abs();
        let need = |f: f64| ((NODES_PER_CYCLE * f / d.order as f64).ceil() as usize).max(d.rho_panels);
        QuadSpec { rho_panels: need(l1), s_panels: need(l12), ..d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceEstimate {
    pub value: f64,
    pub error: f64,
    /// |I1 - I0| / |I2 - I1|
    pub contraction: f64,
    pub converged: bool,
}

impl SurfaceEstimate {
    pub fn from_levels(i0: f64, i1: f64, i2: f64) -> Self {
        let e1 = (i1 - i0).abs();
        let e2 = (i2 - i1).abs();
        let floor = 1e-13 * i2.abs().max(1e-300);
        let contraction = if e2 == 0.0 { f64::INFINITY } else { e1 / e2 };
        SurfaceEstimate { value: i2, error: e2, contraction, converged: e2 <= floor || contraction >= 4.0 }
    }
}

/// Tensor rule on the positive octant with tabulated coordinates and weights.
#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    pub c: f64,
    pub spec: QuadSpec,
    /// rho^{1/c}
    pub rho_pow: Vec<f64>,
    /// (1-rho)^{1/c}
    pub rhoc_pow: Vec<f64>,
    pub rho_w: Vec<f64>,
    /// s^{1/c}
    pub s_pow: Vec<f64>,
    /// (1-s)^{1/c}
    pub sc_pow: Vec<f64>,
    pub s_w: Vec<f64>,
}

impl SurfaceQuadrature {
    pub fn new(c: f64, spec: QuadSpec) -> Result<Self> {
        if !(c > 0.0) || spec.order == 0 || spec.rho_panels == 0 || spec.s_panels == 0 {
            return Err(Error::InvalidArgument(format!("bad surface rule for c = {c}: {spec:?}")));
        }
        let g = 1.0 / c;
        let ra = Axis::new(c, spec.rho_panels, spec.order, spec.layers, spec.ratio);
        let sa = Axis::new(c, spec.s_panels, spec.order, spec.layers, spec.ratio);
        let rho_w = (0..ra.len())
            .map(|i| ra.w[i] * ra.t[i].powf(2.0 * g - 1.0) * ra.tc[i].powf(g - 1.0) / (c * c))
            .collect();
        let s_w = (0..sa.len()).map(|j| sa.w[j] * (sa.t[j] * sa.tc[j]).powf(g - 1.0)).collect();
        Ok(SurfaceQuadrature {
            c,
            spec,
            rho_pow: ra.t.iter().map(|v| v.powf(g)).collect(),
            rhoc_pow: ra.tc.iter().map(|v| v.powf(g)).collect(),
            rho_w,
            s_pow: sa.t.iter().map(|v| v.powf(g)).collect(),
            sc_pow: sa.tc.iter().map(|v| v.powf(g)).collect(),
            s_w,
        })
    }

    pub fn node_count(&self) -> usize {
        self.rho_w.len() * self.s_w.len()
    }

    /// Integral over the positive octant.
    pub fn integrate_octant<F: Fn([f64; 3]) -> f64 + Sync>(&self, f: F) -> f64 {
        let rows: Vec<f64> = (0..self.rho_w.len())
            .into_par_iter()
            .map(|i| {
                let (r, z) = (self.rho_pow[i], self.rhoc_pow[i]);
                let terms: Vec<f64> = (0..self.s_w.len())
                    .map(|j| self.s_w[j] * f([r * self.s_pow[j], r * self.sc_pow[j], z]))
                    .collect();
                self.rho_w[i] * pairwise(&terms)
            })
            .collect();
        pairwise(&rows)
    }

    /// Integral over the whole sphere.
    pub fn integrate<F: Fn([f64; 3]) -> f64 + Sync>(&self, f: F) -> f64 {
        self.integrate_octant(|x| {
            let mut s = 0.0;
            for k in 0..8 {
                let sx = if k & 1 == 0 { x[0] } else { -x[0] };
                let sy = if k & 2 == 0 { x[1] } else { -x[1] };
                let sz = if k & 4 == 0 { x[2] } else { -x[2] };
                s += f([sx, sy, sz]);
            }
            s
        })
    }

    pub fn nodes_per_cycle(&self, xi: [f64; 3]) -> f64 {
        let l1 = xi[0].abs() + xi[1].abs() + xi[2].abs();
        let l12 = xi[0].abs() + xi[1].abs();
        let nr = (self.spec.rho_panels * self.spec.order) as f64;
        let ns = (self.spec.s_panels * self.spec.order) as f64;
        let a = if l1 > 0.0 { nr / l1 } else { f64::INFINITY };
        let b = if l12 > 0.0 { ns / l12 } else { f64::INFINITY };
        a.min(b)
    }

    pub fn check_frequency(&self, xi: [f64; 3]) -> Result<()> {
        let n = self.nodes_per_cycle(xi);
        if n < super::quad::NODES_PER_CYCLE {
            return Err(Error::Resolution(format!("{n:.2} nodes per oscillation at xi = {xi:?}")));
        }
        Ok(())
    }

    /// 8 int_oct prod_i cos(2 pi x_i xi_i) d mu_c.
    pub fn fourier(&self, xi: [f64; 3]) -> f64 {
        use std::f64::consts::TAU;
        let rows: Vec<f64> = (0..self.rho_w.len())
            .into_par_iter()
            .map(|i| {
                let r = self.rho_pow[i];
                let cz = (TAU * self.rhoc_pow[i] * xi[2]).cos();
                let (a, b) = (TAU * r * xi[0], TAU * r * xi[1]);
                let terms: Vec<f64> = (0..self.s_w.len())
                    .map(|j| self.s_w[j] * (a * self.s_pow[j]).cos() * (b * self.sc_pow[j]).cos())
                    .collect();
                self.rho_w[i] * cz * pairwise(&terms)
            })
            .collect();
        8.0 * pairwise(&rows)
    }
}
