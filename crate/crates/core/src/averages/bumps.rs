use num_complex::Complex64;
use serde::Serialize;

use crate::numeric::gl::GaussLegendre;
use crate::numeric::smooth::Plateau;
use crate::{Error, Result};

/// The spatial bump eta (product of even plateaus) and the arc cutoff psi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpConfig {
    pub c: f64,
    /// eta_j = 1 on |x| <= 4^{1/c}, 0 on |x| >= eta.support < 10
    pub eta: Plateau,
    /// psi = 1 on |t| <= 1/(2c), 0 on |t| >= psi.support < 1/2
    pub psi: Plateau,
}

impl BumpConfig {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 1.0 && c <= 2.0) {
            return Err(Error::Domain(format!("arc cutoff needs c in (1, 2], got {c}")));
        }
        let p = 0.5 / c;
        let eta = Plateau::new(4f64.powf(1.0 / c), 9.5);
        let psi = Plateau::new(p, p + 0.9 * (0.5 - p));
        Ok(BumpConfig { c, eta, psi })
    }

    pub fn eta(&self, x: [f64; 3]) -> f64 {
        self.eta.eval(x[0]) * self.eta.eval(x[1]) * self.eta.eval(x[2])
    }

    pub fn psi(&self, t: f64) -> f64 {
        self.psi.eval(t)
    }

    pub fn psi_tilde(&self, t: f64) -> f64 {
        1.0 - self.psi.eval(t)
    }

    /// Plateau, support and range constraints on a mesh of `n` points.
    pub fn verify(&self, n: usize) -> Result<()> {
        let cnorm = |x: f64| x.abs().powf(self.c);
        for i in 0..=n {
            let t = -0.5 + i as f64 / n as f64;
            let v = self.psi(t);
            if !(0.0..=1.0).contains(&v) || (t.abs() < 0.5 / self.c && v != 1.0) || (t.abs() >= 0.5 && v != 0.0) {
                return Err(Error::Tolerance(format!("psi({t}) = {v} violates its constraints")));
            }
            if v + self.psi_tilde(t) != 1.0 {
                return Err(Error::Tolerance(format!("psi + psi~ != 1 at {t}")));
            }
            let x = -10.0 + 20.0 * i as f64 / n as f64;
            let e = self.eta.eval(x);
            if !(0.0..=1.0).contains(&e) || (cnorm(x) <= 4.0 && e != 1.0) || (x.abs() >= 10.0 && e != 0.0) {
                return Err(Error::Tolerance(format!("eta_j({x}) = {e} violates its constraints")));
            }
        }
        Ok(())
    }
}

/// Nodes and weights for int_p^q of the psi transition.
fn transition_rule(psi: &Plateau, s_max: f64) -> Vec<(f64, f64)> {
    let order = 16;
    let gl = GaussLegendre::new(order);
    let (p, q) = (psi.plateau, psi.support);
    let cycles = s_max * (q - p);
    let panels = ((10.0 * cycles / order as f64).ceil() as usize).max(64);
    let h = (q - p) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let a = p + k as f64 * h;
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// The inverse Fourier transform of psi, psi^(s) = int psi(t) e(st) dt,
/// tabulated with derivatives on [0, T] and evaluated by cubic Hermite
/// interpolation; zero beyond T.
#[derive(Debug, Clone, Serialize)]
pub struct PsiTransform {
    pub psi: Plateau,
    pub t_max: f64,
    pub step: f64,
    #[serde(skip)]
    values: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
    /// max |psi^| on [T, 2T] sampled
    pub tail: f64,
    /// max interpolation error at sampled midpoints
    pub interp_error: f64,
}

pub const TAIL_TARGET: f64 = 1e-12;
pub const TABLE_STEP: f64 = 1.0 / 64.0;

impl PsiTransform {
    pub fn new(psi: Plateau) -> Result<Self> {
        // tail search by doubling
        let mut t = 64.0;
        loop {
            let tail = sampled_max(&psi, t, 2.0 * t);
            if tail < TAIL_TARGET {
                break;
            }
            t *= 2.0;
            if t > 1e6 {
                return Err(Error::NonConvergence("psi transform tail does not decay".into()));
            }
        }
        let n = (t / TABLE_STEP).ceil() as usize;
        let step = t / n as f64;
        let (values, slopes) = tabulate(&psi, step, n);
        let mut pt = PsiTransform { psi, t_max: t, step, values, slopes, tail: 0.0, interp_error: 0.0 };
        pt.tail = sampled_max(&psi, t, 2.0 * t);
        let rule = transition_rule(&psi, t);
        let mut err = 0.0f64;
        let stride = (n / 2048).max(1);
        for i in (0..n).step_by(stride) {
            let s = (i as f64 + 0.5) * step;
            err = err.max((pt.eval(s) - direct(&psi, &rule, s).0).abs());
        }
        pt.interp_error = err;
        Ok(pt)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.t_max {
            return 0.0;
        }
        let x = s / self.step;
        let i = (x as usize).min(self.values.len() - 2);
        let t = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }

    /// Bound on |psi^(s)| for |s| >= T, from the sampled tail.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }
}

/// (psi^(s), psi^'(s)) by quadrature; the plateau part is integrated in closed form.
pub fn direct(psi: &Plateau, rule: &[(f64, f64)], s: f64) -> (f64, f64) {
    let p = psi.plateau;
    let tau = std::f64::consts::TAU;
    let (mut v, mut d) = if s == 0.0 {
        (p, 0.0)
    } else {
        let (sn, cs) = (tau * s * p).sin_cos();
        (sn / (tau * s), (tau * s * p * cs - sn) / (tau * s * s))
    };
    for &(t, w) in rule {
        let (sn, cs) = (tau * s * t).sin_cos();
        let f = psi.eval(t) * w;
        v += f * cs;
        d -= f * tau * t * sn;
    }
    (2.0 * v, 2.0 * d)
}

fn sampled_max(psi: &Plateau, lo: f64, hi: f64) -> f64 {
    let rule = transition_rule(psi, hi);
    let n = 4096;
    (0..=n).map(|i| direct(psi, &rule, lo + (hi - lo) * i as f64 / n as f64).0.abs()).fold(0.0, f64::max)
}

/// Values and derivatives at s_k = k step, k = 0..=n, by phase rotation
/// across k with periodic exact restarts.
fn tabulate(psi: &Plateau, step: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = transition_rule(psi, n as f64 * step);
    let tau = std::f64::consts::TAU;
    let p = psi.plateau;
    let fw: Vec<f64> = rule.iter().map(|&(t, w)| psi.eval(t) * w).collect();
    let rot: Vec<Complex64> = rule.iter().map(|&(t, _)| Complex64::from_polar(1.0, tau * step * t)).collect();
    let mut z = vec![Complex64::new(1.0, 0.0); rule.len()];
    let mut values = Vec::with_capacity(n + 1);
    let mut slopes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = k as f64 * step;
        if k % 256 == 0 {
            for (zj, &(t, _)) in z.iter_mut().zip(&rule) {
                *zj = Complex64::from_polar(1.0, tau * s * t);
            }
        }
        let (mut v, mut d) = if k == 0 {
            (p, 0.0)
        } else {
            let (sn, cs) = (tau * s * p).sin_cos();
            (sn / (tau * s), (tau * s * p * cs - sn) / (tau * s * s))
        };
        for ((zj, &f), &(t, _)) in z.iter().zip(&fw).zip(&rule) {
            v += f * zj.re;
            d -= f * tau * t * zj.im;
        }
        values.push(2.0 * v);
        slopes.push(2.0 * d);
        for (zj, r) in z.iter_mut().zip(&rot) {
            *zj *= r;
        }
    }
    (values, slopes)
}
