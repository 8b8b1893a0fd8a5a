use serde::Serialize;

use crate::numeric::gl::{graded_breaks, GaussLegendre, Grading};
use crate::numeric::smooth::mollifier;
use crate::numeric::special::{beta, beta_reg};
use crate::numeric::sum::pairwise;
use crate::{Error, Result};

use super::surface_mass;

/// C_{a, xi} = { x in S_c : x . xi >= a } with xi a Euclidean unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapSpec {
    pub xi: [f64; 3],
    pub a: f64,
}

impl CapSpec {
    pub fn new(xi: [f64; 3], a: f64) -> Result<Self> {
        let n = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("cap direction has norm {n}")));
        }
        Ok(CapSpec { xi, a })
    }
}

const CHEB: usize = 40;

/// Regularized incomplete beta I_s(g, g) for fixed g, written as
/// s^g H(s) on [0, 1/2] with H in a Chebyshev expansion, and mirrored.
#[derive(Debug, Clone)]
pub struct IncBeta {
    pub g: f64,
    coef: Vec<f64>,
}

impl IncBeta {
    pub fn new(g: f64) -> Self {
        let n = CHEB;
        let vals: Vec<f64> = (0..n)
            .map(|k| {
                let x = (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
                let s = 0.25 * (x + 1.0);
                beta_reg(g, g, s) / s.powf(g)
            })
            .collect();
        let coef = (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .map(|k| vals[k] * (std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                2.0 * s / n as f64
            })
            .collect();
        IncBeta { g, coef }
    }

    fn h(&self, s: f64) -> f64 {
        let x = 4.0 * s - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coef.iter().skip(1).rev() {
            let t = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = t;
        }
        x * b1 - b2 + 0.5 * self.coef[0]
    }

    /// I_s given both s and 1 - s.
    pub fn eval(&self, s: f64, sc: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if sc <= 0.0 {
            1.0
        } else if s <= 0.5 {
            s.powf(self.g) * self.h(s)
        } else {
            1.0 - sc.powf(self.g) * self.h(sc)
        }
    }
}

/// q(s) = alpha s^g + beta (1-s)^g on [0, 1], monotone or unimodal.
#[derive(Debug, Clone, Copy)]
struct Mix {
    alpha: f64,
    beta: f64,
    g: f64,
}

/// A point of [0, 1] with its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pt {
    s: f64,
    sc: f64,
}

impl Pt {
    const ZERO: Pt = Pt { s: 0.0, sc: 1.0 };
    const ONE: Pt = Pt { s: 1.0, sc: 0.0 };
    const HALF: Pt = Pt { s: 0.5, sc: 0.5 };

    fn at(s: f64) -> Pt {
        Pt { s, sc: 1.0 - s }
    }

    /// Order by s, resolving points near 1 through their complements.
    fn order(&self, o: &Pt) -> std::cmp::Ordering {
        let (l1, l2) = (self.s < 0.5, o.s < 0.5);
        match (l1, l2) {
            (true, false) => std::cmp::Ordering::Less,
            (false, true) => std::cmp::Ordering::Greater,
            (true, true) => self.s.partial_cmp(&o.s).unwrap(),
            (false, false) => o.sc.partial_cmp(&self.sc).unwrap(),
        }
    }
}

impl Mix {
    fn eval(&self, p: Pt) -> f64 {
        let a = if self.alpha == 0.0 { 0.0 } else { self.alpha * p.s.powf(self.g) };
        let b = if self.beta == 0.0 { 0.0 } else { self.beta * p.sc.powf(self.g) };
        a + b
    }

    /// Interior extremum, when alpha and beta share a sign and g < 1.
    fn extremum(&self) -> Option<Pt> {
        if self.g >= 1.0 || self.alpha * self.beta <= 0.0 {
            return None;
        }
        let lr = (self.alpha / self.beta).ln() / (1.0 - self.g);
        let s = 1.0 / (1.0 + (-lr).exp());
        let sc = 1.0 / (1.0 + lr.exp());
        Some(Pt { s, sc })
    }

    /// Monotone pieces covering [0, 1].
    fn pieces(&self) -> Vec<(Pt, Pt)> {
        let mut cuts = vec![Pt::ZERO, Pt::HALF, Pt::ONE];
        if let Some(m) = self.extremum() {
            if m.s > 0.0 && m.s < 1.0 && m.s != 0.5 {
                cuts.insert(if m.s < 0.5 { 1 } else { 2 }, m);
            }
        }
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn deriv(&self, p: Pt) -> f64 {
        let a = if self.alpha == 0.0 { 0.0 } else { self.alpha * p.s.powf(self.g - 1.0) };
        let b = if self.beta == 0.0 { 0.0 } else { self.beta * p.sc.powf(self.g - 1.0) };
        self.g * (a - b)
    }

    /// Solves q = level on a monotone piece with q(u) and q(v) bracketing it.
    /// Safeguarded Newton, stepping in s on the left half and in 1 - s on the
    /// right half.
    fn root(&self, u: Pt, v: Pt, level: f64) -> Pt {
        let inc = self.eval(v) >= self.eval(u);
        let (mut lo, mut hi) = (u, v);
        let right = u.s >= 0.5;
        let coord = |p: Pt| if right { -p.sc } else { p.s };
        let from = |x: f64| if right { Pt { s: 1.0 - (-x), sc: -x } } else { Pt::at(x) };
        let (fu, fv) = (self.eval(u) - level, self.eval(v) - level);
        let mut x = if fv != fu { coord(u) + (coord(v) - coord(u)) * (-fu / (fv - fu)) } else { 0.5 * (coord(u) + coord(v)) };
        let mut last = None;
        for _ in 0..100 {
            let (a, b) = (coord(lo), coord(hi));
            if !(x > a && x < b) {
                x = 0.5 * (a + b);
            }
            if x <= a || x >= b {
                break;
            }
            let p = from(x);
            let f = self.eval(p) - level;
            if (f >= 0.0) == inc {
                hi = p;
            } else {
                lo = p;
            }
            last = Some(p);
            let step = -f / self.deriv(p);
            if !step.is_finite() {
                x = f64::NAN;
                continue;
            }
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
            x += step;
        }
        last.unwrap_or(if inc { hi } else { lo })
    }

    /// The set {q >= level} as a list of intervals.
    fn superlevel(&self, level: f64) -> Vec<(Pt, Pt)> {
        let mut out: Vec<(Pt, Pt)> = Vec::new();
        for (u, v) in self.pieces() {
            let (qu, qv) = (self.eval(u), self.eval(v));
            let seg = if qv >= qu {
                if level <= qu {
                    Some((u, v))
                } else if level > qv {
                    None
                } else {
                    Some((self.root(u, v, level), v))
                }
            } else if level <= qv {
                Some((u, v))
            } else if level > qu {
                None
            } else {
                Some((u, self.root(u, v, level)))
            };
            if let Some(seg) = seg {
                match out.last_mut() {
                    Some(last) if last.1 == seg.0 => last.1 = seg.1,
                    _ => out.push(seg),
                }
            }
        }
        out
    }

    /// All solutions of q = level.
    fn solve(&self, level: f64) -> Vec<Pt> {
        let mut out = Vec::new();
        for (u, v) in self.pieces() {
            let (qu, qv) = (self.eval(u), self.eval(v));
            let (lo, hi) = if qu <= qv { (qu, qv) } else { (qv, qu) };
            if level > lo && level < hi {
                out.push(self.root(u, v, level));
            }
        }
        out
    }

    fn critical_values(&self) -> Vec<f64> {
        let mut v = vec![self.beta, self.alpha];
        if let Some(m) = self.extremum() {
            v.push(self.eval(m));
        }
        v
    }
}

/// Exact cap measures for one direction.
#[derive(Debug, Clone)]
pub struct CapSolver {
    pub c: f64,
    pub xi: [f64; 3],
    g: f64,
    ib: IncBeta,
    scale: f64,
    /// (offset, measured from the far end, weight) on a unit interval
    tmpl: Vec<(f64, bool, f64)>,
}

impl CapSolver {
    pub fn new(c: f64, xi: [f64; 3]) -> Result<Self> {
        if !(1.0..=2.0).contains(&c) {
            return Err(Error::Domain(format!("cap exponent {c} outside [1, 2]")));
        }
        CapSpec::new(xi, 0.0)?;
        let g = 1.0 / c;
        let scale = beta(g, g) / (c * c * surface_mass(c));
        let gl = GaussLegendre::new(10);
        let breaks = graded_breaks(0.0, 0.5, Grading { panels: 1, order: 10, layers: 14, ratio: 0.25, left: true, right: false });
        let mut half = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
                half.push((0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * wt));
            }
        }
        let mut tmpl: Vec<(f64, bool, f64)> = half.iter().map(|&(t, w)| (t, false, w)).collect();
        tmpl.extend(half.iter().rev().map(|&(t, w)| (t, true, w)));
        Ok(CapSolver { c, xi, g, ib: IncBeta::new(g), scale, tmpl })
    }

    /// Largest value of x . xi on the sphere: the dual norm of xi.
    pub fn a_max(&self) -> f64 {
        if self.c == 1.0 {
            return self.xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        let d = self.c / (self.c - 1.0);
        let m = self.xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        m * self.xi.iter().map(|v| (v.abs() / m).powf(d)).sum::<f64>().powf(1.0 / d)
    }

    fn level_measure(&self, mix: &Mix, level: f64) -> f64 {
        mix.superlevel(level).iter().map(|(p, q)| self.ib.eval(q.s, q.sc) - self.ib.eval(p.s, p.sc)).sum()
    }

    /// Contribution of the octant with signed direction (alpha, beta, delta).
    fn octant(&self, alpha: f64, beta: f64, delta: f64, a: f64) -> f64 {
        let g = self.g;
        let inner = Mix { alpha, beta, g };
        let mut breaks = vec![Pt::ZERO, Pt::HALF, Pt::ONE];
        for k in inner.critical_values() {
            breaks.extend(Mix { alpha: k, beta: delta, g }.solve(a));
        }
        breaks.sort_by(|x, y| x.order(y));
        breaks.dedup_by(|x, y| x.order(y) == std::cmp::Ordering::Equal);
        let c = self.c;
        let mut parts = Vec::new();
        for w in breaks.windows(2) {
            let (p, q) = (w[0], w[1]);
            let right = p.s >= 0.5;
            // x is rho on the left half and 1 - rho on the right half;
            // x = t^c makes the endpoint weights smooth in t
            let (x0, x1) = if right { (q.sc, p.sc) } else { (p.s, q.s) };
            if x1 <= x0 {
                continue;
            }
            let (t0, t1) = (x0.powf(g), x1.powf(g));
            let len = t1 - t0;
            for &(tau, far, wt) in &self.tmpl {
                let t = if far { t1 - len * tau } else { t0 + len * tau };
                let x = t.powf(c);
                let pt = if right { Pt { s: 1.0 - x, sc: x } } else { Pt::at(x) };
                let (sg, scg) = if right { (pt.s.powf(g), t) } else { (t, pt.sc.powf(g)) };
                let level = (a - delta * scg) / sg;
                let m = self.level_measure(&inner, level);
                if m != 0.0 {
                    let jac = if right { c * pt.s.powf(2.0 * g - 1.0) } else { c * t * pt.sc.powf(g - 1.0) };
                    parts.push(wt * len * jac * m);
                }
            }
        }
        pairwise(&parts)
    }

    /// nu_c(C_{a, xi}).
    pub fn nu(&self, a: f64) -> f64 {
        let [x, y, z] = self.xi;
        let mut parts = [0.0; 8];
        for (k, p) in parts.iter_mut().enumerate() {
            let sx = if k & 1 == 0 { x } else { -x };
            let sy = if k & 2 == 0 { y } else { -y };
            let sz = if k & 4 == 0 { z } else { -z };
            *p = self.octant(sx, sy, sz, a);
        }
        (self.scale * pairwise(&parts)).clamp(0.0, 1.0)
    }
}

/// nu_c(C_{a, xi}) for one cap.
pub fn cap_measure(c: f64, cap: &CapSpec) -> Result<f64> {
    Ok(CapSolver::new(c, cap.xi)?.nu(cap.a))
}

/// Tabulated a -> nu_c(C_{a, xi}) with cubic Hermite interpolation.
#[derive(Debug, Clone, Serialize)]
pub struct CapProfile {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    /// Largest deviation from the exact value at the checked midpoints.
    pub midpoint_error: f64,
}

impl CapProfile {
    /// `n` intervals on [lo, hi]; every `check_every`-th midpoint is verified.
    pub fn build(solver: &CapSolver, lo: f64, hi: f64, n: usize, check_every: usize) -> Result<Self> {
        use rayon::prelude::*;
        if !(hi > lo) || n < 4 {
            return Err(Error::InvalidArgument("cap profile needs hi > lo and n >= 4".into()));
        }
        let h = (hi - lo) / n as f64;
        let values: Vec<f64> = (0..=n).into_par_iter().map(|i| solver.nu(lo + h * i as f64)).collect();
        let slopes: Vec<f64> = (0..=n)
            .map(|i| {
                if i >= 2 && i + 2 <= n {
                    (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / (12.0 * h)
                } else if i == 0 {
                    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
                } else if i == n {
                    (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h)
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * h)
                }
            })
            .collect();
        let mut p = CapProfile { lo, hi, values, slopes, midpoint_error: 0.0 };
        let step = check_every.max(1);
        let errs: Vec<f64> = (0..n)
            .step_by(step)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|i| {
                let a = lo + h * (i as f64 + 0.5);
                (p.eval(a) - solver.nu(a)).abs()
            })
            .collect();
        p.midpoint_error = errs.into_iter().fold(0.0, f64::max);
        Ok(p)
    }

    pub fn eval(&self, a: f64) -> f64 {
        if a <= self.lo {
            return self.values[0];
        }
        if a >= self.hi {
            return *self.values.last().unwrap();
        }
        let n = self.values.len() - 1;
        let h = (self.hi - self.lo) / n as f64;
        let x = (a - self.lo) / h;
        let i = (x.floor() as usize).min(n - 1);
        let t = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }
}

/// int phi^{+-}_{a, delta}(x . xi) d nu_c: the cap indicator shifted to
/// a + delta (`upper = false`, below the cap) or a - delta (`upper = true`,
/// above it) and smoothed at scale delta.
pub fn smoothed_cap<F: Fn(f64) -> f64>(nu: F, a: f64, delta: f64, upper: bool) -> f64 {
    let gl = GaussLegendre::new(48);
    let b = if upper { a - delta } else { a + delta };
    gl.integrate(-1.0, 1.0, |z| mollifier(z) * nu(b + delta * z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_on_both_halves() {
        let m = Mix { alpha: 0.0, beta: 1.0, g: 0.5 };
        let r = m.solve(0.5);
        assert_eq!(r.len(), 1);
        assert!((r[0].s - 0.75).abs() < 1e-15, "{r:?}");
        let r = m.solve(1e-12);
        assert!((r[0].sc - 1e-24).abs() < 1e-36, "{r:?}");
        let m = Mix { alpha: 0.7, beta: 0.2, g: 20.0 / 21.0 };
        for level in [0.25, 0.6, 0.69] {
            for p in m.solve(level) {
                assert!((m.eval(p) - level).abs() < 1e-14);
            }
        }
    }
}
