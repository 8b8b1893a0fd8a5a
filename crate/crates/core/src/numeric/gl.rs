//! Gauss-Legendre rules and composite rules with geometric grading toward
//! endpoint singularities.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule on [-1, 1]; nodes by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(m + h * x);
        }
        s * h
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A one-dimensional composite rule: nodes and positive weights on [lo, hi].
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Layout of a graded composite rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grading {
    /// Uniform panels covering the interval before grading.
    pub panels: usize,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    /// Geometric layers inserted into the end panels.
    pub layers: usize,
    /// Ratio between successive geometric layers.
    pub ratio: f64,
    pub left: bool,
    pub right: bool,
}

impl Grading {
    pub fn new(panels: usize, order: usize) -> Self {
        Grading { panels, order, layers: 24, ratio: 0.15, left: true, right: true }
    }

    pub fn doubled(&self) -> Self {
        Grading { panels: self.panels * 2, ..*self }
    }
}

impl Rule1d {
    pub fn from_breaks(breaks: &[f64], order: usize) -> Self {
        let gl = GaussLegendre::new(order);
        let mut nodes = Vec::with_capacity(order * breaks.len());
        let mut weights = Vec::with_capacity(order * breaks.len());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let h = 0.5 * (b - a);
            let m = 0.5 * (b + a);
            for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(m + h * x);
                weights.push(wt * h);
            }
        }
        Rule1d { nodes, weights }
    }

    pub fn graded(lo: f64, hi: f64, g: Grading) -> Self {
        Self::from_breaks(&graded_breaks(lo, hi, g), g.order)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(*x);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn graded_breaks(lo: f64, hi: f64, g: Grading) -> Vec<f64> {
    let p = g.panels.max(2);
    let h = (hi - lo) / p as f64;
    let mut breaks = Vec::with_capacity(p + 2 * g.layers + 1);
    // layers stop where the offset is no longer resolved relative to the endpoint
    let depth = |end: f64| {
        (0..g.layers).take_while(|&k| h * g.ratio.powi(k as i32 + 1) > 64.0 * f64::EPSILON * end.abs()).count()
    };
    if g.left {
        breaks.push(lo);
        for k in (0..depth(lo)).rev() {
            breaks.push(lo + h * g.ratio.powi(k as i32 + 1));
        }
    }
    for i in 0..=p {
        let x = if i == p { hi } else { lo + h * i as f64 };
        if i == 0 && g.left {
            continue;
        }
        if i == p && g.right {
            break;
        }
        breaks.push(x);
    }
    if g.right {
        for k in 0..depth(hi) {
            breaks.push(hi - h * g.ratio.powi(k as i32 + 1));
        }
        breaks.push(hi);
    }
    breaks.dedup();
    breaks
}
