use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ExpSumBoundSpec;
use crate::numeric::phase::{dist_int, e, frac_mul, reduce};
use crate::numeric::smooth::Plateau;
use crate::numeric::sum::pairwise_c;
use crate::regvar::{floor_pow, RationalExponent};
use crate::Result;

/// A sum value with the corresponding bound shape and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumBound {
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl SumBound {
    fn new(value: f64, bound: f64) -> Self {
        SumBound { value, bound, ratio: value / bound }
    }
}

/// |sum_{P <= n <= P'} e(n^c t + n xi)| against P^{c/2}|t|^{1/2} + P^{1-c/2}|t|^{-1/2}.
pub fn u_sum(p: u64, p2: u64, t: f64, xi: f64, c: f64) -> SumBound {
    let terms: Vec<Complex64> = (p..=p2)
        .map(|n| {
            let nc = (n as f64).powf(c);
            e(reduce(nc * t) + frac_mul(n as i64, xi))
        })
        .collect();
    let value = pairwise_c(&terms).norm();
    let pf = p as f64;
    let bound = if t == 0.0 {
        f64::INFINITY
    } else {
        pf.powf(c / 2.0) * t.abs().sqrt() + pf.powf(1.0 - c / 2.0) / t.abs().sqrt()
    };
    SumBound::new(value, bound)
}

/// sum_{P <= n <= P'} min{1, 1/(M ||n^c||)} against (1 + log M)(P/M + P^{c/2} M^{1/2}).
pub fn v_sum(p: u64, p2: u64, m: f64, c: f64) -> SumBound {
    let terms: Vec<f64> = (p..=p2)
        .map(|n| {
            let d = dist_int((n as f64).powf(c));
            if d == 0.0 {
                1.0
            } else {
                (1.0 / (m * d)).min(1.0)
            }
        })
        .collect();
    let value = crate::numeric::sum::pairwise(&terms);
    let pf = p as f64;
    let bound = (1.0 + m.ln()) * (pf / m + pf.powf(c / 2.0) * m.sqrt());
    SumBound::new(value, bound)
}

/// Pi_{t,s}(xi) = sum_n e(floor(|n|^c) t + n xi) g(n / s^{1/c}).
pub fn pi_sum(g: &Plateau, t: f64, s: f64, xi: f64, c: RationalExponent) -> Complex64 {
    let scale = s.powf(1.0 / c.c());
    let nmax = (g.support * scale).floor() as i64;
    let terms: Vec<Complex64> = (-nmax..=nmax)
        .filter_map(|n| {
            let w = g.eval(n as f64 / scale);
            if w == 0.0 {
                return None;
            }
            let fl = floor_pow(n.unsigned_abs(), c) as i64;
            Some(e(frac_mul(fl, t) + frac_mul(n, xi)) * w)
        })
        .collect();
    pairwise_c(&terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiScan {
    pub n: u64,
    pub samples: usize,
    pub max_abs: f64,
    pub at: (f64, f64, f64),
    /// N^{1/3 + 1/(3c)} log(N + 1)
    pub bound: f64,
    pub fitted: f64,
}

/// Random scan of |Pi| over s in [N, 2N], xi in [-1/2, 1/2], |t| in [N_c, 1/2].
pub fn pi_scan(g: &Plateau, c: RationalExponent, n: u64, samples: usize, seed: u64) -> Result<PiScan> {
    let cf = c.c();
    let spec = ExpSumBoundSpec { c: cf, chi: 0.0, kappa: (3.0 - 4.0 * cf) / (4.0 * cf) };
    let nc = spec.minor_cutoff(n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64, f64)> = (0..samples)
        .map(|_| {
            let s = rng.random_range(n as f64..=2.0 * n as f64);
            let xi = rng.random_range(-0.5..0.5);
            let mag = rng.random_range(nc..=0.5);
            let t = if rng.random_bool(0.5) { mag } else { -mag };
            (s, xi, t)
        })
        .collect();
    let vals: Vec<f64> = pts.par_iter().map(|&(s, xi, t)| pi_sum(g, t, s, xi, c).norm()).collect();
    let (i, max_abs) = vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let nf = n as f64;
    let bound = nf.powf(1.0 / 3.0 + 1.0 / (3.0 * cf)) * (nf + 1.0).ln();
    Ok(PiScan { n, samples, max_abs, at: pts[i], bound, fitted: max_abs / bound })
}
