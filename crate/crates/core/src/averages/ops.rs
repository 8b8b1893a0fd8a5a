use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::kernels::{kernel_norms, ArcSplit};
use super::{BumpConfig, PsiTransform};
use crate::counting::SphereLattice;
use crate::numeric::regress::loglog_slope;
use crate::numeric::sum::Cascade;
use crate::regvar::RationalExponent;
use crate::surface::{QuadSpec, SurfaceQuadrature};
use crate::{Error, Result};

/// Finitely supported function on Z^3.
pub type LatticeFn = BTreeMap<[i64; 3], Complex64>;

/// M_lambda f(x) = (1/r_c(lambda)) sum over n in S_c(lambda) of f(x - n).
pub fn discrete_average(lat: &SphereLattice, f: &LatticeFn, lambda: u64) -> Result<LatticeFn> {
    if lambda > lat.horizon() {
        return Err(Error::Horizon(format!("lambda = {lambda} beyond lattice horizon {}", lat.horizon())));
    }
    let pts = lat.points(lambda);
    if pts.is_empty() {
        return Err(Error::EmptySphere(lambda));
    }
    let r = pts.len() as f64;
    let mut out = LatticeFn::new();
    for (y, v) in f {
        for n in &pts {
            *out.entry([y[0] + n[0], y[1] + n[1], y[2] + n[2]]).or_default() += v;
        }
    }
    for v in out.values_mut() {
        *v /= r;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalProfile {
    pub lambdas: Vec<u64>,
    pub skipped: Vec<u64>,
    #[serde(skip)]
    pub values: BTreeMap<[i64; 3], f64>,
}

/// sup over the given lambda of |M_lambda f(x)|; empty spheres are skipped.
pub fn maximal_profile(lat: &SphereLattice, f: &LatticeFn, lambdas: &[u64]) -> Result<MaximalProfile> {
    let mut values: BTreeMap<[i64; 3], f64> = BTreeMap::new();
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    for &l in lambdas {
        match discrete_average(lat, f, l) {
            Ok(m) => {
                for (x, v) in m {
                    let e = values.entry(x).or_insert(0.0);
                    *e = e.max(v.norm());
                }
                used.push(l);
            }
            Err(Error::EmptySphere(_)) => skipped.push(l),
            Err(e) => return Err(e),
        }
    }
    Ok(MaximalProfile { lambdas: used, skipped, values })
}

/// Greedy lambda_0-lacunary subsequence: each kept term is at least
/// `ratio` times the previous one.
pub fn lacunary(lambdas: &[u64], ratio: f64) -> Vec<u64> {
    let mut sorted = lambdas.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<u64> = Vec::new();
    for l in sorted {
        if out.last().is_none_or(|&p| l as f64 >= ratio * p as f64) {
            out.push(l);
        }
    }
    out
}

/// A_t f(x) = int over the unit c-sphere of f(x - t theta) d mu_c(theta).
pub fn continuous_average<F>(c: f64, f: F, x: [f64; 3], t: f64, spec: QuadSpec) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + Sync,
{
    if !(t > 0.0) {
        return Err(Error::Domain("continuous average needs t > 0".into()));
    }
    let q = SurfaceQuadrature::new(c, spec)?;
    let at = |th: [f64; 3]| f([x[0] - t * th[0], x[1] - t * th[1], x[2] - t * th[2]]);
    Ok(Complex64::new(q.integrate(|th| at(th).re), q.integrate(|th| at(th).im)))
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusRun {
    pub theta: [f64; 3],
    pub m: [i64; 3],
    /// m_j theta_j mod 1
    pub alpha: [f64; 3],
    pub rows: Vec<(u64, u64, f64)>,
    pub skipped: Vec<u64>,
}

/// Weyl multiplier (1/r) sum over n in S_c(lambda) of e(n . (m theta)) of the
/// rotation average applied to e(m . x); real by sign symmetry.
pub fn torus_ergodic_run(lat: &SphereLattice, theta: [f64; 3], m: [i64; 3], lambdas: &[u64]) -> Result<TorusRun> {
    let alpha: [f64; 3] = std::array::from_fn(|i| (m[i] as f64 * theta[i]).rem_euclid(1.0));
    let xmax = lat.floors().len();
    let tables: Vec<Vec<f64>> = alpha
        .iter()
        .map(|&a| {
            (0..xmax)
                .map(|x| if x == 0 { 1.0 } else { 2.0 * (std::f64::consts::TAU * a * x as f64).cos() })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &l in lambdas {
        if l > lat.horizon() {
            return Err(Error::Horizon(format!("lambda = {l} beyond lattice horizon {}", lat.horizon())));
        }
        let mut acc = Cascade::new();
        let mut r = 0u64;
        lat.for_each_nonneg(l, |a, b, d| {
            r += crate::counting::multiplicity(a, b, d);
            acc.push(tables[0][a as usize] * tables[1][b as usize] * tables[2][d as usize]);
        });
        if r == 0 {
            skipped.push(l);
            continue;
        }
        rows.push((l, r, acc.total() / r as f64));
    }
    Ok(TorusRun { theta, m, alpha, rows, skipped })
}

/// theta_j = frac(g^{-j}) with g the real root of x^4 = x + 1.
pub fn golden_vector() -> [f64; 3] {
    let mut g: f64 = 1.2;
    for _ in 0..60 {
        g -= (g.powi(4) - g - 1.0) / (4.0 * g.powi(3) - 1.0);
    }
    [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)].map(|v: f64| v.fract())
}

/// V^r of a real sequence: sup over increasing index chains of
/// (sum |a_{j+1} - a_j|^r)^{1/r}. Exact: for r >= 1 an optimal chain uses
/// only the endpoints and turning points, and a quadratic DP runs over those.
pub fn variation_seminorm(a: &[f64], r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::Domain(format!("variation needs r >= 1, got {r}")));
    }
    let mut pts: Vec<f64> = Vec::new();
    for &v in a {
        match pts.len() {
            0 => pts.push(v),
            _ if v == *pts.last().unwrap() => {}
            1 => pts.push(v),
            n => {
                let (p, q) = (pts[n - 2], pts[n - 1]);
                if (q - p) * (v - q) > 0.0 {
                    pts[n - 1] = v;
                } else {
                    pts.push(v);
                }
            }
        }
    }
    Ok(chain_dp(&pts, r, |x, y| (x - y).abs()))
}

/// V^r of a complex sequence by the quadratic DP over all indices.
pub fn variation_seminorm_complex(a: &[Complex64], r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::Domain(format!("variation needs r >= 1, got {r}")));
    }
    Ok(chain_dp(a, r, |x, y| (x - y).norm()))
}

fn chain_dp<T: Copy, D: Fn(T, T) -> f64>(a: &[T], r: f64, dist: D) -> f64 {
    let mut best = vec![0.0f64; a.len()];
    for j in 1..a.len() {
        let mut b = 0.0f64;
        for i in 0..j {
            b = b.max(best[i] + dist(a[i], a[j]).powf(r));
        }
        best[j] = b;
    }
    best.iter().copied().fold(0.0, f64::max).powf(1.0 / r)
}

#[derive(Debug, Clone, Serialize)]
pub struct MinorRow {
    pub n: u64,
    /// max over n <= lambda <= 2n of lambda^{-3/c+1} ||sigma^m_lambda||_2
    pub value: f64,
    pub argmax: u64,
    /// N^{-(11-10c)/(6c)} log^2(N+1)
    pub bound: f64,
    pub triangle_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinorProfile {
    pub c: String,
    pub rows: Vec<MinorRow>,
    pub skipped: Vec<u64>,
    pub slope: f64,
    pub target_slope: f64,
    /// max of value / bound
    pub fitted: f64,
}

/// The minor-arc profile for f = delta_0; `stride` thins the lambda range.
pub fn minor_arc_profile(c: RationalExponent, ns: &[u64], stride: u64, psi_hat: Option<Arc<PsiTransform>>) -> Result<MinorProfile> {
    let cf = c.c();
    let bumps = BumpConfig::new(cf)?;
    let psi_hat = match psi_hat {
        Some(p) => p,
        None => Arc::new(PsiTransform::new(bumps.psi)?),
    };
    let top = ns.iter().copied().max().ok_or_else(|| Error::InvalidArgument("no N values".into()))? * 2;
    let lat = SphereLattice::new(c, top)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &n in ns {
        let mut best: Option<(f64, u64)> = None;
        let mut triangle_ok = true;
        let mut l = n;
        while l <= 2 * n {
            if lat.count(l) == 0 {
                skipped.push(l);
            } else {
                let split = ArcSplit::new(l, c, bumps, psi_hat.clone())?;
                let k = kernel_norms(&split);
                triangle_ok &= k.minor <= k.sigma + k.major + 1e-9 * k.sigma;
                let v = (l as f64).powf(1.0 - 3.0 / cf) * k.minor;
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, l));
                }
            }
            l += stride.max(1);
        }
        let Some((value, argmax)) = best else { continue };
        let bound = (n as f64).powf(-(11.0 - 10.0 * cf) / (6.0 * cf)) * ((n + 1) as f64).ln().powi(2);
        rows.push(MinorRow { n, value, argmax, bound, triangle_ok });
    }
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need two nonempty N values".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.value).collect();
    Ok(MinorProfile {
        c: c.to_string(),
        slope: loglog_slope(&xs, &ys),
        target_slope: -(11.0 - 10.0 * cf) / (6.0 * cf),
        fitted: rows.iter().map(|r| r.value / r.bound).fold(0.0, f64::max),
        rows,
        skipped,
    })
}
