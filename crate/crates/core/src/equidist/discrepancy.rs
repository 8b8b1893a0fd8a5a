use rayon::prelude::*;
use serde::Serialize;

use super::ProjectedCloud;
use crate::counting::SphereLattice;
use crate::numeric::regress::loglog_slope;
use crate::regvar::RationalExponent;
use crate::surface::{random_directions, CapProfile, CapSolver};
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 8192;
/// Largest cloud whose projections are stored and sorted.
pub const MAX_EXACT_POINTS: u64 = 50_000_000;
/// Bound on |x . xi| for cloud points that makes the upper cap constraint vacuous.
const CAP_CEILING: f64 = 100.0;

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyResult {
    pub lambda: u64,
    pub xi: [f64; 3],
    pub r: u64,
    /// sup over a > 0 of |#(P cap C_a) - r nu(C_a)|
    pub d: f64,
    /// Threshold attaining the sup; 0 stands for a -> 0+.
    pub argmax: f64,
    pub normalized: f64,
}

/// Full scan over the jump points of the counting term.
#[derive(Debug, Clone, Serialize)]
pub struct ExactScan {
    /// Sorted distinct positive projections.
    pub jumps: Vec<f64>,
    /// counts[i] = #{p : p . xi >= jumps[i]}
    pub counts: Vec<u64>,
    /// strict[i] = #{p : p . xi > jumps[i]}
    pub strict: Vec<u64>,
    pub result: DiscrepancyResult,
}

/// Exact counting term at every jump of a -> #{p . xi >= a}, both one-sided
/// limits, and the limit a -> 0+. `nu` is the cap measure as a function of a.
pub fn discrepancy_exact<F: Fn(f64) -> f64>(cloud: &ProjectedCloud, xi: [f64; 3], nu: F) -> Result<ExactScan> {
    check_unit(xi)?;
    if cloud.count() > MAX_EXACT_POINTS {
        return Err(Error::InvalidArgument(format!(
            "{} points exceed the exact scan limit {MAX_EXACT_POINTS}; use the binned scan",
            cloud.count()
        )));
    }
    let s = cloud.scale();
    let mut proj = Vec::with_capacity(cloud.count() as usize / 2 + 1);
    let mut ceiling = 0.0f64;
    cloud.lattice().for_each_point(cloud.lambda(), |x| {
        let v = (x[0] as f64 * xi[0] + x[1] as f64 * xi[1] + x[2] as f64 * xi[2]) * s;
        ceiling = ceiling.max(v.abs());
        if v > 0.0 {
            proj.push(v);
        }
    });
    if ceiling >= CAP_CEILING {
        return Err(Error::Domain(format!("projection {ceiling} reaches the cap ceiling")));
    }
    proj.sort_unstable_by(|a, b| b.total_cmp(a));
    let r = cloud.count();
    let rf = r as f64;
    let mut jumps = Vec::new();
    let mut counts = Vec::new();
    let mut strict = Vec::new();
    let mut i = 0;
    while i < proj.len() {
        let a = proj[i];
        let mut j = i;
        while j < proj.len() && proj[j] == a {
            j += 1;
        }
        jumps.push(a);
        counts.push(j as u64);
        strict.push(i as u64);
        i = j;
    }
    let mut d = (proj.len() as f64 - rf * nu(0.0)).abs();
    let mut argmax = 0.0;
    for k in 0..jumps.len() {
        let m = rf * nu(jumps[k]);
        for v in [(counts[k] as f64 - m).abs(), (strict[k] as f64 - m).abs()] {
            if v > d {
                d = v;
                argmax = jumps[k];
            }
        }
    }
    jumps.reverse();
    counts.reverse();
    strict.reverse();
    let result = DiscrepancyResult { lambda: cloud.lambda(), xi, r, d, argmax, normalized: d / rf };
    Ok(ExactScan { jumps, counts, strict, result })
}

fn check_unit(xi: [f64; 3]) -> Result<()> {
    let n = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("direction {xi:?} is not a unit vector")));
    }
    Ok(())
}

/// Cap measure in one direction, tabulated once and shared across lambda.
#[derive(Debug, Clone)]
pub struct CapTable {
    pub xi: [f64; 3],
    pub a_max: f64,
    pub profile: CapProfile,
}

impl CapTable {
    pub fn new(c: f64, xi: [f64; 3], intervals: usize) -> Result<Self> {
        check_unit(xi)?;
        let solver = CapSolver::new(c, xi)?;
        let a_max = solver.a_max();
        let profile = CapProfile::build(&solver, 0.0, a_max, intervals, 8)?;
        Ok(CapTable { xi, a_max, profile })
    }

    pub fn nu(&self, a: f64) -> f64 {
        if a >= self.a_max {
            0.0
        } else {
            self.profile.eval(a).clamp(0.0, 1.0)
        }
    }
}

/// Discrepancy in one direction bracketed by a histogram of projections.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionBracket {
    pub xi: [f64; 3],
    /// max over bin edges of |D|; attained, so a lower bound for the sup.
    pub lower: f64,
    /// Bound for |D| between edges from monotonicity of both terms.
    pub upper: f64,
    pub argmax: f64,
    /// r times the interpolation error of the cap profile.
    pub measure_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BinnedScan {
    pub lambda: u64,
    pub r: u64,
    pub bins: usize,
    pub rows: Vec<DirectionBracket>,
}

/// One enumeration pass over S_c(lambda) filling a histogram of positive
/// projections per direction.
pub fn discrepancy_binned(lat: &SphereLattice, lambda: u64, tables: &[CapTable], bins: usize) -> Result<BinnedScan> {
    let cloud = super::project(lat, lambda)?;
    if bins < 2 {
        return Err(Error::InvalidArgument("at least two bins".into()));
    }
    let gamma = lat.exponent().gamma();
    let s = cloud.scale();
    // cloud points satisfy |p|_c^c < 1 + 3/lambda
    let stretch = (1.0 + 3.0 / lambda as f64).powf(gamma) * (1.0 + 1e-12);
    let his: Vec<f64> = tables.iter().map(|t| t.a_max * stretch).collect();
    if his.iter().any(|&h| h >= CAP_CEILING) {
        return Err(Error::Domain("projections may reach the cap ceiling".into()));
    }
    if bins > 1 << 24 {
        return Err(Error::InvalidArgument("at most 2^24 bins".into()));
    }
    // projections in bin units as 32.32 fixed point
    let w: Vec<[i64; 3]> = tables
        .iter()
        .zip(&his)
        .map(|(t, &hi)| {
            let k = s * bins as f64 / hi * FIXED;
            t.xi.map(|v| (v.abs() * k).round() as i64)
        })
        .collect();
    let signed: Vec<[f64; 3]> = tables
        .iter()
        .zip(&his)
        .map(|(t, &hi)| {
            let k = s * bins as f64 / hi;
            t.xi.map(|v| v * k)
        })
        .collect();
    let nd = tables.len();
    let q = lat.floors();
    let top = bins - 1;
    // a row adds at most 4 (xmax + 1) to one bin
    let row_max = 4 * q.len() as u64;
    let fresh = || Acc { wide: vec![0u64; nd * bins], narrow: vec![0u32; nd * bins], pending: 0, row: Vec::new() };
    let acc = (0..q.len())
        .into_par_iter()
        .fold(fresh, |mut acc, x1| {
            let q1 = q[x1];
            if q1 > lambda {
                return acc;
            }
            if acc.pending + row_max > u32::MAX as u64 {
                acc.flush();
            }
            acc.pending += row_max;
            let rest = lambda - q1;
            acc.row.clear();
            for (x2, &q2) in q.iter().enumerate() {
                if q2 > rest {
                    break;
                }
                let Some(x3) = lat.preimage(rest - q2) else { continue };
                if x1 != 0 && x2 != 0 && x3 != 0 {
                    acc.row.push((x2 as i64, x3 as i64));
                } else {
                    let x = [x1 as i64, x2 as i64, x3 as i64];
                    for_each_sign(x, |p| {
                        for (j, wj) in signed.iter().enumerate() {
                            let v = p[0] as f64 * wj[0] + p[1] as f64 * wj[1] + p[2] as f64 * wj[2];
                            if v > 0.0 {
                                acc.wide[j * bins + (v as usize).min(top)] += 1;
                            }
                        }
                    });
                }
            }
            let a = x1 as i64;
            for (hj, wj) in acc.narrow.chunks_exact_mut(bins).zip(&w) {
                let t1 = a * wj[0];
                for &(b, d) in &acc.row {
                    let (t2, t3) = (b * wj[1], d * wj[2]);
                    for v in [t1 + t2 + t3, t1 + t2 - t3, t1 - t2 + t3, t1 - t2 - t3] {
                        hj[((v.unsigned_abs() >> 32) as usize).min(top)] += (v != 0) as u32;
                    }
                }
            }
            acc
        })
        .reduce(fresh, |mut a, mut b| {
            a.flush();
            b.flush();
            a.wide.iter_mut().zip(&b.wide).for_each(|(x, y)| *x += y);
            a
        });
    let mut acc = acc;
    acc.flush();
    let hist = acc.wide;
    let r = cloud.count();
    let rf = r as f64;
    let rows = tables
        .iter()
        .zip(&his)
        .enumerate()
        .map(|(j, (t, &hi))| {
            let hj = &hist[j * bins..(j + 1) * bins];
            let h = hi / bins as f64;
            // g[k] = #{v >= k h}; g[0] counts v > 0
            let mut g = vec![0u64; bins + 1];
            for k in (0..bins).rev() {
                g[k] = g[k + 1] + hj[k];
            }
            let m: Vec<f64> = (0..=bins).map(|k| rf * t.nu(k as f64 * h)).collect();
            let mut lower = 0.0;
            let mut argmax = 0.0;
            let mut upper = 0.0f64;
            for k in 0..=bins {
                let v = (g[k] as f64 - m[k]).abs();
                if v > lower {
                    lower = v;
                    argmax = k as f64 * h;
                }
                if k < bins {
                    upper = upper.max(g[k] as f64 - m[k + 1]).max(m[k] - g[k + 1] as f64);
                }
            }
            DirectionBracket {
                xi: t.xi,
                lower,
                upper: upper.max(lower),
                argmax,
                measure_slack: rf * t.profile.midpoint_error,
            }
        })
        .collect();
    Ok(BinnedScan { lambda, r, bins, rows })
}

const FIXED: f64 = 4294967296.0;

struct Acc {
    wide: Vec<u64>,
    narrow: Vec<u32>,
    pending: u64,
    row: Vec<(i64, i64)>,
}

impl Acc {
    fn flush(&mut self) {
        for (o, v) in self.wide.iter_mut().zip(&mut self.narrow) {
            *o += *v as u64;
            *v = 0;
        }
        self.pending = 0;
    }
}

fn for_each_sign<F: FnMut([i64; 3])>(x: [i64; 3], mut f: F) {
    for m in 0..8u32 {
        // skip sign flips of zero coordinates
        if (0..3).any(|i| m >> i & 1 == 1 && x[i] == 0) {
            continue;
        }
        f([
            if m & 1 == 1 { -x[0] } else { x[0] },
            if m & 2 == 2 { -x[1] } else { x[1] },
            if m & 4 == 4 { -x[2] } else { x[2] },
        ]);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub lambda: u64,
    pub r: u64,
    /// Exact jump-grid scan; otherwise the histogram lower bound.
    pub exact: bool,
    /// D per direction.
    pub d: Vec<f64>,
    /// Certified upper bound per direction (equal to `d` when exact).
    pub upper: Vec<f64>,
    /// Threshold a attaining `d` per direction (a bin edge when binned).
    pub argmax: Vec<f64>,
    pub mean_d: f64,
    pub max_d: f64,
    pub mean_normalized: f64,
    pub max_normalized: f64,
    /// Largest (upper - lower) / r over directions.
    pub bracket_width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyDecay {
    pub c: String,
    pub seed: u64,
    pub directions: Vec<[f64; 3]>,
    pub rows: Vec<DecayRow>,
    /// lambda values with r_c(lambda) = 0
    pub skipped: Vec<u64>,
    /// log-log slope of the mean of D / r_c against lambda.
    pub slope_normalized: f64,
    /// log-log slope of the mean of D / lambda^{3/c - 1}.
    pub slope_scaled: f64,
    /// -(9 - 8c) / (5c)
    pub target: f64,
    pub profile_error: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct DecayConfig {
    pub bins: usize,
    pub profile_intervals: usize,
    /// Clouds up to this size get the exact jump-grid scan.
    pub exact_limit: u64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig { bins: DEFAULT_BINS, profile_intervals: 256, exact_limit: 4_000_000 }
    }
}

/// D_c(lambda, xi) over seeded directions for each lambda; empty spheres are skipped.
pub fn discrepancy_decay(
    c: RationalExponent,
    lambdas: &[u64],
    n_directions: usize,
    seed: u64,
    cfg: DecayConfig,
) -> Result<DiscrepancyDecay> {
    let dirs = random_directions(n_directions, seed);
    discrepancy_decay_dirs(c, lambdas, &dirs, seed, cfg)
}

pub fn discrepancy_decay_dirs(
    c: RationalExponent,
    lambdas: &[u64],
    dirs: &[[f64; 3]],
    seed: u64,
    cfg: DecayConfig,
) -> Result<DiscrepancyDecay> {
    let horizon = lambdas.iter().copied().max().ok_or_else(|| Error::InvalidArgument("no lambda values".into()))?;
    if dirs.is_empty() {
        return Err(Error::InvalidArgument("no directions".into()));
    }
    let cf = c.c();
    let lat = SphereLattice::new(c, horizon)?;
    let tables = dirs.iter().map(|&xi| CapTable::new(cf, xi, cfg.profile_intervals)).collect::<Result<Vec<_>>>()?;
    let profile_error = tables.iter().map(|t| t.profile.midpoint_error).fold(0.0, f64::max);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &lambda in lambdas {
        let cloud = match super::project(&lat, lambda) {
            Ok(c) => c,
            Err(Error::EmptySphere(l)) => {
                skipped.push(l);
                continue;
            }
            Err(e) => return Err(e),
        };
        let r = cloud.count();
        let exact = r <= cfg.exact_limit.min(MAX_EXACT_POINTS);
        let triples: Vec<(f64, f64, f64)> = if exact {
            tables
                .iter()
                .map(|t| discrepancy_exact(&cloud, t.xi, |a| t.nu(a)).map(|s| (s.result.d, s.result.d, s.result.argmax)))
                .collect::<Result<Vec<_>>>()?
        } else {
            discrepancy_binned(&lat, lambda, &tables, cfg.bins)?.rows.iter().map(|b| (b.lower, b.upper, b.argmax)).collect()
        };
        let d: Vec<f64> = triples.iter().map(|t| t.0).collect();
        let upper: Vec<f64> = triples.iter().map(|t| t.1).collect();
        let argmax: Vec<f64> = triples.iter().map(|t| t.2).collect();
        let rf = r as f64;
        let n = d.len() as f64;
        let mean_d = d.iter().sum::<f64>() / n;
        let max_d = d.iter().copied().fold(0.0, f64::max);
        let bracket_width = d.iter().zip(&upper).map(|(l, u)| (u - l) / rf).fold(0.0, f64::max);
        rows.push(DecayRow {
            lambda,
            r,
            exact,
            d,
            upper,
            argmax,
            mean_d,
            max_d,
            mean_normalized: mean_d / rf,
            max_normalized: max_d / rf,
            bracket_width,
        });
    }
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need two nonempty spheres for a slope".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda as f64).collect();
    let yn: Vec<f64> = rows.iter().map(|r| r.mean_normalized).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_d / (r.lambda as f64).powf(3.0 / cf - 1.0)).collect();
    Ok(DiscrepancyDecay {
        c: c.to_string(),
        seed,
        directions: dirs.to_vec(),
        rows,
        skipped,
        slope_normalized: loglog_slope(&xs, &yn),
        slope_scaled: loglog_slope(&xs, &ys),
        target: -(9.0 - 8.0 * cf) / (5.0 * cf),
        profile_error,
    })
}
