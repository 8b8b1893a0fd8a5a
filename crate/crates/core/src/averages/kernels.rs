use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BumpConfig, PsiTransform};
use crate::numeric::fft::{convolve, inverse_dft};
use crate::numeric::gl::GaussLegendre;
use crate::regvar::{floor_pow_table, RationalExponent};
use crate::surface::surface_mass;
use crate::{Error, Result};

/// kappa = (3 - 4c) / (4c)
pub fn kappa(c: f64) -> f64 {
    (3.0 - 4.0 * c) / (4.0 * c)
}

/// omega_lambda(x) = 1 / (1 + (lambda^kappa | |x|_c^c - lambda |)^10)
pub fn omega(c: f64, lambda: f64, x: [f64; 3]) -> f64 {
    let n = x[0].abs().powf(c) + x[1].abs().powf(c) + x[2].abs().powf(c);
    1.0 / (1.0 + (lambda.powf(kappa(c)) * (n - lambda).abs()).powi(10))
}

/// K_lambda = lambda^{-9/(4c)} omega_lambda
pub fn k_kernel(c: f64, lambda: f64, x: [f64; 3]) -> f64 {
    lambda.powf(-9.0 / (4.0 * c)) * omega(c, lambda, x)
}

/// The major/minor split of sigma_lambda as functions of the level
/// n = Q(x) - lambda, valid on the whole window |x|_inf <= 10 lambda^{1/c}.
#[derive(Debug, Clone)]
pub struct ArcSplit {
    pub lambda: u64,
    pub exponent: RationalExponent,
    pub bumps: BumpConfig,
    pub kappa: f64,
    /// lambda^kappa
    pub scale: f64,
    /// floor(x^c) for 0 <= x <= window half-width
    pub floors: Vec<u64>,
    psi_hat: Arc<PsiTransform>,
    /// minor(n) for n = -lambda..=n_max, by trapezoid quadrature in t
    minor: Vec<f64>,
    pub n_max: i64,
    pub fft_len: usize,
}

impl ArcSplit {
    pub fn new(lambda: u64, exponent: RationalExponent, bumps: BumpConfig, psi_hat: Arc<PsiTransform>) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::Domain("kernels need lambda >= 1".into()));
        }
        let c = exponent.c();
        if (c - bumps.c).abs() > 1e-15 {
            return Err(Error::InvalidArgument("bump configuration built for another exponent".into()));
        }
        let k = kappa(c);
        let scale = (lambda as f64).powf(k);
        let half = (10.0 * (lambda as f64).powf(exponent.gamma())).floor() as u64;
        let floors = floor_pow_table(half, exponent);
        let n_max = 3 * *floors.last().unwrap() as i64 - lambda as i64;
        let reach = (n_max.max(lambda as i64)) as f64 + psi_hat.t_max / scale;
        let m = ((reach.ceil() as usize).max(n_max as usize + lambda as usize + 1) + 1).next_power_of_two();
        // periodic trapezoid rule for int_{-1/2}^{1/2} e(n t) psi~(t / lambda^kappa) dt
        let samples: Vec<Complex64> = (0..m)
            .map(|j| {
                let t = if 2 * j < m { j as f64 / m as f64 } else { j as f64 / m as f64 - 1.0 };
                Complex64::new(bumps.psi_tilde(t / scale), 0.0)
            })
            .collect();
        let out = inverse_dft(&samples);
        let minor = (-(lambda as i64)..=n_max).map(|n| out[n.rem_euclid(m as i64) as usize].re / m as f64).collect();
        Ok(ArcSplit { lambda, exponent, bumps, kappa: k, scale, floors, psi_hat, minor, n_max, fft_len: m })
    }

    /// Window half-width floor(10 lambda^{1/c}).
    pub fn half_width(&self) -> i64 {
        self.floors.len() as i64 - 1
    }

    /// lambda^kappa psi^(lambda^kappa n)
    pub fn major_level(&self, n: i64) -> f64 {
        self.scale * self.psi_hat.eval(self.scale * n as f64)
    }

    pub fn minor_level(&self, n: i64) -> f64 {
        self.minor[(n + self.lambda as i64) as usize]
    }

    /// max over levels of |major + minor - [n = 0]|; bounds the partition
    /// defect over the whole window since 0 <= eta <= 1.
    pub fn partition_defect(&self) -> f64 {
        (-(self.lambda as i64)..=self.n_max)
            .map(|n| (self.major_level(n) + self.minor_level(n) - (n == 0) as u8 as f64).abs())
            .fold(0.0, f64::max)
    }

    pub fn q(&self, x: [i64; 3]) -> Option<u64> {
        let f = |v: i64| self.floors.get(v.unsigned_abs() as usize).copied();
        Some(f(x[0])? + f(x[1])? + f(x[2])?)
    }

    pub fn values(&self, x: [i64; 3]) -> KernelValues {
        let c = self.exponent.c();
        let l = self.lambda as f64;
        let xf = [x[0] as f64, x[1] as f64, x[2] as f64];
        let om = omega(c, l, xf);
        let kk = l.powf(-9.0 / (4.0 * c)) * om;
        let Some(q) = self.q(x) else {
            return KernelValues { sigma: 0.0, major: 0.0, minor: 0.0, omega: om, k: kk };
        };
        let g = self.exponent.gamma();
        let eta = self.bumps.eta(xf.map(|v| v / l.powf(g)));
        let n = q as i64 - self.lambda as i64;
        KernelValues {
            sigma: (n == 0) as u8 as f64,
            major: eta * self.major_level(n),
            minor: eta * self.minor_level(n),
            omega: om,
            k: kk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValues {
    pub sigma: f64,
    pub major: f64,
    pub minor: f64,
    pub omega: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelId {
    Sigma,
    Major,
    Minor,
    Omega,
    K,
}

impl KernelId {
    pub const ALL: [KernelId; 5] = [KernelId::Sigma, KernelId::Major, KernelId::Minor, KernelId::Omega, KernelId::K];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::Sigma => "sigma",
            KernelId::Major => "major",
            KernelId::Minor => "minor",
            KernelId::Omega => "omega",
            KernelId::K => "K",
        }
    }

    fn pick(self, v: &KernelValues) -> f64 {
        match self {
            KernelId::Sigma => v.sigma,
            KernelId::Major => v.major,
            KernelId::Minor => v.minor,
            KernelId::Omega => v.omega,
            KernelId::K => v.k,
        }
    }
}

/// Kernel values on the box lo..=hi (inclusive, row-major with x3 fastest).
#[derive(Debug, Clone, Serialize)]
pub struct KernelField {
    pub lambda: u64,
    pub c: String,
    pub kappa: f64,
    pub lo: [i64; 3],
    pub hi: [i64; 3],
    #[serde(skip)]
    pub values: Vec<KernelValues>,
    /// max over the box of |major + minor - sigma|
    pub partition_max: f64,
    /// the same bound over the full window, from the level profiles
    pub partition_window: f64,
}

pub const MAX_FIELD_POINTS: usize = 50_000_000;

/// Evaluates all kernels on a box inside the window; the box is clipped to it.
pub fn kernel_field(split: &ArcSplit, lo: [i64; 3], hi: [i64; 3]) -> Result<KernelField> {
    let w = split.half_width();
    let lo = lo.map(|v| v.max(-w));
    let hi = hi.map(|v| v.min(w));
    let dims: Vec<usize> = (0..3).map(|i| (hi[i] - lo[i] + 1).max(0) as usize).collect();
    let total = dims.iter().product::<usize>();
    if total > MAX_FIELD_POINTS {
        return Err(Error::InvalidArgument(format!("field of {total} points is too large")));
    }
    let mut values = Vec::with_capacity(total);
    let mut worst = 0.0f64;
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            for d in lo[2]..=hi[2] {
                let v = split.values([a, b, d]);
                worst = worst.max((v.major + v.minor - v.sigma).abs());
                values.push(v);
            }
        }
    }
    Ok(KernelField {
        lambda: split.lambda,
        c: split.exponent.to_string(),
        kappa: split.kappa,
        lo,
        hi,
        values,
        partition_max: worst,
        partition_window: split.partition_defect(),
    })
}

pub const FIELD_MAGIC: &[u8; 8] = b"CSPHFLD1";

impl KernelField {
    /// Header (magic, lambda, p, q, lo, hi, kernel id as u32) followed by
    /// the row-major grid, all little endian.
    pub fn write_binary<W: Write>(&self, id: KernelId, p: u32, q: u32, mut w: W) -> std::io::Result<()> {
        w.write_all(FIELD_MAGIC)?;
        w.write_all(&self.lambda.to_le_bytes())?;
        w.write_all(&p.to_le_bytes())?;
        w.write_all(&q.to_le_bytes())?;
        for v in self.lo.iter().chain(&self.hi) {
            w.write_all(&v.to_le_bytes())?;
        }
        let code = KernelId::ALL.iter().position(|k| *k == id).unwrap() as u32;
        w.write_all(&code.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&id.pick(v).to_le_bytes())?;
        }
        Ok(())
    }
}

/// lambda^{-3/c+1} |sigma^M| against K_lambda on levels n with eta = 1 and
/// r_c(lambda + n) > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domination {
    pub lambda: u64,
    /// attained ratio using the distance from 0 to [n, n+3) for |x|_c^c - lambda
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    pub argmax_level: i64,
}

/// `counts[v] = r_c(v)` must cover v <= 4 lambda.
pub fn domination(split: &ArcSplit, counts: &[u64]) -> Result<Domination> {
    let l = split.lambda as i64;
    let top = 4 * l - 3;
    if counts.len() <= top as usize {
        return Err(Error::Horizon("count table must reach 4 lambda".into()));
    }
    let mut out = Domination { lambda: split.lambda, ratio_lower: 0.0, ratio_upper: 0.0, argmax_level: 0 };
    for v in 0..=top {
        if counts[v as usize] == 0 {
            continue;
        }
        let n = v - l;
        let ph = split.psi_hat.eval(split.scale * n as f64).abs();
        // |x|_c^c lies in [Q, Q + 3)
        let (a, b) = (n as f64, n as f64 + 3.0);
        let near = if a <= 0.0 && b >= 0.0 { 0.0 } else { a.abs().min(b.abs()) };
        let far = a.abs().max(b.abs());
        let lo = ph * (1.0 + (split.scale * near).powi(10));
        let hi = ph * (1.0 + (split.scale * far).powi(10));
        if lo > out.ratio_lower {
            out.ratio_lower = lo;
            out.argmax_level = n;
        }
        out.ratio_upper = out.ratio_upper.max(hi);
    }
    Ok(out)
}

/// ||K_lambda||_{L^1(R^3)} through the polar decomposition
/// int_0^inf (mu_c / c) u^{3/c-1} / (1 + (lambda^kappa |u - lambda|)^10) du.
pub fn k_mass(c: f64, lambda: f64) -> f64 {
    let s = lambda.powf(kappa(c));
    let gl = GaussLegendre::new(24);
    let e = 3.0 / c - 1.0;
    let f = |u: f64| u.max(0.0).powf(e) / (1.0 + (s * (u - lambda)).abs().powi(10));
    // panels in v = s (u - lambda): 0, +-1/2, +-1, +-2, ... then clipped at u = 0
    let mut breaks = vec![0.0];
    let mut v = 0.5;
    while v < 1e7 {
        breaks.push(v);
        v *= 2.0;
    }
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (lambda + w[0] / s, lambda + w[1] / s);
        total += gl.integrate(a, b, f);
        let (a2, b2) = ((lambda - w[1] / s).max(0.0), lambda - w[0] / s);
        if b2 > a2 {
            total += gl.integrate(a2, b2, f);
        }
    }
    lambda.powf(-9.0 / (4.0 * c)) * surface_mass(c) / c * total
}

/// Extreme values of omega(t + g) / omega(t) over random t and |g|_inf <= 1;
/// half the samples are uniform in the window, half in the shell where
/// omega transitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaComparison {
    pub lambda: u64,
    pub samples: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

impl OmegaComparison {
    /// Smallest C with ratio in [1/C, C].
    pub fn constant(&self) -> f64 {
        self.max_ratio.max(1.0 / self.min_ratio)
    }
}

pub fn omega_comparison(c: f64, lambda: u64, samples: usize, seed: u64) -> OmegaComparison {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ lambda);
    let l = lambda as f64;
    let w = 10.0 * l.powf(1.0 / c);
    let band = 4.0 / l.powf(kappa(c));
    let mut hi = 0.0f64;
    let mut lo = f64::INFINITY;
    for i in 0..samples {
        let t: [f64; 3] = if i % 2 == 0 {
            [rng.random_range(-w..w), rng.random_range(-w..w), rng.random_range(-w..w)]
        } else {
            // direction with random signs, scaled to |t|_c^c = lambda + u
            let d: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let n = (d[0].abs().powf(c) + d[1].abs().powf(c) + d[2].abs().powf(c)).powf(1.0 / c);
            let target = (l + rng.random_range(-band..band)).max(0.0).powf(1.0 / c);
            d.map(|v| v / n * target)
        };
        let g: [f64; 3] = [rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)];
        let r = omega(c, l, [t[0] + g[0], t[1] + g[1], t[2] + g[2]]) / omega(c, l, t);
        hi = hi.max(r);
        lo = lo.min(r);
    }
    OmegaComparison { lambda, samples, max_ratio: hi, min_ratio: lo }
}

/// Level weights E(v) = sum over x with Q(x) = v of eta(x / lambda^{1/c})^2,
/// by convolving the one-dimensional weights.
pub fn level_weights(split: &ArcSplit) -> Vec<f64> {
    let g = split.exponent.gamma();
    let l = (split.lambda as f64).powf(g);
    let top = *split.floors.last().unwrap() as usize;
    let mut e = vec![0.0; top + 1];
    for (x, &q) in split.floors.iter().enumerate() {
        let v = split.bumps.eta.eval(x as f64 / l).powi(2);
        e[q as usize] += if x == 0 { v } else { 2.0 * v };
    }
    let e2 = convolve(&e, &e, 2 * top + 1);
    convolve(&e2, &e, 3 * top + 1)
}

/// l^2 norms over the window of sigma, sigma^M and sigma^m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelNorms {
    pub lambda: u64,
    pub sigma: f64,
    pub major: f64,
    pub minor: f64,
}

pub fn kernel_norms(split: &ArcSplit) -> KernelNorms {
    let e = level_weights(split);
    let l = split.lambda as i64;
    let mut ma = 0.0;
    let mut mi = 0.0;
    for (v, &w) in e.iter().enumerate() {
        let n = v as i64 - l;
        if n > split.n_max {
            break;
        }
        ma += w * split.major_level(n).powi(2);
        mi += w * split.minor_level(n).powi(2);
    }
    KernelNorms { lambda: split.lambda, sigma: e[l as usize].max(0.0).sqrt(), major: ma.sqrt(), minor: mi.sqrt() }
}
