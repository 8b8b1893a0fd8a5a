use super::table::{CountTable, Domain};
use crate::error::{Error, Result};
use crate::numeric::fft;
use crate::numeric::special::gamma;
use crate::numeric::sum::{pairwise, Cascade};
use crate::regvar::RegVarFunction;
use serde::Serialize;

/// 8 Gamma(1+1/c)^3 / Gamma(3/c) * lambda^(3/c-1).
pub fn main_term_c(c: f64, lambda: f64) -> f64 {
    8.0 * gamma(1.0 + 1.0 / c).powi(3) / gamma(3.0 / c) * lambda.powf(3.0 / c - 1.0)
}

/// Volume of the unit c-ball scaled to radius^c = lambda:
/// (2 Gamma(1+1/c))^3 / Gamma(1+3/c) * lambda^(3/c).
pub fn ball_volume(c: f64, lambda: f64) -> f64 {
    (2.0 * gamma(1.0 + 1.0 / c)).powi(3) / gamma(1.0 + 3.0 / c) * lambda.powf(3.0 / c)
}

/// The three coordinate functions with their leading exponents.
#[derive(Debug, Clone)]
pub struct AsymptoticSpec {
    pub functions: [RegVarFunction; 3],
}

impl AsymptoticSpec {
    pub fn new(functions: [RegVarFunction; 3]) -> Self {
        AsymptoticSpec { functions }
    }

    pub fn uniform(h: RegVarFunction) -> Self {
        AsymptoticSpec { functions: [h.clone(), h.clone(), h] }
    }

    pub fn gammas(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.functions[k].exponent().gamma())
    }

    /// Gamma(g1)Gamma(g2)Gamma(g3)/Gamma(g1+g2+g3) * lambda^2 phi1'(l) phi2'(l) phi3'(l).
    pub fn main_term_3(&self, lambda: f64) -> Result<f64> {
        let g = self.gammas();
        let k = gamma(g[0]) * gamma(g[1]) * gamma(g[2]) / gamma(g[0] + g[1] + g[2]);
        let mut v = k * lambda * lambda;
        for h in &self.functions {
            v *= h.phi_deriv(lambda, 1)?;
        }
        Ok(v)
    }

    /// Gamma(g1)Gamma(g2)/Gamma(g1+g2) * lambda phi1'(l) phi2'(l) for the first two.
    pub fn main_term_2(&self, lambda: f64) -> Result<f64> {
        let g = self.gammas();
        let k = gamma(g[0]) * gamma(g[1]) / gamma(g[0] + g[1]);
        Ok(k * lambda * self.functions[0].phi_deriv(lambda, 1)? * self.functions[1].phi_deriv(lambda, 1)?)
    }

    /// Whether 4(1-g_i) + 5(1-g_j)/2 + 5(1-g_k)/2 < 1 for some choice of i.
    pub fn condition_holds(&self) -> bool {
        let g = self.gammas();
        (0..3).any(|i| {
            let s: f64 = (0..3)
                .map(|k| if k == i { 4.0 * (1.0 - g[k]) } else { 2.5 * (1.0 - g[k]) })
                .sum();
            s < 1.0
        })
    }
}

/// sum_{m = N0_1}^{lambda - N0_2} phi1'(m) phi2'(lambda - m).
pub fn j2(h1: &RegVarFunction, h2: &RegVarFunction, lambda: u64) -> Result<f64> {
    let (a, b) = (h1.n0(), h2.n0());
    if lambda < a + b {
        return Err(Error::Domain(format!("lambda = {lambda} below N0_1 + N0_2 = {}", a + b)));
    }
    let mut acc = Cascade::new();
    for m in a..=lambda - b {
        acc.push(h1.phi_deriv(m as f64, 1)? * h2.phi_deriv((lambda - m) as f64, 1)?);
    }
    Ok(acc.total())
}

fn derivative_sequence(h: &RegVarFunction, len: usize) -> Result<Vec<f64>> {
    (0..len)
        .map(|m| if (m as u64) < h.n0() { Ok(0.0) } else { h.phi_deriv(m as f64, 1) })
        .collect()
}

/// j2(h2, h3, mu) for every mu = 0..=horizon (zero below the threshold).
pub fn j2_table(h2: &RegVarFunction, h3: &RegVarFunction, horizon: u64) -> Result<Vec<f64>> {
    let len = horizon as usize + 1;
    let a = derivative_sequence(h2, len)?;
    let b = derivative_sequence(h3, len)?;
    if horizon <= 4096 {
        let mut out = vec![0.0; len];
        for (mu, o) in out.iter_mut().enumerate() {
            let terms: Vec<f64> = (0..=mu).map(|m| a[m] * b[mu - m]).collect();
            *o = pairwise(&terms);
        }
        Ok(out)
    } else {
        Ok(fft::convolve(&a, &b, len))
    }
}

/// sum_{n1} phi1'(n1) j2(h2, h3, lambda - n1).
pub fn j3(h1: &RegVarFunction, h2: &RegVarFunction, h3: &RegVarFunction, lambda: u64) -> Result<f64> {
    let need = h1.n0() + h2.n0() + h3.n0();
    if lambda < need {
        return Err(Error::Domain(format!("lambda = {lambda} below N0 sum {need}")));
    }
    let tab = j2_table(h2, h3, lambda)?;
    let mut acc = Cascade::new();
    for n1 in h1.n0()..=lambda - h2.n0() - h3.n0() {
        acc.push(h1.phi_deriv(n1 as f64, 1)? * tab[(lambda - n1) as usize]);
    }
    Ok(acc.total())
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymRow {
    pub lambda: u64,
    pub count: u64,
    pub main_term: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Window {
    /// The window is [2^k, 2^(k+1)) intersected with [1, horizon].
    pub k: u32,
    pub lo: u64,
    pub hi: u64,
    pub mean_ratio: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymReport {
    pub c: f64,
    pub rows: Vec<AsymRow>,
    pub windows: Vec<Window>,
    pub cumulative: u128,
    pub ball_volume: f64,
    pub cumulative_relerr: f64,
}

/// Ratios r(lambda)/main_term_c(c, lambda), dyadic window means and the
/// cumulative count against the c-ball volume.
pub fn asymptotic_report(table: &CountTable, c: f64) -> Result<AsymReport> {
    if table.domain != Domain::Z3 {
        return Err(Error::InvalidArgument("asymptotic report expects a Z^3 table".into()));
    }
    let rows: Vec<AsymRow> = (1..=table.horizon)
        .map(|l| {
            let m = main_term_c(c, l as f64);
            let r = table.counts[l as usize];
            AsymRow { lambda: l, count: r, main_term: m, ratio: r as f64 / m }
        })
        .collect();
    let mut windows = Vec::new();
    let mut k = 0u32;
    while (1u64 << k) <= table.horizon {
        let lo = 1u64 << k;
        let hi = ((1u64 << (k + 1)) - 1).min(table.horizon);
        let rs: Vec<f64> = rows[(lo - 1) as usize..hi as usize].iter().map(|r| r.ratio).collect();
        let mean = pairwise(&rs) / rs.len() as f64;
        windows.push(Window { k, lo, hi, mean_ratio: mean, deviation: (mean - 1.0).abs() });
        k += 1;
    }
    let cumulative = table.total();
    let vol = ball_volume(c, table.horizon as f64);
    Ok(AsymReport {
        c,
        rows,
        windows,
        cumulative,
        ball_volume: vol,
        cumulative_relerr: (cumulative as f64 - vol).abs() / vol,
    })
}

/// Largest lambda <= horizon with r(lambda) = 0, plus one: a lower bound for
/// the true first full radius, certified only up to the horizon.
pub fn first_full_radius(table: &CountTable) -> u64 {
    table.counts.iter().rposition(|&c| c == 0).map(|i| i as u64 + 1).unwrap_or(0)
}
