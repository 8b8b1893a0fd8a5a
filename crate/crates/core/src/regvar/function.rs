//! The function catalog: pure powers, powers with a logarithmic factor and
//! x log x, with inverses and derivatives.

use super::exponent::RationalExponent;
use super::floor::floor_pow;
use crate::error::{Error, Result};
use crate::numeric::hp::{floor_and_gap, Hp};
use num_traits::ToPrimitive;
use std::fmt;
use std::str::FromStr;

/// Slowly varying factor of h.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Factor {
    PurePower,
    LogPower { beta: f64 },
    XLogX,
}

/// Precision policy for inverses and floors.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Precision {
    /// Target relative error of the inverse.
    pub eps_phi: f64,
    /// Largest working precision (bits) before a floor is declared uncertifiable.
    pub max_bits: usize,
    /// Length of the prefix on which injectivity of the floors is checked.
    pub injectivity_prefix: u64,
    /// Largest N0 searched for.
    pub n0_cap: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { eps_phi: 1e-14, max_bits: 1024, injectivity_prefix: 10_000, n0_cap: 1 << 40 }
    }
}

/// A member h of the function class, with its domain start x0 and validity
/// threshold N0.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegVarFunction {
    exponent: RationalExponent,
    factor: Factor,
    ch: f64,
    x0: f64,
    n0: u64,
    precision: Precision,
}

impl RegVarFunction {
    pub fn new(exponent: RationalExponent, factor: Factor, ch: f64) -> Result<Self> {
        Self::with_precision(exponent, factor, ch, Precision::default())
    }

    pub fn with_precision(
        exponent: RationalExponent,
        factor: Factor,
        ch: f64,
        precision: Precision,
    ) -> Result<Self> {
        if !(ch > 0.0 && ch.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale C_h must be positive, got {ch}")));
        }
        match factor {
            Factor::PurePower => {
                if !exponent.in_counting_range() {
                    return Err(Error::InvalidArgument(format!(
                        "pure power exponent must satisfy 1 <= c <= 2, got {exponent}"
                    )));
                }
            }
            Factor::LogPower { beta } => {
                if !beta.is_finite() {
                    return Err(Error::InvalidArgument("beta must be finite".into()));
                }
                if exponent.is_one() || !exponent.in_class_range() {
                    return Err(Error::InvalidArgument(format!(
                        "log-power exponent must satisfy 1 < c < 2, got {exponent}"
                    )));
                }
            }
            Factor::XLogX => {
                if !exponent.is_one() {
                    return Err(Error::InvalidArgument("x log x requires c = 1".into()));
                }
                if ch != 1.0 {
                    return Err(Error::InvalidArgument("x log x takes no scale".into()));
                }
            }
        }
        let mut h = RegVarFunction { exponent, factor, ch, x0: 1.0, n0: 1, precision };
        h.x0 = h.compute_x0()?;
        h.n0 = h.choose_n0()?;
        Ok(h)
    }

    /// h(x) = x^c.
    pub fn pure_power(c: RationalExponent) -> Result<Self> {
        Self::new(c, Factor::PurePower, 1.0)
    }

    /// h(x) = x.
    pub fn identity() -> Self {
        Self::pure_power(RationalExponent::integer(1).unwrap()).unwrap()
    }

    pub fn exponent(&self) -> RationalExponent {
        self.exponent
    }

    pub fn factor(&self) -> Factor {
        self.factor
    }

    pub fn scale(&self) -> f64 {
        self.ch
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Overrides N0 (for example to share one threshold between coordinates).
    /// The new value must still satisfy h' >= 1.
    pub fn with_n0(mut self, n0: u64) -> Result<Self> {
        if (n0 as f64) < self.x0 || self.h1(n0 as f64) < 1.0 {
            return Err(Error::InvalidArgument(format!("N0 = {n0} violates h' >= 1")));
        }
        self.n0 = n0;
        Ok(self)
    }

    pub fn is_exact_power(&self) -> bool {
        self.factor == Factor::PurePower && self.ch == 1.0
    }

    // Derivatives of u = log h for the log-power factor.
    fn log_derivs(&self, x: f64, beta: f64) -> (f64, f64, f64) {
        let c = self.exponent.c();
        let l = x.ln();
        let u1 = c / x + beta / (x * l);
        let u2 = -c / (x * x) - beta * (l + 1.0) / (x * x * l * l);
        let u3 = 2.0 * c / (x * x * x) + beta * (2.0 * l * l + 3.0 * l + 2.0) / (x * x * x * l * l * l);
        (u1, u2, u3)
    }

    /// h(x) in double precision.
    pub fn h(&self, x: f64) -> f64 {
        let c = self.exponent.c();
        match self.factor {
            Factor::PurePower => self.ch * x.powf(c),
            Factor::LogPower { beta } => self.ch * x.powf(c) * x.ln().powf(beta),
            Factor::XLogX => x * x.ln(),
        }
    }

    pub fn h1(&self, x: f64) -> f64 {
        match self.factor {
            Factor::PurePower => self.ch * self.exponent.c() * x.powf(self.exponent.c() - 1.0),
            Factor::XLogX => x.ln() + 1.0,
            Factor::LogPower { beta } => self.h(x) * self.log_derivs(x, beta).0,
        }
    }

    pub fn h2(&self, x: f64) -> f64 {
        let c = self.exponent.c();
        match self.factor {
            Factor::PurePower => self.ch * c * (c - 1.0) * x.powf(c - 2.0),
            Factor::XLogX => 1.0 / x,
            Factor::LogPower { beta } => {
                let (u1, u2, _) = self.log_derivs(x, beta);
                self.h(x) * (u2 + u1 * u1)
            }
        }
    }

    pub fn h3(&self, x: f64) -> f64 {
        let c = self.exponent.c();
        match self.factor {
            Factor::PurePower => self.ch * c * (c - 1.0) * (c - 2.0) * x.powf(c - 3.0),
            Factor::XLogX => -1.0 / (x * x),
            Factor::LogPower { beta } => {
                let (u1, u2, u3) = self.log_derivs(x, beta);
                self.h(x) * (u3 + 3.0 * u1 * u2 + u1 * u1 * u1)
            }
        }
    }

    fn compute_x0(&self) -> Result<f64> {
        let c = self.exponent.c();
        match self.factor {
            Factor::PurePower => Ok(1f64.max(self.ch.powf(-1.0 / c))),
            Factor::XLogX => {
                // x log x = 1
                let mut x: f64 = 1.5;
                for _ in 0..60 {
                    x -= (x * x.ln() - 1.0) / (x.ln() + 1.0);
                }
                Ok(x)
            }
            Factor::LogPower { beta } => {
                // h' > 0 iff c L + beta > 0 with L = log x.
                let mut l_min: f64 = 1.0;
                if beta < 0.0 {
                    l_min = l_min.max(-beta / c * (1.0 + 1e-12) + 1e-12);
                }
                // x^2 (u'' + u'^2) = c(c-1) + beta(2c-1) v + beta(beta-1) v^2, v = 1/L.
                let (a2, a1, a0) = (beta * (beta - 1.0), beta * (2.0 * c - 1.0), c * (c - 1.0));
                let roots: Vec<f64> = if a2.abs() < 1e-300 {
                    if a1 != 0.0 { vec![-a0 / a1] } else { vec![] }
                } else {
                    let disc = a1 * a1 - 4.0 * a2 * a0;
                    if disc < 0.0 {
                        vec![]
                    } else {
                        let s = disc.sqrt();
                        vec![(-a1 - s) / (2.0 * a2), (-a1 + s) / (2.0 * a2)]
                    }
                };
                if let Some(v) = roots.into_iter().filter(|v| *v > 0.0).reduce(f64::min) {
                    l_min = l_min.max(1.0 / v * (1.0 + 1e-9));
                }
                let xa = l_min.exp();
                if self.h(xa) >= 1.0 {
                    return Ok(xa);
                }
                let mut hi = xa * 2.0;
                while self.h(hi) < 1.0 {
                    hi *= 2.0;
                }
                let mut lo = xa;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.h(mid) >= 1.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Ok(hi)
            }
        }
    }

    /// Least integer N >= x0 with h'(x) >= 1 on [N, inf), with injectivity of
    /// the floors verified exactly on a prefix.
    pub fn choose_n0(&self) -> Result<u64> {
        let cap = self.precision.n0_cap;
        let mut n = self.x0.ceil().max(1.0) as u64;
        if self.h1(n as f64) < 1.0 {
            let mut hi = n.max(1);
            while self.h1(hi as f64) < 1.0 {
                hi = hi.checked_mul(2).ok_or(Error::NoThreshold(cap))?;
                if hi > cap {
                    return Err(Error::NoThreshold(cap));
                }
            }
            let mut lo = n;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if self.h1(mid as f64) >= 1.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            n = hi;
        }
        let mut prev = self.floor_h_unchecked(n)?;
        for m in n + 1..=n + self.precision.injectivity_prefix {
            let cur = self.floor_h_unchecked(m)?;
            if cur <= prev {
                return Err(Error::NoThreshold(n + self.precision.injectivity_prefix));
            }
            prev = cur;
        }
        Ok(n)
    }

    /// h(x) with a domain check.
    pub fn eval_h(&self, x: f64) -> Result<f64> {
        if x < self.x0 * (1.0 - 1e-15) {
            return Err(Error::Domain(format!("x = {x} below x0 = {}", self.x0)));
        }
        Ok(self.h(x))
    }

    /// floor(h(m)) for an integer m >= N0, certified.
    pub fn floor_h(&self, m: u64) -> Result<u64> {
        if m < self.n0 {
            return Err(Error::Domain(format!("m = {m} below N0 = {}", self.n0)));
        }
        self.floor_h_unchecked(m)
    }

    fn floor_h_unchecked(&self, m: u64) -> Result<u64> {
        if self.is_exact_power() {
            return Ok(floor_pow(m, self.exponent));
        }
        let v = self.h(m as f64);
        let tol = (v.abs() * 2f64.powi(-44)).max(2f64.powi(-40));
        if (v - v.round()).abs() > tol {
            return Ok(v.floor() as u64);
        }
        let mut bits = 128;
        while bits <= self.precision.max_bits {
            let mut hp = Hp::new(bits);
            let hv = self.h_hp(m, &mut hp);
            let (fl, gap) = floor_and_gap(&hv, &hp)
                .ok_or_else(|| Error::Certification { what: format!("h({m})"), bits })?;
            let bound = v.abs().max(1.0) * 2f64.powi(-(bits as i32) + 24);
            if gap > bound {
                return fl.to_u64().ok_or_else(|| Error::Domain(format!("h({m}) out of range")));
            }
            bits *= 2;
        }
        Err(Error::Certification { what: format!("floor(h({m}))"), bits: self.precision.max_bits })
    }

    /// h(m) in multiprecision.
    pub fn h_hp(&self, m: u64, hp: &mut Hp) -> astro_float::BigFloat {
        let x = hp.int(m as i64);
        let lx = hp.ln(&x);
        match self.factor {
            Factor::XLogX => hp.mul(&x, &lx),
            Factor::PurePower | Factor::LogPower { .. } => {
                let c = hp.ratio(self.exponent.p() as u64, self.exponent.q() as u64);
                let mut e = hp.mul(&c, &lx);
                if let Factor::LogPower { beta } = self.factor {
                    let llx = hp.ln(&lx);
                    let b = hp.f(beta);
                    e = hp.add(&e, &hp.mul(&b, &llx));
                }
                let pw = hp.exp(&e);
                let ch = hp.f(self.ch);
                hp.mul(&ch, &pw)
            }
        }
    }

    /// phi(y), the inverse of h.
    pub fn invert(&self, y: f64) -> Result<f64> {
        let y0 = self.h(self.x0);
        if !(y >= y0 * (1.0 - 1e-15)) {
            return Err(Error::Domain(format!("y = {y} below h(x0) = {y0}")));
        }
        if self.factor == Factor::PurePower {
            return Ok((y / self.ch).powf(self.exponent.gamma()));
        }
        let mut lo = self.x0;
        let mut hi = lo.max(1.0) * 2.0;
        while self.h(hi) < y {
            lo = hi;
            hi *= 2.0;
        }
        let eps = self.precision.eps_phi;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let r = self.h(x) - y;
            if r.abs() <= 0.25 * eps * y {
                return Ok(x);
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let step = r / self.h1(x);
            let nx = x - step;
            x = if nx > lo && nx < hi { nx } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * hi {
                break;
            }
        }
        let r = self.h(x) - y;
        if r.abs() <= eps * y {
            Ok(x)
        } else {
            Err(Error::NonConvergence(format!("inverse at y = {y}, residual {r}")))
        }
    }

    /// phi^(n)(y) for n in 1..=3.
    pub fn phi_deriv(&self, y: f64, n: u32) -> Result<f64> {
        if self.factor == Factor::PurePower {
            let g = self.exponent.gamma();
            let y0 = self.h(self.x0);
            if y < y0 * (1.0 - 1e-15) {
                return Err(Error::Domain(format!("y = {y} below h(x0) = {y0}")));
            }
            let k = self.ch.powf(-g);
            return match n {
                1 => Ok(k * g * y.powf(g - 1.0)),
                2 => Ok(k * g * (g - 1.0) * y.powf(g - 2.0)),
                3 => Ok(k * g * (g - 1.0) * (g - 2.0) * y.powf(g - 3.0)),
                _ => Err(Error::InvalidArgument(format!("derivative order {n} not in 1..=3"))),
            };
        }
        let x = self.invert(y)?;
        let (d1, d2, d3) = (self.h1(x), self.h2(x), self.h3(x));
        match n {
            1 => Ok(1.0 / d1),
            2 => Ok(-d2 / d1.powi(3)),
            3 => Ok((3.0 * d2 * d2 - d1 * d3) / d1.powi(5)),
            _ => Err(Error::InvalidArgument(format!("derivative order {n} not in 1..=3"))),
        }
    }

    /// phi'(y), no error path for y inside the domain.
    pub fn phi_prime(&self, y: f64) -> f64 {
        self.phi_deriv(y, 1).unwrap_or(f64::NAN)
    }

    /// Whether n = floor(h(m)) for some m >= N0. Tests the integers around
    /// phi(n) with exact floors.
    pub fn member(&self, n: u64) -> Result<bool> {
        let fl0 = self.floor_h(self.n0)?;
        if n < fl0 {
            return Ok(false);
        }
        let x = self.invert(n as f64)?;
        let m0 = x.ceil() as u64;
        for m in [m0.saturating_sub(1), m0, m0 + 1] {
            if m >= self.n0 && self.floor_h(m)? == n {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RegVarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factor {
            Factor::PurePower if self.ch == 1.0 => write!(f, "pow:c={}", self.exponent),
            Factor::PurePower => write!(f, "pow:c={},Ch={}", self.exponent, self.ch),
            Factor::LogPower { beta } => {
                write!(f, "logpow:c={},beta={},Ch={}", self.exponent, beta, self.ch)
            }
            Factor::XLogX => write!(f, "xlogx"),
        }
    }
}

impl FromStr for RegVarFunction {
    type Err = Error;

    /// Parses "pow:c=21/20", "logpow:c=3/2,beta=1,Ch=1" or "xlogx".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut c: Option<RationalExponent> = None;
        let mut beta: Option<f64> = None;
        let mut ch: Option<f64> = None;
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
            let num = |v: &str| {
                v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {v:?}")))
            };
            let dup = |k: &str| Error::Parse(format!("duplicate key {k:?}"));
            match k.trim() {
                "c" if c.is_none() => c = Some(v.parse()?),
                "beta" if beta.is_none() => beta = Some(num(v)?),
                "Ch" if ch.is_none() => ch = Some(num(v)?),
                "c" | "beta" | "Ch" => return Err(dup(k)),
                other => return Err(Error::Parse(format!("unknown key {other:?} in {s:?}"))),
            }
        }
        match kind {
            "pow" => {
                if beta.is_some() {
                    return Err(Error::Parse("pow takes no beta".into()));
                }
                let c = c.ok_or_else(|| Error::Parse("pow requires c".into()))?;
                Self::new(c, Factor::PurePower, ch.unwrap_or(1.0))
            }
            "logpow" => {
                let c = c.ok_or_else(|| Error::Parse("logpow requires c".into()))?;
                let beta = beta.ok_or_else(|| Error::Parse("logpow requires beta".into()))?;
                Self::new(c, Factor::LogPower { beta }, ch.unwrap_or(1.0))
            }
            "xlogx" => {
                if c.is_some() || beta.is_some() || ch.is_some() {
                    return Err(Error::Parse("xlogx takes no parameters".into()));
                }
                Self::new(RationalExponent::integer(1)?, Factor::XLogX, 1.0)
            }
            other => Err(Error::Parse(format!("unknown function kind {other:?}"))),
        }
    }
}
