use crate::error::{Error, Result};
use num_integer::Integer;
use std::fmt;
use std::str::FromStr;

/// The exponent c = p/q in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct RationalExponent {
    p: u32,
    q: u32,
}

impl RationalExponent {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("exponent denominator is zero".into()));
        }
        if p == 0 {
            return Err(Error::InvalidArgument("exponent must be positive".into()));
        }
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        if p > u32::MAX as u64 || q > u32::MAX as u64 {
            return Err(Error::InvalidArgument("exponent terms too large".into()));
        }
        Ok(RationalExponent { p: p as u32, q: q as u32 })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn c(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// gamma = 1/c = q/p.
    pub fn gamma(&self) -> f64 {
        self.q as f64 / self.p as f64
    }

    pub fn is_one(&self) -> bool {
        self.p == self.q
    }

    /// Whether 1 <= c < 2 (the range of the function class).
    pub fn in_class_range(&self) -> bool {
        self.p >= self.q && self.p < 2 * self.q
    }

    /// Whether 1 <= c <= 2 (counting also admits the Euclidean case).
    pub fn in_counting_range(&self) -> bool {
        self.p >= self.q && self.p <= 2 * self.q
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalExponent {
    type Err = Error;

    /// Accepts "p/q" or an integer; decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| -> Result<u64> {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("exponent must be \"p/q\" or an integer, got {s:?}")))
        };
        match s.split_once('/') {
            Some((a, b)) => Self::new(parse(a)?, parse(b)?),
            None => Self::new(parse(s)?, 1),
        }
    }
}
