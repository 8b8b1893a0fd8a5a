//! Multiprecision helpers over astro-float.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision in bits plus the constant cache.
pub struct Hp {
    pub p: usize,
    pub cc: Consts,
}

impl Hp {
    pub fn new(p: usize) -> Self {
        Hp { p, cc: Consts::new().expect("astro-float constant cache") }
    }

    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn big(&self, n: &BigUint) -> BigFloat {
        let digits = n.to_u64_digits();
        if digits.is_empty() {
            return self.int(0);
        }
        let e = (digits.len() * 64) as i32;
        BigFloat::from_words(&digits, Sign::Pos, e).add(&self.int(0), self.p, RM)
    }

    pub fn ratio(&self, p: u64, q: u64) -> BigFloat {
        self.int(p as i64).div(&self.int(q as i64), self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn pow(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.pow(b, self.p, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }
}

/// Nearest f64 (truncated to the top 128 mantissa bits first).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((words, _, sign, e, _)) => {
            let n = words.len();
            let top = words[n - 1] as f64;
            let next = if n >= 2 { words[n - 2] as f64 } else { 0.0 };
            let m = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
            let v = m * 2f64.powi(e);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

/// Exact integer value of an integral BigFloat.
pub fn to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::from(0));
    }
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let mag = BigUint::new(
        words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect(),
    );
    let total = (words.len() * 64) as i64;
    let shift = total - e as i64;
    let v = if shift >= 0 { mag >> (shift as usize) } else { mag << ((-shift) as usize) };
    let v = BigInt::from(v);
    Some(if sign == Sign::Neg { -v } else { v })
}

/// Floor of x together with the distance from x to the nearest integer.
pub fn floor_and_gap(x: &BigFloat, hp: &Hp) -> Option<(BigInt, f64)> {
    let fl = x.floor();
    let frac = hp.sub(x, &fl);
    let f = to_f64(&frac);
    Some((to_bigint(&fl)?, f.min(1.0 - f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        let hp = Hp::new(256);
        let x = hp.f(1234.5678);
        assert_eq!(to_f64(&x), 1234.5678);
        assert_eq!(to_bigint(&x.floor()).unwrap(), BigInt::from(1234));
        let y = hp.f(-7.25);
        assert_eq!(to_bigint(&y.floor()).unwrap(), BigInt::from(-8));
        let big = BigUint::from(3u32).pow(100);
        assert_eq!(to_bigint(&hp.big(&big)).unwrap(), BigInt::from(big));
    }

    #[test]
    fn transcendental_values() {
        let mut hp = Hp::new(256);
        let two = hp.int(2);
        let l = hp.ln(&two);
        assert!((to_f64(&l) - std::f64::consts::LN_2).abs() < 1e-16);
        let pi = hp.pi();
        assert!((to_f64(&pi) - std::f64::consts::PI).abs() < 1e-15);
    }
}
