use crate::error::{Error, Result};
use crate::regvar::{floor_pow_table, RationalExponent};

/// Floor tables for enumerating lattice points of the c-spheres up to a
/// horizon: q[x] = floor(x^c) for x >= 0 and the inverse table.
#[derive(Debug, Clone)]
pub struct SphereLattice {
    c: RationalExponent,
    horizon: u64,
    q: Vec<u64>,
    inv: Vec<i32>,
}

impl SphereLattice {
    pub fn new(c: RationalExponent, horizon: u64) -> Result<Self> {
        if !c.in_counting_range() {
            return Err(Error::InvalidArgument(format!("exponent {c} outside [1, 2]")));
        }
        if horizon > i32::MAX as u64 {
            return Err(Error::InvalidArgument("horizon too large".into()));
        }
        // x^c <= horizon + 1 gives x <= (horizon + 1)^(1/c)
        let xmax = ((horizon + 1) as f64).powf(c.gamma()).ceil() as u64 + 1;
        let mut q = floor_pow_table(xmax, c);
        while q.last().is_some_and(|&v| v > horizon) {
            q.pop();
        }
        let mut inv = vec![-1i32; horizon as usize + 1];
        for (x, &v) in q.iter().enumerate() {
            inv[v as usize] = x as i32;
        }
        Ok(SphereLattice { c, horizon, q, inv })
    }

    pub fn exponent(&self) -> RationalExponent {
        self.c
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// floor(|x|^c) for |x| <= xmax.
    pub fn floor_of(&self, x: i64) -> Option<u64> {
        self.q.get(x.unsigned_abs() as usize).copied()
    }

    /// floor(x^c) for x = 0..=xmax.
    pub fn floors(&self) -> &[u64] {
        &self.q
    }

    /// The nonnegative x with floor(x^c) = v, if any.
    pub fn preimage(&self, v: u64) -> Option<u64> {
        match self.inv.get(v as usize) {
            Some(&x) if x >= 0 => Some(x as u64),
            _ => None,
        }
    }

    /// Visits every x in Z_{>=0}^3 with Q(x) = lambda.
    pub fn for_each_nonneg<F: FnMut(u64, u64, u64)>(&self, lambda: u64, mut f: F) {
        assert!(lambda <= self.horizon, "lambda beyond the lattice horizon");
        for (x1, &q1) in self.q.iter().enumerate() {
            if q1 > lambda {
                break;
            }
            let rest = lambda - q1;
            for (x2, &q2) in self.q.iter().enumerate() {
                if q2 > rest {
                    break;
                }
                let x3 = self.inv[(rest - q2) as usize];
                if x3 >= 0 {
                    f(x1 as u64, x2 as u64, x3 as u64);
                }
            }
        }
    }

    /// Visits every x in Z^3 with Q(x) = lambda, all sign choices included.
    pub fn for_each_point<F: FnMut([i64; 3])>(&self, lambda: u64, mut f: F) {
        self.for_each_nonneg(lambda, |a, b, c| {
            let (a, b, c) = (a as i64, b as i64, c as i64);
            for sa in signs(a) {
                for sb in signs(b) {
                    for sc in signs(c) {
                        f([sa * a, sb * b, sc * c]);
                    }
                }
            }
        });
    }

    pub fn points(&self, lambda: u64) -> Vec<[i64; 3]> {
        let mut v = Vec::new();
        self.for_each_point(lambda, |x| v.push(x));
        v
    }

    /// r_c(lambda) by enumeration.
    pub fn count(&self, lambda: u64) -> u64 {
        let mut r = 0;
        self.for_each_nonneg(lambda, |a, b, c| r += multiplicity(a, b, c));
        r
    }
}

/// Number of sign patterns of a nonnegative triple.
#[inline]
pub fn multiplicity(a: u64, b: u64, c: u64) -> u64 {
    1 << ((a != 0) as u32 + (b != 0) as u32 + (c != 0) as u32)
}

#[inline]
fn signs(v: i64) -> &'static [i64] {
    if v == 0 {
        &[1]
    } else {
        &[1, -1]
    }
}
