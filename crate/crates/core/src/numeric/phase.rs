//! Phases e(x) = exp(2 pi i x) with careful reduction modulo one.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Reduces `x` to the representative in [-1/2, 1/2).
#[inline]
pub fn reduce(x: f64) -> f64 {
    let r = x - x.round();
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// n*t modulo one, keeping the rounding error of the product (two-product via FMA).
#[inline]
pub fn frac_mul(n: i64, t: f64) -> f64 {
    let nf = n as f64;
    let p = nf * t;
    let err = nf.mul_add(t, -p);
    reduce(reduce(p) + err)
}

#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * reduce(x)).sin_cos();
    Complex64::new(c, s)
}

/// e(n t) for an integer n.
#[inline]
pub fn e_mul(n: i64, t: f64) -> Complex64 {
    let (s, c) = (TAU * frac_mul(n, t)).sin_cos();
    Complex64::new(c, s)
}

/// Distance to the nearest integer.
#[inline]
pub fn dist_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_mul_handles_large_products() {
        let t = 1.0 / 3.0;
        let n: i64 = 3_000_000_001;
        // t = m / 2^54 exactly; reduce n*m modulo 2^54 in integers.
        let m = (t * (1u64 << 54) as f64) as u128;
        let exact = ((n as u128 * m) % (1u128 << 54)) as f64 / (1u64 << 54) as f64;
        let f = frac_mul(n, t);
        assert!((reduce(f - exact)).abs() < 1e-15);
        assert_eq!(reduce(0.5), -0.5);
        assert!((e(0.25) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
