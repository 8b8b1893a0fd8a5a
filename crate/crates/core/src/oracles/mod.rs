//! Naive reference computations. Nothing here reuses the production
//! counting, enumeration or quadrature code: floors come from a bisection on
//! exact big-integer powers and all counts from plain loops.

use crate::error::{Error, Result};
use crate::numeric::hp::{to_f64, Hp};
use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    BruteTripleLoop,
    ClosedForm,
    HighPrecision,
}

#[derive(Debug, Clone)]
pub struct OracleResult<T> {
    pub value: T,
    pub method: OracleMethod,
    /// Loop iterations or working precision, depending on the method.
    pub cost: u64,
}

/// Largest exponent horizon accepted by the brute loops.
pub const MAX_BRUTE_LAMBDA: u64 = 20_000;

/// floor(m^(p/q)) by bisection on k with k^q <= m^p.
pub fn naive_floor_pow(m: u64, p: u32, q: u32) -> u64 {
    let target = BigUint::from(m).pow(p);
    let mut lo: u64 = 0;
    let mut hi: u64 = 1;
    while BigUint::from(hi).pow(q) <= target {
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(q) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn floors_up_to(lambda: u64, p: u32, q: u32) -> Vec<u64> {
    let mut v = Vec::new();
    let mut x = 0;
    loop {
        let f = naive_floor_pow(x, p, q);
        if f > lambda {
            break;
        }
        v.push(f);
        x += 1;
    }
    v
}

fn guard(lambda: u64) -> Result<()> {
    if lambda > MAX_BRUTE_LAMBDA {
        return Err(Error::Horizon(format!("lambda = {lambda} above {MAX_BRUTE_LAMBDA}")));
    }
    Ok(())
}

fn sign_count(x: u64) -> u64 {
    if x == 0 {
        1
    } else {
        2
    }
}

/// #{x in Z^3 : floor|x1|^c + floor|x2|^c + floor|x3|^c = lambda}, c = p/q.
pub fn brute_count(p: u32, q: u32, lambda: u64) -> Result<OracleResult<u64>> {
    let t = brute_count_table(p, q, lambda)?;
    Ok(OracleResult { value: t.value[lambda as usize], method: t.method, cost: t.cost })
}

/// r_c(lambda) for every lambda <= horizon from one pass over the box.
pub fn brute_count_table(p: u32, q: u32, horizon: u64) -> Result<OracleResult<Vec<u64>>> {
    guard(horizon)?;
    let fl = floors_up_to(horizon, p, q);
    let mut counts = vec![0u64; horizon as usize + 1];
    let mut cost = 0u64;
    for (x1, &a) in fl.iter().enumerate() {
        for (x2, &b) in fl.iter().enumerate() {
            if a + b > horizon {
                break;
            }
            for (x3, &c) in fl.iter().enumerate() {
                cost += 1;
                let s = a + b + c;
                if s > horizon {
                    break;
                }
                counts[s as usize] +=
                    sign_count(x1 as u64) * sign_count(x2 as u64) * sign_count(x3 as u64);
            }
        }
    }
    Ok(OracleResult { value: counts, method: OracleMethod::BruteTripleLoop, cost })
}

/// All lattice points of the sphere at lambda.
pub fn brute_cloud(p: u32, q: u32, lambda: u64) -> Result<OracleResult<Vec<[i64; 3]>>> {
    guard(lambda)?;
    let fl = floors_up_to(lambda, p, q);
    let r = fl.len() as i64 - 1;
    let mut pts = Vec::new();
    let mut cost = 0;
    for x1 in -r..=r {
        for x2 in -r..=r {
            for x3 in -r..=r {
                cost += 1;
                let s = fl[x1.unsigned_abs() as usize]
                    + fl[x2.unsigned_abs() as usize]
                    + fl[x3.unsigned_abs() as usize];
                if s == lambda {
                    pts.push([x1, x2, x3]);
                }
            }
        }
    }
    Ok(OracleResult { value: pts, method: OracleMethod::BruteTripleLoop, cost })
}

/// Discrepancy scan of the projected cloud in direction xi.
#[derive(Debug, Clone)]
pub struct BruteDiscrepancy {
    /// Sorted positive jump points a of a -> #{x : x.xi >= a}.
    pub jumps: Vec<f64>,
    /// counts[i] = #{x : x.xi >= jumps[i]}.
    pub counts: Vec<u64>,
    pub r: u64,
    /// sup over a > 0 of |count - r nu(a)|, attained at a jump point, just
    /// above one, or as a -> 0+ (reported as argmax 0).
    pub sup: f64,
    pub argmax: f64,
}

/// Counting term by recounting the whole cloud at every jump point; the
/// measure term nu(a) is supplied by the caller.
pub fn brute_discrepancy(
    p: u32,
    q: u32,
    lambda: u64,
    xi: [f64; 3],
    nu: &dyn Fn(f64) -> f64,
) -> Result<OracleResult<BruteDiscrepancy>> {
    let cloud = brute_cloud(p, q, lambda)?.value;
    let scale = (lambda as f64).powf(-(q as f64) / p as f64);
    let proj: Vec<f64> = cloud
        .iter()
        .map(|x| (x[0] as f64 * xi[0] + x[1] as f64 * xi[1] + x[2] as f64 * xi[2]) * scale)
        .collect();
    let mut jumps: Vec<f64> = proj.iter().copied().filter(|v| *v > 0.0).collect();
    jumps.sort_by(f64::total_cmp);
    jumps.dedup();
    let r = cloud.len() as u64;
    let mut counts = Vec::with_capacity(jumps.len());
    let mut sup = 0.0;
    let mut argmax = 0.0;
    let mut cost = 0;
    for &a in &jumps {
        let n = proj.iter().filter(|v| **v >= a).count() as u64;
        let strict = proj.iter().filter(|v| **v > a).count() as u64;
        cost += 2 * proj.len() as u64;
        counts.push(n);
        let m = r as f64 * nu(a);
        for d in [(n as f64 - m).abs(), (strict as f64 - m).abs()] {
            if d > sup {
                sup = d;
                argmax = a;
            }
        }
    }
    // thresholds a in (0, smallest jump]
    let positive = proj.iter().filter(|v| **v > 0.0).count() as u64;
    let d = (positive as f64 - r as f64 * nu(0.0)).abs();
    if d > sup {
        sup = d;
        argmax = 0.0;
    }
    Ok(OracleResult {
        value: BruteDiscrepancy { jumps, counts, r, sup, argmax },
        method: OracleMethod::BruteTripleLoop,
        cost,
    })
}

/// Fourier transform of the Euclidean unit sphere's surface measure at
/// radius R: 2 sin(2 pi R) / R.
pub fn classical_sphere_ft(r: f64) -> OracleResult<f64> {
    let v = if r == 0.0 {
        4.0 * std::f64::consts::PI
    } else {
        2.0 * (2.0 * std::f64::consts::PI * r).sin() / r
    };
    OracleResult { value: v, method: OracleMethod::ClosedForm, cost: 0 }
}

/// Mean of exp(-|y|^2) over the Euclidean sphere |y - x| = t with respect
/// to surface measure (not normalized):
/// 4 pi exp(-|x|^2 - t^2) sinh(2 t |x|) / (2 t |x|).
pub fn gaussian_sphere_mean(x_norm: f64, t: f64) -> OracleResult<f64> {
    let z = 2.0 * t * x_norm;
    let shape = if z == 0.0 { 1.0 } else { z.sinh() / z };
    let v = 4.0 * std::f64::consts::PI * (-x_norm * x_norm - t * t).exp() * shape;
    OracleResult { value: v, method: OracleMethod::ClosedForm, cost: 0 }
}

/// V^r by trying every index subset of size >= 2 (n <= 20).
pub fn brute_variation(a: &[f64], r: f64) -> Result<OracleResult<f64>> {
    if a.len() > 20 {
        return Err(Error::Horizon("brute variation is limited to 20 terms".into()));
    }
    let n = a.len();
    let mut best = 0.0f64;
    let mut cost = 0;
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let s: f64 = idx.windows(2).map(|w| (a[w[1]] - a[w[0]]).abs().powf(r)).sum();
        cost += idx.len() as u64;
        best = best.max(s);
    }
    Ok(OracleResult { value: best.powf(1.0 / r), method: OracleMethod::BruteTripleLoop, cost })
}

fn bernoulli_even(count: usize) -> Vec<BigRational> {
    // B_0..B_{2 count} by the recurrence sum_{k<=n} C(n+1, k) B_k = 0.
    let n_max = 2 * count;
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for n in 1..=n_max {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
    }
    (1..=count).map(|k| b[2 * k].clone()).collect()
}

fn rat_to_bf(r: &BigRational, hp: &Hp) -> BigFloat {
    let num = hp.big(&r.numer().abs().to_biguint().unwrap());
    let den = hp.big(&r.denom().to_biguint().unwrap());
    let v = hp.div(&num, &den);
    if r.is_negative() {
        v.neg()
    } else {
        v
    }
}

/// Gamma(x) for x > 0 at `bits` of precision, by Stirling's series after
/// shifting the argument upward.
pub fn gamma_hp(x: f64, bits: usize) -> Result<OracleResult<BigFloat>> {
    if !(x > 0.0) {
        return Err(Error::Domain("gamma_hp needs x > 0".into()));
    }
    let mut hp = Hp::new(bits + 64);
    let shift = (bits as f64 * 0.25).ceil() as i64 + 20;
    let terms = (bits / 6).max(20);
    let xb = hp.f(x);
    let z = hp.add(&xb, &hp.int(shift));
    let lnz = hp.ln(&z);
    let half = hp.ratio(1, 2);
    let mut s = hp.mul(&hp.sub(&z, &half), &lnz);
    s = hp.sub(&s, &z);
    let pi = hp.pi();
    let two_pi = hp.mul(&hp.int(2), &pi);
    let l2p = hp.ln(&two_pi);
    s = hp.add(&s, &hp.mul(&half, &l2p));
    let zinv = hp.div(&hp.int(1), &z);
    let z2inv = hp.mul(&zinv, &zinv);
    let mut zpow = zinv.clone();
    for (k, b) in bernoulli_even(terms).iter().enumerate() {
        let kk = (k + 1) as i64;
        let coef = rat_to_bf(b, &hp);
        let den = hp.int(2 * kk * (2 * kk - 1));
        s = hp.add(&s, &hp.mul(&hp.div(&coef, &den), &zpow));
        zpow = hp.mul(&zpow, &z2inv);
    }
    let mut g = hp.exp(&s);
    for i in 0..shift {
        let xi = hp.add(&xb, &hp.int(i));
        g = hp.div(&g, &xi);
    }
    Ok(OracleResult { value: g, method: OracleMethod::HighPrecision, cost: bits as u64 })
}

/// Gamma(x) rounded to f64 from the multiprecision value.
pub fn gamma_hp_f64(x: f64) -> f64 {
    to_f64(&gamma_hp(x, 256).expect("positive argument").value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_examples() {
        assert_eq!(brute_count(2, 1, 4).unwrap().value, 6);
        assert_eq!(brute_count(21, 20, 0).unwrap().value, 1);
        assert_eq!(brute_count(2, 1, 7).unwrap().value, 0);
        assert_eq!(brute_cloud(2, 1, 1).unwrap().value.len(), 6);
        assert!(brute_count(21, 20, MAX_BRUTE_LAMBDA + 1).is_err());
    }

    #[test]
    fn gamma_half_squared_is_pi() {
        let mut hp = Hp::new(320);
        let g = gamma_hp(0.5, 256).unwrap().value;
        let g2 = hp.mul(&g, &g);
        let pi = hp.pi();
        let diff = hp.sub(&g2, &pi);
        assert!(to_f64(&diff).abs() < 1e-20);
        assert!((gamma_hp_f64(5.0) - 24.0).abs() < 1e-13);
    }

    #[test]
    fn oracle_has_no_production_dependencies() {
        let src = include_str!("mod.rs");
        for banned in ["crate::counting", "crate::surface", "crate::regvar", "crate::equidist", "crate::averages", "crate::expsums", "numeric::fft", "numeric::ntt", "numeric::gl"] {
            let needle = format!("use {banned}");
            assert!(!src.contains(&needle), "oracle imports {banned}");
        }
    }
}
