//! Exact floor powers: floor(m^c) is the integer q-th root of m^p.

use super::exponent::RationalExponent;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// floor(m^(p/q)): the unique k with k^q <= m^p < (k+1)^q.
///
/// A floating estimate seeds the search; the answer is settled by exact
/// big-integer comparisons, with the library integer root as the fallback
/// when the seed is far off.
pub fn floor_pow(m: u64, c: RationalExponent) -> u64 {
    let (p, q) = (c.p(), c.q());
    if m <= 1 || q == 1 {
        return if q == 1 { m.checked_pow(p).expect("floor power exceeds u64") } else { m };
    }
    let target = BigUint::from(m).pow(p);
    let guess = (m as f64).powf(c.c()).floor();
    let root = |k: u64| BigUint::from(k).pow(q);
    if guess.is_finite() && guess >= 0.0 && guess < 1.8e19 {
        let mut k = guess as u64;
        for _ in 0..4 {
            let lo = root(k);
            if lo > target {
                k -= 1;
                continue;
            }
            if root(k + 1) > target {
                return k;
            }
            k += 1;
        }
    }
    floor_pow_big(&BigUint::from(m), c).to_u64().expect("floor power exceeds u64")
}

/// floor(m^(p/q)) for arbitrary m via the integer q-th root of m^p.
pub fn floor_pow_big(m: &BigUint, c: RationalExponent) -> BigUint {
    let t = m.pow(c.p());
    if c.q() == 1 {
        t
    } else {
        t.nth_root(c.q())
    }
}

/// ceil(n^(q/p)): the least integer x with x^p >= n^q, i.e. the least x with
/// floor(x^c) >= n.
pub fn ceil_root(n: u64, c: RationalExponent) -> u64 {
    if n == 0 {
        return 0;
    }
    let t = BigUint::from(n).pow(c.q());
    let k = t.nth_root(c.p());
    if k.pow(c.p()) == t {
        k.to_u64().unwrap()
    } else {
        (k + BigUint::one()).to_u64().unwrap()
    }
}

/// floor(x^c) for x = 0..=xmax.
pub fn floor_pow_table(xmax: u64, c: RationalExponent) -> Vec<u64> {
    use rayon::prelude::*;
    (0..=xmax).into_par_iter().map(|x| floor_pow(x, c)).collect()
}
