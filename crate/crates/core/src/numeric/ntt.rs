//! Exact integer convolution by number-theoretic transforms over three
//! NTT-friendly primes, recombined with the Chinese remainder theorem.

const PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const ROOT: u64 = 3;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool, p: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut ws = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            ws.push(cur);
            cur = cur * w % p;
        }
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * ws[k] % p;
                a[start + k] = if u + v >= p { u + v - p } else { u + v };
                a[start + k + half] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * ninv % p;
        }
    }
}

fn convolve_mod(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    for (i, x) in a.iter().enumerate() {
        fa[i] = x % p;
    }
    for (i, x) in b.iter().enumerate() {
        fb[i] = x % p;
    }
    ntt(&mut fa, false, p);
    ntt(&mut fb, false, p);
    for i in 0..n {
        fa[i] = fa[i] * fb[i] % p;
    }
    ntt(&mut fa, true, p);
    fa
}

/// Exact linear convolution, truncated to `out_len`. Every true output must be
/// below the product of the three primes (about 7.8e25).
pub fn convolve_exact(a: &[u64], b: &[u64], out_len: usize) -> Vec<u128> {
    if a.is_empty() || b.is_empty() {
        return vec![0; out_len];
    }
    let full = a.len() + b.len() - 1;
    let n = full.next_power_of_two().max(2);
    assert!(n <= 1 << 23, "transform length exceeds the prime capacity");
    let r: Vec<Vec<u64>> = PRIMES.iter().map(|&p| convolve_mod(a, b, n, p)).collect();
    let (p0, p1, p2) = (PRIMES[0] as u128, PRIMES[1] as u128, PRIMES[2] as u128);
    let inv01 = pow_mod(PRIMES[0] % PRIMES[1], PRIMES[1] - 2, PRIMES[1]) as u128;
    let p01_mod2 = (p0 * p1) % p2;
    let inv012 = pow_mod(p01_mod2 as u64, PRIMES[2] - 2, PRIMES[2]) as u128;
    (0..out_len)
        .map(|i| {
            if i >= full {
                return 0;
            }
            let (x0, x1, x2) = (r[0][i] as u128, r[1][i] as u128, r[2][i] as u128);
            let t1 = ((x1 + p1 - x0 % p1) % p1) * inv01 % p1;
            let v01 = x0 + p0 * t1;
            let t2 = ((x2 + p2 - v01 % p2) % p2) * inv012 % p2;
            v01 + p0 * p1 * t2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_convolution_of_large_values() {
        let a: Vec<u64> = (0..300).map(|i| 1_000_000_007 + i).collect();
        let b: Vec<u64> = (0..200).map(|i| 3_000_000_000 + 7 * i).collect();
        let c = convolve_exact(&a, &b, 499);
        for k in [0usize, 1, 150, 250, 498] {
            let mut s: u128 = 0;
            for i in 0..300 {
                if k >= i && k - i < 200 {
                    s += a[i] as u128 * b[k - i] as u128;
                }
            }
            assert_eq!(c[k], s);
        }
    }
}
