//! Floating-point transforms: linear convolution and trigonometric grid
//! evaluation.

use num_complex::Complex64;
use rustfft::FftPlanner;

fn fft_len(n: usize) -> usize {
    n.next_power_of_two().max(2)
}

/// Linear convolution of two real sequences, truncated to `out_len` terms.
pub fn convolve(a: &[f64], b: &[f64], out_len: usize) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![0.0; out_len];
    }
    let full = a.len() + b.len() - 1;
    let n = fft_len(full);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    // Pack both real inputs into one complex transform.
    let mut buf: Vec<Complex64> = (0..n)
        .map(|i| {
            Complex64::new(
                a.get(i).copied().unwrap_or(0.0),
                b.get(i).copied().unwrap_or(0.0),
            )
        })
        .collect();
    fwd.process(&mut buf);
    let mut prod = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let z = buf[k];
        let zc = buf[(n - k) % n].conj();
        let fa = (z + zc) * 0.5;
        let fb = (z - zc) * Complex64::new(0.0, -0.5);
        prod[k] = fa * fb;
    }
    inv.process(&mut prod);
    let scale = 1.0 / n as f64;
    (0..out_len)
        .map(|i| if i < full { prod[i].re * scale } else { 0.0 })
        .collect()
}

/// Values of S(t_j) = sum_n coeffs[n] e(n t_j) at t_j = -1/2 + j/m, j = 0..=m.
/// Requires coeffs.len() <= m.
pub fn trig_grid(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    assert!(coeffs.len() <= m, "grid resolution below the sum length");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, c) in coeffs.iter().enumerate() {
        buf[n] = if n % 2 == 0 { *c } else { -*c };
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(m).process(&mut buf);
    let mut out = buf;
    out.push(out[0]);
    out
}

/// Unnormalized inverse DFT of length m: out[j] = sum_k x[k] e(jk/m).
pub fn inverse_dft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::phase::e_mul;

    #[test]
    fn convolution_matches_direct() {
        let a = [1.0, 2.0, 0.0, 3.0];
        let b = [0.5, -1.0, 4.0];
        let c = convolve(&a, &b, 6);
        let mut d = vec![0.0; 6];
        for i in 0..4 {
            for j in 0..3 {
                d[i + j] += a[i] * b[j];
            }
        }
        for k in 0..6 {
            assert!((c[k] - d[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn trig_grid_matches_direct_sum() {
        let coeffs: Vec<Complex64> =
            (0..13).map(|n| Complex64::new(1.0 / (1.0 + n as f64), 0.3)).collect();
        let m = 40;
        let g = trig_grid(&coeffs, m);
        for j in [0usize, 7, 20, 33, 40] {
            let t = -0.5 + j as f64 / m as f64;
            let direct: Complex64 =
                coeffs.iter().enumerate().map(|(n, c)| c * e_mul(n as i64, t)).sum();
            assert!((g[j] - direct).norm() < 1e-12);
        }
    }
}
