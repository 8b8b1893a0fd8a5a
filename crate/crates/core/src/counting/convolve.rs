use super::table::Method;
use crate::error::{Error, Result};
use crate::numeric::{fft, ntt};

pub const MARGIN: f64 = 0.25;

/// Exact linear convolution of nonnegative integer sequences, truncated to
/// `out_len`. The floating transform is accepted only if every output lies
/// within MARGIN of an integer; otherwise the exact transform is used when
/// `fallback` is set, and an error is returned when it is not.
pub fn convolve_counts(
    a: &[u64],
    b: &[u64],
    out_len: usize,
    fallback: bool,
) -> Result<(Vec<u64>, Method)> {
    let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let bf: Vec<f64> = b.iter().map(|&x| x as f64).collect();
    let raw = fft::convolve(&af, &bf, out_len);
    let mut out = Vec::with_capacity(out_len);
    let mut violation = None;
    for (i, &v) in raw.iter().enumerate() {
        let r = v.round();
        if (v - r).abs() > MARGIN || r < 0.0 || r >= 9.0e15 {
            violation = Some(Error::MarginViolation { index: i, value: v, margin: MARGIN });
            break;
        }
        out.push(r as u64);
    }
    match violation {
        None => Ok((out, Method::Fft)),
        Some(e) if !fallback => Err(e),
        Some(_) => {
            let exact = ntt::convolve_exact(a, b, out_len);
            let out = exact
                .into_iter()
                .map(|v| u64::try_from(v).map_err(|_| Error::Domain("count exceeds u64".into())))
                .collect::<Result<Vec<u64>>>()?;
            Ok((out, Method::Ntt))
        }
    }
}

/// Exact convolution by the number-theoretic transform only.
pub fn convolve_counts_exact(a: &[u64], b: &[u64], out_len: usize) -> Result<Vec<u64>> {
    ntt::convolve_exact(a, b, out_len)
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| Error::Domain("count exceeds u64".into())))
        .collect()
}
