use super::convolve::{convolve_counts, convolve_counts_exact};
use super::table::{CountTable, Domain, Method};
use crate::error::{Error, Result};
use crate::regvar::{FloorSet, RationalExponent, RegVarFunction};

/// How a table is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Enum,
    /// Floating FFT; falls back to the exact transform on a margin violation
    /// when `fallback` is set, fails otherwise.
    Fft { fallback: bool },
    Ntt,
}

impl CountMethod {
    pub fn fft() -> Self {
        CountMethod::Fft { fallback: true }
    }
}

fn meta(hs: &[&RegVarFunction]) -> (Vec<String>, Vec<u64>) {
    (hs.iter().map(|h| h.descriptor()).collect(), hs.iter().map(|h| h.n0()).collect())
}

fn sets(hs: &[&RegVarFunction], horizon: u64) -> Result<Vec<FloorSet>> {
    hs.iter().map(|h| h.floor_set(horizon)).collect()
}

/// Counts of (n_1, .., n_k) in N_{h_1} x .. x N_{h_k} with sum lambda, for
/// lambda = 0..=horizon, k = hs.len() in 1..=3.
pub fn count_positive_range(
    hs: &[&RegVarFunction],
    horizon: u64,
    method: CountMethod,
) -> Result<CountTable> {
    if hs.is_empty() || hs.len() > 3 {
        return Err(Error::InvalidArgument("between one and three functions required".into()));
    }
    let max_first = hs.iter().map(|h| h.floor_h(h.n0())).collect::<Result<Vec<_>>>()?;
    let need = hs.len() as u64 * max_first.into_iter().max().unwrap_or(1);
    if horizon < need {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} below {need} (arity times the largest first floor)"
        )));
    }
    let fs = sets(hs, horizon)?;
    let len = horizon as usize + 1;
    let (functions, n0) = meta(hs);
    let (counts, tag) = match method {
        CountMethod::Enum => (enumerate(&fs, horizon), Method::Enum),
        CountMethod::Fft { fallback } => {
            let mut acc = fs[0].indicator();
            let mut tag = Method::Fft;
            for f in &fs[1..] {
                let (c, t) = convolve_counts(&acc, &f.indicator(), len, fallback)?;
                if t == Method::Ntt {
                    tag = Method::Ntt;
                }
                acc = c;
            }
            (acc, tag)
        }
        CountMethod::Ntt => {
            let mut acc = fs[0].indicator();
            for f in &fs[1..] {
                acc = convolve_counts_exact(&acc, &f.indicator(), len)?;
            }
            (acc, Method::Ntt)
        }
    };
    Ok(CountTable {
        horizon,
        counts,
        method: tag,
        domain: Domain::Positive,
        functions,
        n0,
        arity: hs.len(),
    })
}

fn enumerate(fs: &[FloorSet], horizon: u64) -> Vec<u64> {
    let mut counts = vec![0u64; horizon as usize + 1];
    match fs.len() {
        1 => {
            for &n in fs[0].elements() {
                counts[n as usize] += 1;
            }
        }
        2 => {
            for &n1 in fs[0].elements() {
                for &n2 in fs[1].elements() {
                    let s = n1 + n2;
                    if s > horizon {
                        break;
                    }
                    counts[s as usize] += 1;
                }
            }
        }
        _ => {
            for &n1 in fs[0].elements() {
                for &n2 in fs[1].elements() {
                    let s2 = n1 + n2;
                    if s2 > horizon {
                        break;
                    }
                    for &n3 in fs[2].elements() {
                        let s = s2 + n3;
                        if s > horizon {
                            break;
                        }
                        counts[s as usize] += 1;
                    }
                }
            }
        }
    }
    counts
}

/// Single count at lambda by looping n_1, n_2 and testing membership of the
/// remainder.
pub fn count_positive_at(hs: [&RegVarFunction; 3], lambda: u64) -> Result<u64> {
    let f1 = hs[0].floor_set(lambda.max(hs[0].floor_h(hs[0].n0())?))?;
    let f2 = hs[1].floor_set(lambda.max(hs[1].floor_h(hs[1].n0())?))?;
    let mut count = 0;
    for &n1 in f1.elements() {
        for &n2 in f2.elements() {
            if n1 + n2 >= lambda {
                break;
            }
            if hs[2].member(lambda - n1 - n2)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Z^3 counts r_c from the positive tables of 1, 2 and 3 variables:
/// r = 8 r3 + 12 r2 + 6 r1 + [lambda = 0].
pub fn decompose_signs(p1: &CountTable, p2: &CountTable, p3: &CountTable) -> Result<CountTable> {
    let horizon = p1.horizon;
    if p2.horizon != horizon || p3.horizon != horizon {
        return Err(Error::InvalidArgument("tables must share the horizon".into()));
    }
    if (p1.arity, p2.arity, p3.arity) != (1, 2, 3) {
        return Err(Error::InvalidArgument("expected tables of arity 1, 2 and 3".into()));
    }
    let counts = (0..=horizon as usize)
        .map(|l| 8 * p3.counts[l] + 12 * p2.counts[l] + 6 * p1.counts[l] + (l == 0) as u64)
        .collect();
    let method = if p3.method == Method::Ntt || p2.method == Method::Ntt {
        Method::Ntt
    } else {
        p3.method
    };
    Ok(CountTable {
        horizon,
        counts,
        method,
        domain: Domain::Z3,
        functions: p3.functions.clone(),
        n0: p3.n0.clone(),
        arity: 3,
    })
}

/// r_c(lambda) for lambda = 0..=horizon.
pub fn sphere_counts(c: RationalExponent, horizon: u64, method: CountMethod) -> Result<CountTable> {
    if horizon < 1 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let h = RegVarFunction::pure_power(c)?;
    let t1 = count_positive_range(&[&h], horizon, method)?;
    let t2 = if horizon >= 2 {
        count_positive_range(&[&h, &h], horizon, method)?
    } else {
        CountTable { counts: vec![0; horizon as usize + 1], arity: 2, ..t1.clone() }
    };
    let t3 = if horizon >= 3 {
        count_positive_range(&[&h, &h, &h], horizon, method)?
    } else {
        CountTable { counts: vec![0; horizon as usize + 1], arity: 3, ..t1.clone() }
    };
    decompose_signs(&t1, &t2, &t3)
}
