use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Enumeration of triples.
    Enum,
    /// Floating FFT convolution with a certified rounding margin.
    Fft,
    /// Exact number-theoretic transform.
    Ntt,
    /// Naive reference loop.
    Brute,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Enum => "enum",
            Method::Fft => "fft",
            Method::Ntt => "ntt",
            Method::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Triples of elements of N_h (all coordinates positive).
    Positive,
    /// Lattice points of Z^3 with zero coordinates and signs.
    Z3,
}

/// Representation counts r(lambda) for lambda = 0..=horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountTable {
    pub horizon: u64,
    pub counts: Vec<u64>,
    pub method: Method,
    pub domain: Domain,
    /// Function descriptors of the coordinates, e.g. "pow:c=21/20".
    pub functions: Vec<String>,
    /// N0 per coordinate function.
    pub n0: Vec<u64>,
    /// Number of variables summed (1, 2 or 3).
    pub arity: usize,
}

impl CountTable {
    pub fn get(&self, lambda: u64) -> Option<u64> {
        self.counts.get(lambda as usize).copied()
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Same counts, ignoring provenance.
    pub fn same_counts(&self, other: &CountTable) -> bool {
        self.counts == other.counts
    }
}
