use super::function::RegVarFunction;
use crate::error::{Error, Result};
use bitvec::vec::BitVec;

/// The floor values {floor(h(m)) : m >= N0} up to a horizon, as a sorted list
/// and a membership bitmap over [0, horizon].
#[derive(Debug, Clone)]
pub struct FloorSet {
    horizon: u64,
    n0: u64,
    bits: BitVec,
    elements: Vec<u64>,
}

impl FloorSet {
    pub fn build(h: &RegVarFunction, horizon: u64) -> Result<Self> {
        let first = h.floor_h(h.n0())?;
        if horizon < first {
            return Err(Error::InvalidArgument(format!(
                "horizon {horizon} below floor(h(N0)) = {first}"
            )));
        }
        let mut elements = Vec::new();
        let mut m = h.n0();
        loop {
            let v = h.floor_h(m)?;
            if v > horizon {
                break;
            }
            if let Some(&last) = elements.last() {
                if v <= last {
                    return Err(Error::Domain(format!("floors not increasing at m = {m}")));
                }
            }
            elements.push(v);
            m += 1;
        }
        let mut bits = BitVec::repeat(false, horizon as usize + 1);
        for &v in &elements {
            bits.set(v as usize, true);
        }
        Ok(FloorSet { horizon, n0: h.n0(), bits, elements })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.horizon && self.bits[n as usize]
    }

    /// 0/1 indicator over [0, horizon].
    pub fn indicator(&self) -> Vec<u64> {
        self.bits.iter().map(|b| *b as u64).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl RegVarFunction {
    pub fn floor_set(&self, horizon: u64) -> Result<FloorSet> {
        FloorSet::build(self, horizon)
    }
}
