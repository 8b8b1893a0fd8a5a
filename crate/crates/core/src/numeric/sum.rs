//! Deterministic pairwise (cascade) summation.

use num_complex::Complex64;
use std::ops::Add;

const BLOCK: usize = 64;

fn pairwise_generic<T: Copy + Add<Output = T> + Default>(xs: &[T]) -> T {
    if xs.len() <= BLOCK {
        let mut s = T::default();
        for &x in xs {
            s = s + x;
        }
        s
    } else {
        let mid = xs.len() / 2;
        pairwise_generic(&xs[..mid]) + pairwise_generic(&xs[mid..])
    }
}

pub fn pairwise(xs: &[f64]) -> f64 {
    pairwise_generic(xs)
}

pub fn pairwise_c(xs: &[Complex64]) -> Complex64 {
    pairwise_generic(xs)
}

/// Streaming cascade accumulator. Blocks of 64 terms are summed directly and
/// then merged like a binary counter, so the result does not depend on
/// anything but the order of the terms.
#[derive(Debug, Clone)]
pub struct Cascade<T> {
    block: T,
    fill: usize,
    levels: Vec<Option<T>>,
}

impl<T: Copy + Add<Output = T> + Default> Default for Cascade<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Copy + Add<Output = T> + Default> Cascade<T> {
    pub fn new() -> Self {
        Cascade { block: T::default(), fill: 0, levels: Vec::new() }
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        self.block = self.block + x;
        self.fill += 1;
        if self.fill == BLOCK {
            let mut carry = self.block;
            self.block = T::default();
            self.fill = 0;
            for slot in self.levels.iter_mut() {
                match slot.take() {
                    Some(v) => carry = v + carry,
                    None => {
                        *slot = Some(carry);
                        return;
                    }
                }
            }
            self.levels.push(Some(carry));
        }
    }

    pub fn total(&self) -> T {
        let mut s = self.block;
        for v in self.levels.iter().flatten() {
            s = *v + s;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cascade_matches_exact_integers() {
        let mut c = Cascade::new();
        for i in 0..10_000u32 {
            c.push(i as f64);
        }
        assert_eq!(c.total(), 49_995_000.0);
        let xs: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise(&xs), 49_995_000.0);
    }

    #[test]
    fn pairwise_is_accurate_on_harmonic_tail() {
        let xs: Vec<f64> = (1..200_000).map(|i| 1.0 / (i as f64)).collect();
        let naive: f64 = xs.iter().rev().sum();
        assert!((pairwise(&xs) - naive).abs() < 1e-12);
    }
}
