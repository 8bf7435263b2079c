//! Seeded sampling of scalars, algebra elements and skew polynomials.
//!
//! The stream is xoshiro256** seeded through SplitMix64 (`seed_from_u64`), so
//! a seed fixes every sample. Random rationals have numerator in `[-9, 9]`
//! and denominator in `[1, 9]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand_xoshiro::rand_core::{Rng as _, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::algebra::FdAlgebra;
use crate::ore::{OrePoly, OreSignature};
use crate::scalar::Field;

pub const MAX_NUMERATOR: i64 = 9;
pub const MAX_DENOMINATOR: i64 = 9;

#[derive(Clone, Debug)]
pub struct Rng {
    inner: Xoshiro256StarStar,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { inner: Xoshiro256StarStar::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `0..n` by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    pub fn scalar<F: Field>(&mut self) -> F {
        let p = self.range(-MAX_NUMERATOR, MAX_NUMERATOR);
        let q = self.range(1, MAX_DENOMINATOR);
        F::from_ratio(p, q)
    }

    pub fn nonzero_scalar<F: Field>(&mut self) -> F {
        loop {
            let x: F = self.scalar();
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn positive_scalar<F: Field>(&mut self) -> F {
        let p = self.range(1, MAX_NUMERATOR);
        let q = self.range(1, MAX_DENOMINATOR);
        F::from_ratio(p, q)
    }

    pub fn vector<F: Field>(&mut self, n: usize) -> Vec<F> {
        (0..n).map(|_| self.scalar()).collect()
    }

    /// Algebra element in coordinates.
    pub fn element<F: Field>(&mut self, algebra: &FdAlgebra<F>) -> Vec<F> {
        self.vector(algebra.dim())
    }

    /// Element with each degree in range present with probability ½; Laurent
    /// signatures draw degrees in `[-max_degree, max_degree]`.
    pub fn ore_poly<F: Field>(&mut self, sig: &Arc<OreSignature<F>>, max_degree: i64) -> OrePoly<F> {
        let lo = if sig.kind().is_laurent() { -max_degree } else { 0 };
        self.ore_poly_in(sig, lo, max_degree)
    }

    pub fn ore_poly_in<F: Field>(&mut self, sig: &Arc<OreSignature<F>>, lo: i64, hi: i64) -> OrePoly<F> {
        let n = sig.base().dim();
        let mut coeffs = BTreeMap::new();
        for k in lo..=hi {
            if self.coin() {
                coeffs.insert(k, self.vector(n));
            }
        }
        OrePoly::new(sig.clone(), coeffs).expect("degrees respect the signature")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn stream_is_reproducible() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(Rng::new(43).next_u64(), xs[0]);
    }

    #[test]
    fn rationals_stay_in_range() {
        let mut rng = Rng::new(7);
        for _ in 0..500 {
            let x: Rational = rng.scalar();
            assert!(x.numer().magnitude() <= &9u32.into());
            assert!(x.denom() <= &9.into());
            let y: Rational = rng.positive_scalar();
            assert!(y > Rational::from_int(0));
        }
        for _ in 0..200 {
            let k = rng.range(-3, 3);
            assert!((-3..=3).contains(&k));
        }
    }
}
