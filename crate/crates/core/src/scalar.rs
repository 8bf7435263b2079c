//! The scalar abstraction shared by every module.
//!
//! All algorithms are written against [`Field`]. Exact fields (rationals) use
//! exact zero tests and first-nonzero pivoting; floating point fields use a
//! magnitude threshold and partial pivoting. Only the exact instance is used
//! by the verification pipeline, the floating point instance exists for quick
//! numerical experiments.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Field:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Signed + Send + Sync + 'static
{
    /// Whether arithmetic is exact. Controls pivoting and zero tests.
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Zero test used by elimination. Exact fields compare with zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// A lossy view used for pivot selection and display.
    fn to_f64(&self) -> f64;

    /// Distinct roots of `Σ coeffs[i] xⁱ` when the polynomial factors into
    /// linear factors over this field, `None` when an irreducible factor of
    /// higher degree remains.
    fn split_roots(coeffs: &[Self]) -> Option<Vec<Self>>;
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn split_roots(coeffs: &[Self]) -> Option<Vec<Self>> {
        rational_split_roots(coeffs)
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn split_roots(coeffs: &[Self]) -> Option<Vec<Self>> {
        float_split_roots(coeffs)
    }
}

fn trim<F: Field>(coeffs: &[F]) -> Vec<F> {
    let mut p = coeffs.to_vec();
    while p.last().is_some_and(|c| c.is_negligible()) {
        p.pop();
    }
    p
}

/// Synthetic division by `(x - r)`; the remainder is dropped.
fn deflate<F: Field>(p: &[F], r: &F) -> Vec<F> {
    let n = p.len() - 1;
    let mut q = vec![F::zero(); n];
    let mut carry = F::zero();
    for i in (1..=n).rev() {
        carry = p[i].clone() + carry * r.clone();
        q[i - 1] = carry.clone();
    }
    q
}

fn eval<F: Field>(p: &[F], x: &F) -> F {
    p.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(1_000_000_000_000i64) {
        return None;
    }
    let n = num_traits::ToPrimitive::to_i64(&n)?;
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn rational_split_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut p = trim(coeffs);
    if p.is_empty() {
        return None;
    }
    let mut roots: Vec<BigRational> = Vec::new();
    while p.len() > 1 {
        if p[0].is_zero() {
            roots.push(BigRational::zero());
            p.remove(0);
            continue;
        }
        let lcm = p.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let num = divisors(&ints[0])?;
        let den = divisors(ints.last().unwrap())?;
        let mut candidates: Vec<BigRational> = Vec::new();
        for a in &num {
            for b in &den {
                let r = BigRational::new(a.clone(), b.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        let root = candidates.into_iter().find(|r| eval(&p, r).is_zero())?;
        p = deflate(&p, &root);
        roots.push(root);
    }
    roots.sort();
    roots.dedup();
    Some(roots)
}

/// Durand–Kerner iteration; accepts only when every root is numerically real.
fn float_split_roots(coeffs: &[f64]) -> Option<Vec<f64>> {
    let p = trim(coeffs);
    if p.is_empty() {
        return None;
    }
    let n = p.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    let lead = p[n];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let eval_c = |z: (f64, f64)| monic.iter().rev().fold((0.0, 0.0), |acc, &c| {
        let m = mul(acc, z);
        (m.0 + c, m.1)
    });
    let mut z: Vec<(f64, f64)> = (0..n).map(|k| {
        let seed = (0.4f64, 0.9f64);
        let mut w = (1.0, 0.0);
        for _ in 0..k {
            w = mul(w, seed);
        }
        w
    }).collect();
    for _ in 0..500 {
        for i in 0..n {
            let mut denom = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom = mul(denom, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let num = eval_c(z[i]);
            let d2 = denom.0 * denom.0 + denom.1 * denom.1;
            if d2 == 0.0 {
                continue;
            }
            let q = ((num.0 * denom.0 + num.1 * denom.1) / d2, (num.1 * denom.0 - num.0 * denom.1) / d2);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
        }
    }
    if z.iter().any(|w| w.1.abs() > 1e-7) {
        return None;
    }
    let mut roots: Vec<f64> = z.iter().map(|w| w.0).collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    Some(roots)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a canonical rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(BigRational::from_integer),
    }
}

/// Inverse of [`parse_rational`]: integers print without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer power by repeated squaring, exponent may be negative for invertible `x`.
pub fn powi<F: Field>(x: &F, exp: i64) -> F {
    let mut base = if exp < 0 { F::one() / x.clone() } else { x.clone() };
    let mut e = exp.unsigned_abs();
    let mut acc = F::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

pub fn max_of<F: Field>(a: &F, b: &F) -> F {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rationals_are_canonical() {
        let x = q(4, -6);
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
    }

    #[test]
    fn parse_and_format_agree() {
        for text in ["0", "7", "-3/4", "5/10"] {
            let x = parse_rational(text).unwrap();
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
        assert_eq!(format_rational(&q(5, 10)), "1/2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn split_roots_over_q() {
        // (x - 1)(x - 2)(x + 1/2)
        let p = vec![q(1, 1), q(1, 2), q(-5, 2), q(1, 1)];
        assert_eq!(BigRational::split_roots(&p).unwrap(), vec![q(-1, 2), q(1, 1), q(2, 1)]);
        // x^2 + 1 has no rational roots
        assert!(BigRational::split_roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_none());
        // x^2 (x - 3)
        assert_eq!(BigRational::split_roots(&[q(0, 1), q(0, 1), q(-3, 1), q(1, 1)]).unwrap(), vec![q(0, 1), q(3, 1)]);
    }

    #[test]
    fn split_roots_over_f64() {
        let r = f64::split_roots(&[2.0, -3.0, 1.0]).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-6 && (r[1] - 2.0).abs() < 1e-6);
        assert!(f64::split_roots(&[1.0, 0.0, 1.0]).is_none());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(powi(&q(2, 3), 3), q(8, 27));
        assert_eq!(powi(&q(2, 3), -2), q(9, 4));
        assert_eq!(powi(&q(5, 1), 0), q(1, 1));
        assert!((powi(&2.0f64, 10) - 1024.0).abs() < 1e-12);
    }
}
