//! Integer and rational k-th roots with directed rounding.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::certified::CertifiedValue;
use super::rational::{dyadic, log2_estimate, Rational};
use crate::error::{Error, Result};

fn magnitude(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

/// Exact k-th root of a nonnegative integer, if it is a perfect power.
pub(crate) fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let m = magnitude(n);
    let r = m.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == m).then(|| BigInt::from_biguint(Sign::Plus, r))
}

/// Exact k-th root of a positive rational `(p/q)^k`, detected on numerator
/// and denominator separately.
pub(crate) fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 1 {
        return Some(r.clone());
    }
    if !r.is_positive() {
        return None;
    }
    let den = exact_int_root(r.denom(), k)?;
    let num = exact_int_root(r.numer(), k)?;
    Some(Rational::new_raw(num, den))
}

/// Fractional bits used when rooting `r`: absolute `2^-bits` plus enough
/// extra to keep relative precision for small results.
fn root_scale(r: &Rational, k: u32, bits: u32) -> u64 {
    bits as u64 + 1 + ((-log2_estimate(r)).max(0) as u64) / k as u64
}

/// Lower bound `m / 2^s <= r^(1/k)` for `r > 0`, with `s` roughly `bits`.
pub(crate) fn root_lower(r: &Rational, k: u32, bits: u32) -> Rational {
    if k == 1 {
        return r.clone();
    }
    let s = root_scale(r, k, bits);
    let scaled = (r.numer() << (k as u64 * s)).div_floor(r.denom());
    let root = BigInt::from_biguint(Sign::Plus, magnitude(&scaled).nth_root(k));
    dyadic(root, s)
}

/// Upper bound `m / 2^s >= r^(1/k)` for `r > 0`.
pub(crate) fn root_upper(r: &Rational, k: u32, bits: u32) -> Rational {
    if k == 1 {
        return r.clone();
    }
    let s = root_scale(r, k, bits);
    let scaled = magnitude(&(r.numer() << (k as u64 * s)).div_ceil(r.denom()));
    let mut root = scaled.nth_root(k);
    if num_traits::pow(root.clone(), k as usize) < scaled {
        root += 1u32;
    }
    dyadic(BigInt::from_biguint(Sign::Plus, root), s)
}

/// Certified `x^(1/n)` refined to width at most `eps`.
///
/// Perfect powers (`x = (p/q)^n`) come back as exact, width-zero values.
pub fn nth_root(x: &Rational, n: u32, eps: &Rational) -> Result<CertifiedValue> {
    if !x.is_positive() {
        return Err(Error::domain(format!("nth_root of nonpositive value {x}")));
    }
    if n == 0 {
        return Err(Error::domain("nth_root with index 0"));
    }
    if !eps.is_positive() {
        return Err(Error::domain("target width must be positive"));
    }
    let exponent = Rational::new(BigInt::one(), BigInt::from(n));
    let mut value = CertifiedValue::exact(x.clone()).pow(&exponent)?;
    value.refine(eps)?;
    Ok(value)
}

/// Smallest divisor-power reduction: the largest `d | k`, `d > 1`, such that
/// `r` is a perfect d-th power, together with that root.
pub(crate) fn largest_root_divisor(r: &Rational, k: u64) -> Option<(Rational, u64)> {
    if k < 2 || k > u32::MAX as u64 || r.is_zero() {
        return None;
    }
    let mut divisors: Vec<u64> = (2..=k).filter(|d| k.is_multiple_of(*d)).collect();
    if k > 10_000 {
        divisors = vec![k];
    }
    divisors
        .into_iter()
        .rev()
        .find_map(|d| exact_root(r, d as u32).map(|root| (root, d)))
}
