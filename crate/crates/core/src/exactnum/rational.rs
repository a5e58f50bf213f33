//! Exact rational helpers: text parsing, canonical `p/q` output, decimal
//! rendering, and the dyadic outward rounding used by interval evaluation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator,
/// numerator and denominator coprime).
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, an integer, or a decimal such as `0.1`, `-2.5e-3`, `.75`.
/// Decimals are converted exactly (`0.1` is `1/10`).
pub fn parse_rational(token: &str) -> Result<Rational> {
    let s = token.trim();
    if s.is_empty() {
        return Err(Error::parse(token, "empty number"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_integer(token, p.trim())?;
        let den = parse_integer(token, q.trim())?;
        if den.is_zero() {
            return Err(Error::parse(token, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(token, s)
}

fn parse_integer(token: &str, s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(token, "expected an integer"));
    }
    s.trim_start_matches('+')
        .parse::<BigInt>()
        .map_err(|e| Error::parse(token, e.to_string()))
}

fn parse_decimal(token: &str, s: &str) -> Result<Rational> {
    let bad = || Error::parse(token, "expected p/q or a decimal number");
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_str = &body[pos + 1..];
            let exp_digits = exp_str.strip_prefix(['+', '-']).unwrap_or(exp_str);
            if exp_digits.is_empty() || !exp_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let exp: i64 = exp_str.trim_start_matches('+').parse().map_err(|_| bad())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int_part.len() + frac_part.len() == 0 || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(Error::parse(token, "exponent out of range"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Canonical `p/q` text; integers are written with an explicit `/1`.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering rounded half away from zero to `digits` places.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Integer power with a possibly negative exponent. Panics on `0^negative`.
pub(crate) fn pow_int(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    let k = e.unsigned_abs() as usize;
    Rational::new_raw(
        num_traits::pow(base.numer().clone(), k),
        num_traits::pow(base.denom().clone(), k),
    )
}

/// Rough `log2 |r|`: bit length of numerator minus bit length of denominator.
/// Exact to within one.
pub(crate) fn log2_estimate(r: &Rational) -> i64 {
    if r.is_zero() {
        return 0;
    }
    r.numer().bits() as i64 - r.denom().bits() as i64
}

/// Number of fractional bits to keep so that the rounding error is at most
/// `2^-bits` absolutely and about `2^-bits` relative to `|r|` for small `r`.
fn frac_bits_for(r: &Rational, bits: u32) -> u64 {
    bits as u64 + (-log2_estimate(r)).max(0) as u64
}

pub(crate) fn dyadic(m: BigInt, frac_bits: u64) -> Rational {
    let tz = m.trailing_zeros().unwrap_or(frac_bits).min(frac_bits);
    Rational::new_raw(m >> tz, BigInt::one() << (frac_bits - tz))
}

pub(crate) fn round_down(r: &Rational, bits: u32) -> Rational {
    let f = frac_bits_for(r, bits);
    if r.denom().bits() <= f + 1 && is_power_of_two(r.denom()) {
        return dyadic(r.numer().clone(), r.denom().bits() - 1);
    }
    let scaled = r.numer() << f;
    dyadic(scaled.div_floor(r.denom()), f)
}

pub(crate) fn round_up(r: &Rational, bits: u32) -> Rational {
    let f = frac_bits_for(r, bits);
    if r.denom().bits() <= f + 1 && is_power_of_two(r.denom()) {
        return dyadic(r.numer().clone(), r.denom().bits() - 1);
    }
    let scaled = r.numer() << f;
    dyadic(scaled.div_ceil(r.denom()), f)
}

/// Rounds the positive ratio `num / den` (not necessarily in lowest terms)
/// down or up to about `bits` significant bits.
pub(crate) fn round_ratio_rel(num: &BigInt, den: &BigInt, bits: u32, up: bool) -> Rational {
    let shift = bits as i64 + 2 - (num.bits() as i64 - den.bits() as i64);
    let (num, den) = if shift >= 0 {
        (num << shift as u64, den.clone())
    } else {
        (num.clone(), den << (-shift) as u64)
    };
    let m = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
    if shift >= 0 {
        dyadic(m, shift as u64)
    } else {
        Rational::from_integer(m << (-shift) as u64)
    }
}

/// `a + b` without reducing to lowest terms. Only for intermediate values
/// that are rounded afterwards.
pub(crate) fn add_raw(a: &Rational, b: &Rational) -> Rational {
    let (an, ad, bn, bd) = (a.numer(), a.denom(), b.numer(), b.denom());
    if ad == bd {
        return Rational::new_raw(an + bn, ad.clone());
    }
    if is_power_of_two(ad) && is_power_of_two(bd) {
        let (ea, eb) = (ad.bits(), bd.bits());
        return if ea >= eb {
            Rational::new_raw(an + (bn << (ea - eb)), ad.clone())
        } else {
            Rational::new_raw((an << (eb - ea)) + bn, bd.clone())
        };
    }
    Rational::new_raw(an * bd + bn * ad, ad * bd)
}

/// `a * b` without reducing to lowest terms.
pub(crate) fn mul_raw(a: &Rational, b: &Rational) -> Rational {
    Rational::new_raw(a.numer() * b.numer(), a.denom() * b.denom())
}

/// Exact sum, reduced to lowest terms once at the end.
pub(crate) fn sum_exact<'a>(terms: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let raw = terms.into_iter().fold(Rational::zero(), |acc, t| add_raw(&acc, t));
    Rational::new(raw.numer().clone(), raw.denom().clone())
}

fn is_power_of_two(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && n.trailing_zeros() == Some(n.bits() - 1)
}

/// Smallest `b` with `2^-b <= eps` (zero when `eps >= 1`).
pub(crate) fn bits_for_width(eps: &Rational) -> u32 {
    if eps >= &Rational::one() {
        return 0;
    }
    let mut b = (eps.denom().bits() as i64 - eps.numer().bits() as i64).max(0) as u32;
    while &Rational::new(BigInt::one(), BigInt::one() << b) > eps {
        b += 1;
    }
    b
}

/// JSON shape for an enclosure: `{"lo": "p/q", "hi": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

impl IntervalJson {
    pub fn new(lo: &Rational, hi: &Rational) -> Self {
        IntervalJson {
            lo: to_pq(lo),
            hi: to_pq(hi),
        }
    }

    pub fn parse(&self) -> Result<(Rational, Rational)> {
        Ok((parse_rational(&self.lo)?, parse_rational(&self.hi)?))
    }
}
