//! Refinable rational enclosures of real numbers built from exact
//! rationals, sums, products, reciprocals, and rational powers.
//!
//! A [`CertifiedValue`] pairs an expression tree with its current enclosure
//! `[lo, hi]`. Refinement re-evaluates the tree at a higher working
//! precision and intersects the result with the previous enclosure, so
//! successive intervals are nested.
//!
//! Products of rational powers of positive rationals are kept symbolic as a
//! [`Monomial`] (an exponent map `base -> exponent`). Equal bases merge and
//! perfect powers fold into the rational coefficient, which keeps values such
//! as `(c^j)^(1/j)` or `prod_k c^(a_k)` with `sum a_k = 1` exact.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{
    bits_for_width, add_raw, log2_estimate, mul_raw, pow_int, round_down, round_ratio_rel, round_up, Rational,
};
use super::root::{largest_root_divisor, root_lower, root_upper};
use crate::error::{Error, Result};

const INITIAL_BITS: u32 = 64;
const MAX_BITS: u32 = 1 << 17;
/// Largest denominator (in bits) of a rational value the exactness probe
/// looks for in multi-base monomials.
const PROBE_DENOM_BITS: u64 = 28;

thread_local! {
    static INEXACT_ENCLOSURES: Cell<u64> = const { Cell::new(0) };
}

/// Number of nonzero-width enclosures created or refined on this thread.
pub fn inexact_enclosure_count() -> u64 {
    INEXACT_ENCLOSURES.with(Cell::get)
}

pub fn reset_inexact_enclosure_count() {
    INEXACT_ENCLOSURES.with(|c| c.set(0));
}

fn note_enclosure(lo: &Rational, hi: &Rational) {
    if lo != hi {
        INEXACT_ENCLOSURES.with(|c| c.set(c.get() + 1));
    }
}

#[derive(Debug)]
pub(crate) enum Kind {
    Exact(Rational),
    Monomial(Monomial),
    Sum(Vec<Arc<Node>>),
    Product(Vec<Arc<Node>>),
    Recip(Arc<Node>),
    Pow(Arc<Node>, Rational),
}

type Interval = (Rational, Rational);

/// Expression node with a cached enclosure at the last precision it was
/// evaluated at. Shared subtrees are then evaluated once per precision.
#[derive(Debug)]
pub(crate) struct Node {
    kind: Kind,
    cache: Mutex<Option<(u32, Interval)>>,
}

fn node(kind: Kind) -> Arc<Node> {
    Arc::new(Node { kind, cache: Mutex::new(None) })
}

/// `coef * prod base^exponent` with `coef > 0`, every base positive and
/// distinct from 1, and every exponent a non-integer rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Monomial {
    coef: Rational,
    factors: BTreeMap<Rational, Rational>,
    /// `(q, num, den)`: the factors with exponent denominator `q` multiply
    /// to `(num / den)^(1/q)`. Kept unreduced.
    groups: Vec<(u32, BigInt, BigInt)>,
    /// Enclosure at `INITIAL_BITS`, computed by the exactness probe.
    initial: Option<Interval>,
}

impl Monomial {
    fn normalize<I>(mut coef: Rational, factors: I) -> Kind
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (base, exp) in factors {
            if !exp.is_zero() && !base.is_one() {
                *map.entry(base).or_insert_with(Rational::zero) += exp;
            }
        }
        loop {
            let mut changed = false;
            let mut next: BTreeMap<Rational, Rational> = BTreeMap::new();
            for (base, exp) in map {
                if exp.is_zero() || base.is_one() {
                    continue;
                }
                if exp.is_integer() {
                    if let Some(e) = exp.to_integer().to_i64() {
                        coef *= pow_int(&base, e);
                        changed = true;
                        continue;
                    }
                }
                let (base, exp) = match exp.denom().to_u64().and_then(|q| largest_root_divisor(&base, q)) {
                    Some((root, d)) => {
                        changed = true;
                        (root, exp * Rational::from_integer(BigInt::from(d)))
                    }
                    None => (base, exp),
                };
                match next.get_mut(&base) {
                    Some(acc) => {
                        *acc += exp;
                        changed = true;
                    }
                    None => {
                        next.insert(base, exp);
                    }
                }
            }
            map = next;
            if !changed {
                break;
            }
        }
        if map.is_empty() {
            return Kind::Exact(coef);
        }
        let Some(groups) = radicand_groups(&map) else {
            return Kind::Monomial(Monomial { coef, factors: map, groups: Vec::new(), initial: None });
        };
        let mut mono = Monomial { coef, factors: map, groups, initial: None };
        let Ok(initial) = mono.enclose(INITIAL_BITS) else {
            return Kind::Monomial(mono);
        };
        match mono.exact_probe(&initial) {
            Some(v) => Kind::Exact(v),
            None => {
                mono.initial = Some(initial);
                Kind::Monomial(mono)
            }
        }
    }

    /// Looks for a rational value among several bases, e.g.
    /// `2^(1/4) * 8^(1/4) = 2`. The simplest rational inside a tight
    /// enclosure is the only plausible candidate; it is then confirmed
    /// exactly.
    fn exact_probe(&self, (lo, hi): &Interval) -> Option<Rational> {
        if self.factors.len() < 2 {
            return None;
        }
        let c = simplest_between(lo, hi, PROBE_DENOM_BITS)?;
        let r = &c / &self.coef;
        let l = self.groups.iter().fold(1u32, |acc, (q, _, _)| acc.lcm(q));
        let mut lhs_num = pow_u(r.denom(), l);
        let mut lhs_den = pow_u(r.numer(), l);
        for (q, num, den) in &self.groups {
            lhs_num *= pow_u(num, l / q);
            lhs_den *= pow_u(den, l / q);
        }
        (lhs_num == lhs_den).then_some(c)
    }

    fn scaled(&self, e: &Rational) -> Kind {
        let mut factors: Vec<(Rational, Rational)> =
            self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect();
        factors.push((self.coef.clone(), e.clone()));
        Monomial::normalize(Rational::one(), factors)
    }

    fn enclose(&self, bits: u32) -> Result<Interval> {
        if let (Some(iv), INITIAL_BITS) = (&self.initial, bits) {
            return Ok(iv.clone());
        }
        if self.groups.is_empty() {
            return Err(Error::domain("exponent too large"));
        }
        let mut lo = self.coef.clone();
        let mut hi = self.coef.clone();
        let guard = bits + 4 + 2 * self.factors.len() as u32;
        for (q, num, den) in &self.groups {
            let sig = guard + 8 + 32 - q.leading_zeros();
            lo = mul_raw(&lo, &root_lower(&round_ratio_rel(num, den, sig, false), *q, guard));
            hi = mul_raw(&hi, &root_upper(&round_ratio_rel(num, den, sig, true), *q, guard));
        }
        Ok((round_down(&lo, bits), round_up(&hi, bits)))
    }
}

fn pow_u(b: &BigInt, e: u32) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

/// Groups factors by exponent denominator; `None` if an exponent does not
/// fit machine integers.
fn radicand_groups(factors: &BTreeMap<Rational, Rational>) -> Option<Vec<(u32, BigInt, BigInt)>> {
    let mut groups: BTreeMap<u32, (BigInt, BigInt)> = BTreeMap::new();
    for (b, e) in factors {
        let q = e.denom().to_u32()?;
        let p = e.numer().to_i64()?;
        let k = p.unsigned_abs() as usize;
        let (bn, bd) = if p < 0 { (b.denom(), b.numer()) } else { (b.numer(), b.denom()) };
        let g = groups.entry(q).or_insert_with(|| (BigInt::one(), BigInt::one()));
        g.0 *= num_traits::pow(bn.clone(), k);
        g.1 *= num_traits::pow(bd.clone(), k);
    }
    Some(groups.into_iter().map(|(q, (n, d))| (q, n, d)).collect())
}

/// The rational with the smallest denominator in `[lo, hi]` for
/// `0 < lo <= hi`, or `None` if that denominator exceeds `2^max_bits`.
fn simplest_between(lo: &Rational, hi: &Rational, max_bits: u64) -> Option<Rational> {
    if !lo.is_positive() || lo > hi {
        return None;
    }
    let (mut a, mut b) = (lo.numer().clone(), lo.denom().clone());
    let (mut c, mut d) = (hi.numer().clone(), hi.denom().clone());
    // convergents h/k of the shared continued fraction prefix
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    loop {
        let (fl, rem) = a.div_rem(&b);
        let (t, done) = if rem.is_zero() {
            (fl, true)
        } else if (&fl + 1u32) * &d <= c {
            (fl + 1u32, true)
        } else {
            (fl, false)
        };
        (h0, h1) = (h1.clone(), &t * &h1 + h0);
        (k0, k1) = (k1.clone(), &t * &k1 + k0);
        if k1.bits() > max_bits {
            return None;
        }
        if done {
            return Some(Rational::new(h1, k1));
        }
        let na = d.clone();
        let nb = &c - &t * &d;
        let nc = b.clone();
        let nd = &a - &t * &b;
        (a, b, c, d) = (na, nb, nc, nd);
    }
}

fn reduced(r: Rational) -> Rational {
    let (n, d) = r.into_raw();
    Rational::new(n, d)
}

fn exact_node(r: Rational) -> Arc<Node> {
    node(Kind::Exact(r))
}

fn sum_node(children: Vec<Arc<Node>>) -> Arc<Node> {
    let mut acc = Rational::zero();
    let mut rest = Vec::new();
    for child in children {
        match &child.kind {
            Kind::Exact(r) => acc = add_raw(&acc, r),
            Kind::Sum(inner) => {
                for c in inner {
                    match &c.kind {
                        Kind::Exact(r) => acc = add_raw(&acc, r),
                        _ => rest.push(c.clone()),
                    }
                }
            }
            _ => rest.push(child),
        }
    }
    let acc = reduced(acc);
    if rest.is_empty() {
        return exact_node(acc);
    }
    if !acc.is_zero() {
        rest.push(exact_node(acc));
    }
    if rest.len() == 1 {
        return rest.pop().unwrap_or_else(|| exact_node(Rational::zero()));
    }
    node(Kind::Sum(rest))
}

fn product_node(children: Vec<Arc<Node>>) -> Arc<Node> {
    let mut scalar = Rational::one();
    let mut factors: Vec<(Rational, Rational)> = Vec::new();
    let mut rest = Vec::new();
    let mut stack = children;
    while let Some(child) = stack.pop() {
        match &child.kind {
            Kind::Exact(r) => scalar = mul_raw(&scalar, r),
            Kind::Monomial(m) => {
                factors.push((m.coef.clone(), Rational::one()));
                factors.extend(m.factors.iter().map(|(b, e)| (b.clone(), e.clone())));
            }
            Kind::Product(inner) => stack.extend(inner.iter().cloned()),
            _ => rest.push(child),
        }
    }
    let scalar = reduced(scalar);
    if scalar.is_zero() {
        return exact_node(scalar);
    }
    let mut out = Vec::new();
    let symbolic = if scalar.is_positive() {
        Monomial::normalize(scalar, factors)
    } else {
        out.push(exact_node(scalar));
        Monomial::normalize(Rational::one(), factors)
    };
    if rest.is_empty() && out.is_empty() {
        return node(symbolic);
    }
    if !matches!(&symbolic, Kind::Exact(r) if r.is_one()) {
        out.push(node(symbolic));
    }
    out.extend(rest);
    if out.len() == 1 {
        return out.pop().unwrap_or_else(|| exact_node(Rational::one()));
    }
    node(Kind::Product(out))
}

fn pow_node(n: &Arc<Node>, e: &Rational) -> Result<Arc<Node>> {
    if e.is_zero() {
        return Ok(exact_node(Rational::one()));
    }
    if e.is_one() {
        return Ok(n.clone());
    }
    Ok(match &n.kind {
        Kind::Exact(r) if r.is_positive() => {
            node(Monomial::normalize(Rational::one(), [(r.clone(), e.clone())]))
        }
        Kind::Exact(r) => {
            if !e.is_integer() || (r.is_zero() && e.is_negative()) {
                return Err(Error::domain(format!("{r} raised to {e}")));
            }
            let k = e.to_integer().to_i64().ok_or_else(|| Error::domain("exponent too large"))?;
            exact_node(pow_int(r, k))
        }
        Kind::Monomial(m) => node(m.scaled(e)),
        Kind::Pow(inner, e2) => pow_node(inner, &(e * e2))?,
        Kind::Recip(inner) => pow_node(inner, &-e)?,
        _ => node(Kind::Pow(n.clone(), e.clone())),
    })
}

fn recip_node(n: &Arc<Node>) -> Result<Arc<Node>> {
    match &n.kind {
        Kind::Exact(r) if r.is_zero() => Err(Error::domain("reciprocal of zero")),
        Kind::Exact(r) => Ok(exact_node(r.recip())),
        Kind::Monomial(_) | Kind::Pow(..) => pow_node(n, &-Rational::one()),
        Kind::Recip(inner) => Ok(inner.clone()),
        _ => Ok(node(Kind::Recip(n.clone()))),
    }
}

fn mul_intervals(a: Interval, b: Interval) -> Interval {
    if !a.0.is_negative() && !b.0.is_negative() {
        return (mul_raw(&a.0, &b.0), mul_raw(&a.1, &b.1));
    }
    let corners = [mul_raw(&a.0, &b.0), mul_raw(&a.0, &b.1), mul_raw(&a.1, &b.0), mul_raw(&a.1, &b.1)];
    let lo = corners.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = corners.iter().max().cloned().unwrap_or_else(Rational::zero);
    (lo, hi)
}

fn enclose(n: &Node, bits: u32) -> Result<Interval> {
    if let Kind::Exact(r) = &n.kind {
        return Ok((r.clone(), r.clone()));
    }
    let mut cache = n.cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((b, iv)) = cache.as_ref() {
        if *b == bits {
            return Ok(iv.clone());
        }
    }
    let iv = enclose_uncached(&n.kind, bits)?;
    *cache = Some((bits, iv.clone()));
    Ok(iv)
}

fn enclose_uncached(kind: &Kind, bits: u32) -> Result<Interval> {
    match kind {
        Kind::Exact(r) => Ok((r.clone(), r.clone())),
        Kind::Monomial(m) => m.enclose(bits),
        Kind::Sum(children) => {
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for c in children {
                let (l, h) = enclose(c, bits)?;
                lo = add_raw(&lo, &l);
                hi = add_raw(&hi, &h);
            }
            Ok((round_down(&lo, bits), round_up(&hi, bits)))
        }
        Kind::Product(children) => {
            let mut acc = (Rational::one(), Rational::one());
            for c in children {
                let next = mul_intervals(acc, enclose(c, bits)?);
                acc = (round_down(&next.0, bits), round_up(&next.1, bits));
            }
            Ok(acc)
        }
        Kind::Recip(c) => {
            let (l, h) = enclose(c, bits)?;
            if l.is_positive() || h.is_negative() {
                Ok((round_down(&h.recip(), bits), round_up(&l.recip(), bits)))
            } else {
                Err(Error::NotSeparableFromZero)
            }
        }
        Kind::Pow(c, e) => {
            let (mut l, mut h) = enclose(c, bits)?;
            if !l.is_positive() {
                return Err(Error::NotSeparableFromZero);
            }
            if e.is_negative() {
                (l, h) = (round_down(&h.recip(), bits), round_up(&l.recip(), bits));
            }
            let p = e.numer().magnitude().to_i64().ok_or_else(|| Error::domain("exponent too large"))?;
            let q = e.denom().to_u32().ok_or_else(|| Error::domain("root index too large"))?;
            let (l, h) = (round_down(&pow_int(&l, p), bits), round_up(&pow_int(&h, p), bits));
            if q == 1 {
                return Ok((l, h));
            }
            let guard = bits + 4;
            Ok((
                round_down(&root_lower(&l, q, guard), bits),
                round_up(&root_upper(&h, q, guard), bits),
            ))
        }
    }
}

/// A real number known through a refinable enclosing rational interval.
///
/// Exact values have `lo == hi` and never change under refinement.
#[derive(Clone, Debug)]
pub struct CertifiedValue {
    node: Arc<Node>,
    lo: Rational,
    hi: Rational,
    bits: u32,
}

impl CertifiedValue {
    pub fn exact(value: Rational) -> Self {
        CertifiedValue {
            node: exact_node(value.clone()),
            lo: value.clone(),
            hi: value,
            bits: 0,
        }
    }

    fn from_node(node: Arc<Node>) -> Result<Self> {
        if let Kind::Exact(r) = &node.kind {
            return Ok(Self::exact(r.clone()));
        }
        let mut bits = INITIAL_BITS;
        loop {
            match enclose(&node, bits) {
                Ok((lo, hi)) => {
                    note_enclosure(&lo, &hi);
                    return Ok(CertifiedValue { node, lo, hi, bits });
                }
                Err(Error::NotSeparableFromZero) if bits < MAX_BITS => bits *= 2,
                Err(e) => return Err(e),
            }
        }
    }

    /// `coef * prod base^exponent` over positive rational bases, kept as an
    /// exponent map until evaluated. Equal bases merge and perfect powers
    /// collapse, so the result is exact whenever the product is rational.
    pub fn monomial<I>(coef: Rational, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        if !coef.is_positive() {
            return Err(Error::domain("monomial coefficient must be positive"));
        }
        let factors: Vec<_> = factors.into_iter().collect();
        if let Some((b, _)) = factors.iter().find(|(b, _)| !b.is_positive()) {
            return Err(Error::domain(format!("monomial base {b} is not positive")));
        }
        Self::from_node(node(Monomial::normalize(coef, factors)))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Working precision (bits) of the current enclosure; 0 for exact values.
    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// True when the enclosure has zero width.
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// Shrinks the enclosure to width at most `eps`. The new interval is
    /// always contained in the old one.
    pub fn refine(&mut self, eps: &Rational) -> Result<()> {
        if !eps.is_positive() {
            return Err(Error::domain("target width must be positive"));
        }
        if &self.width() <= eps {
            return Ok(());
        }
        let magnitude = log2_estimate(&self.hi.abs().max(self.lo.abs())).max(0) as u32;
        let mut bits = (self.bits + 8).max(bits_for_width(eps) + magnitude + 8);
        loop {
            if bits > MAX_BITS {
                return Err(Error::RefinementBudget { bits: MAX_BITS });
            }
            match enclose(&self.node, bits) {
                Ok((lo, hi)) => {
                    if lo > self.lo {
                        self.lo = lo;
                    }
                    if hi < self.hi {
                        self.hi = hi;
                    }
                    self.bits = bits;
                    note_enclosure(&self.lo, &self.hi);
                    if &self.width() <= eps {
                        return Ok(());
                    }
                }
                Err(Error::NotSeparableFromZero) => {}
                Err(e) => return Err(e),
            }
            bits += bits / 2 + 16;
        }
    }

    pub fn sum(values: &[CertifiedValue]) -> Result<Self> {
        Self::from_node(sum_node(values.iter().map(|v| v.node.clone()).collect()))
    }

    pub fn product(values: &[CertifiedValue]) -> Result<Self> {
        Self::from_node(product_node(values.iter().map(|v| v.node.clone()).collect()))
    }

    pub fn add(&self, other: &CertifiedValue) -> Result<Self> {
        Self::sum(&[self.clone(), other.clone()])
    }

    pub fn mul(&self, other: &CertifiedValue) -> Result<Self> {
        Self::product(&[self.clone(), other.clone()])
    }

    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        self.mul(&Self::exact(factor.clone()))
    }

    /// Reciprocal of a value whose enclosure can be separated from zero.
    pub fn recip(&self) -> Result<Self> {
        Self::from_node(recip_node(&self.node)?)
    }

    /// `self^e` for a positive value and rational exponent.
    pub fn pow(&self, e: &Rational) -> Result<Self> {
        if let Kind::Exact(r) = &self.node.kind {
            if !r.is_positive() {
                return Err(Error::domain(format!("rational power of nonpositive value {r}")));
            }
        }
        Self::from_node(pow_node(&self.node, e)?)
    }
}

/// Certified `x^e` for a positive enclosed `x`. The base is refined until
/// its enclosure is strictly positive; failing that within the refinement
/// budget is a domain error.
pub fn rational_power(x: &CertifiedValue, e: &Rational) -> Result<CertifiedValue> {
    let mut base = x.clone();
    let mut eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 32));
    while !base.lo.is_positive() {
        if !base.hi.is_positive() {
            return Err(Error::domain("rational power of a nonpositive value"));
        }
        if base.refine(&eps).is_err() || base.is_exact() {
            if base.lo.is_positive() {
                break;
            }
            return Err(Error::domain("base cannot be separated from zero"));
        }
        eps = &eps * &eps;
    }
    base.pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};

    fn cv(r: Rational) -> CertifiedValue {
        CertifiedValue::exact(r)
    }

    #[test]
    fn constant_weighted_product_collapses() {
        // c^(1/2) * c^(1/3) * c^(1/6) = c
        let c = ratio(7, 3);
        let parts: Vec<_> = [ratio(1, 2), ratio(1, 3), ratio(1, 6)]
            .iter()
            .map(|e| cv(c.clone()).pow(e).unwrap())
            .collect();
        let p = CertifiedValue::product(&parts).unwrap();
        assert_eq!(p.exact_value(), Some(&c));
    }

    #[test]
    fn cross_base_radicals_detected() {
        // sqrt(2) * sqrt(8) = 4, 4^(1/4) * 2^(1/2) = 2
        let a = cv(int(2)).pow(&ratio(1, 2)).unwrap();
        let b = cv(int(8)).pow(&ratio(1, 2)).unwrap();
        assert_eq!(a.mul(&b).unwrap().exact_value(), Some(&int(4)));
        let c = cv(int(4)).pow(&ratio(1, 4)).unwrap();
        assert_eq!(c.mul(&a).unwrap().exact_value(), Some(&int(2)));
        // 2^(1/4) * 8^(1/4) = 16^(1/4) = 2 via the combined radical probe
        let d = cv(int(2)).pow(&ratio(1, 4)).unwrap();
        let e = cv(int(8)).pow(&ratio(1, 4)).unwrap();
        assert_eq!(d.mul(&e).unwrap().exact_value(), Some(&int(2)));
    }

    #[test]
    fn irrational_values_stay_enclosed() {
        let mut s = cv(int(2)).pow(&ratio(1, 2)).unwrap();
        assert!(!s.is_exact());
        s.refine(&ratio(1, 1_000_000_000_000)).unwrap();
        assert!(s.lo() * s.lo() < int(2) && s.hi() * s.hi() > int(2));
        let r = s.recip().unwrap();
        assert!(r.lo() > &ratio(7071067811, 10_000_000_000));
        assert!(r.hi() < &ratio(7071067812, 10_000_000_000));
        let sum = CertifiedValue::sum(&[s.clone(), cv(int(1))]).unwrap();
        assert!(sum.lo() > &ratio(24142135623, 10_000_000_000));
        assert!(sum.hi() < &ratio(24142135624, 10_000_000_000));
    }

    #[test]
    fn refinement_is_nested() {
        let mut v = CertifiedValue::sum(&[
            cv(int(3)).pow(&ratio(1, 3)).unwrap(),
            cv(int(5)).pow(&ratio(-2, 7)).unwrap(),
        ])
        .unwrap()
        .recip()
        .unwrap();
        let (lo0, hi0) = (v.lo().clone(), v.hi().clone());
        v.refine(&ratio(1, 1 << 40)).unwrap();
        let (lo1, hi1) = (v.lo().clone(), v.hi().clone());
        assert!(lo0 <= lo1 && hi1 <= hi0);
        v.refine(&ratio(1, 1 << 50)).unwrap();
        assert!(&lo1 <= v.lo() && v.hi() <= &hi1);
        assert!(v.width() <= ratio(1, 1 << 50));
    }

    #[test]
    fn generic_pow_node() {
        // (1 + sqrt 2)^(3/2)
        let base = CertifiedValue::sum(&[cv(int(1)), cv(int(2)).pow(&ratio(1, 2)).unwrap()]).unwrap();
        let mut p = rational_power(&base, &ratio(3, 2)).unwrap();
        p.refine(&ratio(1, 1_000_000_000)).unwrap();
        // 2.414213562373095^(1.5) = 3.7511...
        assert!(p.lo() > &ratio(37511, 10_000) && p.hi() < &ratio(37512, 10_000));
    }

    #[test]
    fn rejects_nonpositive_bases() {
        assert!(cv(int(-2)).pow(&ratio(1, 2)).is_err());
        assert!(cv(int(0)).recip().is_err());
        assert!(matches!(cv(int(-2)).pow(&int(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn counter_tracks_inexact_enclosures() {
        reset_inexact_enclosure_count();
        let _ = CertifiedValue::sum(&[cv(ratio(1, 3)), cv(ratio(2, 7))]).unwrap();
        assert_eq!(inexact_enclosure_count(), 0);
        let _ = cv(int(3)).pow(&ratio(1, 2)).unwrap();
        assert!(inexact_enclosure_count() > 0);
    }
}
