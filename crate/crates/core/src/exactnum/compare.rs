use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::certified::CertifiedValue;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Refinement schedule for [`compare`]: start at `initial_width`, multiply
/// the target width by `shrink_factor` each round, give up below `floor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_width: Rational,
    pub shrink_factor: Rational,
    pub floor: Rational,
}

fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

impl PrecisionPolicy {
    pub const DEFAULT_INITIAL_BITS: u32 = 32;
    pub const DEFAULT_SHRINK_BITS: u32 = 32;
    pub const DEFAULT_FLOOR_BITS: u32 = 512;

    /// Widths `2^-initial`, factor `2^-shrink`, floor `2^-floor`.
    pub fn from_bits(initial: u32, shrink: u32, floor: u32) -> Result<Self> {
        if shrink == 0 {
            return Err(Error::Config("shrink factor must be below 1".into()));
        }
        if floor < initial {
            return Err(Error::Config("floor must not exceed the initial width".into()));
        }
        Ok(PrecisionPolicy {
            initial_width: pow2_neg(initial),
            shrink_factor: pow2_neg(shrink),
            floor: pow2_neg(floor),
        })
    }

    pub fn with_floor_bits(mut self, floor: u32) -> Self {
        self.floor = pow2_neg(floor);
        self
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_width: pow2_neg(Self::DEFAULT_INITIAL_BITS),
            shrink_factor: pow2_neg(Self::DEFAULT_SHRINK_BITS),
            floor: pow2_neg(Self::DEFAULT_FLOOR_BITS),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    LessThan,
    Equal,
    GreaterThan,
    Undecided,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::LessThan => "LessThan",
            Relation::Equal => "Equal",
            Relation::GreaterThan => "GreaterThan",
            Relation::Undecided => "Undecided",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonOutcome {
    pub relation: Relation,
    /// Larger of the two operand widths when the comparison stopped.
    pub achieved_width: Rational,
    pub precision_rounds: u32,
}

fn decide(a: &CertifiedValue, b: &CertifiedValue) -> Option<Relation> {
    if a.hi() < b.lo() {
        Some(Relation::LessThan)
    } else if a.lo() > b.hi() {
        Some(Relation::GreaterThan)
    } else if a.is_exact() && b.is_exact() {
        // both width zero and overlapping: identical points
        Some(Relation::Equal)
    } else {
        None
    }
}

/// Refines `a` and `b` alternately until their enclosures separate, both
/// collapse to the same exact point, or the policy floor is reached.
///
/// `LessThan`/`GreaterThan` are certificates: on return the operands'
/// enclosures are disjoint. `Equal` is only produced for two identical
/// width-zero values.
pub fn compare(
    a: &mut CertifiedValue,
    b: &mut CertifiedValue,
    policy: &PrecisionPolicy,
) -> ComparisonOutcome {
    let outcome = |relation, a: &CertifiedValue, b: &CertifiedValue, rounds| ComparisonOutcome {
        relation,
        achieved_width: a.width().max(b.width()),
        precision_rounds: rounds,
    };
    if let Some(rel) = decide(a, b) {
        return outcome(rel, a, b, 0);
    }
    let mut target = policy.initial_width.clone();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let refined = a.refine(&target).and_then(|_| b.refine(&target));
        if let Some(rel) = decide(a, b) {
            return outcome(rel, a, b, rounds);
        }
        if refined.is_err() || target <= policy.floor || !policy.shrink_factor.is_positive() {
            return outcome(Relation::Undecided, a, b, rounds);
        }
        target = (&target * &policy.shrink_factor).max(policy.floor.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};
    use crate::exactnum::root::nth_root;

    fn sqrt2() -> CertifiedValue {
        nth_root(&int(2), 2, &ratio(1, 16)).unwrap()
    }

    #[test]
    fn sqrt2_below_three_halves() {
        let mut a = sqrt2();
        let mut b = CertifiedValue::exact(ratio(3, 2));
        let out = compare(&mut a, &mut b, &PrecisionPolicy::default());
        assert_eq!(out.relation, Relation::LessThan);
        assert!(a.hi() < b.lo());
    }

    #[test]
    fn exact_equal() {
        let mut a = CertifiedValue::exact(int(5));
        let mut b = CertifiedValue::exact(int(5));
        let out = compare(&mut a, &mut b, &PrecisionPolicy::default());
        assert_eq!(out.relation, Relation::Equal);
        assert_eq!(out.precision_rounds, 0);
        assert_eq!(out.achieved_width, int(0));
    }

    #[test]
    fn sqrt2_above_decimal_truncation() {
        // 2 * 10^18 > 1414213562^2 = 1999999998944727844
        assert!(BigInt::from(2) * num_traits::pow(BigInt::from(10), 18)
            > num_traits::pow(BigInt::from(1414213562u64), 2));
        let mut a = sqrt2();
        let mut b = CertifiedValue::exact(ratio(1414213562, 1_000_000_000));
        let out = compare(&mut a, &mut b, &PrecisionPolicy::default());
        assert_eq!(out.relation, Relation::GreaterThan);
        assert!(a.lo() > b.hi());
    }

    #[test]
    fn equal_irrationals_are_undecided() {
        // sqrt(2) built two ways that do not collapse symbolically
        let mut a = sqrt2();
        let mut b = CertifiedValue::sum(&[sqrt2(), CertifiedValue::exact(int(1))])
            .unwrap()
            .add(&CertifiedValue::exact(int(-1)))
            .unwrap();
        let policy = PrecisionPolicy::from_bits(16, 16, 64).unwrap();
        let out = compare(&mut a, &mut b, &policy);
        assert_eq!(out.relation, Relation::Undecided);
        assert!(out.achieved_width <= ratio(1, 1 << 62));
        assert_eq!(out.precision_rounds, 4);
    }

    #[test]
    fn policy_validation() {
        assert!(PrecisionPolicy::from_bits(32, 0, 512).is_err());
        assert!(PrecisionPolicy::from_bits(64, 32, 32).is_err());
        let p = PrecisionPolicy::default();
        assert_eq!(p, PrecisionPolicy::from_bits(32, 32, 512).unwrap());
    }
}
