//! Exact and certified evaluation of mixed means built from the
//! arithmetic (A), geometric (G) and harmonic (H) means.
//!
//! Everything rational is computed exactly with [`Rational`]. Quantities
//! involving roots are carried as [`CertifiedValue`]s: refinable rational
//! enclosures whose comparisons are decided only by disjoint intervals or
//! by exact equality.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: certified roots and powers over exact rationals, with refine-until-decided comparison.
//! - [`weights`]: the binomial weight tensor `a_k(i, j)` and its five structural properties.
//! - [`means`]: prefix and weighted means, plus their mixed and triple-mixed compositions.
//! - [`verify`]: certification of the mixed-mean inequalities and the steps behind them.
//! - [`fuzz`]: deterministic seeded campaigns over sequence families.
//! - [`cli`]: the `mixmean` command-line front end.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod fuzz;
pub mod means;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use exactnum::{
    compare, nth_root, rational_power, CertifiedValue, ComparisonOutcome, PrecisionPolicy,
    Rational, Relation,
};
pub use means::{MeanKind, MeanMatrix, PositiveSequence};
pub use verify::{Claim, VerificationReport};
pub use weights::WeightTensor;
