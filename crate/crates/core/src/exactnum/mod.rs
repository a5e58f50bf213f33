//! Exact rationals and certified interval evaluation.

mod certified;
mod compare;
pub mod rational;
mod root;

pub use certified::{inexact_enclosure_count, rational_power, reset_inexact_enclosure_count, CertifiedValue};
pub use compare::{compare, ComparisonOutcome, PrecisionPolicy, Relation};
pub use rational::{parse_rational, to_decimal, to_pq, IntervalJson, Rational};
pub use root::nth_root;
