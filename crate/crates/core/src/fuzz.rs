//! Deterministic seeded campaigns that run the verifiers over generated
//! sequence families.
//!
//! Randomness comes from SplitMix64 (Steele, Lea & Flood 2014), embedded
//! here so that a `(seed, trial)` pair names the same sequence on every
//! platform. Trial `t` of seed `s` draws from a generator whose state starts
//! at `mix(s) ^ mix(t + 1)` where `mix` is the SplitMix64 output function.
//! Values are drawn as numerator/denominator pairs, never through floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, to_pq, PrecisionPolicy, Rational, Relation};
use crate::means::PositiveSequence;
use crate::verify::{verify_claims, Claim, VerificationReport};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for one trial of a campaign.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        SplitMix64::new(mix64(seed) ^ mix64(trial.wrapping_add(1)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform integer in `[lo, hi]` by rejection sampling.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        let n = span + 1;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return lo + v % n;
            }
        }
    }

    pub fn signed_range(&mut self, lo: i64, hi: i64) -> i64 {
        let offset = self.range(0, (hi - lo) as u64);
        lo + offset as i64
    }
}

const UNIFORM_MAX: u64 = 1_000_000;
const BASE_MAX: u64 = 1_000;
const NOISE_STEPS: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `p/q` with `p, q` uniform in `1..=10^6`.
    UniformRational,
    /// `(p/q) * 10^e` with `p, q` in `1..=1000` and `e` in `-6..=6`.
    LogUniform,
    /// `c * (1 + e_i)` with `|e_i| <= delta`, `e_i` on a grid of `delta / 10^6`.
    NearConstant(Rational),
    /// `c * t_i` with `t_i` in `[1, R]`; one term is `c`, another `c * R`.
    ExtremeRatio(Rational),
    /// Uniform-rational values sorted descending on even trials and
    /// ascending on odd trials.
    AdversarialSorted,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::UniformRational => "uniform-rational",
            Family::LogUniform => "log-uniform",
            Family::NearConstant(_) => "near-constant",
            Family::ExtremeRatio(_) => "extreme-ratio",
            Family::AdversarialSorted => "adversarial-sorted",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::NearConstant(d) if d.is_negative() || d >= &Rational::one() => {
                Err(Error::Config(format!("near-constant delta {d} must be in [0, 1)")))
            }
            Family::ExtremeRatio(r) if r < &Rational::one() => {
                Err(Error::Config(format!("extreme-ratio R = {r} must be at least 1")))
            }
            _ => Ok(()),
        }
    }

    /// The five families with their default parameters
    /// (`delta = 10^-6`, `R = 10^6`).
    pub fn defaults() -> Vec<Family> {
        vec![
            Family::UniformRational,
            Family::LogUniform,
            Family::NearConstant(Rational::new(BigInt::one(), BigInt::from(1_000_000))),
            Family::ExtremeRatio(Rational::from_integer(BigInt::from(1_000_000))),
            Family::AdversarialSorted,
        ]
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::NearConstant(p) | Family::ExtremeRatio(p) => write!(f, "{}:{}", self.name(), to_pq(p)),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `name` or `name:param`, e.g. `near-constant:1e-6`, `extreme-ratio:1000000`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(parse_rational(p)?)),
            None => (s, None),
        };
        let family = match (name, param) {
            ("uniform-rational", None) => Family::UniformRational,
            ("log-uniform", None) => Family::LogUniform,
            ("adversarial-sorted", None) => Family::AdversarialSorted,
            ("near-constant", p) => {
                Family::NearConstant(p.unwrap_or_else(|| Rational::new(BigInt::one(), BigInt::from(1_000_000))))
            }
            ("extreme-ratio", p) => {
                Family::ExtremeRatio(p.unwrap_or_else(|| Rational::from_integer(BigInt::from(1_000_000))))
            }
            _ => {
                return Err(Error::parse(
                    s,
                    "expected uniform-rational, log-uniform, near-constant[:delta], extreme-ratio[:R], or adversarial-sorted",
                ))
            }
        };
        family.validate()?;
        Ok(family)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub family: Family,
    pub claims: Vec<Claim>,
    pub policy: PrecisionPolicy,
}

impl FuzzConfig {
    pub fn new(seed: u64, trials: u64, n_min: usize, n_max: usize, family: Family) -> Self {
        FuzzConfig {
            seed,
            trials,
            n_min,
            n_max,
            family,
            claims: Claim::ALL.to_vec(),
            policy: PrecisionPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Config(format!(
                "empty length range [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        if self.claims.is_empty() {
            return Err(Error::Config("no claims selected".into()));
        }
        self.family.validate()
    }
}

fn small_ratio(rng: &mut SplitMix64, max: u64) -> Rational {
    let p = rng.range(1, max);
    let q = rng.range(1, max);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn pow10(e: i64) -> Rational {
    let t = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(t)
    } else {
        Rational::new(BigInt::one(), t)
    }
}

/// The sequence for one trial; a pure function of `(seed, trial, family, n range)`.
pub fn generate_sequence(cfg: &FuzzConfig, trial: u64) -> Result<PositiveSequence> {
    cfg.validate()?;
    if trial >= cfg.trials {
        return Err(Error::Config(format!("trial {trial} out of range 0..{}", cfg.trials)));
    }
    let mut rng = SplitMix64::for_trial(cfg.seed, trial);
    let n = rng.range(cfg.n_min as u64, cfg.n_max as u64) as usize;
    let values: Vec<Rational> = match &cfg.family {
        Family::UniformRational => (0..n).map(|_| small_ratio(&mut rng, UNIFORM_MAX)).collect(),
        Family::LogUniform => (0..n)
            .map(|_| {
                let m = small_ratio(&mut rng, BASE_MAX);
                m * pow10(rng.signed_range(-6, 6))
            })
            .collect(),
        Family::NearConstant(delta) => {
            let c = small_ratio(&mut rng, BASE_MAX);
            let step = delta / Rational::from_integer(BigInt::from(NOISE_STEPS));
            (0..n)
                .map(|_| {
                    let eps = &step * Rational::from_integer(BigInt::from(rng.signed_range(-NOISE_STEPS, NOISE_STEPS)));
                    &c * (Rational::one() + eps)
                })
                .collect()
        }
        Family::ExtremeRatio(ratio) => {
            let c = small_ratio(&mut rng, BASE_MAX);
            let spread = ratio - Rational::one();
            let mut t: Vec<Rational> = (0..n)
                .map(|_| {
                    let u = Rational::new(BigInt::from(rng.range(0, UNIFORM_MAX)), BigInt::from(UNIFORM_MAX));
                    Rational::one() + &spread * u
                })
                .collect();
            let lo = rng.range(0, n as u64 - 1) as usize;
            t[lo] = Rational::one();
            if n > 1 {
                let mut hi = rng.range(0, n as u64 - 2) as usize;
                if hi >= lo {
                    hi += 1;
                }
                t[hi] = ratio.clone();
            }
            t.into_iter().map(|v| &c * v).collect()
        }
        Family::AdversarialSorted => {
            let mut v: Vec<Rational> = (0..n).map(|_| small_ratio(&mut rng, UNIFORM_MAX)).collect();
            v.sort();
            if trial.is_multiple_of(2) {
                v.reverse();
            }
            v
        }
    };
    PositiveSequence::new(values)
}

/// Smallest certified strict margin seen in a campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstMargin {
    pub trial: u64,
    pub claim: String,
    pub label: String,
    pub margin_lo: String,
    pub margin_hi: String,
    pub input: Vec<String>,
    #[serde(skip)]
    pub margin: Rational,
}

/// A failing or undecided report, with the input serialized for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub claim: String,
    pub input: Vec<String>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignResult {
    pub seed: u64,
    pub family: String,
    pub n_min: usize,
    pub n_max: usize,
    pub claims: Vec<String>,
    pub trials: u64,
    pub failures: u64,
    pub undecided: u64,
    pub max_precision_rounds: u32,
    pub worst_margin: Option<WorstMargin>,
    pub failing_inputs: Vec<FailureRecord>,
}

impl CampaignResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("campaign result serializes")
    }
}

struct TrialOutcome {
    trial: u64,
    input: Vec<String>,
    reports: std::result::Result<Vec<VerificationReport>, String>,
}

fn run_trial(cfg: &FuzzConfig, trial: u64) -> TrialOutcome {
    match generate_sequence(cfg, trial) {
        Ok(x) => TrialOutcome {
            trial,
            input: x.to_strings(),
            reports: verify_claims(&cfg.claims, &x, &cfg.policy).map_err(|e| e.to_string()),
        },
        Err(e) => TrialOutcome {
            trial,
            input: Vec::new(),
            reports: Err(e.to_string()),
        },
    }
}

/// Runs every requested verifier on every generated sequence. Trials run in
/// parallel; aggregation is independent of scheduling.
pub fn run_campaign(cfg: &FuzzConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect();

    let mut result = CampaignResult {
        seed: cfg.seed,
        family: cfg.family.to_string(),
        n_min: cfg.n_min,
        n_max: cfg.n_max,
        claims: cfg.claims.iter().map(|c| c.name().to_string()).collect(),
        trials: cfg.trials,
        failures: 0,
        undecided: 0,
        max_precision_rounds: 0,
        worst_margin: None,
        failing_inputs: Vec::new(),
    };
    for outcome in outcomes {
        let reports = match outcome.reports {
            Ok(r) => r,
            Err(e) => {
                result.failures += 1;
                result.failing_inputs.push(FailureRecord {
                    trial: outcome.trial,
                    claim: "error".into(),
                    input: outcome.input,
                    diagnostics: vec![e],
                });
                continue;
            }
        };
        for rep in reports {
            result.undecided += rep.undecided() as u64;
            result.max_precision_rounds = result.max_precision_rounds.max(rep.precision_rounds);
            if !rep.passed {
                result.failures += 1;
                result.failing_inputs.push(FailureRecord {
                    trial: outcome.trial,
                    claim: rep.claim.clone(),
                    input: outcome.input.clone(),
                    diagnostics: rep.diagnostics.clone(),
                });
            }
            for c in rep.comparisons.iter().filter(|c| c.relation == Relation::GreaterThan) {
                let better = match &result.worst_margin {
                    None => true,
                    Some(w) => c.margin_lo < w.margin,
                };
                if better {
                    result.worst_margin = Some(WorstMargin {
                        trial: outcome.trial,
                        claim: rep.claim.clone(),
                        label: c.label.clone(),
                        margin_lo: to_pq(&c.margin_lo),
                        margin_hi: to_pq(&c.margin_hi),
                        input: outcome.input.clone(),
                        margin: c.margin_lo.clone(),
                    });
                }
            }
        }
    }
    if result.worst_margin.as_ref().is_some_and(|w| w.margin.is_zero()) {
        result.worst_margin = None;
    }
    Ok(result)
}

/// Re-parses a serialized input for replay.
pub fn replay_input(input: &[String]) -> Result<PositiveSequence> {
    PositiveSequence::new(input.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?)
}
