// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances and sizes are fixed here.

use std::time::{Duration, Instant};

use mixmean::cli::run;
use mixmean::exactnum::rational::{int, ratio};
use mixmean::exactnum::{inexact_enclosure_count, reset_inexact_enclosure_count, to_decimal, to_pq};
use mixmean::fuzz::{generate_sequence, run_campaign, Family, FuzzConfig};
use mixmean::means::{mean_matrix, mixed_mean, triple_mixed_mean, THEOREM_CHAIN};
use mixmean::verify::{minkowski_step, verify_claims, verify_identities_with, verify_prop3};
use mixmean::weights::{build_tensor, check_lemma_properties};
use mixmean::{Claim, MeanKind, PositiveSequence, PrecisionPolicy, Rational, Relation};

const SEED: u64 = 42;
const LEMMA_MAX_N: usize = 12;
const LEMMA_BUDGET: Duration = Duration::from_secs(30);
const IDENTITY_SEQUENCES: u64 = 100;
const IDENTITY_MAX_N: usize = 10;
const INEQUALITY_TRIALS: u64 = 1000;
const INEQUALITY_N: std::ops::RangeInclusive<usize> = 2..=8;
const INEQUALITY_BUDGET: Duration = Duration::from_secs(600);
const EQUALITY_MAX_N: usize = 12;
const GOLDEN_WIDTH_DIGITS: i64 = 9;
const EXACTNESS_TRIALS: u64 = 100;

// x = (1, 2), 30 significant digits from an independent multiprecision evaluation
const GOLDEN_CHAIN: [&str; 4] = [
    "1.10102051443364380360543185059",
    "1.09383632135605431360096498526",
    "1.08578643762690495119831127579",
    "1.07735026918962576450914878050",
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn lemma_suite() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=LEMMA_MAX_N {
        let report = match build_tensor(n) {
            Ok(t) => check_lemma_properties(&t),
            Err(e) => return fail(format!("n={n}: {e}")),
        };
        for p in report.properties.iter().filter(|p| !p.passed) {
            bad.push(format!("n={n} {} ({} violations)", p.property.id(), p.violations));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: bad.is_empty() && elapsed < LEMMA_BUDGET,
        detail: format!(
            "n<= {LEMMA_MAX_N}, properties i-v, {:.2?} (budget {:?}){}",
            elapsed,
            LEMMA_BUDGET,
            listing(&bad)
        ),
    }
}

fn identity_suite() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 1..=IDENTITY_MAX_N {
        let t = build_tensor(n).expect("tensor");
        let cfg = FuzzConfig::new(SEED, IDENTITY_SEQUENCES, n, n, Family::UniformRational);
        for trial in 0..IDENTITY_SEQUENCES {
            let x = generate_sequence(&cfg, trial).expect("sequence");
            match verify_identities_with(&x, &t) {
                Ok(r) => {
                    let nonzero = r.comparisons.iter().filter(|c| c.relation != Relation::Equal).count();
                    if !r.passed || nonzero > 0 {
                        bad.push(format!("n={n} trial={trial}: {:?}", r.diagnostics));
                    }
                }
                Err(e) => bad.push(format!("n={n} trial={trial}: {e}")),
            }
            checked += 1;
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{checked} sequences, n in 1..={IDENTITY_MAX_N}, zero residuals required{}", listing(&bad)),
    }
}

fn inequality_suite() -> Outcome {
    let claims = vec![Claim::Eq1, Claim::Prop3, Claim::Prop4, Claim::Thm5, Claim::ProofSteps];
    let start = Instant::now();
    let (mut sequences, mut failures, mut undecided, mut max_rounds) = (0u64, 0u64, 0u64, 0u32);
    let mut worst: Option<(Rational, String)> = None;
    let mut bad = Vec::new();
    for family in Family::defaults() {
        for n in INEQUALITY_N {
            let mut cfg = FuzzConfig::new(SEED, INEQUALITY_TRIALS, n, n, family.clone());
            cfg.claims = claims.clone();
            let res = match run_campaign(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(format!("{family} n={n}: {e}")),
            };
            sequences += res.trials;
            failures += res.failures;
            undecided += res.undecided;
            max_rounds = max_rounds.max(res.max_precision_rounds);
            for f in res.failing_inputs.iter().take(3) {
                bad.push(format!("{family} n={n} trial={} {} [{}]", f.trial, f.claim, f.input.join(",")));
            }
            if let Some(w) = res.worst_margin {
                if worst.as_ref().is_none_or(|(m, _)| w.margin < *m) {
                    worst = Some((w.margin.clone(), format!("{} {} ({family}, n={n})", w.claim, w.label)));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let worst = worst
        .map(|(m, at)| format!("{} at {at}", to_decimal(&m, 40).trim_end_matches('0')))
        .unwrap_or_else(|| "none".into());
    Outcome {
        passed: failures == 0 && undecided == 0 && elapsed < INEQUALITY_BUDGET,
        detail: format!(
            "{sequences} sequences x 5 verifiers, failures={failures} undecided={undecided} \
             max_rounds={max_rounds}, worst margin {worst}, {:.1?} (budget {:?}){}",
            elapsed,
            INEQUALITY_BUDGET,
            listing(&bad)
        ),
    }
}

fn equality_suite() -> Outcome {
    let claims = Claim::parse_list("all").expect("claims");
    let policy = PrecisionPolicy::default();
    let mut bad = Vec::new();
    let mut comparisons = 0;
    for c in [int(1), ratio(1, 3), int(1_000_000)] {
        for n in 1..=EQUALITY_MAX_N {
            let x = PositiveSequence::new(vec![c.clone(); n]).expect("positive");
            let reports = match verify_claims(&claims, &x, &policy) {
                Ok(r) => r,
                Err(e) => {
                    bad.push(format!("c={c} n={n}: {e}"));
                    continue;
                }
            };
            for r in reports {
                for cmp in &r.comparisons {
                    comparisons += 1;
                    let zero_width = cmp.margin_lo == cmp.margin_hi && cmp.achieved_width == int(0);
                    if !r.passed || cmp.relation != Relation::Equal || !zero_width {
                        bad.push(format!("c={c} n={n} {} {}: {}", r.claim, cmp.label, cmp.relation));
                    }
                }
            }
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("c in {{1, 1/3, 10^6}}, n in 1..={EQUALITY_MAX_N}, {comparisons} comparisons{}", listing(&bad)),
    }
}

fn golden_values() -> Outcome {
    let x = PositiveSequence::parse("1,2").expect("sequence");
    let eps = ratio(1, 10i64.pow(GOLDEN_WIDTH_DIGITS as u32));
    let slack = ratio(1, 10i64.pow(18)) * ratio(1, 10i64.pow(10));
    let mut bad = Vec::new();
    let mut shown = Vec::new();
    let mut prev_lo: Option<Rational> = None;
    for ((outer, mid, inner), oracle) in THEOREM_CHAIN.into_iter().zip(GOLDEN_CHAIN) {
        let name = format!("{}{}{}", outer.symbol(), mid.symbol(), inner.symbol());
        let mut v = triple_mixed_mean(&x, outer, mid, inner).expect("value");
        v.refine(&eps).expect("refine");
        let o = mixmean::exactnum::parse_rational(oracle).expect("oracle");
        let inside = v.lo() - &slack <= o && o <= v.hi() + &slack;
        if v.width() > eps || !inside {
            bad.push(format!("{name}: [{}, {}]", to_decimal(v.lo(), 12), to_decimal(v.hi(), 12)));
        }
        if let Some(p) = &prev_lo {
            if v.hi() >= p {
                bad.push(format!("{name} not strictly below its predecessor"));
            }
        }
        prev_lo = Some(v.lo().clone());
        shown.push(format!("{name}={}", to_decimal(&v.midpoint(), 9)));
    }

    let ha = mixed_mean(&x, MeanKind::Harmonic, MeanKind::Arithmetic).expect("H(A)");
    let ah = mixed_mean(&x, MeanKind::Arithmetic, MeanKind::Harmonic).expect("A(H)");
    if ha.exact_value() != Some(&ratio(6, 5)) || ah.exact_value() != Some(&ratio(7, 6)) {
        bad.push("Prop3 values are not exactly 6/5 and 7/6".into());
    }
    let r = verify_prop3(&x, &PrecisionPolicy::default()).expect("prop3");
    let c = &r.comparisons[0];
    if !(r.passed && c.margin_lo == ratio(1, 30) && c.margin_hi == ratio(1, 30)) {
        bad.push(format!("Prop3 margin [{}, {}]", to_pq(&c.margin_lo), to_pq(&c.margin_hi)));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!(
            "x=(1,2): {}, width <= 1e-{GOLDEN_WIDTH_DIGITS}; H(A)=6/5 A(H)=7/6 margin {}{}",
            shown.join(" > "),
            to_pq(&c.margin_lo),
            listing(&bad)
        ),
    }
}

fn exactness_guarantee() -> Outcome {
    let policy = PrecisionPolicy::default();
    let mut inputs = 0;
    let mut bad = Vec::new();
    for family in Family::defaults() {
        let cfg = FuzzConfig::new(SEED, EXACTNESS_TRIALS, 1, 8, family.clone());
        for trial in 0..EXACTNESS_TRIALS {
            let x = generate_sequence(&cfg, trial).expect("sequence");
            let t = build_tensor(x.len()).expect("tensor");
            reset_inexact_enclosure_count();
            let prop3 = verify_prop3(&x, &policy).expect("prop3");
            let after_prop3 = inexact_enclosure_count();
            reset_inexact_enclosure_count();
            let h = mean_matrix(&x, &t, MeanKind::Harmonic).expect("harmonic matrix");
            let mink = minkowski_step(&h, &policy).expect("minkowski");
            let after_mink = inexact_enclosure_count();
            if after_prop3 != 0 || after_mink != 0 || !prop3.passed {
                bad.push(format!("{family} trial={trial}: prop3={after_prop3} minkowski={after_mink}"));
            }
            if mink.achieved_width != int(0) {
                bad.push(format!("{family} trial={trial}: minkowski width {}", to_pq(&mink.achieved_width)));
            }
            inputs += 1;
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{inputs} fuzzed inputs, nonzero-width enclosures counted: 0 required{}", listing(&bad)),
    }
}

fn determinism() -> Outcome {
    let args = ["mixmean", "fuzz", "--seed", "42", "--trials", "200", "--n-max", "8", "--json", "-"];
    let capture = || {
        let mut out = Vec::new();
        let code = run(args, &mut out, &mut Vec::new());
        (code, out)
    };
    let first = capture();
    let second = capture();
    // a different worker count must not change the bytes either
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().expect("pool");
    let third = pool.install(capture);
    let same = first == second && first == third;
    Outcome {
        passed: same && first.0 == 0 && !first.1.is_empty(),
        detail: format!(
            "`fuzz --seed 42 --trials 200 --n-max 8 --json -` x3 (1 run on 4 workers), {} bytes, identical={same}, exit={}",
            first.1.len(),
            first.0
        ),
    }
}

fn fail(detail: String) -> Outcome {
    Outcome { passed: false, detail }
}

fn listing(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; {} problem(s): {}", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("lemma-suite", lemma_suite),
        ("identity-suite", identity_suite),
        ("inequality-suite", inequality_suite),
        ("equality-suite", equality_suite),
        ("golden-values", golden_values),
        ("exactness-guarantee", exactness_guarantee),
        ("determinism", determinism),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let out = check();
        println!("{} {name}: {}", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        failed += usize::from(!out.passed);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
