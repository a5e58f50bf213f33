//! The `mixmean` command line: `compute`, `verify`, `check-lemma`, `table`,
//! and `fuzz`.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or
//! stays undecided, 2 for usage and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, to_decimal, to_pq, CertifiedValue, PrecisionPolicy, Rational};
use crate::fuzz::{run_campaign, Family, FuzzConfig};
use crate::means::{mixed_mean, mixed_pairs, prefix_means, triple_mixed_mean, MeanKind, PositiveSequence, THEOREM_CHAIN};
use crate::verify::{lemma_reports, verify_claims, Claim};
use crate::weights::{build_tensor, check_lemma_properties};

pub const FLOOR_ENV: &str = "MIXMEAN_PRECISION_FLOOR_BITS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mixmean", version, about = "Exact and certified mixed arithmetic/geometric/harmonic means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct PrecisionArgs {
    /// First refinement target width, as 2^-BITS.
    #[arg(long, default_value_t = PrecisionPolicy::DEFAULT_INITIAL_BITS)]
    initial_bits: u32,
    /// Per-round shrink factor for the target width, as 2^-BITS.
    #[arg(long, default_value_t = PrecisionPolicy::DEFAULT_SHRINK_BITS)]
    shrink_bits: u32,
    /// Smallest target width before a comparison is declared undecided, as
    /// 2^-BITS [default: $MIXMEAN_PRECISION_FLOOR_BITS or 512].
    #[arg(long)]
    floor_bits: Option<u32>,
}

impl PrecisionArgs {
    fn policy(&self) -> Result<PrecisionPolicy> {
        let floor = match self.floor_bits {
            Some(b) => b,
            None => match std::env::var(FLOOR_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(v.clone(), format!("{FLOOR_ENV} must be a bit count")))?,
                Err(_) => PrecisionPolicy::DEFAULT_FLOOR_BITS,
            },
        };
        PrecisionPolicy::from_bits(self.initial_bits, self.shrink_bits, floor)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the prefix means of a sequence and every mixed mean built from them.
    Compute {
        /// Comma-separated positive rationals or decimals, e.g. 1,2/3,0.5
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        /// Decimal places in rendered values.
        #[arg(long, default_value_t = 12)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify inequalities and identities for one sequence.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        /// Comma-separated subset of Eq1,Prop3,Prop4,Thm5,ProofSteps,Identities, or `all`.
        #[arg(long, default_value = "all")]
        claims: String,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Check the five weight-tensor properties exactly.
    CheckLemma {
        #[arg(long)]
        n: usize,
        /// Check every dimension from 1 to n.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the weight vectors a(i,j) as exact fractions.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a deterministic verification campaign.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// uniform-rational | log-uniform | near-constant[:delta] | extreme-ratio[:R] | adversarial-sorted
        #[arg(long, default_value = "uniform-rational")]
        family: String,
        #[arg(long, default_value = "all")]
        claims: String,
        /// Write the campaign result as JSON to this path (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the process exit code.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`parse_and_dispatch`] with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e @ (Error::Parse { .. } | Error::Domain(_) | Error::Config(_))) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Compute { seq, digits, format } => {
            let x = PositiveSequence::parse(&seq)?;
            let summary = compute_summary(&x, digits)?;
            match format {
                Format::Json => write_json(out, &summary)?,
                Format::Text => write!(out, "{}", summary.to_text()).map_err(io_err)?,
            }
            Ok(true)
        }
        Command::Verify {
            seq,
            claims,
            precision,
            format,
            digits,
        } => {
            let claims = Claim::parse_list(&claims)?;
            let policy = precision.policy()?;
            let x = PositiveSequence::parse(&seq)?;
            let reports = verify_claims(&claims, &x, &policy)?;
            match format {
                Format::Json => {
                    let json: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
                    write_json(out, &json)?;
                }
                Format::Text => {
                    writeln!(out, "x = {x}").map_err(io_err)?;
                    for r in &reports {
                        write!(out, "{}", r.to_text(digits)).map_err(io_err)?;
                    }
                }
            }
            Ok(reports.iter().all(|r| r.passed))
        }
        Command::CheckLemma { n, all, format } => {
            if n == 0 {
                return Err(Error::domain("--n must be at least 1"));
            }
            let dims: Vec<usize> = if all { (1..=n).collect() } else { vec![n] };
            let mut ok = true;
            let mut json = Vec::new();
            for d in dims {
                let report = check_lemma_properties(&build_tensor(d)?);
                ok &= report.passed();
                let reps = lemma_reports(&report);
                match format {
                    Format::Json => json.push(LemmaJson {
                        n: d,
                        reports: reps.iter().map(|r| r.to_json()).collect(),
                    }),
                    Format::Text => {
                        for (r, p) in reps.iter().zip(&report.properties) {
                            writeln!(
                                out,
                                "n={d:<3} {} {:<11} {}",
                                if r.passed { "PASS" } else { "FAIL" },
                                r.claim,
                                p.property.description()
                            )
                            .map_err(io_err)?;
                            for diag in &r.diagnostics {
                                writeln!(out, "        ! {diag}").map_err(io_err)?;
                            }
                        }
                    }
                }
            }
            if format == Format::Json {
                write_json(out, &json)?;
            }
            Ok(ok)
        }
        Command::Table { n, format } => {
            let t = build_tensor(n)?;
            match format {
                Format::Json => write_json(out, &t.to_json())?,
                Format::Text => write!(out, "{t}").map_err(io_err)?,
            }
            Ok(true)
        }
        Command::Fuzz {
            seed,
            trials,
            n_min,
            n_max,
            family,
            claims,
            json,
            precision,
        } => {
            let claims = Claim::parse_list(&claims)?;
            let family: Family = family.parse()?;
            let mut cfg = FuzzConfig::new(seed, trials, n_min, n_max, family);
            cfg.claims = claims;
            cfg.policy = precision.policy()?;
            let result = run_campaign(&cfg)?;
            match &json {
                Some(path) if path.as_os_str() == "-" => writeln!(out, "{}", result.to_json()).map_err(io_err)?,
                Some(path) => std::fs::write(path, result.to_json() + "\n").map_err(io_err)?,
                None => {}
            }
            if json.as_ref().is_none_or(|p| p.as_os_str() != "-") {
                writeln!(
                    out,
                    "seed={} family={} trials={} failures={} undecided={} max_rounds={}",
                    result.seed, result.family, result.trials, result.failures, result.undecided, result.max_precision_rounds
                )
                .map_err(io_err)?;
                if let Some(w) = &result.worst_margin {
                    writeln!(
                        out,
                        "worst margin {} ({} {}) at trial {}",
                        to_decimal(&parse_rational(&w.margin_lo)?, 20),
                        w.claim,
                        w.label,
                        w.trial
                    )
                    .map_err(io_err)?;
                }
                for f in &result.failing_inputs {
                    writeln!(out, "FAIL trial {} {}: [{}]", f.trial, f.claim, f.input.join(",")).map_err(io_err)?;
                }
            }
            Ok(result.passed())
        }
    }
}

#[derive(Serialize)]
struct LemmaJson {
    n: usize,
    reports: Vec<crate::verify::ReportJson>,
}

/// Rendered value: exact fraction when width zero, plus a decimal.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValueJson {
    pub decimal: String,
    pub exact: Option<String>,
}

impl ValueJson {
    pub fn render(v: &CertifiedValue, digits: usize) -> Result<Self> {
        if let Some(e) = v.exact_value() {
            return Ok(ValueJson {
                decimal: to_decimal(e, digits),
                exact: Some(to_pq(e)),
            });
        }
        let mut v = v.clone();
        let eps = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), digits + 2));
        v.refine(&eps)?;
        Ok(ValueJson {
            decimal: to_decimal(&v.midpoint(), digits),
            exact: None,
        })
    }

    fn text(&self) -> String {
        match &self.exact {
            Some(e) => format!("{} ({e})", self.decimal),
            None => self.decimal.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixRow {
    pub j: usize,
    #[serde(rename = "A")]
    pub arithmetic: ValueJson,
    #[serde(rename = "G")]
    pub geometric: ValueJson,
    #[serde(rename = "H")]
    pub harmonic: ValueJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub kinds: String,
    pub value: ValueJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComputeSummary {
    pub sequence: Vec<String>,
    pub prefix_means: Vec<PrefixRow>,
    pub mixed: Vec<NamedValue>,
    pub chain: Vec<NamedValue>,
}

impl ComputeSummary {
    fn to_text(&self) -> String {
        let mut s = format!("x = ({})\n\nprefix means\n", self.sequence.join(", "));
        for row in &self.prefix_means {
            s.push_str(&format!(
                "  j={:<3} A={}  G={}  H={}\n",
                row.j,
                row.arithmetic.text(),
                row.geometric.text(),
                row.harmonic.text()
            ));
        }
        s.push_str("\nmixed means outer(inner)\n");
        for m in &self.mixed {
            s.push_str(&format!("  {:<6} {}\n", m.kinds, m.value.text()));
        }
        s.push_str("\nchain outer(mid(inner)), non-increasing\n");
        for m in &self.chain {
            s.push_str(&format!("  {:<8} {}\n", m.kinds, m.value.text()));
        }
        s
    }
}

pub fn compute_summary(x: &PositiveSequence, digits: usize) -> Result<ComputeSummary> {
    let by_kind = |k: MeanKind| prefix_means(x, k);
    let (a, g, h) = (by_kind(MeanKind::Arithmetic)?, by_kind(MeanKind::Geometric)?, by_kind(MeanKind::Harmonic)?);
    let prefix = (0..x.len())
        .map(|i| {
            Ok(PrefixRow {
                j: i + 1,
                arithmetic: ValueJson::render(&a[i], digits)?,
                geometric: ValueJson::render(&g[i], digits)?,
                harmonic: ValueJson::render(&h[i], digits)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mixed = mixed_pairs()
        .into_iter()
        .map(|(o, i)| {
            Ok(NamedValue {
                kinds: format!("{o}({i})"),
                value: ValueJson::render(&mixed_mean(x, o, i)?, digits)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = THEOREM_CHAIN
        .iter()
        .map(|&(o, m, i)| {
            Ok(NamedValue {
                kinds: format!("{o}({m}({i}))"),
                value: ValueJson::render(&triple_mixed_mean(x, o, m, i)?, digits)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComputeSummary {
        sequence: x.to_strings(),
        prefix_means: prefix,
        mixed,
        chain,
    })
}
