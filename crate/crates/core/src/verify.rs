//! Certification of the mixed-mean inequalities, the intermediate
//! Hölder/Minkowski steps of their proofs, and the exact identities that
//! connect the weight tensor to ordinary prefix means.
//!
//! Every inequality is oriented as `lhs >= rhs`. A report passes only when
//! each comparison is `GreaterThan` for a non-constant input or `Equal` for a
//! constant one; anything else, including `Undecided`, fails with the final
//! enclosures in its diagnostics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{compare, to_decimal, to_pq, CertifiedValue, PrecisionPolicy, Rational, Relation};
use crate::means::{
    mean_matrix, mean_of, mixed_mean, prefix_means, triple_mixed_mean, MeanKind, MeanMatrix,
    PositiveSequence, THEOREM_CHAIN,
};
use crate::weights::{build_tensor, LemmaReport, WeightTensor};

use MeanKind::{Arithmetic as A, Geometric as G, Harmonic as H};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Claim {
    Eq1,
    Prop3,
    Prop4,
    Thm5,
    ProofSteps,
    Identities,
}

impl Claim {
    pub const ALL: [Claim; 6] = [
        Claim::Eq1,
        Claim::Prop3,
        Claim::Prop4,
        Claim::Thm5,
        Claim::ProofSteps,
        Claim::Identities,
    ];

    /// Name accepted on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Claim::Eq1 => "Eq1",
            Claim::Prop3 => "Prop3",
            Claim::Prop4 => "Prop4",
            Claim::Thm5 => "Thm5",
            Claim::ProofSteps => "ProofSteps",
            Claim::Identities => "Identities",
        }
    }

    /// Identifier written into reports.
    pub fn id(self) -> &'static str {
        match self {
            Claim::Thm5 => "Thm5-chain",
            other => other.name(),
        }
    }

    /// Parses a comma-separated claim list; `all` selects every claim.
    pub fn parse_list(text: &str) -> Result<Vec<Claim>> {
        let mut out = Vec::new();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if token.eq_ignore_ascii_case("all") {
                out.extend(Claim::ALL);
            } else {
                out.push(token.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::parse(text, "no claims given"));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s) || c.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::parse(s, "unknown claim (expected Eq1, Prop3, Prop4, Thm5, ProofSteps, Identities)")
            })
    }
}

/// One certified comparison `lhs >= rhs` (or an exact identity residual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRecord {
    pub label: String,
    pub relation: Relation,
    /// Enclosure of `lhs - rhs`.
    pub margin_lo: Rational,
    pub margin_hi: Rational,
    pub achieved_width: Rational,
    pub precision_rounds: u32,
    pub lhs: (Rational, Rational),
    pub rhs: (Rational, Rational),
}

impl ComparisonRecord {
    fn exact_residual(label: &str, residual: Rational) -> Self {
        let relation = if residual.is_zero() {
            Relation::Equal
        } else if residual.is_positive() {
            Relation::GreaterThan
        } else {
            Relation::LessThan
        };
        ComparisonRecord {
            label: label.to_string(),
            relation,
            margin_lo: residual.clone(),
            margin_hi: residual.clone(),
            achieved_width: Rational::zero(),
            precision_rounds: 0,
            lhs: (residual.clone(), residual),
            rhs: (Rational::zero(), Rational::zero()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim: String,
    pub equality_expected: bool,
    pub comparisons: Vec<ComparisonRecord>,
    pub passed: bool,
    pub precision_rounds: u32,
    pub diagnostics: Vec<String>,
}

impl VerificationReport {
    fn from_comparisons(claim: &str, equality_expected: bool, comparisons: Vec<ComparisonRecord>) -> Self {
        let expected = if equality_expected {
            Relation::Equal
        } else {
            Relation::GreaterThan
        };
        let diagnostics: Vec<String> = comparisons
            .iter()
            .filter(|c| c.relation != expected)
            .map(|c| {
                format!(
                    "{}: expected {expected}, got {} (achieved width {}); lhs in [{}, {}], rhs in [{}, {}]",
                    c.label,
                    c.relation,
                    to_pq(&c.achieved_width),
                    to_pq(&c.lhs.0),
                    to_pq(&c.lhs.1),
                    to_pq(&c.rhs.0),
                    to_pq(&c.rhs.1)
                )
            })
            .collect();
        VerificationReport {
            claim: claim.to_string(),
            equality_expected,
            passed: diagnostics.is_empty(),
            precision_rounds: comparisons.iter().map(|c| c.precision_rounds).max().unwrap_or(0),
            comparisons,
            diagnostics,
        }
    }

    pub fn undecided(&self) -> usize {
        self.comparisons
            .iter()
            .filter(|c| c.relation == Relation::Undecided)
            .count()
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            claim: self.claim.clone(),
            passed: self.passed,
            comparisons: self
                .comparisons
                .iter()
                .map(|c| ComparisonJson {
                    label: c.label.clone(),
                    relation: c.relation.as_str().to_string(),
                    margin_lo: to_pq(&c.margin_lo),
                    margin_hi: to_pq(&c.margin_hi),
                })
                .collect(),
            precision_rounds: self.precision_rounds,
            diagnostics: self.diagnostics.clone(),
        }
    }

    /// Human-readable summary with margins rendered to `digits` places.
    pub fn to_text(&self, digits: usize) -> String {
        let mut out = format!(
            "{} {}{}\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.claim,
            if self.equality_expected { " (expects equality)" } else { "" }
        );
        for c in &self.comparisons {
            out.push_str(&format!(
                "  {:<24} {:<11} margin in [{}, {}] rounds={}\n",
                c.label,
                c.relation.as_str(),
                to_decimal(&c.margin_lo, digits),
                to_decimal(&c.margin_hi, digits),
                c.precision_rounds
            ));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("  ! {d}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonJson {
    pub label: String,
    pub relation: String,
    pub margin_lo: String,
    pub margin_hi: String,
}

/// `{"claim", "passed", "comparisons": [{"relation", "margin_lo", "margin_hi"}], "precision_rounds"}`;
/// each comparison also carries its `label`, and failing reports carry `diagnostics`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportJson {
    pub claim: String,
    pub passed: bool,
    pub comparisons: Vec<ComparisonJson>,
    pub precision_rounds: u32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Certifies `lhs >= rhs` by refinement and records the final margin.
pub fn certify(
    label: &str,
    mut lhs: CertifiedValue,
    mut rhs: CertifiedValue,
    policy: &PrecisionPolicy,
) -> ComparisonRecord {
    let outcome = compare(&mut lhs, &mut rhs, policy);
    ComparisonRecord {
        label: label.to_string(),
        relation: outcome.relation,
        margin_lo: lhs.lo() - rhs.hi(),
        margin_hi: lhs.hi() - rhs.lo(),
        achieved_width: outcome.achieved_width,
        precision_rounds: outcome.precision_rounds,
        lhs: (lhs.lo().clone(), lhs.hi().clone()),
        rhs: (rhs.lo().clone(), rhs.hi().clone()),
    }
}

fn recip_all(values: &[CertifiedValue]) -> Result<Vec<CertifiedValue>> {
    values.iter().map(CertifiedValue::recip).collect()
}

fn unit_fraction(d: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(d))
}

fn mixed_claim(
    claim: &str,
    label: &str,
    x: &PositiveSequence,
    big: (MeanKind, MeanKind),
    small: (MeanKind, MeanKind),
    policy: &PrecisionPolicy,
) -> Result<VerificationReport> {
    let lhs = mixed_mean(x, big.0, big.1)?;
    let rhs = mixed_mean(x, small.0, small.1)?;
    let record = certify(label, lhs, rhs, policy);
    Ok(VerificationReport::from_comparisons(claim, x.is_constant(), vec![record]))
}

/// Geometric mean of running arithmetic means dominates the arithmetic mean
/// of running geometric means.
pub fn verify_eq1(x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    mixed_claim("Eq1", "G(A)>=A(G)", x, (G, A), (A, G), policy)
}

/// `H` over running arithmetic means dominates `A` over running harmonic means.
/// Both sides are rational, so the comparison is exact.
pub fn verify_prop3(x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    mixed_claim("Prop3", "H(A)>=A(H)", x, (H, A), (A, H), policy)
}

/// `H` over running geometric means dominates `G` over running harmonic means.
pub fn verify_prop4(x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    mixed_claim("Prop4", "H(G)>=G(H)", x, (H, G), (G, H), policy)
}

/// The three-link chain over the triple-mixed means.
pub fn verify_theorem5(x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    let values = THEOREM_CHAIN
        .iter()
        .map(|&(o, m, i)| triple_mixed_mean(x, o, m, i))
        .collect::<Result<Vec<_>>>()?;
    let label = |(o, m, i): (MeanKind, MeanKind, MeanKind)| format!("{o}{m}{i}");
    let comparisons = (0..3)
        .map(|k| {
            certify(
                &format!("{}>={}", label(THEOREM_CHAIN[k]), label(THEOREM_CHAIN[k + 1])),
                values[k].clone(),
                values[k + 1].clone(),
                policy,
            )
        })
        .collect();
    Ok(VerificationReport::from_comparisons("Thm5-chain", x.is_constant(), comparisons))
}

/// Hölder step for the geometric matrix:
/// `(1/n) prod_j (sum_i G(i,j))^(1/n) >= (1/n) sum_i prod_j G(i,j)^(1/n)`.
pub fn holder_step(g: &MeanMatrix, policy: &PrecisionPolicy) -> Result<ComparisonRecord> {
    let n = g.n();
    let col_sums = (1..=n)
        .map(|j| CertifiedValue::sum(&g.column(j)))
        .collect::<Result<Vec<_>>>()?;
    let lhs = mean_of(&col_sums, G)?.scale(&unit_fraction(n))?;
    let row_geo = (1..=n).map(|i| mean_of(g.row(i), G)).collect::<Result<Vec<_>>>()?;
    let rhs = CertifiedValue::sum(&row_geo)?.scale(&unit_fraction(n))?;
    Ok(certify("Eq4-holder", lhs, rhs, policy))
}

/// Minkowski step for the harmonic matrix (exact rationals throughout):
/// `[sum_j (sum_i H(i,j))^-1]^-1 >= sum_i (sum_j H(i,j)^-1)^-1`.
pub fn minkowski_step(h: &MeanMatrix, policy: &PrecisionPolicy) -> Result<ComparisonRecord> {
    let n = h.n();
    let inv_col_sums = (1..=n)
        .map(|j| CertifiedValue::sum(&h.column(j))?.recip())
        .collect::<Result<Vec<_>>>()?;
    let lhs = CertifiedValue::sum(&inv_col_sums)?.recip()?;
    let row_terms = (1..=n)
        .map(|i| CertifiedValue::sum(&recip_all(h.row(i))?)?.recip())
        .collect::<Result<Vec<_>>>()?;
    let rhs = CertifiedValue::sum(&row_terms)?;
    Ok(certify("Eq9-minkowski", lhs, rhs, policy))
}

/// Hölder step on reciprocals of the harmonic matrix:
/// `prod_i (sum_j H(i,j)^-1)^(1/n) >= sum_j (prod_i H(i,j)^-1)^(1/n)`.
pub fn reciprocal_holder_step(h: &MeanMatrix, policy: &PrecisionPolicy) -> Result<ComparisonRecord> {
    let n = h.n();
    let e = unit_fraction(n);
    let row_sums = (1..=n)
        .map(|i| CertifiedValue::sum(&recip_all(h.row(i))?))
        .collect::<Result<Vec<_>>>()?;
    let big = CertifiedValue::product(&row_sums)?.pow(&e)?;
    let col_terms = (1..=n)
        .map(|j| CertifiedValue::product(&recip_all(&h.column(j))?)?.pow(&e))
        .collect::<Result<Vec<_>>>()?;
    let small = CertifiedValue::sum(&col_terms)?;
    Ok(certify("Eq16-holder", big, small, policy))
}

/// The intermediate inequalities of the three proofs, instantiated on `x`.
pub fn verify_proof_steps(x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    verify_proof_steps_with(x, &build_tensor(x.len())?, policy)
}

pub fn verify_proof_steps_with(
    x: &PositiveSequence,
    t: &WeightTensor,
    policy: &PrecisionPolicy,
) -> Result<VerificationReport> {
    let g = mean_matrix(x, t, G)?;
    let h = mean_matrix(x, t, H)?;
    let comparisons = vec![
        holder_step(&g, policy)?,
        minkowski_step(&h, policy)?,
        reciprocal_holder_step(&h, policy)?,
    ];
    Ok(VerificationReport::from_comparisons("ProofSteps", x.is_constant(), comparisons))
}

/// Largest-magnitude residual, or zero.
fn worst(residuals: impl IntoIterator<Item = Rational>) -> Rational {
    residuals
        .into_iter()
        .fold(Rational::zero(), |acc, r| if r.abs() > acc.abs() { r } else { acc })
}

/// Exact identities tying the weight tensor to the ordinary prefix means.
/// All residuals must be exactly zero.
pub fn verify_identities(x: &PositiveSequence) -> Result<VerificationReport> {
    verify_identities_with(x, &build_tensor(x.len())?)
}

pub fn verify_identities_with(x: &PositiveSequence, t: &WeightTensor) -> Result<VerificationReport> {
    let n = x.len();
    let inv_n = unit_fraction(n);
    let m = mean_matrix(x, t, A)?;
    let g = mean_matrix(x, t, G)?;
    let h = mean_matrix(x, t, H)?;
    let exact = |v: &CertifiedValue| -> Result<Rational> {
        v.exact_value()
            .cloned()
            .ok_or_else(|| Error::domain("expected an exact rational mean"))
    };

    // A_j = (1/n) sum_i M(i,j)
    let arith = prefix_means(x, A)?;
    let mut res_a = Vec::new();
    for j in 1..=n {
        let mut total = Rational::zero();
        for i in 1..=n {
            total += exact(m.get(i, j))?;
        }
        res_a.push(exact(&arith[j - 1])? - total * &inv_n);
    }

    // sum_j a_k(i,j) / n = 1/i for k <= i, else 0, read off the exponent maps of G(i,j);
    // and the dual sum_i a_k(i,j) / n = 1/j for k <= j, else 0.
    let mut res_b = Vec::new();
    let mut res_d = Vec::new();
    for outer in 1..=n {
        for k in 1..=n {
            let mut over_j = Rational::zero();
            let mut over_i = Rational::zero();
            for inner in 1..=n {
                let row = g.exponent_map(outer, inner).ok_or_else(|| Error::domain("missing exponent map"))?;
                over_j += &row[k - 1];
                let col = g.exponent_map(inner, outer).ok_or_else(|| Error::domain("missing exponent map"))?;
                over_i += &col[k - 1];
            }
            let target = if k <= outer { unit_fraction(outer) } else { Rational::zero() };
            res_b.push(over_j * &inv_n - &target);
            res_d.push(over_i * &inv_n - target);
        }
    }

    // (1/n) sum_j H(i,j)^-1 = (1/i) sum_{k<=i} x_k^-1
    let mut res_c = Vec::new();
    let mut running = Rational::zero();
    for i in 1..=n {
        running += x.values()[i - 1].recip();
        let mut total = Rational::zero();
        for j in 1..=n {
            total += exact(h.get(i, j))?.recip();
        }
        res_c.push(total * &inv_n - &running * unit_fraction(i));
    }

    let comparisons = vec![
        ComparisonRecord::exact_residual("M-decomposition", worst(res_a)),
        ComparisonRecord::exact_residual("Eq5-identity", worst(res_b)),
        ComparisonRecord::exact_residual("harmonic-identity", worst(res_c)),
        ComparisonRecord::exact_residual("geometric-dual", worst(res_d)),
    ];
    Ok(VerificationReport::from_comparisons("Identities", true, comparisons))
}

pub fn verify_claim(claim: Claim, x: &PositiveSequence, policy: &PrecisionPolicy) -> Result<VerificationReport> {
    match claim {
        Claim::Eq1 => verify_eq1(x, policy),
        Claim::Prop3 => verify_prop3(x, policy),
        Claim::Prop4 => verify_prop4(x, policy),
        Claim::Thm5 => verify_theorem5(x, policy),
        Claim::ProofSteps => verify_proof_steps(x, policy),
        Claim::Identities => verify_identities(x),
    }
}

/// Runs several claims, sharing one weight tensor.
pub fn verify_claims(
    claims: &[Claim],
    x: &PositiveSequence,
    policy: &PrecisionPolicy,
) -> Result<Vec<VerificationReport>> {
    let needs_tensor = claims.iter().any(|c| matches!(c, Claim::ProofSteps | Claim::Identities));
    let tensor = if needs_tensor { Some(build_tensor(x.len())?) } else { None };
    claims
        .iter()
        .map(|&c| match (c, &tensor) {
            (Claim::ProofSteps, Some(t)) => verify_proof_steps_with(x, t, policy),
            (Claim::Identities, Some(t)) => verify_identities_with(x, t),
            _ => verify_claim(c, x, policy),
        })
        .collect()
}

/// One report per weight-tensor property, with ids `Lemma1-i` .. `Lemma1-v`.
pub fn lemma_reports(report: &LemmaReport) -> Vec<VerificationReport> {
    report
        .properties
        .iter()
        .map(|p| VerificationReport {
            claim: p.property.id().to_string(),
            equality_expected: true,
            comparisons: Vec::new(),
            passed: p.passed,
            precision_rounds: 0,
            diagnostics: p
                .first_violation
                .iter()
                .map(|v| format!("{} violated {} time(s); first: {v}", p.property.description(), p.violations))
                .collect(),
        })
        .collect()
}
