//! Prefix means, weighted means over the weight vectors `a(i, j)`, and the
//! two- and three-level mixed means built from them.
//!
//! Arithmetic and harmonic means of rationals stay exact. Geometric means are
//! kept as exponent maps (`x_k -> exponent`) and only turned into enclosures
//! by [`CertifiedValue`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::rational::{mul_raw, sum_exact};
use crate::exactnum::{parse_rational, to_pq, CertifiedValue, Rational};
use crate::weights::WeightTensor;

/// Ordered, nonempty tuple of strictly positive rationals `(x_1, ..., x_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveSequence {
    values: Vec<Rational>,
}

impl PositiveSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sequence must contain at least one value"));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(Error::domain(format!(
                "x_{} = {v} is not a positive real number",
                k + 1
            )));
        }
        Ok(PositiveSequence { values })
    }

    /// Parses comma-separated rationals or decimals, e.g. `"1, 2/3, 0.5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The first `i` terms; `i` must be in `1..=n`.
    pub fn prefix(&self, i: usize) -> Result<Self> {
        check_index(i, self.len())?;
        Ok(PositiveSequence {
            values: self.values[..i].to_vec(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn min(&self) -> &Rational {
        self.values.iter().min().expect("nonempty")
    }

    pub fn max(&self) -> &Rational {
        self.values.iter().max().expect("nonempty")
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(to_pq).collect()
    }
}

impl fmt::Display for PositiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn check_index(j: usize, n: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::domain(format!("index {j} outside 1..={n}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeanKind {
    Harmonic,
    Geometric,
    Arithmetic,
}

impl MeanKind {
    pub const ALL: [MeanKind; 3] = [MeanKind::Arithmetic, MeanKind::Geometric, MeanKind::Harmonic];

    pub fn symbol(self) -> &'static str {
        match self {
            MeanKind::Arithmetic => "A",
            MeanKind::Geometric => "G",
            MeanKind::Harmonic => "H",
        }
    }

    /// True when means of this kind over rationals are rational.
    pub fn is_rational(self) -> bool {
        self != MeanKind::Geometric
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "arithmetic" => Ok(MeanKind::Arithmetic),
            "g" | "geometric" => Ok(MeanKind::Geometric),
            "h" | "harmonic" => Ok(MeanKind::Harmonic),
            _ => Err(Error::parse(s, "expected A, G, or H")),
        }
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn unit_fraction(d: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(d))
}

/// All prefix means `M_1, ..., M_n` of one kind, in O(n) running updates.
pub fn prefix_means(x: &PositiveSequence, kind: MeanKind) -> Result<Vec<CertifiedValue>> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = match kind {
        MeanKind::Geometric => Rational::one(),
        _ => Rational::zero(),
    };
    for (idx, v) in x.values().iter().enumerate() {
        let j = idx + 1;
        let value = match kind {
            MeanKind::Arithmetic => {
                acc += v;
                CertifiedValue::exact(&acc / int(j))
            }
            MeanKind::Harmonic => {
                acc += v.recip();
                CertifiedValue::exact(int(j) / &acc)
            }
            MeanKind::Geometric => {
                acc *= v;
                CertifiedValue::monomial(Rational::one(), [(acc.clone(), unit_fraction(j))])?
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// The mean of `x_1, ..., x_j` (1-based `j`).
pub fn prefix_mean(x: &PositiveSequence, j: usize, kind: MeanKind) -> Result<CertifiedValue> {
    check_index(j, x.len())?;
    let mut all = prefix_means(&x.prefix(j)?, kind)?;
    Ok(all.pop().expect("nonempty prefix"))
}

/// Weighted mean of `x` under nonnegative weights summing exactly to 1.
pub fn weighted_mean(x: &PositiveSequence, a: &[Rational], kind: MeanKind) -> Result<CertifiedValue> {
    if a.len() != x.len() {
        return Err(Error::domain(format!(
            "weight vector has length {}, sequence has length {}",
            a.len(),
            x.len()
        )));
    }
    if let Some(w) = a.iter().find(|w| w.is_negative()) {
        return Err(Error::domain(format!("negative weight {w}")));
    }
    let total: Rational = a.iter().sum();
    if !total.is_one() {
        return Err(Error::domain(format!("weights sum to {total}, not 1")));
    }
    let pairs = x.values().iter().zip(a).filter(|(_, w)| !w.is_zero());
    Ok(match kind {
        MeanKind::Arithmetic => {
            let terms: Vec<Rational> = pairs.map(|(v, w)| mul_raw(v, w)).collect();
            CertifiedValue::exact(sum_exact(&terms))
        }
        MeanKind::Harmonic => {
            let terms: Vec<Rational> = pairs.map(|(v, w)| mul_raw(w, &v.recip())).collect();
            CertifiedValue::exact(sum_exact(&terms).recip())
        }
        MeanKind::Geometric => {
            CertifiedValue::monomial(Rational::one(), pairs.map(|(v, w)| (v.clone(), w.clone())))?
        }
    })
}

/// Unweighted mean of already computed values.
pub fn mean_of(values: &[CertifiedValue], kind: MeanKind) -> Result<CertifiedValue> {
    if values.is_empty() {
        return Err(Error::domain("mean of an empty list"));
    }
    let m = values.len();
    match kind {
        MeanKind::Arithmetic => CertifiedValue::sum(values)?.scale(&unit_fraction(m)),
        MeanKind::Geometric => CertifiedValue::product(values)?.pow(&unit_fraction(m)),
        MeanKind::Harmonic => {
            let recips = values.iter().map(CertifiedValue::recip).collect::<Result<Vec<_>>>()?;
            CertifiedValue::sum(&recips)?.recip()?.scale(&int(m))
        }
    }
}

/// The `n x n` matrix of weighted means `m(i, j)` taken with `a(i, j)`.
#[derive(Clone, Debug)]
pub struct MeanMatrix {
    kind: MeanKind,
    n: usize,
    entries: Vec<CertifiedValue>,
    exponents: Option<Vec<Vec<Rational>>>,
}

impl MeanMatrix {
    pub fn kind(&self) -> MeanKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CertifiedValue {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Row `i`: `(m(i,1), ..., m(i,n))`, the vectors g_i / h_i.
    pub fn row(&self, i: usize) -> &[CertifiedValue] {
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<CertifiedValue> {
        (1..=self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Positional exponent map of a geometric entry: `x_k -> a_k(i, j)`.
    pub fn exponent_map(&self, i: usize, j: usize) -> Option<&[Rational]> {
        self.exponents.as_ref().map(|e| e[(i - 1) * self.n + (j - 1)].as_slice())
    }
}

pub fn mean_matrix(x: &PositiveSequence, t: &WeightTensor, kind: MeanKind) -> Result<MeanMatrix> {
    let n = x.len();
    if t.n() != n {
        return Err(Error::domain(format!(
            "weight tensor has n = {}, sequence has length {n}",
            t.n()
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    let mut exponents = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let a = t.vector(i, j);
            entries.push(weighted_mean(x, a, kind)?);
            if kind == MeanKind::Geometric {
                exponents.push(a.to_vec());
            }
        }
    }
    Ok(MeanMatrix {
        kind,
        n,
        entries,
        exponents: (kind == MeanKind::Geometric).then_some(exponents),
    })
}

/// Outer mean over `j = 1..n` of the inner prefix means `M_j`.
pub fn mixed_mean(x: &PositiveSequence, outer: MeanKind, inner: MeanKind) -> Result<CertifiedValue> {
    mean_of(&prefix_means(x, inner)?, outer)
}

/// Outer mean over `i = 1..n` of `mixed_mean(x_1..x_i, mid, inner)`.
pub fn triple_mixed_mean(
    x: &PositiveSequence,
    outer: MeanKind,
    mid: MeanKind,
    inner: MeanKind,
) -> Result<CertifiedValue> {
    let inner_means = prefix_means(x, inner)?;
    let mids = (1..=x.len())
        .map(|i| mean_of(&inner_means[..i], mid))
        .collect::<Result<Vec<_>>>()?;
    mean_of(&mids, outer)
}

/// Ordered pairs `(outer, inner)` of distinct kinds.
pub fn mixed_pairs() -> Vec<(MeanKind, MeanKind)> {
    let mut pairs = Vec::new();
    for outer in MeanKind::ALL {
        for inner in MeanKind::ALL {
            if outer != inner {
                pairs.push((outer, inner));
            }
        }
    }
    pairs
}

/// The four triple-mixed expressions of the chain, largest first:
/// `(H,G,A) >= (H,A,G) >= (A,H,G) >= (A,G,H)`.
pub const THEOREM_CHAIN: [(MeanKind, MeanKind, MeanKind); 4] = [
    (MeanKind::Harmonic, MeanKind::Geometric, MeanKind::Arithmetic),
    (MeanKind::Harmonic, MeanKind::Arithmetic, MeanKind::Geometric),
    (MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric),
    (MeanKind::Arithmetic, MeanKind::Geometric, MeanKind::Harmonic),
];
