//! The binomial weight vectors `a(i, j) = (a_1(i,j), ..., a_n(i,j))`,
//!
//! ```text
//! a_k(i,j) = C(n-i, j-k) * C(i-1, k-1) / C(n-1, j-1)
//! ```
//!
//! stored densely as exact rationals, plus an exhaustive checker for their
//! five structural properties: nonnegativity, vanishing above `min(i, j)`,
//! symmetry in `(i, j)`, unit sum over `k`, and column sums `n/j` over `i`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{to_pq, Rational};

/// `C(n, k)`, with the convention `C(n, k) = 0` for `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for t in 1..=k {
        // acc = C(n-k+t, t) after this step, so the division is exact
        acc = acc * BigUint::from(n - k + t) / BigUint::from(t);
    }
    acc
}

fn check_index(name: &str, v: usize, n: usize) -> Result<()> {
    if v == 0 || v > n {
        return Err(Error::domain(format!("index {name} = {v} outside 1..={n}")));
    }
    Ok(())
}

/// Single weight `a_k(i, j)` for dimension `n`; indices are 1-based.
pub fn weight(n: usize, i: usize, j: usize, k: usize) -> Result<Rational> {
    check_index("i", i, n)?;
    check_index("j", j, n)?;
    check_index("k", k, n)?;
    let num = binomial((n - i) as u64, j as i64 - k as i64) * binomial((i - 1) as u64, k as i64 - 1);
    let den = binomial((n - 1) as u64, j as i64 - 1);
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Pascal rows `C(m, r)` for `m < rows`, used while filling a tensor.
struct BinomialTable(Vec<Vec<BigUint>>);

impl BinomialTable {
    fn new(rows: usize) -> Self {
        BinomialTable(
            (0..rows as u64)
                .map(|m| (0..=m as i64).map(|r| binomial(m, r)).collect())
                .collect(),
        )
    }

    fn get(&self, m: usize, r: i64) -> BigUint {
        if r < 0 || r as usize > m {
            return BigUint::zero();
        }
        self.0[m][r as usize].clone()
    }
}

/// All weight vectors `a(i, j)` for one dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTensor {
    n: usize,
    entries: Vec<Rational>,
}

impl WeightTensor {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("weight tensor needs n >= 1"));
        }
        let table = BinomialTable::new(n);
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                let den = BigInt::from(table.get(n - 1, j as i64 - 1));
                for k in 1..=n {
                    let num = table.get(n - i, j as i64 - k as i64) * table.get(i - 1, k as i64 - 1);
                    entries.push(Rational::new(BigInt::from(num), den.clone()));
                }
            }
        }
        Ok(WeightTensor { n, entries })
    }

    /// Wraps arbitrary entries laid out as `[(i-1) * n + (j-1)] * n + (k-1)`.
    /// No property is enforced; use [`check_lemma_properties`] to inspect.
    pub fn from_entries(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 || entries.len() != n * n * n {
            return Err(Error::domain(format!(
                "expected {} entries for n = {n}, got {}",
                n * n * n,
                entries.len()
            )));
        }
        Ok(WeightTensor { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        ((i - 1) * self.n + (j - 1)) * self.n
    }

    /// `a_k(i, j)`, 1-based. Panics on out-of-range indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        assert!((1..=self.n).contains(&k), "k = {k} outside 1..={}", self.n);
        &self.entries[self.offset(i, j) + k - 1]
    }

    /// The weight vector `a(i, j)` as a slice indexed by `k - 1`.
    pub fn vector(&self, i: usize, j: usize) -> &[Rational] {
        let start = self.offset(i, j);
        &self.entries[start..start + self.n]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let at = self.offset(i, j) + k - 1;
        self.entries[at] = value;
    }

    pub fn to_json(&self) -> TensorJson {
        let n = self.n;
        TensorJson {
            n,
            a: (1..=n)
                .map(|i| {
                    (1..=n)
                        .map(|j| self.vector(i, j).iter().map(to_pq).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// `{"n": n, "a": [[["p/q", ...], ...], ...]}` with `a[i-1][j-1][k-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorJson {
    pub n: usize,
    pub a: Vec<Vec<Vec<String>>>,
}

impl fmt::Display for WeightTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            for j in 1..=self.n {
                let row: Vec<String> = self.vector(i, j).iter().map(|r| r.to_string()).collect();
                writeln!(f, "a({i},{j}) = ({})", row.join(", "))?;
            }
        }
        Ok(())
    }
}

pub fn build_tensor(n: usize) -> Result<WeightTensor> {
    WeightTensor::build(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaProperty {
    NonNegative,
    VanishesAboveMin,
    Symmetric,
    UnitSum,
    ColumnSum,
}

impl LemmaProperty {
    pub const ALL: [LemmaProperty; 5] = [
        LemmaProperty::NonNegative,
        LemmaProperty::VanishesAboveMin,
        LemmaProperty::Symmetric,
        LemmaProperty::UnitSum,
        LemmaProperty::ColumnSum,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LemmaProperty::NonNegative => "Lemma1-i",
            LemmaProperty::VanishesAboveMin => "Lemma1-ii",
            LemmaProperty::Symmetric => "Lemma1-iii",
            LemmaProperty::UnitSum => "Lemma1-iv",
            LemmaProperty::ColumnSum => "Lemma1-v",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            LemmaProperty::NonNegative => "a_k(i,j) >= 0",
            LemmaProperty::VanishesAboveMin => "a_k(i,j) = 0 for k > min(i,j)",
            LemmaProperty::Symmetric => "a_k(i,j) = a_k(j,i)",
            LemmaProperty::UnitSum => "sum_k a_k(i,j) = 1",
            LemmaProperty::ColumnSum => "sum_i a_k(i,j) = n/j for k <= j, 0 for k > j",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: LemmaProperty,
    pub passed: bool,
    pub violations: usize,
    /// Index tuple and offending value of the first violation found.
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub n: usize,
    pub properties: Vec<PropertyCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, p: LemmaProperty) -> &PropertyCheck {
        self.properties
            .iter()
            .find(|c| c.property == p)
            .expect("every property is checked")
    }
}

struct Tally {
    property: LemmaProperty,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn new(property: LemmaProperty) -> Self {
        Tally {
            property,
            violations: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self) -> PropertyCheck {
        PropertyCheck {
            property: self.property,
            passed: self.violations == 0,
            violations: self.violations,
            first_violation: self.first,
        }
    }
}

/// Checks all five properties exactly over every index triple. Symmetry is
/// compared entry by entry.
pub fn check_lemma_properties(t: &WeightTensor) -> LemmaReport {
    let n = t.n();
    let [mut nonneg, mut vanish, mut sym, mut unit, mut column] = LemmaProperty::ALL.map(Tally::new);
    let one = Rational::one();
    for i in 1..=n {
        for j in 1..=n {
            let mut row_sum = Rational::zero();
            for k in 1..=n {
                let a = t.get(i, j, k);
                nonneg.record(!a.is_negative(), || format!("a_{k}({i},{j}) = {a}"));
                if k > i.min(j) {
                    vanish.record(a.is_zero(), || format!("a_{k}({i},{j}) = {a}"));
                }
                let b = t.get(j, i, k);
                sym.record(a == b, || format!("a_{k}({i},{j}) = {a} but a_{k}({j},{i}) = {b}"));
                row_sum += a;
            }
            unit.record(row_sum == one, || format!("sum_k a_k({i},{j}) = {row_sum}"));
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            let total: Rational = (1..=n).map(|i| t.get(i, j, k)).sum();
            let expected = if k <= j {
                Rational::new(BigInt::from(n), BigInt::from(j))
            } else {
                Rational::zero()
            };
            column.record(total == expected, || {
                format!("sum_i a_{k}(i,{j}) = {total}, expected {expected}")
            });
        }
    }
    LemmaReport {
        n,
        properties: vec![
            nonneg.finish(),
            vanish.finish(),
            sym.finish(),
            unit.finish(),
            column.finish(),
        ],
    }
}
