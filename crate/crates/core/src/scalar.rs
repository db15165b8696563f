//! Exact integer and rational arithmetic: factorials with the `1/n! = 0`
//! convention for negative `n`, binomials, and a small Gaussian eliminator.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt as NumBigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type BigInt = NumBigInt;
pub type BigRat = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`, reduced.
pub fn frac(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` for `n >= 0`.
///
/// Panics on negative `n`; callers that need the degenerate convention go
/// through [`inv_factorial`].
pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative integer {n}");
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `1/n!`, with `1/n! := 0` for `n < 0`.
pub fn inv_factorial(n: i64) -> BigRat {
    if n < 0 {
        BigRat::zero()
    } else {
        BigRat::new(BigInt::one(), factorial(n))
    }
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Converts an integral rational to an integer, `None` if it has a denominator.
pub fn to_integer(x: &BigRat) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rat(x: &BigRat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("underdetermined: rank {rank} for {unknowns} unknowns (deficiency {})", unknowns - rank)]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("inconsistent: row `{label}` cannot be satisfied")]
    Inconsistent { label: String },
    #[error("row `{label}` has width {width}, expected {expected}")]
    Ragged {
        label: String,
        width: usize,
        expected: usize,
    },
    #[error("duplicate row label `{0}`")]
    DuplicateLabel(String),
    #[error("empty system")]
    Empty,
}

/// One labelled equation `coeffs · x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<BigRat>,
    pub rhs: BigRat,
    pub label: String,
}

impl Row {
    pub fn new(coeffs: Vec<BigRat>, rhs: BigRat, label: impl Into<String>) -> Self {
        Self {
            coeffs,
            rhs,
            label: label.into(),
        }
    }

    /// `coeffs · x - rhs`.
    pub fn residual(&self, x: &[BigRat]) -> BigRat {
        self.coeffs
            .iter()
            .zip(x)
            .fold(-self.rhs.clone(), |acc, (c, v)| acc + c * v)
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})·x{}", fmt_rat(c), i))
            .collect();
        write!(
            f,
            "{}: {} = {}",
            self.label,
            lhs.join(" + "),
            fmt_rat(&self.rhs)
        )
    }
}

/// Labelled rows of equal width.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearSystem {
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: Row) -> Result<(), LinearError> {
        if let Some(first) = self.rows.first() {
            if row.coeffs.len() != first.coeffs.len() {
                return Err(LinearError::Ragged {
                    label: row.label,
                    width: row.coeffs.len(),
                    expected: first.coeffs.len(),
                });
            }
        }
        if self.rows.iter().any(|r| r.label == row.label) {
            return Err(LinearError::DuplicateLabel(row.label));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn from_rows(rows: impl IntoIterator<Item = Row>) -> Result<Self, LinearError> {
        let mut sys = Self::new();
        for row in rows {
            sys.push(row)?;
        }
        Ok(sys)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.coeffs.len())
    }

    pub fn residuals(&self, x: &[BigRat]) -> Vec<BigRat> {
        self.rows.iter().map(|r| r.residual(x)).collect()
    }
}

/// Solves a system with a unique solution by exact Gaussian elimination.
///
/// Pivots are the first nonzero entry in each column. Extra rows are allowed
/// as long as they are consistent.
pub fn solve_linear(system: &LinearSystem) -> Result<Vec<BigRat>, LinearError> {
    let n = system.width();
    if system.rows.is_empty() || n == 0 {
        return Err(LinearError::Empty);
    }
    let labels: HashSet<&str> = system.rows.iter().map(|r| r.label.as_str()).collect();
    debug_assert_eq!(labels.len(), system.rows.len());

    // (augmented row, index of the originating row)
    let mut m: Vec<(Vec<BigRat>, usize)> = system
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            (v, i)
        })
        .collect();

    let mut pivots = Vec::with_capacity(n);
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&r| !m[r].0[col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank].0[col].recip();
        for v in m[rank].0.iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].0.clone();
        for (r, (row, _)) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }

    if let Some((_, orig)) = m[rank..].iter().find(|(row, _)| !row[n].is_zero()) {
        return Err(LinearError::Inconsistent {
            label: system.rows[*orig].label.clone(),
        });
    }
    if rank < n {
        return Err(LinearError::Underdetermined { rank, unknowns: n });
    }

    let mut x = vec![BigRat::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r].0[n].clone();
    }
    Ok(x)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
