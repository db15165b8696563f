//! Two-row Schubert calculus on the Grassmannian `G(1,n)` of lines in `P^n`.
//!
//! Classes are written `σ_(a,b)` with `0 <= a <= b <= n-1` and codimension
//! `a + b`; in partition notation this is the partition `(b, a)` inside the
//! `2 × (n-1)` box. `σ_(0,c)` is the special class of codimension `c`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchubertError {
    #[error("invalid special class σ_(0,{c}) in G(1,{n})")]
    InvalidSpecialClass { c: i64, n: i64 },
    #[error("not top degree: codimensions sum to {sum}, top degree of G(1,{n}) is {top}")]
    NotTopDegree { sum: i64, top: i64, n: i64 },
    #[error("index ({a},{b}) outside the box for G(1,{n})")]
    OutOfBox { a: i64, b: i64, n: i64 },
    #[error("G(1,{0}) needs n >= 1")]
    InvalidAmbient(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchubertIndex {
    pub a: i64,
    pub b: i64,
}

impl SchubertIndex {
    pub fn new(a: i64, b: i64, n: i64) -> Result<Self, SchubertError> {
        if 0 <= a && a <= b && b < n {
            Ok(Self { a, b })
        } else {
            Err(SchubertError::OutOfBox { a, b, n })
        }
    }

    pub fn codim(self) -> i64 {
        self.a + self.b
    }
}

/// Integer combination of Schubert classes in a fixed `G(1,n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertElement {
    n: i64,
    terms: BTreeMap<SchubertIndex, BigInt>,
}

impl SchubertElement {
    /// The fundamental class `σ_(0,0)`.
    pub fn one(n: i64) -> Result<Self, SchubertError> {
        Self::basis(n, 0, 0)
    }

    pub fn basis(n: i64, a: i64, b: i64) -> Result<Self, SchubertError> {
        if n < 1 {
            return Err(SchubertError::InvalidAmbient(n));
        }
        let idx = SchubertIndex::new(a, b, n)?;
        Ok(Self {
            n,
            terms: BTreeMap::from([(idx, BigInt::one())]),
        })
    }

    pub fn zero(n: i64) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SchubertIndex, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: i64, b: i64) -> BigInt {
        self.terms
            .get(&SchubertIndex { a, b })
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficient of the point class `σ_(n-1,n-1)`.
    pub fn degree(&self) -> BigInt {
        self.coefficient(self.n - 1, self.n - 1)
    }

    fn add_term(&mut self, idx: SchubertIndex, c: BigInt) {
        let entry = self.terms.entry(idx).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }
}

impl fmt::Display for SchubertElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| {
                if c.is_one() {
                    format!("σ({},{})", i.a, i.b)
                } else {
                    format!("{}·σ({},{})", c, i.a, i.b)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `σ_(0,c) · e` by the two-row Pieri rule:
/// `σ_(0,c)·σ_(a,b) = Σ σ_(a',b')` over `a'+b' = a+b+c`, `a <= a' <= b <= b' <= n-1`.
pub fn pieri_multiply(e: &SchubertElement, c: i64) -> Result<SchubertElement, SchubertError> {
    let n = e.n;
    if c < 1 || c > n - 1 {
        return Err(SchubertError::InvalidSpecialClass { c, n });
    }
    let mut out = SchubertElement::zero(n);
    for (idx, coeff) in &e.terms {
        let total = idx.codim() + c;
        for a2 in idx.a..=idx.b {
            let b2 = total - a2;
            if b2 < idx.b || b2 > n - 1 {
                continue;
            }
            out.add_term(SchubertIndex { a: a2, b: b2 }, coeff.clone());
        }
    }
    Ok(out)
}

/// Product of the special classes `σ_(0,c)` for `c` in `cs`, evaluated left to right.
pub fn special_product(n: i64, cs: &[i64]) -> Result<SchubertElement, SchubertError> {
    cs.iter()
        .try_fold(SchubertElement::one(n)?, |acc, &c| pieri_multiply(&acc, c))
}

/// Degree of `Π σ_(0,c)` in `H^top(G(1,n))`.
pub fn special_product_integral(n: i64, cs: &[i64]) -> Result<BigInt, SchubertError> {
    let sum: i64 = cs.iter().sum();
    let top = 2 * (n - 1);
    if sum != top {
        return Err(SchubertError::NotTopDegree { sum, top, n });
    }
    Ok(special_product(n, cs)?.degree())
}

/// Convenience: the exponent vector `[2,2] + [1; 2d-6]` used for triple points at two fixed points.
pub fn two_triple_points_monomial(d: i64) -> Vec<i64> {
    let mut cs = vec![2, 2];
    cs.extend(std::iter::repeat_n(1, (2 * d - 6).max(0) as usize));
    cs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: i64, a: i64, b: i64) -> SchubertElement {
        SchubertElement::basis(n, a, b).unwrap()
    }

    #[test]
    fn pieri_examples_in_g13() {
        let p = pieri_multiply(&basis(3, 0, 1), 1).unwrap();
        let mut expected = basis(3, 0, 2);
        expected.add_term(SchubertIndex { a: 1, b: 1 }, BigInt::one());
        assert_eq!(p, expected);

        assert_eq!(pieri_multiply(&basis(3, 1, 1), 1).unwrap(), basis(3, 1, 2));
        assert!(pieri_multiply(&basis(3, 2, 2), 2).unwrap().is_zero());
    }

    #[test]
    fn special_class_out_of_range() {
        let e = basis(3, 0, 0);
        assert_eq!(
            pieri_multiply(&e, 0).unwrap_err(),
            SchubertError::InvalidSpecialClass { c: 0, n: 3 }
        );
        assert!(pieri_multiply(&e, 3).is_err());
    }

    #[test]
    fn integral_examples() {
        assert_eq!(
            special_product_integral(4, &[2, 2, 1, 1]).unwrap(),
            2.into()
        );
        assert_eq!(special_product_integral(4, &[1; 6]).unwrap(), 5.into());
        assert_eq!(
            special_product_integral(5, &[3, 1, 1, 1, 1, 1]).unwrap(),
            4.into()
        );
    }

    #[test]
    fn not_top_degree_reports_sums() {
        assert_eq!(
            special_product_integral(4, &[2, 1]).unwrap_err(),
            SchubertError::NotTopDegree {
                sum: 3,
                top: 6,
                n: 4
            }
        );
    }

    #[test]
    fn index_box_constraint() {
        assert!(SchubertIndex::new(0, 3, 4).is_ok());
        assert!(SchubertIndex::new(2, 1, 4).is_err());
        assert!(SchubertIndex::new(0, 4, 4).is_err());
    }

    // σ_(0,c) with c = 0 is the identity and c outside 0..n-1 is zero.
    fn special_or_trivial(e: &SchubertElement, c: i64) -> SchubertElement {
        match c {
            0 => e.clone(),
            c if c < 0 || c > e.n() - 1 => SchubertElement::zero(e.n()),
            c => pieri_multiply(e, c).unwrap(),
        }
    }

    fn sub(x: &SchubertElement, y: &SchubertElement) -> SchubertElement {
        let mut out = x.clone();
        for (idx, c) in y.terms() {
            out.add_term(*idx, -c.clone());
        }
        out
    }

    // Two-row Giambelli: σ_(a,b) = σ_(0,a)σ_(0,b) - σ_(0,a-1)σ_(0,b+1).
    fn times_class(e: &SchubertElement, a: i64, b: i64) -> SchubertElement {
        let first = special_or_trivial(&special_or_trivial(e, a), b);
        let second = special_or_trivial(&special_or_trivial(e, a - 1), b + 1);
        sub(&first, &second)
    }

    #[test]
    fn giambelli_reproduces_basis() {
        for n in 2..=7 {
            for a in 0..n {
                for b in a..n {
                    assert_eq!(times_class(&basis(n, 0, 0), a, b), basis(n, a, b));
                }
            }
        }
    }

    #[test]
    fn duality() {
        for n in 2..=12 {
            for a in 0..n {
                for b in a..n {
                    let e = basis(n, a, b);
                    for a2 in 0..n {
                        for b2 in a2..n {
                            if a + b + a2 + b2 != 2 * (n - 1) {
                                continue;
                            }
                            let expected = i64::from(a + b2 == n - 1 && b + a2 == n - 1);
                            assert_eq!(
                                times_class(&e, a2, b2).degree(),
                                BigInt::from(expected),
                                "n={n} ({a},{b})·({a2},{b2})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn permuting_special_classes_preserves_integral() {
        let cs = [3, 2, 1, 1, 1, 2, 1, 1];
        let reference = special_product_integral(7, &cs).unwrap();
        let mut perm = cs;
        for i in 0..cs.len() {
            perm.rotate_left(1);
            perm.swap(0, i);
            assert_eq!(special_product_integral(7, &perm).unwrap(), reference);
        }
    }
}
