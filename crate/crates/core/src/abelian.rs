//! Intersection numbers on `E×E` in the span of the fibres `F_1`, `F_2` and
//! the diagonal `Δ`, and theta pullbacks along `C×C → Pic(C)`,
//! `(x, y) ↦ b·x - c·y`, computed in the exterior algebra of `H^1(C×C)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::invariants::r_inv;
use crate::scalar::{fmt_rat, rat, solve_linear, BigInt, BigRat, LinearSystem, Row};

/// `f1·F_1 + f2·F_2 + diag·Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EECurveClass {
    pub f1: BigRat,
    pub f2: BigRat,
    pub diag: BigRat,
}

impl EECurveClass {
    pub fn new(f1: BigRat, f2: BigRat, diag: BigRat) -> Self {
        Self { f1, f2, diag }
    }

    pub fn from_ints(f1: i64, f2: i64, diag: i64) -> Self {
        Self::new(rat(f1), rat(f2), rat(diag))
    }

    pub fn f1() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn f2() -> Self {
        Self::from_ints(0, 1, 0)
    }

    pub fn diagonal() -> Self {
        Self::from_ints(0, 0, 1)
    }

    fn coords(&self) -> [&BigRat; 3] {
        [&self.f1, &self.f2, &self.diag]
    }
}

impl fmt::Display for EECurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fmt_rat(&self.f1),
            fmt_rat(&self.f2),
            fmt_rat(&self.diag)
        )
    }
}

/// Gram matrix in the basis `(F_1, F_2, Δ)`. `Δ² = 0` because the diagonal
/// of an elliptic curve has trivial normal bundle.
pub const GRAM: [[i64; 3]; 3] = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];

pub fn ee_intersect(c1: &EECurveClass, c2: &EECurveClass) -> BigRat {
    let (x, y) = (c1.coords(), c2.coords());
    let mut acc = BigRat::zero();
    for i in 0..3 {
        for j in 0..3 {
            if GRAM[i][j] != 0 {
                acc += x[i] * y[j] * rat(GRAM[i][j]);
            }
        }
    }
    acc
}

/// The class with prescribed intersection numbers against `Δ`, `F_1`, `F_2`.
pub fn ee_class_from_pairings(with_diag: BigRat, with_f1: BigRat, with_f2: BigRat) -> EECurveClass {
    let basis = [
        EECurveClass::f1(),
        EECurveClass::f2(),
        EECurveClass::diagonal(),
    ];
    let row = |against: &EECurveClass, rhs: BigRat, label: &str| {
        Row::new(
            basis.iter().map(|b| ee_intersect(b, against)).collect(),
            rhs,
            label,
        )
    };
    let sys = LinearSystem::from_rows([
        row(&EECurveClass::diagonal(), with_diag, "·Δ"),
        row(&EECurveClass::f1(), with_f1, "·F1"),
        row(&EECurveClass::f2(), with_f2, "·F2"),
    ])
    .expect("three rows of width three");
    let x = solve_linear(&sys).expect("the Gram matrix is invertible");
    EECurveClass::new(x[0].clone(), x[1].clone(), x[2].clone())
}

pub fn ee_half_self_intersection(c: &EECurveClass) -> BigRat {
    ee_intersect(c, c) / rat(2)
}

/// Closure of pairs `(u, v)` admitting a `g^1_4 ⊂ |4p|` with a triple point at `u`
/// and a ramification point at `v`: meets `Δ` in the 15 nontrivial 4-torsion
/// translates, `F_2` in the 8 nontrivial 3-torsion translates, `F_1` in 3 points.
pub fn sigma_class() -> EECurveClass {
    ee_class_from_pairings(rat(15), rat(3), rat(8))
}

/// Pairs `(u, v)` with a `g^1_3` totally ramified at `q` and ramified at `u`, `v`.
pub fn u_class() -> EECurveClass {
    ee_class_from_pairings(rat(8), rat(3), rat(3))
}

/// Pairs `(u, v)` with `2v + u ≡ 4q - p`.
pub fn v_class() -> EECurveClass {
    ee_class_from_pairings(rat(9), rat(4), rat(1))
}

/// Generator of `H^1` of one factor of `C×C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Alpha,
    Beta,
}

/// Symplectic basis `α_1..α_g, β_1..β_g` of `H^1(C)` on each factor of `C×C`,
/// with `∫_C α_i ∧ β_j = δ_ij` and all other degree-2 products zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticLattice {
    pub g: usize,
}

impl SymplecticLattice {
    pub fn new(g: usize) -> Self {
        Self { g }
    }

    // Generators are ordered factor-major, then α before β, then by index, so
    // a surviving top monomial sorts as α_i¹ β_i¹ α_j² β_j², which integrates to +1.
    fn id(&self, factor: usize, kind: Kind, i: usize) -> u16 {
        let k = match kind {
            Kind::Alpha => 0,
            Kind::Beta => 1,
        };
        (factor * 2 * self.g + k * self.g + i) as u16
    }

    fn decode(&self, id: u16) -> (usize, Kind, usize) {
        let id = id as usize;
        let factor = id / (2 * self.g);
        let rest = id % (2 * self.g);
        let kind = if rest < self.g {
            Kind::Alpha
        } else {
            Kind::Beta
        };
        (factor, kind, rest % self.g)
    }

    /// Whether a sorted monomial survives in `H^*(C×C)`: per factor, degree at
    /// most 2, and degree exactly 2 only as `α_i β_i`.
    fn survives(&self, mono: &[u16]) -> bool {
        (0..2).all(|factor| {
            let gens: Vec<_> = mono
                .iter()
                .map(|&m| self.decode(m))
                .filter(|(f, _, _)| *f == factor)
                .collect();
            match gens.as_slice() {
                [] | [_] => true,
                [(_, Kind::Alpha, i), (_, Kind::Beta, j)] => i == j,
                _ => false,
            }
        })
    }

    /// Degree-4 coefficient paired with `[pt]×[pt]`.
    fn integrate(&self, form: &Form) -> BigInt {
        form.terms
            .iter()
            .filter(|(m, _)| m.len() == 4)
            .map(|(_, c)| c.clone())
            .sum()
    }
}

/// Element of the exterior algebra, truncated by the curve relations.
#[derive(Debug, Clone, Default, PartialEq)]
struct Form {
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl Form {
    fn add(&mut self, mono: Vec<u16>, c: BigInt) {
        let e = self.terms.entry(mono.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mono);
        }
    }

    fn wedge(&self, other: &Form, lattice: &SymplecticLattice) -> Form {
        let mut out = Form::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((mono, sign)) = wedge_monomials(m1, m2) {
                    if lattice.survives(&mono) {
                        out.add(mono, c1 * c2 * sign);
                    }
                }
            }
        }
        out
    }
}

/// Sorted concatenation with the sign of the sorting permutation; `None` on a repeated generator.
fn wedge_monomials(m1: &[u16], m2: &[u16]) -> Option<(Vec<u16>, i64)> {
    let mut inversions = 0usize;
    for &x in m1 {
        for &y in m2 {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut mono: Vec<u16> = m1.iter().chain(m2).copied().collect();
    mono.sort_unstable();
    Some((mono, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// `∫_{C×C} (φ^*θ)^2 / 2` for `φ(x, y) = b·x - c·y` on a genus-`g` curve.
///
/// Expands `θ = Σ u_i ∧ v_i` with `u_i ↦ b·α_i¹ - c·α_i²`, `v_i ↦ b·β_i¹ - c·β_i²`.
/// Equals `g(g-1)·b²·c²`.
pub fn theta_pullback_degree(g: usize, b: i64, c: i64) -> BigInt {
    let lattice = SymplecticLattice::new(g);
    let pull = |kind: Kind, i: usize| {
        let mut f = Form::default();
        f.add(vec![lattice.id(0, kind, i)], BigInt::from(b));
        f.add(vec![lattice.id(1, kind, i)], BigInt::from(-c));
        f
    };
    let mut theta = Form::default();
    for i in 0..g {
        let term = pull(Kind::Alpha, i).wedge(&pull(Kind::Beta, i), &lattice);
        for (m, coeff) in term.terms {
            theta.add(m, coeff);
        }
    }
    let square = theta.wedge(&theta, &lattice);
    let total = lattice.integrate(&square);
    assert!(
        (&total % 2u32).is_zero(),
        "theta square integral {total} is odd"
    );
    total / 2
}

/// Excess contribution of the diagonal for the genus-2 map `(x,y) ↦ ax - by`.
pub const GENUS2_DIAGONAL_EXCESS: i64 = 2;
/// Intersection multiplicity at `(p, p)` for `(x, y) ↦ 2p + 2x - 3y` in genus 3, equal to `g(g-1)`.
pub const GENUS3_DIAGONAL_EXCESS: i64 = 6;

/// Pairs of distinct points with `a·x ≡ b·y` on a general genus-2 curve:
/// the theta pullback minus the diagonal excess.
pub fn excess_corrected_count(a: i64, b: i64) -> BigInt {
    theta_pullback_degree(2, a, b) - GENUS2_DIAGONAL_EXCESS
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enu3Count {
    pub pullback_degree: BigInt,
    pub diagonal_correction: BigInt,
    pub count: BigInt,
}

/// Pencils `|2p + 2x|` on a general pointed genus-3 curve with a further triple point.
pub fn enu3_count() -> Enu3Count {
    let pullback_degree = theta_pullback_degree(3, 2, 3);
    let diagonal_correction = BigInt::from(GENUS3_DIAGONAL_EXCESS);
    Enu3Count {
        count: &pullback_degree - &diagonal_correction,
        pullback_degree,
        diagonal_correction,
    }
}

/// Whether the corrected genus-2 count agrees with the closed form `r(a,b)`.
pub fn excess_matches_r(a: i64, b: i64) -> bool {
    excess_corrected_count(a, b) == r_inv(a, b)
}
