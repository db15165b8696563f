//! Divisor classes on `M̄_g` and `M̄_{2,1}` (rational coefficients).
//!
//! `M̄_{2,1}` classes carry four coordinates `(ψ, λ, δ_0, δ_1)` subject to
//! Mumford's relation `10λ = δ_0 + 2δ_1`; comparisons always go through the
//! reduced basis `{ψ, λ, δ_0}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::invariants::{a_inv, e_inv, N1_inv};
use crate::scalar::{fmt_rat, frac, rat, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicError {
    #[error("pullback undefined: class lives on M_{g}, expected genus {expected}")]
    PullbackUndefined { g: i64, expected: String },
    #[error("genus must be at least 2, got {0}")]
    InvalidGenus(i64),
    #[error("boundary vector has length {len}, expected {expected} for genus {g}")]
    BadLength { g: i64, len: usize, expected: usize },
}

/// `λ·lambda + Σ δ_i·delta[i]` in `Pic(M̄_g) ⊗ ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgClass {
    g: i64,
    pub lambda: BigRat,
    pub delta: Vec<BigRat>,
}

impl MgClass {
    pub fn new(g: i64, lambda: BigRat, delta: Vec<BigRat>) -> Result<Self, PicError> {
        if g < 2 {
            return Err(PicError::InvalidGenus(g));
        }
        let expected = (g / 2 + 1) as usize;
        if delta.len() != expected {
            return Err(PicError::BadLength {
                g,
                len: delta.len(),
                expected,
            });
        }
        Ok(Self { g, lambda, delta })
    }

    pub fn from_ints(g: i64, lambda: i64, delta: &[i64]) -> Result<Self, PicError> {
        Self::new(g, rat(lambda), delta.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(g: i64) -> Result<Self, PicError> {
        Self::new(
            g,
            BigRat::zero(),
            vec![BigRat::zero(); (g / 2 + 1).max(0) as usize],
        )
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    pub fn delta(&self, i: usize) -> BigRat {
        self.delta.get(i).cloned().unwrap_or_default()
    }

    pub fn to_latex(&self) -> String {
        let mut terms = vec![(self.lambda.clone(), "\\lambda".to_string())];
        terms.extend(
            self.delta
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), format!("\\delta_{{{i}}}"))),
        );
        latex_sum(&terms)
    }
}

impl fmt::Display for MgClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = vec![(self.lambda.clone(), "λ".to_string())];
        terms.extend(
            self.delta
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), format!("δ{i}"))),
        );
        write!(f, "{}", plain_sum(&terms))
    }
}

/// `ψ·psi + λ·lambda + δ_0·delta0 + δ_1·delta1` in `Pic(M̄_{2,1}) ⊗ ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct M21Class {
    pub psi: BigRat,
    pub lambda: BigRat,
    pub delta0: BigRat,
    pub delta1: BigRat,
}

impl M21Class {
    pub fn new(psi: BigRat, lambda: BigRat, delta0: BigRat, delta1: BigRat) -> Self {
        Self {
            psi,
            lambda,
            delta0,
            delta1,
        }
    }

    pub fn from_ints(psi: i64, lambda: i64, delta0: i64, delta1: i64) -> Self {
        Self::new(rat(psi), rat(lambda), rat(delta0), rat(delta1))
    }

    /// `(ψ, λ, δ_0)` after eliminating `δ_1 = 5λ - δ_0/2`.
    pub fn reduced(&self) -> [BigRat; 3] {
        let r = mumford_reduce(self);
        [r.psi, r.lambda, r.delta0]
    }

    /// Equality in `Pic(M̄_{2,1}) ⊗ ℚ`.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        Self::new(
            &self.psi * k,
            &self.lambda * k,
            &self.delta0 * k,
            &self.delta1 * k,
        )
    }

    pub fn to_latex(&self) -> String {
        latex_sum(&self.labelled("\\psi", "\\lambda", "\\delta_{0}", "\\delta_{1}"))
    }

    fn labelled(&self, psi: &str, lambda: &str, d0: &str, d1: &str) -> Vec<(BigRat, String)> {
        vec![
            (self.psi.clone(), psi.into()),
            (self.lambda.clone(), lambda.into()),
            (self.delta0.clone(), d0.into()),
            (self.delta1.clone(), d1.into()),
        ]
    }
}

impl fmt::Display for M21Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", plain_sum(&self.labelled("ψ", "λ", "δ0", "δ1")))
    }
}

impl Add for &M21Class {
    type Output = M21Class;
    fn add(self, o: &M21Class) -> M21Class {
        M21Class::new(
            &self.psi + &o.psi,
            &self.lambda + &o.lambda,
            &self.delta0 + &o.delta0,
            &self.delta1 + &o.delta1,
        )
    }
}

impl Sub for &M21Class {
    type Output = M21Class;
    fn sub(self, o: &M21Class) -> M21Class {
        self + &(-o)
    }
}

impl Neg for &M21Class {
    type Output = M21Class;
    fn neg(self) -> M21Class {
        self.scale(&rat(-1))
    }
}

impl Mul<&M21Class> for &BigRat {
    type Output = M21Class;
    fn mul(self, c: &M21Class) -> M21Class {
        c.scale(self)
    }
}

fn plain_sum(terms: &[(BigRat, String)]) -> String {
    render_sum(terms, "·", fmt_rat)
}

fn latex_sum(terms: &[(BigRat, String)]) -> String {
    render_sum(terms, "", |x| {
        if x.is_integer() {
            x.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", x.numer(), x.denom())
        }
    })
}

fn render_sum(terms: &[(BigRat, String)], times: &str, num: impl Fn(&BigRat) -> String) -> String {
    let mut out = String::new();
    for (c, name) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let mag = c.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            format!("{}{times}", num(&mag))
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&coeff);
        out.push_str(name);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Rewrites a class with `δ_1 = 5λ - δ_0/2`, leaving the `δ_1` coordinate zero.
pub fn mumford_reduce(c: &M21Class) -> M21Class {
    M21Class::new(
        c.psi.clone(),
        &c.lambda + &c.delta1 * rat(5),
        &c.delta0 - &c.delta1 * frac(1, 2),
        BigRat::zero(),
    )
}

/// Pullback along `M̄_{2,1} → M̄_g` attaching a fixed general tail of genus `g - 2` at the marked point.
///
/// For `g >= 4`: `δ_2 ↦ -ψ`, `λ, δ_0, δ_1` fixed, `δ_i ↦ 0` for `i >= 3`.
/// For `g = 3` the tail is elliptic and the attaching node is of type `δ_1`,
/// so `δ_1 ↦ δ_1 - ψ`.
pub fn tail_pullback(c: &MgClass) -> Result<M21Class, PicError> {
    match c.g {
        3 => Ok(M21Class::new(
            -c.delta(1),
            c.lambda.clone(),
            c.delta(0),
            c.delta(1),
        )),
        g if g >= 4 => Ok(M21Class::new(
            -c.delta(2),
            c.lambda.clone(),
            c.delta(0),
            c.delta(1),
        )),
        g => Err(PicError::PullbackUndefined {
            g,
            expected: "at least 3".into(),
        }),
    }
}

/// [`tail_pullback`] for a class on `M̄_{2d-3}`.
pub fn chi_pullback(c: &MgClass, d: i64) -> Result<M21Class, PicError> {
    if d < 3 || c.g != 2 * d - 3 {
        return Err(PicError::PullbackUndefined {
            g: c.g,
            expected: format!("2d-3 = {}", 2 * d - 3),
        });
    }
    tail_pullback(c)
}

/// Weierstrass divisor `3ψ - λ - δ_1`.
pub fn weierstrass() -> M21Class {
    M21Class::from_ints(3, -1, 0, -1)
}

/// `[C,p]` with `3x ≡ 3p` for some `x != p`.
pub fn d1() -> M21Class {
    M21Class::from_ints(80, -120, 10, 0)
}

/// `[C,p]` with a `g^1_3` ramified at `p` and triply ramified at two further points.
pub fn d2() -> M21Class {
    M21Class::from_ints(160, -200, 17, 0)
}

/// `[C,p]` with a `g^1_4` totally ramified at `p` and triply ramified at two further points.
pub fn d3() -> M21Class {
    M21Class::from_ints(640, -860, 72, 0)
}

/// Curves of genus 4 with a point `x` such that `h^0(3x) >= 2`.
pub fn diaz_class() -> MgClass {
    MgClass::from_ints(4, 264, &[-30, -96, -128]).expect("genus 4 has three boundary classes")
}

pub fn named_classes() -> Vec<(&'static str, M21Class)> {
    vec![
        ("W", weierstrass()),
        ("D1", d1()),
        ("D2", d2()),
        ("D3", d3()),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D1Reconstruction {
    pub diaz_pullback: M21Class,
    pub weierstrass_part: M21Class,
    pub unreduced: M21Class,
    pub reduced: M21Class,
}

/// Pairs `(x, y)` on a general pointed genus-2 curve with `3x ≡ 2p + y`: `r(3,1)`.
pub const WEIERSTRASS_MULTIPLICITY_IN_DIAZ: i64 = 16;

/// `D̄_1 = χ^*(Diaz) - 16·W̄`.
pub fn reconstruct_d1() -> D1Reconstruction {
    let diaz_pullback = tail_pullback(&diaz_class()).expect("genus 4");
    let weierstrass_part = weierstrass().scale(&rat(WEIERSTRASS_MULTIPLICITY_IN_DIAZ));
    let unreduced = &diaz_pullback - &weierstrass_part;
    let reduced = mumford_reduce(&unreduced);
    D1Reconstruction {
        diaz_pullback,
        weierstrass_part,
        unreduced,
        reduced,
    }
}

/// `N1(d)·W̄ + e(d,2d-5)·D̄_1 + a(d-1,2d-5)·D̄_2 + a(d,2d-5)·D̄_3`, reduced.
pub fn genus2_rhs(d: i64) -> M21Class {
    let g = 2 * d - 5;
    let parts = [
        (N1_inv(d), weierstrass()),
        (e_inv(d, g), d1()),
        (a_inv(d - 1, g), d2()),
        (a_inv(d, g), d3()),
    ];
    let sum = parts.iter().fold(M21Class::default(), |acc, (k, c)| {
        &acc + &c.scale(&BigRat::from_integer(k.clone()))
    });
    mumford_reduce(&sum)
}

/// Coefficients of the genus-2 right-hand side, in the order `W̄, D̄_1, D̄_2, D̄_3`.
pub fn genus2_coefficients(d: i64) -> [crate::scalar::BigInt; 4] {
    let g = 2 * d - 5;
    [N1_inv(d), e_inv(d, g), a_inv(d - 1, g), a_inv(d, g)]
}

/// `(b_1, ..., b_⌊g/2⌋)` with `b_i = i(g-i)/(g-1)·b_1`.
pub fn flag_coefficients(g: i64, b1: &BigRat) -> Vec<BigRat> {
    (1..=g / 2)
        .map(|i| b1 * BigRat::new((i * (g - i)).into(), (g - 1).into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m21(psi: i64, lambda: i64, d0: i64, d1: i64) -> M21Class {
        M21Class::from_ints(psi, lambda, d0, d1)
    }

    #[test]
    fn mumford_examples() {
        let w = mumford_reduce(&weierstrass());
        assert_eq!(w, M21Class::new(rat(3), rat(-6), frac(1, 2), rat(0)));
        assert_eq!(
            mumford_reduce(&m21(80, 280, -30, -80)),
            m21(80, -120, 10, 0)
        );
        assert_eq!(mumford_reduce(&d3()), d3());
    }

    #[test]
    fn mumford_relation_is_zero() {
        // 10λ - δ_0 - 2δ_1 = 0
        assert!(m21(0, 10, -1, -2).equivalent(&M21Class::default()));
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(
            tail_pullback(&diaz_class()).unwrap(),
            m21(128, 264, -30, -96)
        );
        let tr3 = MgClass::from_ints(3, 2912, &[-311, -824]).unwrap();
        assert_eq!(chi_pullback(&tr3, 3).unwrap(), m21(824, 2912, -311, -824));
        let pure = MgClass::from_ints(5, 7, &[0, 0, 0]).unwrap();
        assert_eq!(chi_pullback(&pure, 4).unwrap(), m21(0, 7, 0, 0));
    }

    #[test]
    fn pullback_genus_mismatch() {
        let tr3 = MgClass::from_ints(3, 1, &[0, 0]).unwrap();
        assert!(matches!(
            chi_pullback(&tr3, 4),
            Err(PicError::PullbackUndefined { g: 3, .. })
        ));
        let g2 = MgClass::from_ints(2, 1, &[0, 0]).unwrap();
        assert!(tail_pullback(&g2).is_err());
    }

    #[test]
    fn mg_class_shape() {
        assert!(matches!(
            MgClass::from_ints(5, 1, &[1, 2]),
            Err(PicError::BadLength { expected: 3, .. })
        ));
        assert!(MgClass::from_ints(1, 1, &[1]).is_err());
    }

    #[test]
    fn named_class_table() {
        let table = named_classes();
        assert_eq!(table[0].1, m21(3, -1, 0, -1));
        assert_eq!(table[2].1, m21(160, -200, 17, 0));
        assert_eq!(table[3].1, m21(640, -860, 72, 0));
    }

    #[test]
    fn d1_reconstruction() {
        let r = reconstruct_d1();
        assert_eq!(r.weierstrass_part, m21(48, -16, 0, -16));
        assert_eq!(r.unreduced, m21(80, 280, -30, -80));
        assert_eq!(r.reduced, d1());
        assert_eq!(
            BigRat::from_integer(crate::invariants::r_inv(3, 1)),
            rat(WEIERSTRASS_MULTIPLICITY_IN_DIAZ)
        );
    }

    #[test]
    fn genus2_rhs_examples() {
        assert_eq!(genus2_coefficients(3), [8, 8, 1, 0].map(Into::into));
        assert_eq!(genus2_rhs(3), m21(824, -1208, 101, 0));
        assert_eq!(genus2_coefficients(4), [492, 48, 2, 1].map(Into::into));
        assert_eq!(genus2_rhs(4), m21(6276, -9972, 832, 0));
    }

    #[test]
    fn flag_examples() {
        assert_eq!(flag_coefficients(5, &rat(4184)), vec![rat(4184), rat(6276)]);
        assert_eq!(flag_coefficients(3, &frac(7, 3)), vec![frac(7, 3)]);
        assert_eq!(
            flag_coefficients(9, &rat(8)),
            vec![rat(8), rat(14), rat(18), rat(20)]
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(d1().to_string(), "80·ψ - 120·λ + 10·δ0");
        assert_eq!(weierstrass().to_latex(), "3\\psi - \\lambda - \\delta_{1}");
        let tr3 = MgClass::from_ints(3, 2912, &[-311, -824]).unwrap();
        assert_eq!(
            tr3.to_latex(),
            "2912\\lambda - 311\\delta_{0} - 824\\delta_{1}"
        );
        assert_eq!(M21Class::default().to_string(), "0");
    }

    fn arb_class() -> impl Strategy<Value = M21Class> {
        proptest::array::uniform4(-1000i64..1000).prop_map(|[a, b, c, d]| m21(a, b, c, d))
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_linear(x in arb_class(), y in arb_class(), k in -20i64..20) {
            let rx = mumford_reduce(&x);
            prop_assert_eq!(mumford_reduce(&rx), rx.clone());
            prop_assert!(rx.equivalent(&x));
            let lhs = mumford_reduce(&(&x + &y.scale(&rat(k))));
            let rhs = &rx + &mumford_reduce(&y).scale(&rat(k));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_is_linear(l1 in -99i64..99, d1 in proptest::array::uniform3(-99i64..99),
                              l2 in -99i64..99, d2 in proptest::array::uniform3(-99i64..99)) {
            let x = MgClass::from_ints(5, l1, &d1).unwrap();
            let y = MgClass::from_ints(5, l2, &d2).unwrap();
            let sum = MgClass::from_ints(5, l1 + l2, &[d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2]]).unwrap();
            prop_assert_eq!(
                chi_pullback(&sum, 4).unwrap(),
                &chi_pullback(&x, 4).unwrap() + &chi_pullback(&y, 4).unwrap()
            );
            prop_assert_eq!(chi_pullback(&MgClass::zero(5).unwrap(), 4).unwrap(), M21Class::default());
        }
    }
}
