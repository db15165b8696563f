//! Closed-form enumerative invariants of pencils on general (pointed) curves,
//! and the degeneration identities that tie them together.
//!
//! Every factorial reciprocal goes through [`inv_factorial`], so `1/n! = 0`
//! for `n < 0` applies uniformly. Values are integers on the documented
//! domains; evaluating outside them panics if the result is not integral.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::abelian;
use crate::scalar::{binomial, factorial, fmt_rat, inv_factorial, rat, to_integer, BigInt, BigRat};
use crate::schubert::{special_product_integral, two_triple_points_monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("domain: {name} requires {requirement}, got d = {d}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        d: i64,
    },
}

fn integral(x: BigRat, what: &str) -> BigInt {
    to_integer(&x).unwrap_or_else(|| panic!("{what} = {} is not an integer", fmt_rat(&x)))
}

fn fact(n: i64) -> BigRat {
    BigRat::from_integer(factorial(n))
}

/// Pencils `L ∈ W^1_d(C)` with `h^0(L(-(2d-g-1)p)) >= 1` on a general pointed genus-`g` curve.
pub fn a_inv(d: i64, g: i64) -> BigInt {
    let v = rat(2 * d - g - 1) * fact(g) * inv_factorial(d) * inv_factorial(g - d + 1);
    integral(v, &format!("a({d},{g})"))
}

/// Pairs `(L, x)` with `h^0(L(-(2d-g)x)) >= 2`.
pub fn b_inv(d: i64, g: i64) -> BigInt {
    let v = rat((2 * d - g - 1) * (2 * d - g) * (2 * d - g + 1))
        * fact(g)
        * inv_factorial(d)
        * inv_factorial(g - d);
    integral(v, &format!("b({d},{g})"))
}

/// Pairs `(L, x)` with `h^0(L(-βp - γx)) >= 1`, `β + γ = 2d - g`.
pub fn c_inv(d: i64, g: i64, gamma: i64) -> BigInt {
    BigInt::from(gamma * gamma * (2 * d - g) - gamma) * binomial(g, d)
}

/// Pairs `(L, x)` with a `(2d-g-2)`-fold point at `p` and a triple point at `x`.
pub fn e_inv(d: i64, g: i64) -> BigInt {
    let v = rat(8) * fact(g) * inv_factorial(d - 3) * inv_factorial(g - d + 2)
        - rat(8) * fact(g) * inv_factorial(d) * inv_factorial(g - d - 1);
    integral(v, &format!("e({d},{g})"))
}

/// Pencils of degree `d` on a general two-pointed genus `2d-6` curve with triple points at both.
#[allow(non_snake_case)]
pub fn F_inv(d: i64) -> BigInt {
    let v = fact(2 * d - 6)
        * (inv_factorial(d - 3) * inv_factorial(d - 3) - inv_factorial(d) * inv_factorial(d - 6));
    integral(v, &format!("F({d})"))
}

fn poly_times(coeff: i64, top: i64, den1: i64, den2: i64, what: String) -> BigInt {
    let v = rat(coeff) * fact(top) * inv_factorial(den1) * inv_factorial(den2);
    integral(v, &what)
}

/// Pencils with two unspecified triple points on a general genus `2d-4` curve.
#[allow(non_snake_case)]
pub fn N_inv(d: i64) -> BigInt {
    poly_times(
        48 * (6 * d * d - 28 * d + 35),
        2 * d - 4,
        d,
        d - 3,
        format!("N({d})"),
    )
}

/// As [`N_inv`], on a pointed genus `2d-5` curve, with the marked point a ramification point.
#[allow(non_snake_case)]
pub fn N1_inv(d: i64) -> BigInt {
    poly_times(
        24 * (12 * d * d * d - 92 * d * d + 240 * d - 215),
        2 * d - 4,
        d,
        d - 2,
        format!("N1({d})"),
    )
}

/// Pencils with a triple point and a fibre `p + 2y` on a general pointed genus `2d-4` curve.
#[allow(non_snake_case)]
pub fn N2_inv(d: i64) -> BigInt {
    poly_times(
        6 * (40 * d * d - 179 * d + 212),
        2 * d - 4,
        d,
        d - 3,
        format!("N2({d})"),
    )
}

/// Pencils with a triple point and a fibre `2q + 2y` on a general pointed genus `2d-5` curve.
///
/// Defined for `d >= 3`; the `(d - 3)` factor gives `N3(3) = 0`.
#[allow(non_snake_case)]
pub fn N3_inv(d: i64) -> BigInt {
    poly_times(
        84 * (d - 3) * (2 * d * d - 10 * d + 13),
        2 * d - 4,
        d,
        d - 2,
        format!("N3({d})"),
    )
}

/// Pairs `(p, x)`, `p != x`, on a general pointed genus-2 curve with `a·x ≡ b·p + (a-b)·q`.
pub fn r_inv(a: i64, b: i64) -> BigInt {
    BigInt::from(2) * (BigInt::from(a * a) * BigInt::from(b * b) - 1)
}

/// Brill–Noether number `g - (r+1)(g-d+r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// Total ramification `2d + 2g - 2` of a degree-`d` cover of `P^1` by a genus-`g` curve.
pub fn hurwitz_ramification_degree(d: i64, g: i64) -> i64 {
    2 * d + 2 * g - 2
}

/// `3(2d-4)!/(d!(d-3)!)`, the multiplicity of the Fermat-cubic component on `Δ_1`.
pub fn alpha(d: i64) -> BigInt {
    poly_times(3, 2 * d - 4, d, d - 3, format!("alpha({d})"))
}

/// One named summand of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub value: BigRat,
}

impl Term {
    fn new(label: impl Into<String>, value: impl Into<BigRat>) -> Self {
        Self {
            label: label.into(),
            value: value.into(),
        }
    }
}

/// Term-by-term evaluation of an identity `lhs = Σ terms` at one `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub d: i64,
    pub lhs_label: String,
    pub lhs: BigRat,
    pub terms: Vec<Term>,
    /// Extra equalities checked alongside the main one (label, left, right).
    pub side_checks: Vec<(String, BigRat, BigRat)>,
}

impl IdentityReport {
    pub fn rhs(&self) -> BigRat {
        self.terms
            .iter()
            .fold(BigRat::zero(), |acc, t| acc + &t.value)
    }

    pub fn residual(&self) -> BigRat {
        &self.lhs - self.rhs()
    }

    pub fn holds(&self) -> bool {
        self.residual().is_zero() && self.side_checks.iter().all(|(_, l, r)| l == r)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}={}", t.label, fmt_rat(&t.value)))
            .collect();
        write!(
            f,
            "{} d={}: {}={} vs {} (residual {})",
            self.name,
            self.d,
            self.lhs_label,
            fmt_rat(&self.lhs),
            terms.join(" + "),
            fmt_rat(&self.residual())
        )?;
        for (label, l, r) in &self.side_checks {
            write!(f, "; {label}: {} vs {}", fmt_rat(l), fmt_rat(r))?;
        }
        Ok(())
    }
}

fn big(x: BigInt) -> BigRat {
    BigRat::from_integer(x)
}

/// `N(d)` as the sum of the three elliptic-tail degeneration contributions.
///
/// The first contribution is also recomputed as `64·C(2d-4,2)·σ_(0,2)²σ_(0,1)^(2d-6)`.
pub fn identity_n_decomposition(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 3, "identity_N_decomposition", "d >= 3", d)?;
    let first = rat(32)
        * fact(2 * d - 4)
        * (inv_factorial(d - 3) * inv_factorial(d - 3) - inv_factorial(d) * inv_factorial(d - 6));
    let schubert =
        special_product_integral(d, &two_triple_points_monomial(d)).expect("top-degree monomial");
    let via_schubert = rat(64) * big(binomial(2 * d - 4, 2)) * big(schubert);
    Ok(IdentityReport {
        name: "identity_N_decomposition",
        d,
        lhs_label: "N(d)".into(),
        lhs: big(N_inv(d)),
        terms: vec![
            Term::new("tails on two components", first.clone()),
            Term::new("16·C(2d-4,d-1)", rat(16) * big(binomial(2 * d - 4, d - 1))),
            Term::new("80·C(2d-4,d)", rat(80) * big(binomial(2 * d - 4, d))),
        ],
        side_checks: vec![("64·C(2d-4,2)·σ-product".into(), first, via_schubert)],
    })
}

/// `N(d) = N1(d) + 20a(d,2d-5) + 8a(d-1,2d-5) + 8e(d,2d-5)`.
pub fn identity_n_n1(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 3, "identity_N_N1", "d >= 3", d)?;
    let g = 2 * d - 5;
    Ok(IdentityReport {
        name: "identity_N_N1",
        d,
        lhs_label: "N(d)".into(),
        lhs: big(N_inv(d)),
        terms: vec![
            Term::new("N1(d)", big(N1_inv(d))),
            Term::new("20·a(d,2d-5)", big(a_inv(d, g) * 20)),
            Term::new("8·a(d-1,2d-5)", big(a_inv(d - 1, g) * 8)),
            Term::new("8·e(d,2d-5)", big(e_inv(d, g) * 8)),
        ],
        side_checks: vec![],
    })
}

/// The degree of the forgetful map computing `N2(d)`, split by the position of the ramification.
pub fn identity_n2_n3(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 4, "identity_N2_N3", "d >= 4", d)?;
    let g = 2 * d - 5;
    Ok(IdentityReport {
        name: "identity_N2_N3",
        d,
        lhs_label: "N2(d)".into(),
        lhs: big(N2_inv(d)),
        terms: vec![
            Term::new("4·e(d,2d-5)", big(e_inv(d, g) * 4)),
            Term::new("(6d-16)·b(d-1,2d-5)", big(b_inv(d - 1, g) * (6 * d - 16))),
            Term::new("38·a(d,2d-5)", big(a_inv(d, g) * 38)),
            Term::new("11·a(d-1,2d-5)", big(a_inv(d - 1, g) * 11)),
            Term::new(
                "9(6d-15)·a(d-1,2d-5)",
                big(a_inv(d - 1, g) * (9 * (6 * d - 15))),
            ),
            Term::new("N3(d)", big(N3_inv(d))),
        ],
        side_checks: vec![],
    })
}

/// `b(d-1,2d-5) = e(d-1,2d-5)`.
pub fn identity_b_eq_e(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 4, "identity_b_eq_e", "d >= 4", d)?;
    let g = 2 * d - 5;
    Ok(IdentityReport {
        name: "identity_b_eq_e",
        d,
        lhs_label: "b(d-1,2d-5)".into(),
        lhs: big(b_inv(d - 1, g)),
        terms: vec![Term::new("e(d-1,2d-5)", big(e_inv(d - 1, g)))],
        side_checks: vec![],
    })
}

/// `2c(d,2d-4,1) + 2c(d,2d-4,3) + 4c(d,2d-4,2) = 128·C(2d-4,d)`.
pub fn identity_c_combination(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 3, "identity_c_combination", "d >= 3", d)?;
    let g = 2 * d - 4;
    Ok(IdentityReport {
        name: "identity_c_combination",
        d,
        lhs_label: "128·C(2d-4,d)".into(),
        lhs: big(binomial(g, d) * 128),
        terms: vec![
            Term::new("2·c(d,2d-4,1)", big(c_inv(d, g, 1) * 2)),
            Term::new("2·c(d,2d-4,3)", big(c_inv(d, g, 3) * 2)),
            Term::new("4·c(d,2d-4,2)", big(c_inv(d, g, 2) * 4)),
        ],
        side_checks: vec![],
    })
}

/// `3(2d-4)!/(d!(d-3)!) = a(d,2d-4)`.
pub fn alpha_is_a(d: i64) -> Result<IdentityReport, InvariantError> {
    require(d >= 3, "alpha_is_a", "d >= 3", d)?;
    Ok(IdentityReport {
        name: "alpha_is_a",
        d,
        lhs_label: "alpha".into(),
        lhs: big(alpha(d)),
        terms: vec![Term::new("a(d,2d-4)", big(a_inv(d, 2 * d - 4)))],
        side_checks: vec![],
    })
}

/// The five degeneration identities plus `alpha_is_a` that apply at `d`.
pub fn all_identities(d: i64) -> Vec<IdentityReport> {
    let checks: [fn(i64) -> Result<IdentityReport, InvariantError>; 6] = [
        identity_n_decomposition,
        identity_n_n1,
        identity_n2_n3,
        identity_b_eq_e,
        identity_c_combination,
        alpha_is_a,
    ];
    checks.iter().filter_map(|f| f(d).ok()).collect()
}

fn require(
    ok: bool,
    name: &'static str,
    requirement: &'static str,
    d: i64,
) -> Result<(), InvariantError> {
    if ok {
        Ok(())
    } else {
        Err(InvariantError::Domain {
            name,
            requirement,
            d,
        })
    }
}

/// Intermediate counts of the genus-2 degeneration computing `(D̄_3)_ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiDegeneration {
    /// `2 · (Σ·Δ) · (Σ²/2)`: total point on one component, triple points on the other.
    pub case_i: BigInt,
    /// `2 · (Σ·F_2) · Σ²`: one triple point split off.
    pub case_ii: BigInt,
    /// `2 · Σ²/2`: everything on one component.
    pub case_iii: BigInt,
    pub n0: BigInt,
    /// `n0 / (2g - 2)` with `g = 2`.
    pub psi_coefficient: BigInt,
}

/// Assembles `n0` from intersection numbers of the correspondence `Σ ⊂ E×E`
/// and returns `(D̄_3)_ψ = n0 / 2`.
pub fn d3_psi_via_degeneration() -> PsiDegeneration {
    let sigma = abelian::sigma_class();
    let with_diag = abelian::ee_intersect(&sigma, &abelian::EECurveClass::diagonal());
    let with_f2 = abelian::ee_intersect(&sigma, &abelian::EECurveClass::f2());
    let half_square = abelian::ee_half_self_intersection(&sigma);
    let square = abelian::ee_intersect(&sigma, &sigma);
    let as_int = |x: BigRat| integral(x, "intersection number");
    let case_i = as_int(rat(2) * with_diag * &half_square);
    let case_ii = as_int(rat(2) * with_f2 * square);
    let case_iii = as_int(rat(2) * half_square);
    let n0 = &case_i + &case_ii + &case_iii;
    let psi_coefficient = integral(big(n0.clone()) / rat(2), "n0/2");
    PsiDegeneration {
        case_i,
        case_ii,
        case_iii,
        n0,
        psi_coefficient,
    }
}
