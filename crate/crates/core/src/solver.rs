//! The class `TR_d = A·λ - Σ B_i·δ_i` on `M̄_{2d-3}` from three linear constraints.
//!
//! The unknowns are the actual coefficients `(A, B_0, B_1)`; higher `B_i`
//! follow from flag proportionality. Closed forms are only used for comparison.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::invariants::{a_inv, c_inv, e_inv, N2_inv, N_inv};
use crate::pic::{
    chi_pullback, d2, flag_coefficients, genus2_coefficients, mumford_reduce, named_classes,
    M21Class, MgClass,
};
use crate::scalar::{
    binomial, common_denominator, factorial, fmt_rat, rat, solve_linear, BigInt, BigRat,
    LinearError, LinearSystem, Row,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("d = {0} is outside the domain d >= 3")]
    Domain(i64),
    #[error("constraint degeneracy: {0}")]
    ConstraintDegeneracy(#[from] LinearError),
}

fn require(d: i64) -> Result<(), SolverError> {
    if d >= 3 {
        Ok(())
    } else {
        Err(SolverError::Domain(d))
    }
}

fn big(x: BigInt) -> BigRat {
    BigRat::from_integer(x)
}

/// One enumerative contribution to a test-curve intersection.
#[derive(Debug, Clone, Copy)]
pub struct Contribution {
    pub label: &'static str,
    /// Number of admissible covers per geometric configuration (automorphism-free choices of the tail map).
    pub covers: i64,
    /// Local intersection multiplicity of the divisor with the test curve.
    pub multiplicity: i64,
    pub anchor: &'static str,
    count: fn(i64) -> BigInt,
}

impl Contribution {
    pub fn count(&self, d: i64) -> BigInt {
        (self.count)(d)
    }

    pub fn weight(&self) -> i64 {
        self.covers * self.multiplicity
    }

    pub fn value(&self, d: i64) -> BigInt {
        self.count(d) * self.weight()
    }
}

/// Contributions to `C^0 · TR_d`, where `C^0` glues two moving points `p, q`
/// on a general curve of genus `2d-4`.
pub const C0_CONTRIBUTIONS: [Contribution; 7] = [
    Contribution {
        label: "(d-1)·N(d)",
        covers: 1,
        multiplicity: 1,
        anchor: "C0 case (i): both triple points on C; the double point from blowing down T is absorbed by the ramified quotient",
        count: |d| N_inv(d) * (d - 1),
    },
    Contribution {
        label: "(d-2)·e(d,2d-4)",
        covers: 1,
        multiplicity: 3,
        anchor: "C0 case (ii), f_C ramified at q: Δ_0 met with multiplicity 3",
        count: |d| e_inv(d, 2 * d - 4) * (d - 2),
    },
    Contribution {
        label: "N2(d)",
        covers: 1,
        multiplicity: 3,
        anchor: "C0 case (ii), f_C ramified at p: Δ_0 met with multiplicity 3",
        count: N2_inv,
    },
    Contribution {
        label: "C(2d-4,d-1)",
        covers: 1,
        multiplicity: 2,
        anchor: "C0 case (iii), deg f_C = d-1: degree-3 tail with a further rational bridge",
        count: |d| binomial(2 * d - 4, d - 1),
    },
    Contribution {
        label: "c(d,2d-4,1)",
        covers: 1,
        multiplicity: 2,
        anchor: "C0 case (iii), deg f_C = d, (β,γ) = (3,1): unique tail cover; order-2 automorphism halves multiplicity 4",
        count: |d| c_inv(d, 2 * d - 4, 1),
    },
    Contribution {
        label: "c(d,2d-4,3)",
        covers: 1,
        multiplicity: 2,
        anchor: "C0 case (iii), deg f_C = d, (β,γ) = (1,3): unique tail cover; order-2 automorphism halves multiplicity 4",
        count: |d| c_inv(d, 2 * d - 4, 3),
    },
    Contribution {
        label: "c(d,2d-4,2)",
        covers: 2,
        multiplicity: 2,
        anchor: "C0 case (iii), deg f_C = d, (β,γ) = (2,2): two tail covers, each with multiplicity 2",
        count: |d| c_inv(d, 2 * d - 4, 2),
    },
];

/// Intersection numbers of the elliptic-tail pencil `R` (plane cubics glued to a fixed pointed curve).
pub const PENCIL_LAMBDA: i64 = 1;
pub const PENCIL_DELTA0: i64 = 12;
pub const PENCIL_DELTA1: i64 = -1;
/// Each `j = 0` cubic of the pencil contributes `24/6 = 4` times.
pub const FERMAT_CUBIC_MULTIPLICITY: i64 = 24 / 6;

pub const UNKNOWNS: [&str; 3] = ["A", "B0", "B1"];

/// `A - 12B_0 + B_1 = 4·a(d,2d-4)`.
pub fn constraint_elliptic_tails(d: i64) -> Result<Row, SolverError> {
    require(d)?;
    Ok(Row {
        coeffs: vec![
            rat(PENCIL_LAMBDA),
            rat(PENCIL_DELTA0) * rat(-1),
            rat(PENCIL_DELTA1) * rat(-1),
        ],
        rhs: big(a_inv(d, 2 * d - 4) * FERMAT_CUBIC_MULTIPLICITY),
        label: "elliptic_tails".into(),
    })
}

/// `ψ`-coefficient of `χ^*TR_d` against that of the genus-2 decomposition.
///
/// For `d >= 4` the `ψ`-coefficient is `B_2 = 2(g-2)/(g-1)·B_1`; for `d = 3`
/// it is `B_1` because the tail is elliptic.
pub fn constraint_psi(d: i64) -> Result<Row, SolverError> {
    require(d)?;
    let g = 2 * d - 3;
    let b1_coeff = if d == 3 {
        BigRat::one()
    } else {
        BigRat::new((2 * (g - 2)).into(), (g - 1).into())
    };
    let rhs = genus2_coefficients(d)
        .iter()
        .zip(named_classes())
        .map(|(k, (_, class))| big(k.clone()) * mumford_reduce(&class).psi)
        .sum();
    Ok(Row {
        coeffs: vec![BigRat::zero(), BigRat::zero(), b1_coeff],
        rhs,
        label: "psi".into(),
    })
}

/// `(2g-2)B_0 - B_1 = C^0 · TR_d`.
pub fn constraint_c0(d: i64) -> Result<Row, SolverError> {
    require(d)?;
    let g = 2 * d - 3;
    let rhs: BigInt = C0_CONTRIBUTIONS.iter().map(|c| c.value(d)).sum();
    Ok(Row {
        coeffs: vec![BigRat::zero(), rat(2 * g - 2), rat(-1)],
        rhs: big(rhs),
        label: "C0".into(),
    })
}

/// The printed right-hand side of the `C^0` constraint, with the `c`-terms combined as `128·C(2d-4,d)`.
pub fn c0_printed_rhs(d: i64) -> BigInt {
    let g = 2 * d - 4;
    N_inv(d) * (d - 1)
        + N2_inv(d) * 3
        + e_inv(d, g) * (3 * (d - 2))
        + binomial(g, d) * 128
        + binomial(g, d - 1) * 2
}

pub fn constraint_system(d: i64) -> Result<LinearSystem, SolverError> {
    let rows = vec![
        constraint_elliptic_tails(d)?,
        constraint_psi(d)?,
        constraint_c0(d)?,
    ];
    Ok(LinearSystem::from_rows(rows)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrClass {
    pub d: i64,
    pub a: BigRat,
    /// `B_0, ..., B_{d-2}`.
    pub b: Vec<BigRat>,
}

impl TrClass {
    pub fn g(&self) -> i64 {
        2 * self.d - 3
    }

    pub fn to_mg_class(&self) -> MgClass {
        MgClass::new(
            self.g(),
            self.a.clone(),
            self.b.iter().map(|x| -x).collect(),
        )
        .expect("B has length ⌊g/2⌋ + 1")
    }

    /// `χ^*TR_d` in reduced form.
    pub fn pullback(&self) -> M21Class {
        mumford_reduce(&chi_pullback(&self.to_mg_class(), self.d).expect("genus 2d-3"))
    }

    /// `(lcm of denominators, integer coefficients A, B_0, ...)`.
    pub fn cleared(&self) -> (BigInt, Vec<BigInt>) {
        let all = std::iter::once(&self.a).chain(&self.b);
        let den = common_denominator(all.clone());
        let ints = all.map(|x| (x * big(den.clone())).to_integer()).collect();
        (den, ints)
    }

    pub fn to_latex(&self) -> String {
        format!(
            "\\overline{{TR}}_{{{}}} \\equiv {}",
            self.d,
            self.to_mg_class().to_latex()
        )
    }
}

impl fmt::Display for TrClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TR_{} = {}·λ", self.d, fmt_rat(&self.a))?;
        for (i, b) in self.b.iter().enumerate() {
            write!(f, " - {}·δ{i}", fmt_rat(b))?;
        }
        Ok(())
    }
}

pub fn solve_tr_class(d: i64) -> Result<TrClass, SolverError> {
    let system = constraint_system(d)?;
    let x = solve_linear(&system)?;
    let (a, b0, b1) = (x[0].clone(), x[1].clone(), x[2].clone());
    let mut b = vec![b0];
    b.extend(flag_coefficients(2 * d - 3, &b1));
    Ok(TrClass { d, a, b })
}

/// `D̄_2` solved out of the genus-2 decomposition of `χ^*TR_3`, where `a(3,1) = 0` removes `D̄_3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Reconstruction {
    pub pullback: M21Class,
    pub known_part: M21Class,
    pub multiplicity: BigInt,
    pub d2: M21Class,
}

impl D2Reconstruction {
    pub fn matches_named(&self) -> bool {
        self.d2.equivalent(&d2())
    }
}

pub fn reconstruct_d2_from_genus3() -> Result<D2Reconstruction, SolverError> {
    let pullback = solve_tr_class(3)?.pullback();
    let [n1, e, a2, a3] = genus2_coefficients(3);
    let classes = named_classes();
    let known_part = [
        (&n1, &classes[0].1),
        (&e, &classes[1].1),
        (&a3, &classes[3].1),
    ]
    .into_iter()
    .fold(M21Class::default(), |acc, (k, c)| {
        &acc + &c.scale(&big(k.clone()))
    });
    let d2 = mumford_reduce(&(&pullback - &known_part).scale(&(BigRat::one() / big(a2.clone()))));
    Ok(D2Reconstruction {
        pullback,
        known_part,
        multiplicity: a2,
        d2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormVariant {
    /// The `a`-polynomial read with `1885d`.
    Corrected,
    /// The `a`-polynomial with the constant `1885` exactly as typeset.
    AsPrinted,
    /// `b_i` (i >= 1) with the prefactor `(2d-6)!/(2·d!(d-3)!)` from the higher-delta statement.
    HigherDeltasPrinted,
}

impl ClosedFormVariant {
    pub const ALL: [Self; 3] = [Self::Corrected, Self::AsPrinted, Self::HigherDeltasPrinted];

    pub fn name(self) -> &'static str {
        match self {
            Self::Corrected => "corrected",
            Self::AsPrinted => "as_printed",
            Self::HigherDeltasPrinted => "higherdeltas_printed",
        }
    }
}

/// `2(2d-6)!/(d!(d-3)!)`.
pub fn prefactor(d: i64) -> BigRat {
    BigRat::new(factorial(2 * d - 6) * 2, factorial(d) * factorial(d - 3))
}

fn poly(d: i64, coeffs: &[i64]) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, &c| acc * d + c)
}

pub fn a_poly(d: i64, variant: ClosedFormVariant) -> BigInt {
    let core = match variant {
        ClosedFormVariant::AsPrinted => poly(d, &[36, -36, -640, 0, 1885 - 1475]),
        _ => poly(d, &[36, -36, -640, 1885, -1475]),
    };
    core * 24
}

pub fn b0_poly(d: i64) -> BigInt {
    poly(d, &[144, -528, -298, 3049, -2940])
}

/// `i(2d-3-i)(36d^3-156d^2+180d-5)`, without the leading 12.
fn bi_core(d: i64, i: i64) -> BigInt {
    poly(d, &[36, -156, 180, -5]) * (i * (2 * d - 3 - i))
}

pub fn closed_form(d: i64, variant: ClosedFormVariant) -> Result<TrClass, SolverError> {
    require(d)?;
    let p = prefactor(d);
    let a = &p * big(a_poly(d, variant));
    let mut b = vec![&p * big(b0_poly(d))];
    for i in 1..=d - 2 {
        b.push(match variant {
            ClosedFormVariant::HigherDeltasPrinted => {
                BigRat::new(factorial(2 * d - 6), factorial(d) * factorial(d - 3) * 2)
                    * big(bi_core(d, i))
            }
            _ => &p * big(bi_core(d, i) * 12),
        });
    }
    Ok(TrClass { d, a, b })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientDiff {
    pub variant: ClosedFormVariant,
    pub coefficient: String,
    pub solved: BigRat,
    pub closed_form: BigRat,
}

impl CoefficientDiff {
    pub fn diff(&self) -> BigRat {
        &self.solved - &self.closed_form
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrClassReport {
    pub solved: TrClass,
    pub closed_form_corrected: TrClass,
    pub closed_form_as_printed: TrClass,
    pub closed_form_higher_deltas: TrClass,
    pub residuals: Vec<(String, BigRat)>,
    /// Only the mismatching coefficients.
    pub diffs: Vec<CoefficientDiff>,
    /// Solved matches the `1885d` reading but not the typeset constant.
    pub a_typo_flag: bool,
    /// Every `B_i` (i >= 1) from the higher-delta prefactor is exactly 1/48 of the solved one.
    pub factor48_flag: bool,
}

impl TrClassReport {
    pub fn corrected_matches(&self) -> bool {
        self.solved == self.closed_form_corrected
    }
}

fn coefficient_names(d: i64) -> Vec<String> {
    std::iter::once("A".to_string())
        .chain((0..=d - 2).map(|i| format!("B{i}")))
        .collect()
}

fn entries(t: &TrClass) -> Vec<BigRat> {
    std::iter::once(t.a.clone())
        .chain(t.b.iter().cloned())
        .collect()
}

pub fn compare_report(d: i64) -> Result<TrClassReport, SolverError> {
    let solved = solve_tr_class(d)?;
    let system = constraint_system(d)?;
    let x = [solved.a.clone(), solved.b[0].clone(), solved.b[1].clone()];
    let residuals = system
        .rows()
        .iter()
        .map(|row| row.label.clone())
        .zip(system.residuals(&x))
        .collect();
    let variants: Vec<(ClosedFormVariant, TrClass)> = ClosedFormVariant::ALL
        .iter()
        .map(|&v| closed_form(d, v).map(|t| (v, t)))
        .collect::<Result<_, _>>()?;
    let names = coefficient_names(d);
    let mut diffs = Vec::new();
    for (v, t) in &variants {
        for ((name, s), c) in names.iter().zip(entries(&solved)).zip(entries(t)) {
            if s != c {
                diffs.push(CoefficientDiff {
                    variant: *v,
                    coefficient: name.clone(),
                    solved: s,
                    closed_form: c,
                });
            }
        }
    }
    let [(_, corrected), (_, as_printed), (_, higher)] =
        <[_; 3]>::try_from(variants).expect("three variants");
    let a_typo_flag = solved == corrected && solved.a != as_printed.a;
    let factor48_flag = solved.b[1..]
        .iter()
        .zip(&higher.b[1..])
        .all(|(s, h)| *s == h * rat(48));
    Ok(TrClassReport {
        solved,
        closed_form_corrected: corrected,
        closed_form_as_printed: as_printed,
        closed_form_higher_deltas: higher,
        residuals,
        diffs,
        a_typo_flag,
        factor48_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pic::genus2_rhs;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigRat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn elliptic_tail_rows() {
        for (d, rhs) in [(3, 4), (4, 12), (5, 36)] {
            assert_eq!(constraint_elliptic_tails(d).unwrap().rhs, rat(rhs));
        }
        assert_eq!(
            constraint_elliptic_tails(3).unwrap().coeffs,
            ints(&[1, -12, 1])
        );
    }

    #[test]
    fn psi_rows() {
        let r3 = constraint_psi(3).unwrap();
        assert_eq!((r3.coeffs[2].clone(), r3.rhs), (rat(1), rat(824)));
        let r4 = constraint_psi(4).unwrap();
        assert_eq!(
            (r4.coeffs[2].clone(), r4.rhs),
            (crate::scalar::frac(3, 2), rat(6276))
        );
        let r5 = constraint_psi(5).unwrap();
        assert_eq!(genus2_coefficients(5), [4440, 240, 5, 4].map(BigInt::from));
        assert_eq!(3 * 4440 + 80 * 240 + 160 * 5 + 640 * 4, 35880);
        assert_eq!(
            (r5.coeffs[2].clone(), r5.rhs),
            (crate::scalar::frac(5, 3), rat(35880))
        );
    }

    #[test]
    fn c0_rows() {
        assert_eq!(constraint_c0(3).unwrap().rhs, rat(420));
        assert_eq!(constraint_c0(4).unwrap().rhs, rat(5896));
        assert_eq!(constraint_c0(4).unwrap().coeffs, ints(&[0, 8, -1]));
        for d in 3..=15 {
            assert_eq!(
                constraint_c0(d).unwrap().rhs,
                big(c0_printed_rhs(d)),
                "d={d}"
            );
        }
    }

    #[test]
    fn contribution_weights() {
        let w: Vec<i64> = C0_CONTRIBUTIONS.iter().map(Contribution::weight).collect();
        assert_eq!(w, [1, 3, 3, 2, 2, 2, 4]);
    }

    #[test]
    fn solved_examples() {
        let t3 = solve_tr_class(3).unwrap();
        assert_eq!((t3.a.clone(), t3.b.clone()), (rat(2912), ints(&[311, 824])));
        let t4 = solve_tr_class(4).unwrap();
        assert_eq!(
            (t4.a.clone(), t4.b.clone()),
            (rat(10948), ints(&[1260, 4184, 6276]))
        );
        let t5 = solve_tr_class(5).unwrap();
        let g = 7;
        for i in 2..=3 {
            assert_eq!(
                &t5.b[i as usize] / &t5.b[1],
                BigRat::new((i * (g - i)).into(), (g - 1).into())
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(solve_tr_class(2), Err(SolverError::Domain(2)));
        assert!(closed_form(1, ClosedFormVariant::Corrected).is_err());
        assert!(constraint_psi(0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(prefactor(3), crate::scalar::frac(1, 3));
        assert_eq!(prefactor(4), crate::scalar::frac(1, 6));
        assert_eq!(a_poly(3, ClosedFormVariant::Corrected), 8736.into());
        assert_eq!(b0_poly(3), 933.into());
        assert_eq!(a_poly(4, ClosedFormVariant::Corrected), 65688.into());
        assert_eq!(b0_poly(4), 7560.into());
        let c4 = closed_form(4, ClosedFormVariant::Corrected).unwrap();
        assert_eq!(c4.a, rat(10948));
        assert_ne!(
            closed_form(4, ClosedFormVariant::AsPrinted).unwrap().a,
            rat(10948)
        );
    }

    #[test]
    fn report_d4() {
        let r = compare_report(4).unwrap();
        assert!(r.corrected_matches());
        assert!(r.a_typo_flag && r.factor48_flag);
        let printed: Vec<&str> = r
            .diffs
            .iter()
            .filter(|x| x.variant == ClosedFormVariant::AsPrinted)
            .map(|x| x.coefficient.as_str())
            .collect();
        assert_eq!(printed, ["A"]);
        assert!(r.residuals.iter().all(|(_, x)| x.is_zero()));
    }

    #[test]
    fn sweep_3_to_12() {
        for d in 3..=12 {
            let t = solve_tr_class(d).unwrap();
            let system = constraint_system(d).unwrap();
            let x = vec![t.a.clone(), t.b[0].clone(), t.b[1].clone()];
            assert!(system.residuals(&x).iter().all(Zero::is_zero), "d={d}");
            assert_eq!(
                t,
                closed_form(d, ClosedFormVariant::Corrected).unwrap(),
                "d={d}"
            );
            assert_eq!(t.pullback(), genus2_rhs(d), "d={d}");
            let (den, cleared) = t.cleared();
            assert!(den > BigInt::zero());
            assert!(cleared.iter().all(|x| *x > BigInt::zero()), "d={d}");
            let r = compare_report(d).unwrap();
            assert!(r.a_typo_flag && r.factor48_flag, "d={d}");
        }
    }

    #[test]
    fn d2_from_genus3() {
        let r = reconstruct_d2_from_genus3().unwrap();
        assert_eq!(r.multiplicity, BigInt::one());
        assert_eq!(r.d2, M21Class::from_ints(160, -200, 17, 0));
        assert!(r.matches_named());
    }

    #[test]
    fn latex_d3() {
        assert_eq!(
            solve_tr_class(3).unwrap().to_latex(),
            "\\overline{TR}_{3} \\equiv 2912\\lambda - 311\\delta_{0} - 824\\delta_{1}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn flag_structure_holds(d in 3i64..30) {
            let t = solve_tr_class(d).unwrap();
            let g = 2 * d - 3;
            for i in 1..=(d - 2) {
                prop_assert_eq!(
                    t.b[i as usize].clone(),
                    &t.b[1] * BigRat::new((i * (g - i)).into(), (g - 1).into())
                );
            }
            prop_assert!(t.b.iter().all(|x| *x > BigRat::zero()) && t.a > BigRat::zero());
        }
    }
}
