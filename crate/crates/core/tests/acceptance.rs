//! Acceptance criteria, one PASS/FAIL line each. Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hurwitz_core::abelian::{
    ee_class_from_pairings, ee_half_self_intersection, ee_intersect, enu3_count,
    excess_corrected_count, sigma_class, theta_pullback_degree, u_class, v_class, EECurveClass,
};
use hurwitz_core::invariants::{
    all_identities, d3_psi_via_degeneration, F_inv, N1_inv, N2_inv, N3_inv, N_inv,
};
use hurwitz_core::oracle::{full_torsion_curves, ECPoint, WeierstrassCurve};
use hurwitz_core::pic::{
    chi_pullback, genus2_coefficients, genus2_rhs, mumford_reduce, reconstruct_d1, M21Class,
};
use hurwitz_core::ratmaps::{
    check_inversion_symmetry, ramification_divisor, ratmaps_report, tail_cover_parameters,
    triple_point_cover, Poly, QuadExtScalar,
};
use hurwitz_core::scalar::{rat, BigInt, BigRat};
use hurwitz_core::schubert::{special_product_integral, two_triple_points_monomial};
use hurwitz_core::solver::{
    closed_form, compare_report, reconstruct_d2_from_genus3, solve_tr_class, ClosedFormVariant,
};
use num_traits::{One, Zero};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(v: &[BigRat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn m21(psi: i64, lambda: i64, delta0: i64) -> M21Class {
    M21Class::from_ints(psi, lambda, delta0, 0)
}

// Hand-rolled δ1 = 5λ - δ0/2 elimination, kept separate from the library's.
fn reduce_by_hand(c: &M21Class) -> M21Class {
    let half = BigRat::new(BigInt::one(), BigInt::from(2));
    M21Class::new(
        c.psi.clone(),
        &c.lambda + rat(5) * &c.delta1,
        &c.delta0 - half * &c.delta1,
        BigRat::zero(),
    )
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn choose(n: u64, k: u64) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

fn genus3_class() -> Outcome {
    let tr = solve_tr_class(3).map_err(|e| e.to_string())?;
    let got = (tr.a.clone(), tr.b.clone());
    ensure(got == (rat(2912), vec![rat(311), rat(824)]), || {
        format!("got A={} B={:?}", got.0, ints(&got.1))
    })
}

fn closed_form_agreement() -> Outcome {
    for d in 3..=12 {
        let solved = solve_tr_class(d).map_err(|e| e.to_string())?;
        let closed = closed_form(d, ClosedFormVariant::Corrected).map_err(|e| e.to_string())?;
        ensure(solved.a == closed.a && solved.b == closed.b, || {
            format!(
                "d={d}: solver {} {:?} vs closed form {} {:?}",
                solved.a,
                ints(&solved.b),
                closed.a,
                ints(&closed.b)
            )
        })?;
        let report = compare_report(d).map_err(|e| e.to_string())?;
        ensure(report.residuals.iter().all(|(_, r)| r.is_zero()), || {
            format!("d={d}: nonzero residual")
        })?;
        if d >= 4 {
            ensure(report.a_typo_flag, || {
                format!("d={d}: as-printed A not flagged")
            })?;
            ensure(report.closed_form_as_printed.a != solved.a, || {
                format!("d={d}: as-printed A agrees")
            })?;
        }
        ensure(report.factor48_flag, || {
            format!("d={d}: factor-48 prefactor not flagged")
        })?;
    }
    Ok(())
}

fn full_vector_pullback() -> Outcome {
    for d in 3..=12 {
        let tr = solve_tr_class(d).map_err(|e| e.to_string())?;
        let lhs = mumford_reduce(&chi_pullback(&tr.to_mg_class(), d).map_err(|e| e.to_string())?);
        let rhs = genus2_rhs(d);
        ensure(lhs == rhs, || format!("d={d}: pullback {lhs} vs rhs {rhs}"))?;
        let spot = match d {
            3 => Some(m21(824, -1208, 101)),
            4 => Some(m21(6276, -9972, 832)),
            _ => None,
        };
        if let Some(want) = spot {
            ensure(lhs == want && rhs == want, || {
                format!("d={d}: {lhs} / {rhs}, expected {want}")
            })?;
        }
    }
    Ok(())
}

fn schubert_suite() -> Outcome {
    for d in 3..=15i64 {
        let got = special_product_integral(d, &two_triple_points_monomial(d))
            .map_err(|e| e.to_string())?;
        ensure(got == F_inv(d), || {
            format!("F({d}): Pieri {got} vs {}", F_inv(d))
        })?;
    }
    for n in 3..=15u64 {
        let got = special_product_integral(n as i64, &vec![1; (2 * n - 2) as usize])
            .map_err(|e| e.to_string())?;
        let want = fact(2 * n - 2) / (fact(n) * fact(n - 1));
        ensure(got == want, || format!("deg G(1,{n}): {got} vs {want}"))?;
    }
    for d in 4..=15u64 {
        let mut cs = vec![3];
        cs.extend(std::iter::repeat_n(1, (2 * d - 5) as usize));
        let got = special_product_integral(d as i64, &cs).map_err(|e| e.to_string())?;
        let want = choose(2 * d - 4, d) * 4u32 / (2 * d - 4);
        ensure(got == want, || {
            format!("σ3·σ1^(2d-5), d={d}: {got} vs {want}")
        })?;
    }
    Ok(())
}

fn identity_suite() -> Outcome {
    for d in 3..=40 {
        for rep in all_identities(d) {
            ensure(rep.holds(), || rep.to_string())?;
        }
    }
    let spots = [
        (N_inv(3), 80),
        (N2_inv(3), 70),
        (N3_inv(4), 210),
        (N_inv(4), 912),
        (N2_inv(4), 816),
        (N1_inv(4), 492),
    ];
    for (i, (got, want)) in spots.iter().enumerate() {
        ensure(*got == BigInt::from(*want), || {
            format!("spot value #{i}: {got} vs {want}")
        })?;
    }
    Ok(())
}

fn abelian_suite() -> Outcome {
    let sigma = ee_class_from_pairings(rat(15), rat(3), rat(8));
    ensure(sigma == EECurveClass::from_ints(10, 5, -2), || {
        format!("Σ = {sigma}")
    })?;
    ensure(sigma == sigma_class(), || "sigma_class differs".into())?;
    ensure(ee_half_self_intersection(&sigma) == rat(20), || {
        "Σ²/2 != 20".into()
    })?;
    ensure(ee_intersect(&sigma, &sigma) == rat(40), || {
        "Σ² != 40".into()
    })?;
    let uv = ee_intersect(&u_class(), &v_class());
    ensure(uv == rat(11), || format!("U·V = {uv}"))?;
    for g in 2..=5usize {
        for b in 1..=5i64 {
            for c in 1..=5i64 {
                let want = BigInt::from(g * (g - 1)) * (b * b * c * c);
                let got = theta_pullback_degree(g, b, c);
                ensure(got == want, || {
                    format!("theta g={g} b={b} c={c}: {got} vs {want}")
                })?;
            }
        }
    }
    ensure(excess_corrected_count(3, 3) == BigInt::from(160), || {
        "r(3,3) != 160".into()
    })?;
    let enu3 = enu3_count();
    ensure(enu3.count == BigInt::from(210), || {
        format!("enu3 = {}", enu3.count)
    })?;
    let psi = d3_psi_via_degeneration();
    ensure(
        psi.n0 == BigInt::from(1280) && psi.psi_coefficient == BigInt::from(640),
        || format!("n0={} ψ={}", psi.n0, psi.psi_coefficient),
    )
}

// Brute force over the group, independent of the library's torsion helpers.
fn count_preimages(
    curve: &WeierstrassCurve,
    n: u64,
    target: &ECPoint,
    skip: Option<&ECPoint>,
) -> usize {
    curve
        .points()
        .iter()
        .filter(|x| Some(*x) != skip && curve.scalar_multiply(n, x) == *target)
        .count()
}

const ORACLE_SAMPLES: usize = 3;
const ORACLE_P_MAX: u64 = 199;

fn oracle_suite() -> Outcome {
    for (n, want) in [(3u64, 8usize), (4, 15), (2, 3)] {
        let mut samples = 0;
        for (curve, _) in full_torsion_curves(n, ORACLE_P_MAX)
            .map_err(|e| e.to_string())?
            .take(ORACLE_SAMPLES)
        {
            let base = curve.points()[1 + samples];
            let got = count_preimages(&curve, n, &curve.scalar_multiply(n, &base), Some(&base));
            ensure(got == want, || {
                format!("n={n} p={}: {got} vs {want}", curve.p())
            })?;
            samples += 1;
        }
        ensure(samples >= ORACLE_SAMPLES, || {
            format!("n={n}: only {samples} samples")
        })?;
    }
    let mut samples = 0;
    for (curve, _) in full_torsion_curves(3, ORACLE_P_MAX).map_err(|e| e.to_string())? {
        if samples >= ORACLE_SAMPLES {
            break;
        }
        let pts = curve.points();
        let found = pts.iter().skip(1).take(8).find_map(|p| {
            pts.iter().skip(1).take(8).find_map(|q| {
                let target = curve.add(p, &curve.scalar_multiply(2, q));
                let k = count_preimages(&curve, 3, &target, None);
                (k > 0).then_some(k)
            })
        });
        if let Some(k) = found {
            ensure(k == 9, || format!("3x = p + 2q on p={}: {k}", curve.p()))?;
            samples += 1;
        }
    }
    ensure(samples >= ORACLE_SAMPLES, || {
        format!("3x = p + 2q: only {samples} samples")
    })
}

fn ratmaps_suite() -> Outcome {
    let f = triple_point_cover();
    // (2t^4 - 4t^3)'(2t - 1) - 2(2t^4 - 4t^3), expanded by hand.
    let want = Poly::from_ints(&[0, 0, 12, -24, 12]);
    ensure(f.derivative_numerator() == want, || {
        format!("numerator {}", f.derivative_numerator())
    })?;
    let ram = ramification_divisor(&f).map_err(|e| e.to_string())?;
    ensure(ram.to_string() == "{0: 2, 1: 2, ∞: 2}", || {
        format!("ramification {ram}")
    })?;
    let k = check_inversion_symmetry(&f);
    ensure(k == Some(QuadExtScalar::int(4)), || {
        format!("inversion constant {k:?}")
    })?;
    let params = tail_cover_parameters().map_err(|e| e.to_string())?;
    for r in &params.roots {
        let on_quadratic =
            QuadExtScalar::int(16) * r * r + QuadExtScalar::int(8) * r + QuadExtScalar::int(3);
        ensure(on_quadratic.is_zero(), || {
            format!("{r} is not a root of 16x²+8x+3")
        })?;
        let relation = QuadExtScalar::int(256) * r * r * r * (QuadExtScalar::int(1) - r);
        ensure(relation == QuadExtScalar::int(27), || {
            format!("256r³(1-r) = {relation} at r = {r}")
        })?;
    }
    ensure(params.roots[0] != params.roots[1], || {
        "roots coincide".into()
    })?;
    let report = ratmaps_report().map_err(|e| e.to_string())?;
    ensure(
        report.inversion_discrepancy && report.sign_discrepancy,
        || "printed values not flagged".into(),
    )
}

fn reconstructions() -> Outcome {
    let d1 = reconstruct_d1().reduced;
    ensure(d1 == m21(80, -120, 10), || format!("D1 = {d1}"))?;
    let d2 = reconstruct_d2_from_genus3().map_err(|e| e.to_string())?.d2;
    ensure(reduce_by_hand(&d2) == m21(160, -200, 17), || {
        format!("D2 = {d2}")
    })?;
    let named = [
        M21Class::from_ints(3, -1, 0, -1),
        m21(80, -120, 10),
        m21(160, -200, 17),
        m21(640, -860, 72),
    ];
    for d in 3..=12 {
        let coeffs = genus2_coefficients(d);
        let mut total = M21Class::from_ints(0, 0, 0, 0);
        for (c, class) in coeffs.iter().zip(&named) {
            total = &total + &(&BigRat::from_integer(c.clone()) * &reduce_by_hand(class));
        }
        let tr = solve_tr_class(d).map_err(|e| e.to_string())?;
        let pulled =
            reduce_by_hand(&chi_pullback(&tr.to_mg_class(), d).map_err(|e| e.to_string())?);
        ensure(total == pulled, || {
            format!("d={d}: named combination {total} vs pullback {pulled}")
        })?;
    }
    Ok(())
}

struct Criterion {
    name: &'static str,
    bound: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "genus-3 class (2912, 311, 824)",
            bound: Duration::from_secs(1),
            run: genus3_class,
        },
        Criterion {
            name: "solver matches corrected closed form, d = 3..12",
            bound: Duration::from_secs(5),
            run: closed_form_agreement,
        },
        Criterion {
            name: "full-vector pullback equals genus-2 side, d = 3..12",
            bound: Duration::from_secs(2),
            run: full_vector_pullback,
        },
        Criterion {
            name: "Schubert degrees",
            bound: Duration::from_secs(10),
            run: schubert_suite,
        },
        Criterion {
            name: "count identities, d <= 40",
            bound: Duration::from_secs(5),
            run: identity_suite,
        },
        Criterion {
            name: "abelian intersection numbers",
            bound: Duration::from_secs(10),
            run: abelian_suite,
        },
        Criterion {
            name: "finite-field torsion counts",
            bound: Duration::from_secs(30),
            run: oracle_suite,
        },
        Criterion {
            name: "explicit rational maps",
            bound: Duration::from_secs(1),
            run: ratmaps_suite,
        },
        Criterion {
            name: "class reconstructions",
            bound: Duration::from_secs(1),
            run: reconstructions,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= c.bound, || {
                format!("took {elapsed:?}, bound {:?}", c.bound)
            })
        });
        match outcome {
            Ok(()) => println!("PASS {}. {} ({:.3}s)", i + 1, c.name, elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!(
                    "FAIL {}. {} ({:.3}s): {e}",
                    i + 1,
                    c.name,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
