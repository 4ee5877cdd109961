//! Acceptance criteria for the exact sequence and identity engine.
//!
//! Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p stirconv-core --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

use std::time::{Duration, Instant};

use stirconv_core::combinatorics::{
    factorial, falling_poly, stirling1, stirling2, stirling2_explicit,
};
use stirconv_core::identities::{
    check_corollary_specialization, check_thm_s_specialization, gould_3_164, verify_range,
};
use stirconv_core::sequences::{
    p_double_sum, q_double_sum, q_exact_at, q_from_series, q_single_sum_numeric, q_triple_sum,
};
use stirconv_core::{rat, BigInt, IdentityId, Monomial, MultiPoly, Rational, Sequences, Var};

/// Runs `check`, prints a single verdict line and fails the test when the
/// check fails or exceeds `budget`.
fn criterion(
    id: u32,
    title: &str,
    budget: Duration,
    check: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:?}, budget {budget:?}")),
        Err(e) => (false, e),
    };
    println!(
        "[{}] AC-{id:02} {title}: {detail} ({} ms)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
    assert!(ok, "AC-{id:02} {title}: {detail}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x() -> MultiPoly {
    MultiPoly::var(Var::X)
}
fn y() -> MultiPoly {
    MultiPoly::var(Var::Y)
}
fn lam() -> MultiPoly {
    MultiPoly::var(Var::Lambda)
}
fn c(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(rat(n, d))
}

/// The first three terms exactly as printed, in factored form.
fn printed_terms() -> [MultiPoly; 3] {
    let one = c(1, 1);
    let xy = &x() * &y();
    let q1 = &xy - &lam();
    let two_xy = xy.scale(&rat(2, 1));
    let q2 = &(&xy.scale(&rat(1, 2)) * &(&(&one - &y()) + &two_xy))
        - &(&lam().scale(&rat(1, 2)) * &(&(&one - &lam()) + &two_xy));
    let falling3 = |v: &MultiPoly| &(v * &(v - &one)) * &(v - &c(2, 1));
    let q3 = &(&(&xy.scale(&rat(1, 6)) * &(&(&y() - &one) * &(&y() - &c(2, 1))))
        - &falling3(&lam()).scale(&rat(1, 6)))
        - &(&(&xy * &(&(&one - &y()) + &xy)) * &(&lam() - &xy));
    let q3 = &q3 + &(&(&lam() * &xy).scale(&rat(1, 2)) * &(&lam() - &y()));
    [q1, q2, q3]
}

#[test]
fn ac01_printed_terms() {
    criterion(
        1,
        "Q_1..Q_3 match printed terms",
        Duration::from_secs(1),
        || {
            let mut s = Sequences::new();
            for (i, printed) in printed_terms().iter().enumerate() {
                let n = i + 1;
                let q = s.q_recurrence(n);
                ensure(&q == printed, || format!("Q_{n} = {q}, printed {printed}"))?;
            }
            Ok("3 exact equalities".into())
        },
    );
}

#[test]
fn ac02_route_equivalence() {
    criterion(
        2,
        "four Q routes and two P routes agree",
        Duration::from_secs(60),
        || {
            let mut s = Sequences::new();
            for n in 0..=12 {
                let r = s.q_recurrence(n);
                ensure(q_double_sum(n) == r, || {
                    format!("double sum differs at n={n}")
                })?;
                ensure(q_triple_sum(n) == r, || {
                    format!("triple sum differs at n={n}")
                })?;
                ensure(q_from_series(n) == r, || format!("series differs at n={n}"))?;
            }
            for n in 1..=12 {
                let p = s.p_recurrence(n).map_err(|e| e.to_string())?;
                ensure(p_double_sum(n).map_err(|e| e.to_string())? == p, || {
                    format!("P_{n} routes differ")
                })?;
            }
            Ok("Q_0..Q_12 x4 routes, P_1..P_12 x2 routes".into())
        },
    );
}

fn sweep(id: IdentityId, n_max: usize, pairs: usize) -> Result<String, String> {
    let r = verify_range(id, n_max).map_err(|e| e.to_string())?;
    ensure(r.pairs_checked() == pairs, || {
        format!("{id}: {} pairs, expected {pairs}", r.pairs_checked())
    })?;
    ensure(r.passed(), || {
        let f = &r.failures[0];
        format!("{id} fails at ({}, {}): {}", f.n, f.m, f.difference)
    })?;
    Ok(format!("{id} {pairs} pairs"))
}

#[test]
fn ac03_thm_s_sweep() {
    criterion(
        3,
        "two-parameter convolution formula, n <= 8",
        Duration::from_secs(120),
        || sweep(IdentityId::ThmS, 8, 36),
    );
}

#[test]
fn ac04_theorem_pair_sweeps() {
    criterion(
        4,
        "single-parameter theorem pairs, n <= 12",
        Duration::from_secs(120),
        || {
            let mut done = Vec::new();
            for id in [
                IdentityId::Thm1A,
                IdentityId::Thm1B,
                IdentityId::Thm2A,
                IdentityId::Thm2B,
            ] {
                done.push(sweep(id, 12, 78)?);
            }
            Ok(done.join(", "))
        },
    );
}

#[test]
fn ac05_corollary_sweeps() {
    criterion(
        5,
        "corollaries and lambda = 0 coherence, n <= 15",
        Duration::from_secs(30),
        || {
            let mut done = Vec::new();
            for id in [
                IdentityId::CorOrthogonality,
                IdentityId::CorLah,
                IdentityId::CorYqA,
                IdentityId::CorYqB,
            ] {
                done.push(sweep(id, 15, 120)?);
                for (n, m) in id.pairs(15) {
                    let chk =
                        check_corollary_specialization(id, n, m).map_err(|e| e.to_string())?;
                    ensure(chk.holds(), || {
                        format!("{id} ({n},{m}) is not the lambda=0 case: {chk:?}")
                    })?;
                }
            }
            Ok(done.join(", "))
        },
    );
}

#[test]
fn ac06_specialization_structure() {
    criterion(
        6,
        "y in {1,-1,1/2,2} specializations",
        Duration::from_secs(120),
        || {
            let mut count = 0;
            for target in [
                IdentityId::Thm1A,
                IdentityId::Thm1B,
                IdentityId::Thm2A,
                IdentityId::Thm2B,
            ] {
                for (n, m) in target.pairs(8) {
                    let chk =
                        check_thm_s_specialization(target, n, m).map_err(|e| e.to_string())?;
                    ensure(chk.holds(), || format!("{target} ({n},{m}): {chk:?}"))?;
                    count += 1;
                }
            }
            Ok(format!("{count} specialized pairs"))
        },
    );
}

#[test]
fn ac07_q_reduces_to_p() {
    criterion(
        7,
        "Q_n reduces to P_{n+1}/x",
        Duration::from_secs(60),
        || {
            let mut s = Sequences::new();
            for n in 0..=10 {
                ensure(s.q_reduces_to_p(n), || format!("reduction fails at n={n}"))?;
            }
            Ok("n = 0..10".into())
        },
    );
}

#[test]
fn ac08_gould_helper() {
    criterion(
        8,
        "half-integer binomial alternating sum",
        Duration::from_secs(30),
        || {
            let mut count = 0;
            for m in 0..=12 {
                for l in 1..=12 {
                    let r = gould_3_164(m, l).map_err(|e| e.to_string())?;
                    ensure(r.passed(), || {
                        format!("fails at m={m}, l={l}: {}", r.failures[0].difference)
                    })?;
                    count += 1;
                }
            }
            let r = verify_range(IdentityId::Gould3164, 12).map_err(|e| e.to_string())?;
            ensure(r.passed() && r.pairs_checked() == count, || {
                "range sweep disagrees".into()
            })?;
            Ok(format!("{count} pairs"))
        },
    );
}

#[test]
fn ac09_numeric_single_sum() {
    const REL_TOL: f64 = 1e-12;
    const MAX_TERMS: usize = 100_000;
    const ACCEPT: f64 = 1e-9;
    criterion(
        9,
        "numeric infinite sum vs exact value",
        Duration::from_secs(30),
        || {
            let xs = [rat(-1, 2), rat(1, 4), rat(1, 3)];
            let ys = [rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
            let lams = [rat(-3, 2), rat(0, 1), rat(5, 2)];
            let mut worst = 0.0f64;
            let mut points = 0;
            for n in 0..=8 {
                for xv in &xs {
                    for yv in &ys {
                        for lv in &lams {
                            let exact = q_exact_at(n, xv, yv, lv)
                                .to_f64()
                                .map_err(|e| e.to_string())?;
                            let got = q_single_sum_numeric(n, xv, yv, lv, REL_TOL, MAX_TERMS)
                                .map_err(|e| format!("n={n} x={xv} y={yv} λ={lv}: {e}"))?;
                            let err = (got.value - exact).abs() / exact.abs().max(1.0);
                            ensure(err < ACCEPT, || {
                                format!(
                                    "n={n} x={xv} y={yv} λ={lv}: {} vs {exact}, rel err {err:e}",
                                    got.value
                                )
                            })?;
                            worst = worst.max(err);
                            points += 1;
                        }
                    }
                }
            }
            Ok(format!("{points} points, worst rel err {worst:.2e}"))
        },
    );
}

#[test]
fn ac10_stirling_substrate() {
    criterion(
        10,
        "Stirling tables and connection identities",
        Duration::from_secs(30),
        || {
            for n in 0..=20i64 {
                for k in 0..=n {
                    let a = stirling2(n, k).map_err(|e| e.to_string())?;
                    let b = stirling2_explicit(n, k).map_err(|e| e.to_string())?;
                    ensure(a == b, || format!("S2({n},{k}): {a} vs {b}"))?;
                }
            }
            let xp = x();
            for n in 0..=15usize {
                let ni = n as i64;
                let mut expanded = MultiPoly::zero();
                let mut powers = MultiPoly::zero();
                let mut row_sum = BigInt::from(0);
                for k in 0..=ni {
                    let s1 = stirling1(ni, k).unwrap();
                    let sgn = if (ni - k) % 2 == 0 { 1 } else { -1 };
                    expanded.add_term(
                        Monomial::var_pow(Var::X, k as u32),
                        Rational::from(s1.clone()) * Rational::from(sgn),
                    );
                    row_sum += s1;
                    let s2 = Rational::from(stirling2(ni, k).unwrap());
                    powers += &falling_poly(k as usize).scale(&s2);
                }
                ensure(expanded == falling_poly(n), || {
                    format!("falling factorial expansion fails at n={n}")
                })?;
                ensure(powers == xp.pow(n as u32), || {
                    format!("x^n expansion fails at n={n}")
                })?;
                ensure(row_sum == factorial(n), || {
                    format!("row sum fails at n={n}")
                })?;
            }
            Ok("n <= 20 explicit sum, n <= 15 connection identities".into())
        },
    );
}
