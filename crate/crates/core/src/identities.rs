//! Exact verification of the Stirling-number convolution identities.
//!
//! Every identity is written once, generically over [`Scalar`], so the same
//! formula can be expanded symbolically into [`MultiPoly`] (the proof for a
//! given `(n, m)`) or evaluated directly in [`Rational`] at a sample point
//! (a cross-check that bypasses the polynomial engine).
//!
//! The theorem family shares the left-hand side
//!
//! ```text
//! Σ_{i=m}^{n} Σ_{j=m}^{i} ± [n,i] C(i,j) {j,m} λ^{i-j} w(j)
//! ```
//!
//! with a sign pattern and weight `w` that depend on the identity.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    binom_int, binom_poly, binom_rational, binomial, factorial, s1, s2, sign,
};
use crate::error::{out_of_range, Error, Result};
use crate::exact::{rat, Rational};
use crate::poly::{Assignment, MultiPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// The two-parameter convolution formula in `λ` and `y`.
    ThmS,
    Thm1A,
    Thm1B,
    Thm2A,
    Thm2B,
    CorOrthogonality,
    CorLah,
    CorYqA,
    CorYqB,
    /// Alternating sum of half-integer binomials.
    Gould3164,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::ThmS,
        IdentityId::Thm1A,
        IdentityId::Thm1B,
        IdentityId::Thm2A,
        IdentityId::Thm2B,
        IdentityId::CorOrthogonality,
        IdentityId::CorLah,
        IdentityId::CorYqA,
        IdentityId::CorYqB,
        IdentityId::Gould3164,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::ThmS => "thmS",
            IdentityId::Thm1A => "thm1a",
            IdentityId::Thm1B => "thm1b",
            IdentityId::Thm2A => "thm2a",
            IdentityId::Thm2B => "thm2b",
            IdentityId::CorOrthogonality => "cor-orth",
            IdentityId::CorLah => "cor-lah",
            IdentityId::CorYqA => "cor-yqa",
            IdentityId::CorYqB => "cor-yqb",
            IdentityId::Gould3164 => "gould",
        }
    }

    pub fn is_corollary(self) -> bool {
        matches!(
            self,
            IdentityId::CorOrthogonality
                | IdentityId::CorLah
                | IdentityId::CorYqA
                | IdentityId::CorYqB
        )
    }

    /// The theorem whose `λ = 0` specialization gives this corollary.
    pub fn parent_theorem(self) -> Option<IdentityId> {
        match self {
            IdentityId::CorOrthogonality => Some(IdentityId::Thm1A),
            IdentityId::CorLah => Some(IdentityId::Thm1B),
            IdentityId::CorYqA => Some(IdentityId::Thm2A),
            IdentityId::CorYqB => Some(IdentityId::Thm2B),
            _ => None,
        }
    }

    /// Reading of the published statement that differs from its literal text.
    pub fn note(self) -> Option<&'static str> {
        match self {
            IdentityId::CorYqB => Some(
                "the published exponent (-2)^{j-m} is read as (-2)^{k-m}; \
                 this is the lambda = 0 case of thm2b",
            ),
            _ => None,
        }
    }

    /// Index pairs checked by [`verify_range`] up to `n_max`.
    ///
    /// For [`IdentityId::Gould3164`] the pair is `(ℓ, m)` with
    /// `1 <= ℓ <= n_max`, `0 <= m <= n_max`; otherwise `1 <= m <= n <= n_max`.
    pub fn pairs(self, n_max: usize) -> Vec<(usize, usize)> {
        if self == IdentityId::Gould3164 {
            (1..=n_max)
                .flat_map(|l| (0..=n_max).map(move |m| (l, m)))
                .collect()
        } else {
            (1..=n_max)
                .flat_map(|n| (1..=n).map(move |m| (n, m)))
                .collect()
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| out_of_range(format!("unknown identity {s:?}")))
    }
}

/// Values that identity sides can be computed in.
pub trait Scalar: Clone {
    fn from_rational(r: Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// `C(self, k)`.
    fn choose(&self, k: usize) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    fn zero() -> Self {
        Self::from_int(0)
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.times(&Self::from_rational(c.clone()))
    }

    fn powers(&self, max: usize) -> Vec<Self> {
        let mut out = vec![Self::from_int(1)];
        for i in 0..max {
            out.push(out[i].times(self));
        }
        out
    }
}

impl Scalar for MultiPoly {
    fn from_rational(r: Rational) -> Self {
        MultiPoly::constant(r)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn choose(&self, k: usize) -> Self {
        binom_poly(self, k)
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn choose(&self, k: usize) -> Self {
        binom_rational(self, k)
    }
}

fn two_pow(e: i64) -> Rational {
    rat(2, 1).pow(e).expect("2 is nonzero")
}

fn ratio_of_factorials(n: usize, m: usize) -> Rational {
    Rational::from(factorial(n))
        .checked_div(&Rational::from(factorial(m)))
        .expect("m! is nonzero")
}

fn check_theorem_range(n: usize, m: usize) -> Result<()> {
    if m < 1 || m > n {
        return Err(out_of_range(format!(
            "(n, m) = ({n}, {m}) is outside the stated range 1 <= m <= n"
        )));
    }
    Ok(())
}

/// `Σ_i Σ_j sgn(i, j) [n,i] C(i,j) {j,m} λ^{i-j} w(j)`.
fn stirling_double_sum<T: Scalar>(
    n: usize,
    m: usize,
    lam_pows: &[T],
    sgn: impl Fn(usize, usize) -> i64,
    weight: impl Fn(usize) -> T,
) -> T {
    let mut acc = T::zero();
    for i in m..=n {
        let outer = s1(n, i);
        for j in m..=i {
            let c = Rational::from(&outer * binomial(i, j) * s2(j, m)) * Rational::from(sgn(i, j));
            if c.is_zero() {
                continue;
            }
            let term = lam_pows[i - j].times(&weight(j)).scaled(&c);
            acc = acc.plus(&term);
        }
    }
    acc
}

/// `Σ_k sgn(k) [n,k] {k,m} w(k)` over `m <= k <= n`.
fn corollary_sum(n: usize, m: usize, coeff: impl Fn(usize) -> Rational) -> Rational {
    (m..=n)
        .map(|k| Rational::from(s1(n, k) * s2(k, m)) * coeff(k))
        .sum()
}

/// Left and right sides of `id` at `(n, m)` (or `(ℓ, m)` for the Gould
/// identity), with `λ` and `y` taking the supplied values.
pub fn sides<T: Scalar>(id: IdentityId, n: usize, m: usize, lambda: &T, y: &T) -> Result<(T, T)> {
    if id == IdentityId::Gould3164 {
        let (l, m) = (n, m);
        let (lhs, rhs) = gould_sides(m, l)?;
        return Ok((T::from_rational(lhs), T::from_rational(rhs)));
    }
    check_theorem_range(n, m)?;
    let nm = ratio_of_factorials(n, m);
    let lam_pows = lambda.powers(n);
    let (ni, mi) = (n as i64, m as i64);
    let one = || T::from_int(1);
    Ok(match id {
        IdentityId::ThmS => {
            let y_pows = y.powers(n);
            let lhs = stirling_double_sum(
                n,
                m,
                &lam_pows,
                |i, _| sign(ni + i as i64),
                |j| y_pows[j].clone(),
            );
            let mut rhs = T::zero();
            for k in 0..=m {
                let arg = lambda.plus(&y.scaled(&Rational::from(k as i64)));
                let c = Rational::from(binomial(m, k)) * Rational::from(sign(mi + k as i64));
                rhs = rhs.plus(&arg.choose(n).scaled(&c));
            }
            (lhs, rhs.scaled(&nm))
        }
        IdentityId::Thm1A => {
            let lhs = stirling_double_sum(n, m, &lam_pows, |i, _| sign(ni + i as i64), |_| one());
            (lhs, lambda.choose(n - m).scaled(&nm))
        }
        IdentityId::Thm1B => {
            let lhs = stirling_double_sum(n, m, &lam_pows, |i, j| sign((i + j) as i64), |_| one());
            let shifted = lambda.minus(&T::from_int(mi));
            let c = &nm * Rational::from(sign(mi + ni));
            (lhs, shifted.choose(n - m).scaled(&c))
        }
        IdentityId::Thm2A => {
            let lhs = stirling_double_sum(
                n,
                m,
                &lam_pows,
                |i, _| sign(ni + i as i64),
                |j| T::from_rational(two_pow(ni - j as i64)),
            );
            let mut rhs = T::zero();
            for l in m..=n {
                let li = l as i64;
                let c = rat(mi, li)
                    * Rational::from(binom_int(-li, li - mi)?)
                    * two_pow(mi + ni - 2 * li);
                rhs = rhs.plus(&lambda.choose(n - l).scaled(&c));
            }
            (lhs, rhs.scaled(&nm))
        }
        IdentityId::Thm2B => {
            let lhs = stirling_double_sum(
                n,
                m,
                &lam_pows,
                |i, _| sign(mi + i as i64),
                |j| T::from_rational(two_pow(j as i64 - mi)),
            );
            let mut rhs = T::zero();
            for l in m..=n {
                let c = Rational::from(sign(mi + ni))
                    * Rational::from(binomial(m, l - m))
                    * two_pow(mi - l as i64);
                rhs = rhs.plus(&lambda.choose(n - l).scaled(&c));
            }
            (lhs, rhs.scaled(&nm))
        }
        IdentityId::CorOrthogonality => {
            let lhs = corollary_sum(n, m, |k| Rational::from(sign(ni - k as i64)));
            let rhs = Rational::from(i64::from(m == n));
            (T::from_rational(lhs), T::from_rational(rhs))
        }
        IdentityId::CorLah => {
            let lhs = corollary_sum(n, m, |_| Rational::one());
            let rhs = nm * Rational::from(binomial(n - 1, m - 1));
            (T::from_rational(lhs), T::from_rational(rhs))
        }
        IdentityId::CorYqA => {
            let lhs = corollary_sum(n, m, |k| {
                rat(-2, 1).pow(ni - k as i64).expect("nonzero base")
            });
            let rhs = ratio_of_factorials(n - 1, m - 1)
                * Rational::from(binom_int(-ni, ni - mi)?)
                * two_pow(mi - ni);
            (T::from_rational(lhs), T::from_rational(rhs))
        }
        IdentityId::CorYqB => {
            let lhs = corollary_sum(n, m, |k| {
                rat(-2, 1).pow(k as i64 - mi).expect("nonzero base")
            });
            let rhs = nm
                * Rational::from(binomial(m, n - m))
                * rat(-2, 1).pow(mi - ni).expect("nonzero base");
            (T::from_rational(lhs), T::from_rational(rhs))
        }
        IdentityId::Gould3164 => unreachable!("handled above"),
    })
}

/// Both sides of `Σ_{k=0}^m (-1)^{m-k} C(m,k) C(k/2, ℓ) = (m/ℓ) C(-ℓ, ℓ-m) 2^{m-2ℓ}`.
pub fn gould_sides(m: usize, l: usize) -> Result<(Rational, Rational)> {
    if l == 0 {
        return Err(out_of_range(
            "gould identity with l = 0 is outside stated range",
        ));
    }
    let (mi, li) = (m as i64, l as i64);
    let lhs: Rational = (0..=m)
        .map(|k| {
            Rational::from(binomial(m, k) * sign(mi - k as i64))
                * binom_rational(&rat(k as i64, 2), l)
        })
        .sum();
    // C(a, b) vanishes for negative b.
    let rhs = if l < m {
        Rational::zero()
    } else {
        rat(mi, li) * Rational::from(binom_int(-li, li - mi)?) * two_pow(mi - 2 * li)
    };
    Ok((lhs, rhs))
}

/// Symbolic sides: `λ` and `y` are ring variables.
pub fn symbolic_sides(id: IdentityId, n: usize, m: usize) -> Result<(MultiPoly, MultiPoly)> {
    sides(
        id,
        n,
        m,
        &MultiPoly::var(Var::Lambda),
        &MultiPoly::var(Var::Y),
    )
}

/// `LHS - RHS` in canonical form; zero exactly when the identity holds.
pub fn difference(id: IdentityId, n: usize, m: usize) -> Result<MultiPoly> {
    let (lhs, rhs) = symbolic_sides(id, n, m)?;
    Ok(&lhs - &rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub n: usize,
    pub m: usize,
    /// `LHS - RHS`, never zero.
    pub difference: MultiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub n_max: usize,
    /// Checked pairs in ascending order.
    pub pairs: Vec<(usize, usize)>,
    pub status: Status,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn from_outcomes(
        identity: IdentityId,
        n_max: usize,
        outcomes: Vec<((usize, usize), MultiPoly)>,
        elapsed: Duration,
    ) -> Self {
        let mut pairs = Vec::with_capacity(outcomes.len());
        let mut failures = Vec::new();
        for ((n, m), diff) in outcomes {
            pairs.push((n, m));
            if !diff.is_zero() {
                failures.push(Failure {
                    n,
                    m,
                    difference: diff,
                });
            }
        }
        let status = if failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            identity,
            n_max,
            pairs,
            status,
            failures,
            elapsed,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn pairs_checked(&self) -> usize {
        self.pairs.len()
    }

    pub fn to_record(&self, ascii: bool) -> ReportRecord {
        ReportRecord {
            identity: self.identity.name().to_string(),
            n_max: self.n_max,
            pairs_checked: self.pairs.len(),
            status: self.status,
            failures: self
                .failures
                .iter()
                .map(|f| FailureRecord {
                    n: f.n,
                    m: f.m,
                    difference: f.difference.to_text(ascii),
                })
                .collect(),
            elapsed_ms: self.elapsed.as_millis() as u64,
        }
    }
}

/// Serialized form of a [`VerificationReport`]. Field order is the wire order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub identity: String,
    pub n_max: usize,
    pub pairs_checked: usize,
    pub status: Status,
    pub failures: Vec<FailureRecord>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub n: usize,
    pub m: usize,
    pub difference: String,
}

fn check_pair(id: IdentityId, n: usize, m: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let diff = difference(id, n, m)?;
    Ok(VerificationReport::from_outcomes(
        id,
        n,
        vec![((n, m), diff)],
        start.elapsed(),
    ))
}

/// Convolution formula in `Q[λ, y]` at one `(n, m)`.
pub fn verify_thm_s(n: usize, m: usize) -> Result<VerificationReport> {
    check_pair(IdentityId::ThmS, n, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

pub fn verify_thm1(variant: Variant, n: usize, m: usize) -> Result<VerificationReport> {
    let id = match variant {
        Variant::A => IdentityId::Thm1A,
        Variant::B => IdentityId::Thm1B,
    };
    check_pair(id, n, m)
}

pub fn verify_thm2(variant: Variant, n: usize, m: usize) -> Result<VerificationReport> {
    let id = match variant {
        Variant::A => IdentityId::Thm2A,
        Variant::B => IdentityId::Thm2B,
    };
    check_pair(id, n, m)
}

pub fn verify_corollary(id: IdentityId, n: usize, m: usize) -> Result<VerificationReport> {
    if !id.is_corollary() {
        return Err(out_of_range(format!("{id} is not a corollary")));
    }
    check_pair(id, n, m)
}

/// Gould's alternating half-binomial sum at `(m, ℓ)`.
pub fn gould_3_164(m: usize, l: usize) -> Result<VerificationReport> {
    check_pair(IdentityId::Gould3164, l, m)
}

/// Checks every pair of [`IdentityId::pairs`] on the current thread.
pub fn verify_range(id: IdentityId, n_max: usize) -> Result<VerificationReport> {
    verify_range_with_jobs(id, n_max, 1)
}

/// As [`verify_range`], spread over `jobs` worker threads. The report is
/// identical for any worker count apart from `elapsed`.
pub fn verify_range_with_jobs(
    id: IdentityId,
    n_max: usize,
    jobs: usize,
) -> Result<VerificationReport> {
    if n_max < 1 {
        return Err(out_of_range("n_max must be at least 1"));
    }
    let start = Instant::now();
    let pairs = id.pairs(n_max);
    let run = |&(n, m): &(usize, usize)| difference(id, n, m).map(|d| ((n, m), d));
    let outcomes: Result<Vec<_>> = if jobs <= 1 {
        pairs.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| pairs.par_iter().map(run).collect())
    };
    Ok(VerificationReport::from_outcomes(
        id,
        n_max,
        outcomes?,
        start.elapsed(),
    ))
}

/// Evaluates both sides directly in rationals at `points` random `(λ, y)`
/// pairs, without expanding any polynomial. Returns the first point where
/// the sides disagree.
pub fn sample_check<R: Rng + ?Sized>(
    id: IdentityId,
    n: usize,
    m: usize,
    points: usize,
    rng: &mut R,
) -> Result<Option<Assignment>> {
    for _ in 0..points {
        let lambda = rat(rng.gen_range(-60..=60), rng.gen_range(1..=12));
        let y = rat(rng.gen_range(-60..=60), rng.gen_range(1..=12));
        let (lhs, rhs) = sides(id, n, m, &lambda, &y)?;
        if lhs != rhs {
            return Ok(Some(
                Assignment::new().with(Var::Lambda, lambda).with(Var::Y, y),
            ));
        }
    }
    Ok(None)
}

/// `y` value and overall factor relating the two-parameter formula to each
/// single-parameter theorem: `target = factor * ThmS|_{y=value}`.
pub fn thm_s_specialization(
    target: IdentityId,
    n: usize,
    m: usize,
) -> Option<(Rational, Rational)> {
    let (ni, mi) = (n as i64, m as i64);
    match target {
        IdentityId::Thm1A => Some((rat(1, 1), rat(1, 1))),
        IdentityId::Thm1B => Some((rat(-1, 1), Rational::from(sign(ni)))),
        IdentityId::Thm2A => Some((rat(1, 2), two_pow(ni))),
        IdentityId::Thm2B => Some((rat(2, 1), Rational::from(sign(mi + ni)) * two_pow(-mi))),
        _ => None,
    }
}

/// Outcome of comparing a specialized parent identity with its child.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializationCheck {
    pub n: usize,
    pub m: usize,
    pub lhs_matches: bool,
    pub rhs_matches: bool,
    /// Specialized parent difference equals the child's difference.
    pub difference_matches: bool,
    pub child_difference_is_zero: bool,
}

impl SpecializationCheck {
    pub fn holds(&self) -> bool {
        self.lhs_matches
            && self.rhs_matches
            && self.difference_matches
            && self.child_difference_is_zero
    }
}

fn compare_sides(
    n: usize,
    m: usize,
    parent: (MultiPoly, MultiPoly),
    child: (MultiPoly, MultiPoly),
) -> SpecializationCheck {
    let parent_diff = &parent.0 - &parent.1;
    let child_diff = &child.0 - &child.1;
    SpecializationCheck {
        n,
        m,
        lhs_matches: parent.0 == child.0,
        rhs_matches: parent.1 == child.1,
        difference_matches: parent_diff == child_diff,
        child_difference_is_zero: child_diff.is_zero(),
    }
}

/// Substitutes the appropriate `y` into both sides of the two-parameter
/// formula, rescales, and compares with `target`'s sides.
pub fn check_thm_s_specialization(
    target: IdentityId,
    n: usize,
    m: usize,
) -> Result<SpecializationCheck> {
    let (y_value, factor) = thm_s_specialization(target, n, m)
        .ok_or_else(|| out_of_range(format!("{target} is not a specialization of thmS")))?;
    let (lhs, rhs) = symbolic_sides(IdentityId::ThmS, n, m)?;
    let special = |p: &MultiPoly| p.substitute_value(Var::Y, &y_value).scale(&factor);
    Ok(compare_sides(
        n,
        m,
        (special(&lhs), special(&rhs)),
        symbolic_sides(target, n, m)?,
    ))
}

/// Sets `λ = 0` in the parent theorem of `corollary` and compares sides.
pub fn check_corollary_specialization(
    corollary: IdentityId,
    n: usize,
    m: usize,
) -> Result<SpecializationCheck> {
    let parent = corollary
        .parent_theorem()
        .ok_or_else(|| out_of_range(format!("{corollary} has no parent theorem")))?;
    let (lhs, rhs) = symbolic_sides(parent, n, m)?;
    let at_zero = |p: &MultiPoly| p.substitute_value(Var::Lambda, &Rational::zero());
    Ok(compare_sides(
        n,
        m,
        (at_zero(&lhs), at_zero(&rhs)),
        symbolic_sides(corollary, n, m)?,
    ))
}
