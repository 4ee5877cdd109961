//! The polynomial sequences `Q_n(x, y, λ)` and `P_n(x, z)`, each computed by
//! several independent routes.
//!
//! `Q_n` is defined by the recurrence
//!
//! ```text
//! Q_0 = 1,   Q_n = (-1)^n C(λ, n) - x Σ_{k=1}^{n} (-1)^k C(y, k) Q_{n-k}
//! ```
//!
//! and can also be read off as the `τ^n` coefficient of
//! `(1-τ)^λ / (1 - x + x(1-τ)^y)`, or from finite double and triple sums.
//! `P_n` satisfies its own recurrence starting from `P_1 = x` and has a
//! closed double-sum form; substituting `λ = -1-z`, `y = -z` turns `Q_n`
//! into `P_{n+1}/x`.

use std::fmt;
use std::str::FromStr;

use crate::combinatorics::{binom_poly, binomial, factorial, s1, s2, sign};
use crate::error::{out_of_range, Error, Result};
use crate::exact::{rat, Rational};
use crate::poly::{Assignment, Monomial, MultiPoly, Var};
use crate::series::q_generating_series;

/// The independent ways of computing `Q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceRoute {
    Recurrence,
    DoubleSum,
    TripleSum,
    Series,
}

impl SequenceRoute {
    pub const ALL: [SequenceRoute; 4] = [
        SequenceRoute::Recurrence,
        SequenceRoute::DoubleSum,
        SequenceRoute::TripleSum,
        SequenceRoute::Series,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceRoute::Recurrence => "recurrence",
            SequenceRoute::DoubleSum => "double-sum",
            SequenceRoute::TripleSum => "triple-sum",
            SequenceRoute::Series => "series",
        }
    }
}

impl fmt::Display for SequenceRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceRoute::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| out_of_range(format!("unknown route {s:?}")))
    }
}

/// Memoized recurrence tables for `Q_n` and `P_n`.
///
/// Not shared across threads; clone one per worker.
#[derive(Debug, Clone)]
pub struct Sequences {
    q: Vec<MultiPoly>,
    /// `p[i]` holds `P_{i+1}`.
    p: Vec<MultiPoly>,
}

impl Default for Sequences {
    fn default() -> Self {
        Self::new()
    }
}

impl Sequences {
    pub fn new() -> Self {
        Sequences {
            q: vec![MultiPoly::one()],
            p: vec![MultiPoly::var(Var::X)],
        }
    }

    pub fn q_recurrence(&mut self, n: usize) -> MultiPoly {
        let x = MultiPoly::var(Var::X);
        let y = MultiPoly::var(Var::Y);
        let lam = MultiPoly::var(Var::Lambda);
        while self.q.len() <= n {
            let n = self.q.len();
            let mut acc = binom_poly(&lam, n).scale(&Rational::from(sign(n as i64)));
            let mut inner = MultiPoly::zero();
            for k in 1..=n {
                let c = binom_poly(&y, k).scale(&Rational::from(sign(k as i64)));
                inner += &(&c * &self.q[n - k]);
            }
            acc -= &(&x * &inner);
            self.q.push(acc);
        }
        self.q[n].clone()
    }

    /// `P_n` for `n >= 1`.
    pub fn p_recurrence(&mut self, n: usize) -> Result<MultiPoly> {
        if n == 0 {
            return Err(out_of_range("P_n is defined for n >= 1"));
        }
        let x = MultiPoly::var(Var::X);
        let z = MultiPoly::var(Var::Z);
        while self.p.len() < n {
            // next index is P_{k+1} with k = p.len()
            let k = self.p.len();
            let shifted = |c: usize| &z + &MultiPoly::constant(Rational::from(c as i64));
            let mut acc = binom_poly(&shifted(k), k);
            for m in 1..=k {
                let c = binom_poly(&shifted(k - m), k - m + 1);
                acc -= &(&c * &self.p[m - 1]);
            }
            self.p.push(&x * &acc);
        }
        Ok(self.p[n - 1].clone())
    }

    pub fn q(&mut self, n: usize, route: SequenceRoute) -> MultiPoly {
        match route {
            SequenceRoute::Recurrence => self.q_recurrence(n),
            SequenceRoute::DoubleSum => q_double_sum(n),
            SequenceRoute::TripleSum => q_triple_sum(n),
            SequenceRoute::Series => q_from_series(n),
        }
    }

    /// Whether `Q_n` under `λ ← -1-z`, `y ← -z`, times `x`, is `P_{n+1}`.
    pub fn q_reduces_to_p(&mut self, n: usize) -> bool {
        let q = self.q_recurrence(n);
        let p = self.p_recurrence(n + 1).expect("n + 1 >= 1");
        &reduce_q_to_p_variables(&q) * &MultiPoly::var(Var::X) == p
    }
}

/// Applies `λ ← -1-z` followed by `y ← -z`.
pub fn reduce_q_to_p_variables(q: &MultiPoly) -> MultiPoly {
    let z = MultiPoly::var(Var::Z);
    let lam_image = &MultiPoly::constant(rat(-1, 1)) - &z;
    q.substitute(Var::Lambda, &lam_image)
        .substitute(Var::Y, &-&z)
}

pub fn q_recurrence(n: usize) -> MultiPoly {
    Sequences::new().q_recurrence(n)
}

pub fn p_recurrence(n: usize) -> Result<MultiPoly> {
    Sequences::new().p_recurrence(n)
}

pub fn q_reduces_to_p(n: usize) -> bool {
    Sequences::new().q_reduces_to_p(n)
}

/// `Σ_{m=0}^n Σ_{k=0}^m (-1)^{n+k} C(m,k) C(λ+ky, n) x^m`.
pub fn q_double_sum(n: usize) -> MultiPoly {
    let y = MultiPoly::var(Var::Y);
    let lam = MultiPoly::var(Var::Lambda);
    // C(λ+ky, n) depends only on k.
    let binoms: Vec<MultiPoly> = (0..=n)
        .map(|k| binom_poly(&(&lam + &y.scale(&Rational::from(k as i64))), n))
        .collect();
    let mut out = MultiPoly::zero();
    for m in 0..=n {
        let mut inner = MultiPoly::zero();
        for (k, b) in binoms.iter().enumerate().take(m + 1) {
            let c = Rational::from(binomial(m, k)) * Rational::from(sign((n + k) as i64));
            inner += &b.scale(&c);
        }
        out += &inner.shift(&Monomial::var_pow(Var::X, m as u32));
    }
    out
}

/// `Σ_{m=0}^n Σ_{i=m}^n Σ_{j=m}^i (-1)^{m-i} (m!/n!) [n,i] C(i,j) {j,m} x^m λ^{i-j} y^j`.
pub fn q_triple_sum(n: usize) -> MultiPoly {
    let n_fact = Rational::from(factorial(n));
    let mut out = MultiPoly::zero();
    for m in 0..=n {
        let m_ratio = Rational::from(factorial(m))
            .checked_div(&n_fact)
            .expect("n! is nonzero");
        for i in m..=n {
            let outer = Rational::from(s1(n, i)) * Rational::from(sign(m as i64 - i as i64));
            if outer.is_zero() {
                continue;
            }
            for j in m..=i {
                let c = &outer * Rational::from(binomial(i, j) * s2(j, m)) * &m_ratio;
                out.add_term(Monomial::new(m as u32, j as u32, (i - j) as u32, 0), c);
            }
        }
    }
    out
}

/// Coefficient `n` of the truncated generating function.
pub fn q_from_series(n: usize) -> MultiPoly {
    q_generating_series(n).into_coeffs().swap_remove(n)
}

/// `Σ_{k=1}^n Σ_{j=1}^k (-1)^{j-1} (j-1)!/(n-1)! [n,k] {k,j} x^j z^{k-1}`.
pub fn p_double_sum(n: usize) -> Result<MultiPoly> {
    if n == 0 {
        return Err(out_of_range("P_n is defined for n >= 1"));
    }
    let denom = Rational::from(factorial(n - 1));
    let mut out = MultiPoly::zero();
    for k in 1..=n {
        let outer = Rational::from(s1(n, k));
        for j in 1..=k {
            let c = Rational::from(factorial(j - 1) * s2(k, j))
                * &outer
                * Rational::from(sign(j as i64 - 1));
            let c = c.checked_div(&denom).expect("(n-1)! is nonzero");
            out.add_term(Monomial::new(j as u32, 0, 0, (k - 1) as u32), c);
        }
    }
    Ok(out)
}

/// Outcome of the numeric infinite-sum evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSum {
    pub value: f64,
    /// Number of summands added, including the three small trailing ones.
    pub terms: usize,
}

/// Number of consecutive negligible terms required before stopping.
const TAIL_RUN: usize = 3;

/// Evaluates `Σ_{k>=0} (-1)^{n+k} C(λ+ky, n) x^k/(1-x)^{k+1}` in binary64.
///
/// Requires `x < 1/2`, where `|x/(1-x)| < 1`. Summation stops once
/// [`TAIL_RUN`] consecutive, non-increasing terms are each below
/// `rel_tol * max(1, |partial sum|)`. The test is only armed past the
/// largest real `k` at which `C(λ+ky, n)` vanishes; before that point the
/// polynomial factor can produce runs of exact zeros.
pub fn q_single_sum_numeric(
    n: usize,
    x: &Rational,
    y: &Rational,
    lambda: &Rational,
    rel_tol: f64,
    max_terms: usize,
) -> Result<SingleSum> {
    if *x >= rat(1, 2) {
        return Err(Error::DivergentRegime(x.to_string()));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(out_of_range("rel_tol must be positive"));
    }
    if max_terms == 0 {
        return Err(out_of_range("max_terms must be at least 1"));
    }
    let one_minus_x = Rational::one() - x;
    let prefactor = one_minus_x.recip()?.to_f64()?;
    // (-1)^k x^k/(1-x)^k = (-ratio)^k
    let ratio = (-x.checked_div(&one_minus_x)?).to_f64()?;

    let arm_from = last_binomial_root(n, y, lambda);

    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    let mut geometric = prefactor * sign(n as i64) as f64;
    let mut prev_mag = f64::INFINITY;
    let mut run = 0usize;
    for k in 0..max_terms {
        let upper = (lambda + y * Rational::from(k as i64)).to_f64()?;
        let term = binom_f64(upper, n) * geometric;

        // Neumaier compensated summation.
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;

        let mag = term.abs();
        let partial = sum + compensation;
        if (k as f64) > arm_from && mag < rel_tol * partial.abs().max(1.0) && mag <= prev_mag {
            run += 1;
            if run == TAIL_RUN {
                return Ok(SingleSum {
                    value: partial,
                    terms: k + 1,
                });
            }
        } else {
            run = 0;
        }
        prev_mag = mag;
        geometric *= ratio;
    }
    Err(Error::NotConverged {
        partial_sum: sum + compensation,
        terms: max_terms,
    })
}

/// Largest `k` solving `λ + k y = i` for some `i` in `0..n`, or `-1` if none.
fn last_binomial_root(n: usize, y: &Rational, lambda: &Rational) -> f64 {
    if y.is_zero() || n == 0 {
        return -1.0;
    }
    (0..n)
        .filter_map(|i| {
            (Rational::from(i as i64) - lambda)
                .checked_div(y)
                .ok()
                .and_then(|k| k.to_f64().ok())
        })
        .fold(-1.0, f64::max)
}

fn binom_f64(upper: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (upper - i as f64) / (i + 1) as f64)
}

/// Exact `Q_n` at a rational point, via the recurrence.
pub fn q_exact_at(n: usize, x: &Rational, y: &Rational, lambda: &Rational) -> Rational {
    let point = Assignment::new()
        .with(Var::X, x.clone())
        .with(Var::Y, y.clone())
        .with(Var::Lambda, lambda.clone());
    q_recurrence(n)
        .eval(&point)
        .expect("Q_n only involves x, y, λ")
}
