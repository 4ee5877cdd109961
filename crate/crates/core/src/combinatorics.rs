//! Integer combinatorial kernels: Stirling numbers of both kinds, factorials,
//! generalized and symbolic binomial coefficients, factorial polynomials and
//! Lah numbers.
//!
//! First-kind Stirling numbers are unsigned throughout; callers apply the
//! `(-1)^{n-k}` signs themselves.

use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{out_of_range, Error, Result};
use crate::exact::{BigInt, Rational};
use crate::poly::{MultiPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StirlingKind {
    /// Unsigned numbers of the first kind (permutations by cycle count).
    FirstUnsigned,
    /// Set partitions by block count.
    Second,
}

/// A memoized Stirling triangle, grown on demand.
///
/// Lookups of already-built rows only take a read lock, so one table can be
/// shared by all workers of a parallel sweep.
#[derive(Debug)]
pub struct StirlingTable {
    kind: StirlingKind,
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind) -> Self {
        StirlingTable {
            kind,
            rows: RwLock::new(vec![vec![BigInt::one()]]),
        }
    }

    pub fn with_rows(kind: StirlingKind, n_max: usize) -> Self {
        let t = Self::new(kind);
        t.ensure(n_max);
        t
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    /// Number of rows currently built.
    pub fn rows_built(&self) -> usize {
        self.rows.read().unwrap().len()
    }

    /// Builds rows up to and including `n_max`.
    pub fn ensure(&self, n_max: usize) {
        if self.rows.read().unwrap().len() > n_max {
            return;
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= n_max {
            let n = rows.len() - 1;
            let prev = &rows[n];
            let mut next = vec![BigInt::zero(); n + 2];
            for k in 1..=n + 1 {
                let diag = &prev[k - 1];
                let same = prev.get(k).map(|s| {
                    let w = match self.kind {
                        StirlingKind::FirstUnsigned => n,
                        StirlingKind::Second => k,
                    };
                    s * BigInt::from(w)
                });
                next[k] = match same {
                    Some(s) => diag + s,
                    None => diag.clone(),
                };
            }
            rows.push(next);
        }
    }

    /// Entry `(n, k)`; zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        self.ensure(n);
        self.rows.read().unwrap()[n][k].clone()
    }

    pub fn row(&self, n: usize) -> Vec<BigInt> {
        self.ensure(n);
        self.rows.read().unwrap()[n].clone()
    }
}

fn first_table() -> &'static StirlingTable {
    static T: OnceLock<StirlingTable> = OnceLock::new();
    T.get_or_init(|| StirlingTable::new(StirlingKind::FirstUnsigned))
}

fn second_table() -> &'static StirlingTable {
    static T: OnceLock<StirlingTable> = OnceLock::new();
    T.get_or_init(|| StirlingTable::new(StirlingKind::Second))
}

/// Unchecked lookup into the shared first-kind table (zero outside the triangle).
pub(crate) fn s1(n: usize, k: usize) -> BigInt {
    first_table().get(n, k)
}

/// Unchecked lookup into the shared second-kind table.
pub(crate) fn s2(n: usize, k: usize) -> BigInt {
    second_table().get(n, k)
}

fn check_triangle(n: i64, k: i64) -> Result<(usize, usize)> {
    if n < 0 || k < 0 || k > n {
        return Err(out_of_range(format!(
            "Stirling index ({n}, {k}) requires 0 <= k <= n"
        )));
    }
    Ok((n as usize, k as usize))
}

/// Unsigned Stirling number of the first kind.
pub fn stirling1(n: i64, k: i64) -> Result<BigInt> {
    let (n, k) = check_triangle(n, k)?;
    Ok(s1(n, k))
}

/// Stirling number of the second kind from the recurrence table.
pub fn stirling2(n: i64, k: i64) -> Result<BigInt> {
    let (n, k) = check_triangle(n, k)?;
    Ok(s2(n, k))
}

/// Stirling number of the second kind from the alternating sum
/// `(1/k!) Σ_j (-1)^{k-j} C(k, j) j^n`, independent of the table.
pub fn stirling2_explicit(n: i64, k: i64) -> Result<BigInt> {
    let (n, k) = check_triangle(n, k)?;
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term = binomial(k, j) * num_traits::pow(BigInt::from(j), n);
        if (k - j) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let kf = factorial(k);
    let (q, r) = sum.div_rem(&kf);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "explicit Stirling sum for ({n}, {k}) not divisible by {k}!"
        )));
    }
    Ok(q)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Ordinary binomial coefficient for `0 <= k`, `0 <= n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `n (n-1) ... (n-k+1) / k!` for any integer `n`.
pub fn binom_int(n: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(out_of_range(format!(
            "binomial lower index {k} must be nonnegative"
        )));
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        // Each prefix product divided by (i+1)! is itself a binomial, so this
        // division is exact.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// `C(alpha, k)` for a rational upper argument.
pub fn binom_rational(alpha: &Rational, k: usize) -> Rational {
    let mut num = Rational::one();
    for i in 0..k {
        num *= alpha - Rational::from(i as i64);
    }
    let kf = Rational::from(factorial(k));
    num.checked_div(&kf).expect("k! is nonzero")
}

/// `C(alpha, k)` for a polynomial upper argument, expanded as
/// `alpha (alpha-1) ... (alpha-k+1) / k!`.
pub fn binom_poly(alpha: &MultiPoly, k: usize) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for i in 0..k {
        let factor = alpha - &MultiPoly::constant(Rational::from(i as i64));
        acc = &acc * &factor;
    }
    let inv = Rational::from(factorial(k)).recip().expect("k! is nonzero");
    acc.scale(&inv)
}

/// Falling factorial `x (x-1) ... (x-n+1)` as a polynomial in `x`.
pub fn falling_poly(n: usize) -> MultiPoly {
    factorial_poly(n, -1)
}

/// Rising factorial `x (x+1) ... (x+n-1)` as a polynomial in `x`.
pub fn rising_poly(n: usize) -> MultiPoly {
    factorial_poly(n, 1)
}

fn factorial_poly(n: usize, step: i64) -> MultiPoly {
    let x = MultiPoly::var(Var::X);
    (0..n as i64).fold(MultiPoly::one(), |acc, i| {
        &acc * &(&x + &MultiPoly::constant(Rational::from(step * i)))
    })
}

/// Lah number `(n!/m!) C(n-1, m-1)` for `1 <= m <= n`.
pub fn lah(n: i64, m: i64) -> Result<BigInt> {
    if m < 1 || m > n {
        return Err(out_of_range(format!(
            "Lah number ({n}, {m}) requires 1 <= m <= n"
        )));
    }
    let (n, m) = (n as usize, m as usize);
    Ok(factorial(n) / factorial(m) * binomial(n - 1, m - 1))
}

/// `(-1)^e` as a sign multiplier.
pub(crate) fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
