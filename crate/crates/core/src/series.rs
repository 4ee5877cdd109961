//! Truncated power series in `τ` with polynomial coefficients.

use std::fmt;

use crate::combinatorics::binom_poly;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::poly::{MultiPoly, Var};

/// Order used when a caller does not ask for a specific truncation.
pub const DEFAULT_ORDER: usize = 16;

/// Coefficients of `τ^0 … τ^order`. The order is fixed at construction and
/// binary operations refuse mismatched orders.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<MultiPoly>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MultiPoly::one(), order)
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from explicit coefficients; missing ones are zero and
    /// extra ones are dropped.
    pub fn from_coeffs(mut coeffs: Vec<MultiPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        PowerSeries { coeffs }
    }

    /// `(1 - τ)^alpha`, whose `τ^n` coefficient is `(-1)^n C(alpha, n)`.
    pub fn binomial(alpha: &MultiPoly, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|n| {
                let c = binom_poly(alpha, n);
                if n % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Option<&MultiPoly> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<MultiPoly> {
        self.coeffs
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: order,
            });
        }
        Ok(PowerSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_order(&self, other: &PowerSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<Self> {
        self.check_order(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<Self> {
        self.check_order(other)?;
        Ok(PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn scale(&self, p: &MultiPoly) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &PowerSeries) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![MultiPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(PowerSeries { coeffs })
    }

    /// Multiplicative inverse of a series with constant term exactly 1.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let n = self.order();
        let mut inv: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        inv.push(MultiPoly::one());
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc -= &(&self.coeffs[j] * &inv[k - j]);
                }
            }
            inv.push(acc);
        }
        Ok(PowerSeries { coeffs: inv })
    }

    pub fn substitute_value(&self, v: Var, value: &Rational) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.substitute_value(v, value))
                .collect(),
        }
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_string()))
            .finish()
    }
}

/// The denominator `1 - x + x (1 - τ)^y` of the generating function.
pub fn q_denominator(order: usize) -> PowerSeries {
    let x = MultiPoly::var(Var::X);
    let base = PowerSeries::constant(&MultiPoly::one() - &x, order);
    let tail = PowerSeries::binomial(&MultiPoly::var(Var::Y), order).scale(&x);
    base.add(&tail).expect("same order")
}

/// `Q(τ) = (1 - τ)^λ / (1 - x + x (1 - τ)^y)` truncated at `order`.
pub fn q_generating_series(order: usize) -> PowerSeries {
    let numerator = PowerSeries::binomial(&MultiPoly::var(Var::Lambda), order);
    let inv = q_denominator(order)
        .inverse()
        .expect("denominator has constant term 1");
    numerator.mul(&inv).expect("same order")
}
