//! Sparse polynomials over the rationals in the fixed variable set
//! `x, y, λ, z`.
//!
//! A [`MultiPoly`] stores only nonzero coefficients, keyed by [`Monomial`]
//! in graded-lexicographic order, so two polynomials are equal exactly when
//! their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// The ring indeterminates, ordered `X < Y < Lambda < Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Lambda,
    Z,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Lambda, Var::Z];

    fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self, ascii: bool) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Lambda if ascii => "L",
            Var::Lambda => "λ",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol(false))
    }
}

/// Exponent vector indexed by [`Var`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(x: u32, y: u32, lambda: u32, z: u32) -> Self {
        Monomial([x, y, lambda, z])
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut m = Monomial::ONE;
        m.0[v.index()] = e;
        m
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (e, f) in out.iter_mut().zip(other.0) {
            *e += f;
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> Monomial {
        let mut out = *self;
        out.0[v.index()] = 0;
        out
    }
}

/// Graded lexicographic: total degree first, then exponents of
/// `x, y, λ, z` in that order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Binding of variables to rational values for [`MultiPoly::eval`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment([Option<Rational>; 4]);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: Rational) -> Self {
        self.set(v, value);
        self
    }

    pub fn set(&mut self, v: Var, value: Rational) {
        self.0[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<&Rational> {
        self.0[v.index()].as_ref()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// `v^e` as a polynomial.
    pub fn var_pow(v: Var, e: u32) -> Self {
        Self::term(Rational::one(), Monomial::var_pow(v, e))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplies every term by the monomial `m`.
    pub fn shift(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.times(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest exponent of `v`, or `-1` for the zero polynomial.
    pub fn degree(&self, v: Var) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(m.exponent(v)))
            .max()
            .unwrap_or(-1)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(m.total_degree()))
            .max()
            .unwrap_or(-1)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Exact value at `point`. Every variable that occurs must be bound.
    pub fn eval(&self, point: &Assignment) -> Result<Rational> {
        for v in Var::ALL {
            if point.get(v).is_none() && self.contains_var(v) {
                return Err(Error::MissingVariable(v));
            }
        }
        let mut powers: [Vec<Rational>; 4] = Default::default();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for v in Var::ALL {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                let table = &mut powers[v.index()];
                if table.is_empty() {
                    table.push(Rational::one());
                }
                while table.len() <= e {
                    let next = table.last().unwrap() * point.get(v).unwrap();
                    table.push(next);
                }
                term *= &table[e];
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces `v` by the polynomial `q` everywhere.
    pub fn substitute(&self, v: Var, q: &MultiPoly) -> MultiPoly {
        // Group terms by their power of `v` so each power of `q` is built once.
        let mut by_power: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power
                .entry(m.exponent(v))
                .or_default()
                .add_term(m.without(v), c.clone());
        }
        let mut out = MultiPoly::zero();
        let mut q_pow = MultiPoly::one();
        let mut current = 0;
        for (e, rest) in by_power {
            while current < e {
                q_pow = &q_pow * q;
                current += 1;
            }
            out += &(&rest * &q_pow);
        }
        out
    }

    /// Substitutes a rational value for `v`.
    pub fn substitute_value(&self, v: Var, value: &Rational) -> MultiPoly {
        self.substitute(v, &MultiPoly::constant(value.clone()))
    }

    /// Canonical text with `λ` rendered as `L` when `ascii` is set.
    pub fn to_text(&self, ascii: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for v in Var::ALL {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(v.symbol(ascii).to_string()),
                    e => factors.push(format!("{}^{}", v.symbol(ascii), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(Var::Y)
    }
    fn lam() -> MultiPoly {
        MultiPoly::var(Var::Lambda)
    }
    fn z() -> MultiPoly {
        MultiPoly::var(Var::Z)
    }
    fn c(n: i64, d: i64) -> MultiPoly {
        MultiPoly::constant(rat(n, d))
    }

    #[test]
    fn constructors() {
        assert!(MultiPoly::constant(Rational::zero()).is_zero());
        assert_eq!(MultiPoly::constant(Rational::zero()).num_terms(), 0);
        assert_eq!(x().to_string(), "x");
        assert_eq!(c(3, 2).to_string(), "3/2");
    }

    #[test]
    fn ring_ops_examples() {
        assert_eq!(&(&x() + &lam()) + &(-lam()), x());
        let xy = &x() * &y();
        let lhs = &(&xy - &lam()) * &(&xy + &lam());
        assert_eq!(lhs, &xy.pow(2) - &lam().pow(2));
        assert_eq!(lhs.to_string(), "x^2*y^2 - λ^2");
        assert!((&xy - &lam()).scale(&Rational::zero()).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = &(&x() * &y()) - &lam();
        let pt = Assignment::new()
            .with(Var::X, rat(2, 1))
            .with(Var::Y, rat(3, 1))
            .with(Var::Lambda, rat(1, 1));
        assert_eq!(p.eval(&pt).unwrap(), rat(5, 1));
        assert_eq!(
            MultiPoly::zero().eval(&Assignment::new()).unwrap(),
            Rational::zero()
        );
        let err = p
            .eval(&Assignment::new().with(Var::X, rat(1, 1)))
            .unwrap_err();
        assert_eq!(err, Error::MissingVariable(Var::Y));
        assert!(err.to_string().contains('y'));
    }

    #[test]
    fn substitution_examples() {
        let q1 = &(&x() * &y()) - &lam();
        let minus_one_minus_z = &c(-1, 1) - &z();
        let step = q1.substitute(Var::Lambda, &minus_one_minus_z);
        assert_eq!(step, &(&(&x() * &y()) + &c(1, 1)) + &z());
        let reduced = step.substitute(Var::Y, &-z());
        // P_2 / x with P_2 = x(1+z) - x^2 z
        assert_eq!(reduced, &(&c(1, 1) + &z()) - &(&x() * &z()));
        let k = c(7, 3);
        assert_eq!(k.substitute(Var::X, &(&y() + &z())), k);
    }

    #[test]
    fn degrees() {
        let p = &(&x() * &y()).pow(2) - &lam().pow(2);
        assert_eq!(p.degree(Var::X), 2);
        assert_eq!(p.degree(Var::Z), 0);
        assert_eq!(MultiPoly::zero().degree(Var::Y), -1);
    }

    #[test]
    fn canonical_text() {
        let p = &(&(&c(-1, 2) * &lam()) + &(&x() * &y()).scale(&rat(3, 1))) + &c(-4, 1);
        assert_eq!(p.to_text(false), "3*x*y - 1/2*λ - 4");
        assert_eq!(p.to_text(true), "3*x*y - 1/2*L - 4");
        assert_eq!((-x()).to_string(), "-x");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!(c(-1, 1).to_string(), "-1");
        // degree 3 terms come before degree 2 regardless of variables
        let q = &z().pow(3) + &x().pow(2);
        assert_eq!(q.to_string(), "z^3 + x^2");
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let a = Monomial::new(1, 0, 0, 0);
        let b = Monomial::new(0, 1, 0, 0);
        let c2 = Monomial::new(0, 0, 0, 2);
        assert!(a > b);
        assert!(c2 > a);
        assert!(Monomial::new(0, 0, 1, 0) > Monomial::new(0, 0, 0, 1));
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (
                (0u32..=5, 0u32..=5, 0u32..=5, 0u32..=5),
                -20i64..20,
                1i64..6,
            ),
            0..=8,
        )
        .prop_map(|terms| {
            MultiPoly::from_terms(
                terms
                    .into_iter()
                    .map(|((a, b, c, d), n, den)| (Monomial::new(a, b, c, d), rat(n, den))),
            )
        })
    }

    fn arb_point() -> impl Strategy<Value = Assignment> {
        prop::array::uniform4((-9i64..9, 1i64..5)).prop_map(|vals| {
            let mut a = Assignment::new();
            for (v, (n, d)) in Var::ALL.into_iter().zip(vals) {
                a.set(v, rat(n, d));
            }
            a
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
        }

        #[test]
        fn eval_is_homomorphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
            let prod = (&a * &b).eval(&pt).unwrap();
            prop_assert_eq!(prod, a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
            let sum = (&a + &b).eval(&pt).unwrap();
            prop_assert_eq!(sum, a.eval(&pt).unwrap() + b.eval(&pt).unwrap());
        }

        #[test]
        fn substitute_identity(a in arb_poly(), vi in 0usize..4) {
            let v = Var::ALL[vi];
            prop_assert_eq!(a.substitute(v, &MultiPoly::var(v)), a);
        }

        #[test]
        fn substitute_commutes_with_eval(a in arb_poly(), q in arb_poly(), pt in arb_point(), vi in 0usize..4) {
            let v = Var::ALL[vi];
            let mut inner = pt.clone();
            inner.set(v, q.eval(&pt).unwrap());
            prop_assert_eq!(a.substitute(v, &q).eval(&pt).unwrap(), a.eval(&inner).unwrap());
        }

        #[test]
        fn no_zero_coefficients(a in arb_poly(), b in arb_poly()) {
            let p = &(&a * &b) - &a;
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
