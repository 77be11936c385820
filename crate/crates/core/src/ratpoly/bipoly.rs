//! Sparse bivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::{rat_to_f64, AlgebraError, Rational, VarPair};

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
///
/// Ordered graded-lexicographically: by total degree, then by the first
/// exponent, then by the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub u32, pub u32);

impl Exponent {
    /// Total degree `i + j`.
    pub fn degree(self) -> u32 {
        self.0 + self.1
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.0.cmp(&other.0))
            .then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bivariate polynomial over the rationals.
///
/// Invariants: no stored coefficient is zero, and terms are kept in
/// graded-lexicographic order, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    vars: VarPair,
    terms: BTreeMap<Exponent, Rational>,
}

/// Arithmetic operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic on two polynomials written in the same variable pair.
pub fn poly_arith(a: &BiPoly, b: &BiPoly, op: PolyOp) -> Result<BiPoly, AlgebraError> {
    a.check_vars(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl BiPoly {
    /// The zero polynomial.
    pub fn zero(vars: VarPair) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `c`.
    pub fn constant(vars: VarPair, c: Rational) -> Self {
        Self::monomial(vars, 0, 0, c)
    }

    /// The constant polynomial one.
    pub fn one(vars: VarPair) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The monomial `c x^i y^j`.
    pub fn monomial(vars: VarPair, i: u32, j: u32, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Exponent(i, j), c);
        p
    }

    /// The coordinate polynomial for variable `index` (0 or 1).
    pub fn var(vars: VarPair, index: usize) -> Self {
        match index {
            0 => Self::monomial(vars, 1, 0, Rational::one()),
            _ => Self::monomial(vars, 0, 1, Rational::one()),
        }
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples, merging duplicates.
    pub fn from_terms<I>(vars: VarPair, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (i, j, c) in terms {
            p.add_term(Exponent(i, j), c);
        }
        p
    }

    /// Variable pair this polynomial is written in.
    pub fn vars(&self) -> VarPair {
        self.vars
    }

    /// Returns the same coefficients reinterpreted in another variable pair.
    pub fn relabel(&self, vars: VarPair) -> Self {
        Self {
            vars,
            terms: self.terms.clone(),
        }
    }

    /// Iterates over `(exponent, coefficient)` in graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    /// Number of stored (non-zero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Returns `true` for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&Exponent(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; zero for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| if index == 0 { e.0 } else { e.1 })
            .max()
            .unwrap_or(0)
    }

    /// Leading term in graded-lexicographic order.
    pub fn leading(&self) -> Option<(Exponent, &Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub(crate) fn check_vars(&self, other: &BiPoly) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VarMismatch {
                left: self.vars,
                right: other.vars,
            })
        }
    }

    fn assert_vars(&self, other: &BiPoly) {
        if let Err(e) = self.check_vars(other) {
            panic!("{e}");
        }
    }

    /// Adds `c x^e` in place, dropping the entry if it cancels.
    pub(crate) fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Self {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        Self {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (Exponent(e.0 + i, e.1 + j), v.clone()))
                .collect(),
        }
    }

    /// Raises the polynomial to a non-negative integer power.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative of the given order with respect to variable `index`.
    pub fn diff(&self, index: usize, order: u32) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let k = if index == 0 { e.0 } else { e.1 };
            if k < order {
                continue;
            }
            let falling: u64 = (0..order).map(|m| u64::from(k - m)).product();
            let ne = if index == 0 {
                Exponent(e.0 - order, e.1)
            } else {
                Exponent(e.0, e.1 - order)
            };
            out.add_term(ne, c * Rational::from_integer(falling.into()));
        }
        out
    }

    /// Partial derivative with respect to a named variable.
    pub fn diff_named(&self, name: &str, order: u32) -> Result<Self, AlgebraError> {
        let index = self.vars.index_of(name)?;
        Ok(self.diff(index, order))
    }

    /// Mixed partial `∂^a_x ∂^b_y`.
    pub fn diff2(&self, a: u32, b: u32) -> Self {
        self.diff(0, a).diff(1, b)
    }

    /// Composes the polynomial with `x ↦ map[0]`, `y ↦ map[1]`.
    ///
    /// The result is written in the variable pair of the substitution polynomials.
    pub fn substitute(&self, map: &[BiPoly; 2]) -> Result<Self, AlgebraError> {
        map[0].check_vars(&map[1])?;
        let target = map[0].vars;
        let mut px: Vec<BiPoly> = vec![BiPoly::one(target)];
        let mut py: Vec<BiPoly> = vec![BiPoly::one(target)];
        let mut out = BiPoly::zero(target);
        for (e, c) in &self.terms {
            while px.len() <= e.0 as usize {
                let next = px.last().map(|p| p * &map[0]).unwrap_or_else(|| BiPoly::one(target));
                px.push(next);
            }
            while py.len() <= e.1 as usize {
                let next = py.last().map(|p| p * &map[1]).unwrap_or_else(|| BiPoly::one(target));
                py.push(next);
            }
            let term = (&px[e.0 as usize] * &py[e.1 as usize]).scale(c);
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational; 2]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * num::pow(point[0].clone(), e.0 as usize) * num::pow(point[1].clone(), e.1 as usize);
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * x.powi(e.0 as i32) * y.powi(e.1 as i32))
            .sum()
    }

    /// Precomputes floating-point coefficients for repeated evaluation.
    pub fn compile(&self) -> PolyEval {
        PolyEval {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.0 as i32, e.1 as i32, rat_to_f64(c)))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor` when the division leaves no remainder.
    ///
    /// Uses leading-term reduction in graded-lexicographic order, which yields
    /// a zero remainder exactly when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &BiPoly) -> Result<Self, AlgebraError> {
        self.check_vars(divisor)?;
        let (lead_e, lead_c) = match divisor.leading() {
            Some((e, c)) => (e, c.clone()),
            None => return Err(AlgebraError::NotDivisible),
        };
        let mut rem = self.clone();
        let mut quot = BiPoly::zero(self.vars);
        while let Some((e, c)) = rem.leading() {
            if e.0 < lead_e.0 || e.1 < lead_e.1 {
                return Err(AlgebraError::NotDivisible);
            }
            let factor = c / &lead_c;
            let (di, dj) = (e.0 - lead_e.0, e.1 - lead_e.1);
            quot.add_term(Exponent(di, dj), factor.clone());
            rem = &rem - &divisor.shift(di, dj).scale(&factor);
        }
        Ok(quot)
    }

    /// Returns `true` when every exponent of variable `index` is odd (`odd = true`)
    /// or every one is even (`odd = false`).
    pub fn has_parity(&self, index: usize, odd: bool) -> bool {
        self.terms.keys().all(|e| {
            let k = if index == 0 { e.0 } else { e.1 };
            (k % 2 == 1) == odd
        })
    }

    /// Sum of all coefficients, i.e. the value at `(1, 1)`.
    pub fn value_at_ones(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }
}

/// Floating-point evaluator of a [`BiPoly`].
#[derive(Clone, Debug)]
pub struct PolyEval {
    terms: Vec<(i32, i32, f64)>,
}

impl PolyEval {
    /// Evaluates at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * x.powi(i) * y.powi(j))
            .sum()
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.assert_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.assert_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.assert_vars(rhs);
        let mut out = BiPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(Exponent(ea.0 + eb.0, ea.1 + eb.1), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: &BiPoly) -> BiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl fmt::Display for BiPoly {
    /// Human-readable form, highest graded-lex term first, e.g. `1/2*xi*sigma - 3*sigma`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (e.0 == 0 && e.1 == 0) {
                factors.push(mag.to_string());
            }
            for (k, name) in [e.0, e.1].iter().zip(names) {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    k => factors.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, parse_poly, rat};

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    #[test]
    fn monomial_product() {
        let p = xs("xi*sigma");
        assert_eq!(&p * &p, xs("xi^2*sigma^2"));
    }

    #[test]
    fn expansion_of_product() {
        let p = &xs("1 - xi^2") * &xs("1 - sigma^2");
        assert_eq!(p, xs("1 - xi^2 - sigma^2 + xi^2*sigma^2"));
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = BiPoly::var(VarPair::XiSigma, 0);
        let b = BiPoly::var(VarPair::UV, 0);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(AlgebraError::VarMismatch { .. })
        ));
    }

    #[test]
    fn second_derivatives() {
        assert_eq!(xs("xi^2").diff(0, 2), BiPoly::constant(VarPair::XiSigma, int(2)));
        assert_eq!(xs("1/2*(1-xi^2)*sigma^2").diff(1, 2), xs("1 - xi^2"));
        assert!(xs("xi").diff_named("w", 1).is_err());
    }

    #[test]
    fn mixed_partial_of_cubic_density() {
        let f = xs("xi*sigma*(1-xi^2)*(1-sigma^2)");
        let hand = xs("(1-3*xi^2)*(1-3*sigma^2)");
        assert_eq!(f.diff2(1, 1), hand);
        // Independent check by evaluation at rational points.
        for (a, b) in [(rat(1, 3), rat(2, 7)), (rat(-5, 4), rat(3, 2)), (int(2), rat(-1, 9))] {
            let expect = (int(1) - int(3) * &a * &a) * (int(1) - int(3) * &b * &b);
            assert_eq!(f.diff2(1, 1).eval(&[a, b]), expect);
        }
    }

    #[test]
    fn exact_division() {
        let q = xs("(1-xi^2)*(1-sigma^2)");
        let p = &q * &xs("5*xi^2*sigma^2 - sigma^2 - xi^2 + 1");
        assert_eq!(p.div_exact(&q).unwrap(), xs("5*xi^2*sigma^2 - sigma^2 - xi^2 + 1"));
        assert_eq!(xs("xi + 1").div_exact(&xs("xi")), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let p = xs("-1/2*xi^3*sigma + 3*sigma - 7/5");
        assert_eq!(xs(&p.to_string()), p);
    }
}
