//! Expressions over a single generator polynomial `g`:
//! `Σ c_{a,k}(x, y) · g^{a/2} · (ln g)^k` with polynomial coefficients,
//! integer `a` (so half-integer powers are allowed) and `k ≥ 0`.
//!
//! Radical densities use `g = v² − 4u` (or `ξ² + σ² − 1`) with odd `a`;
//! log-bearing densities use `g = u` with `k > 0`.
//!
//! Zero testing is exact: when `g` is not a perfect square, `1`, `√g` and the
//! powers of `ln g` are linearly independent over rational functions, so an
//! expression vanishes iff, for every parity class of `a` and every `k`, the
//! polynomial obtained by clearing powers of `g` vanishes.

use std::collections::BTreeMap;
use std::fmt;

use num::One;

use super::{rat_sqrt, AlgebraError, BiPoly, Rational, VarPair};

/// Polynomial combination of `g^{a/2} (ln g)^k` terms.
#[derive(Clone, Debug)]
pub struct GenExpr {
    generator: BiPoly,
    /// `(a, k) ↦ coefficient` of `g^{a/2} (ln g)^k`.
    terms: BTreeMap<(i32, u32), BiPoly>,
}

impl GenExpr {
    /// The zero expression over generator `g`.
    pub fn zero(generator: BiPoly) -> Self {
        Self {
            generator,
            terms: BTreeMap::new(),
        }
    }

    /// A polynomial viewed as an expression over `g`.
    pub fn from_poly(p: BiPoly, generator: BiPoly) -> Self {
        Self::term(p, 0, 0, generator)
    }

    /// The single term `p · g^{half_power/2} · (ln g)^log_power`.
    pub fn term(p: BiPoly, half_power: i32, log_power: u32, generator: BiPoly) -> Self {
        let mut e = Self::zero(generator);
        e.add_term(half_power, log_power, p);
        e
    }

    /// The generator polynomial `g`.
    pub fn generator(&self) -> &BiPoly {
        &self.generator
    }

    /// Variable pair of the expression.
    pub fn vars(&self) -> VarPair {
        self.generator.vars()
    }

    /// Iterates over `((a, k), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(i32, u32), &BiPoly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, half_power: i32, log_power: u32, p: BiPoly) {
        if p.is_zero() {
            return;
        }
        let key = (half_power, log_power);
        let merged = match self.terms.remove(&key) {
            Some(existing) => &existing + &p,
            None => p,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    fn assert_same_generator(&self, other: &Self) {
        assert_eq!(
            self.generator, other.generator,
            "expressions over different generators cannot be combined"
        );
    }

    /// Sum of two expressions over the same generator.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_generator(other);
        let mut out = self.clone();
        for ((a, k), p) in &other.terms {
            out.add_term(*a, *k, p.clone());
        }
        out
    }

    /// Difference of two expressions over the same generator.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Multiplication by a rational constant.
    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.generator.clone());
        for ((a, k), p) in &self.terms {
            out.add_term(*a, *k, p.scale(c));
        }
        out
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(&self, q: &BiPoly) -> Self {
        let mut out = Self::zero(self.generator.clone());
        for ((a, k), p) in &self.terms {
            out.add_term(*a, *k, p * q);
        }
        out
    }

    /// Product of two expressions over the same generator.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_generator(other);
        let mut out = Self::zero(self.generator.clone());
        for ((a, k), p) in &self.terms {
            for ((b, l), q) in &other.terms {
                out.add_term(a + b, k + l, p * q);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `index`.
    ///
    /// `∂(p g^{a/2} L^k) = p' g^{a/2} L^k + (a/2) p g' g^{a/2-1} L^k + k p g' g^{a/2-1} L^{k-1}`
    /// with `L = ln g`.
    pub fn diff(&self, index: usize) -> Self {
        let dg = self.generator.diff(index, 1);
        let mut out = Self::zero(self.generator.clone());
        for ((a, k), p) in &self.terms {
            out.add_term(*a, *k, p.diff(index, 1));
            if *a != 0 {
                let c = Rational::new((*a).into(), 2.into());
                out.add_term(a - 2, *k, (p * &dg).scale(&c));
            }
            if *k > 0 {
                out.add_term(a - 2, k - 1, (p * &dg).scale(&Rational::from_integer((*k).into())));
            }
        }
        out
    }

    /// Repeated partial derivative.
    pub fn diff_n(&self, index: usize, order: u32) -> Self {
        (0..order).fold(self.clone(), |e, _| e.diff(index))
    }

    /// Canonical form: within each class (parity of `a`, `k`) all terms are
    /// collected over the smallest power of `g`, and factors of `g` are then
    /// pulled out of the collected coefficient.
    pub fn normalize(&self) -> Self {
        let mut classes: BTreeMap<(bool, u32), Vec<(i32, &BiPoly)>> = BTreeMap::new();
        for ((a, k), p) in &self.terms {
            classes.entry((a.rem_euclid(2) == 1, *k)).or_default().push((*a, p));
        }
        let mut out = Self::zero(self.generator.clone());
        for ((_, k), members) in classes {
            let amin = members.iter().map(|m| m.0).min().unwrap_or(0);
            let mut collected = BiPoly::zero(self.vars());
            for (a, p) in members {
                let lift = self.generator.pow(((a - amin) / 2) as u32);
                collected = &collected + &(p * &lift);
            }
            let mut a = amin;
            if !collected.is_zero() && self.generator.degree() > 0 {
                while let Ok(q) = collected.div_exact(&self.generator) {
                    collected = q;
                    a += 2;
                }
            }
            out.add_term(a, k, collected);
        }
        out
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.normalize().terms.is_empty()
    }

    /// Rewrites the expression over `new_generator`, given `g = factor · new_generator`.
    ///
    /// Requires a perfect-square `factor` (so half powers stay rational) and no
    /// logarithm terms (which would pick up the constant `ln factor`).
    pub fn with_generator(&self, new_generator: BiPoly, factor: &Rational) -> Result<Self, AlgebraError> {
        if new_generator.scale(factor) != self.generator {
            return Err(AlgebraError::UnsupportedSubstitution(
                "generator is not the stated multiple of the new generator",
            ));
        }
        let root = rat_sqrt(factor).ok_or_else(|| AlgebraError::NotPerfectSquare(factor.to_string()))?;
        let mut out = Self::zero(new_generator);
        for ((a, k), p) in &self.terms {
            if *k > 0 {
                return Err(AlgebraError::UnsupportedSubstitution(
                    "logarithm terms cannot absorb a generator rescaling",
                ));
            }
            let c = if *a >= 0 {
                num::pow(root.clone(), *a as usize)
            } else {
                num::pow(root.clone(), (-a) as usize).recip()
            };
            out.add_term(*a, 0, p.scale(&c));
        }
        Ok(out)
    }

    /// Substitutes polynomials for both variables in coefficients and generator.
    pub fn substitute(&self, map: &[BiPoly; 2]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(self.generator.substitute(map)?);
        for ((a, k), p) in &self.terms {
            out.add_term(*a, *k, p.substitute(map)?);
        }
        Ok(out)
    }

    /// Floating-point evaluation. Non-integer powers and logarithms require `g > 0`
    /// and yield `NaN` otherwise.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let g = self.generator.eval_f64(x, y);
        let lg = g.ln();
        self.terms
            .iter()
            .map(|((a, k), p)| {
                let gp = if a % 2 == 0 { g.powi(a / 2) } else { g.powf(f64::from(*a) / 2.0) };
                p.eval_f64(x, y) * gp * lg.powi(*k as i32)
            })
            .sum()
    }

    /// Returns the single polynomial coefficient when the expression is a plain polynomial.
    pub fn as_poly(&self) -> Option<BiPoly> {
        let n = self.normalize();
        if n.terms.is_empty() {
            return Some(BiPoly::zero(self.vars()));
        }
        let mut acc = BiPoly::zero(self.vars());
        for ((a, k), p) in &n.terms {
            if *k > 0 || *a < 0 || a % 2 != 0 {
                return None;
            }
            acc = &acc + &(p * &self.generator.pow((*a / 2) as u32));
        }
        Some(acc)
    }
}

impl PartialEq for GenExpr {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator && self.sub(other).is_zero()
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, k), p)| {
                let mut s = format!("({p})");
                if *a != 0 {
                    if a % 2 == 0 {
                        s.push_str(&format!("*g^({})", a / 2));
                    } else {
                        s.push_str(&format!("*g^({a}/2)"));
                    }
                }
                if *k > 0 {
                    s.push_str(&format!("*ln(g)^{k}"));
                }
                s
            })
            .collect();
        write!(f, "{} where g = {}", parts.join(" + "), self.generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{parse_poly, rat};

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    #[test]
    fn derivative_of_square_root() {
        // d/dx sqrt(x^2 + y^2 - 1) = x / sqrt(x^2 + y^2 - 1)
        let g = xs("xi^2 + sigma^2 - 1");
        let e = GenExpr::term(xs("1"), 1, 0, g.clone());
        assert_eq!(e.diff(0), GenExpr::term(xs("xi"), -1, 0, g));
    }

    #[test]
    fn derivative_of_log() {
        // d/dx (g ln g) = g' ln g + g'
        let g = xs("xi^2 + 1");
        let e = GenExpr::term(xs("1"), 2, 1, g.clone());
        let expect = GenExpr::term(xs("2*xi"), 0, 1, g.clone()).add(&GenExpr::from_poly(xs("2*xi"), g));
        assert_eq!(e.diff(0), expect);
    }

    #[test]
    fn normalization_identifies_equal_forms() {
        let g = xs("xi^2 + sigma^2 - 1");
        let a = GenExpr::term(g.clone(), -1, 0, g.clone());
        let b = GenExpr::term(xs("1"), 1, 0, g.clone());
        assert_eq!(a, b);
        assert!(a.sub(&b).is_zero());
        assert!(!GenExpr::term(xs("1"), 1, 0, g.clone()).sub(&GenExpr::from_poly(xs("1"), g)).is_zero());
    }

    #[test]
    fn generator_rescaling() {
        let g4 = xs("4*xi^2 + 4*sigma^2 - 4");
        let g = xs("xi^2 + sigma^2 - 1");
        let e = GenExpr::term(xs("1"), 1, 0, g4);
        let r = e.with_generator(g.clone(), &rat(4, 1)).unwrap();
        assert_eq!(r, GenExpr::term(xs("2"), 1, 0, g));
    }

    #[test]
    fn evaluation_matches_closed_form() {
        let g = xs("xi^2 + sigma^2 - 1");
        let e = GenExpr::term(xs("xi*sigma"), -1, 0, g);
        let (x, y) = (0.9, 0.8);
        let expect = x * y / (x * x + y * y - 1.0f64).sqrt();
        assert!((e.eval_f64(x, y) - expect).abs() < 1e-14);
    }
}
