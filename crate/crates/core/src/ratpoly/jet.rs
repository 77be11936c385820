//! Differential polynomials in two fields `w¹, w²` over the rationals.
//!
//! A [`JetExpr`] is a finite sum of rational multiples of monomials
//! `(w¹)^a (w²)^b (w¹_x)^c (w²_x)^d (w¹_xx)^e (w²_xx)^f (ln w¹)^k`. Field powers
//! may be negative (the Euler operator applied to log terms produces `1/w¹`);
//! derivative powers and the log power are non-negative. Inputs to the
//! variational machinery have jet order at most one; second derivatives only
//! appear in outputs of [`JetExpr::total_derivative`] and
//! [`JetExpr::euler_operator`].
//!
//! [`JetFrac`] adds denominators that are products of powers of jet-order-0
//! expressions, which is what coordinate changes with non-constant Jacobians
//! require.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::{AlgebraError, BiPoly, Rational, VarPair};

/// Exponents of one jet monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct JetMonomial {
    /// Powers of the fields `w¹, w²` (may be negative).
    pub field: [i32; 2],
    /// Powers of the first derivatives `w¹_x, w²_x`.
    pub dx: [u32; 2],
    /// Powers of the second derivatives `w¹_xx, w²_xx`.
    pub dxx: [u32; 2],
    /// Power of `ln w¹`.
    pub log: u32,
}

impl JetMonomial {
    fn key(&self) -> (i32, i32, i32, u32, u32, u32, u32, u32, u32) {
        (
            self.field[0] + self.field[1],
            self.field[0],
            self.field[1],
            self.dx[0] + self.dx[1],
            self.dx[0],
            self.dx[1],
            self.dxx[0],
            self.dxx[1],
            self.log,
        )
    }

    /// Highest derivative order present.
    pub fn jet_order(&self) -> usize {
        if self.dxx != [0, 0] {
            2
        } else if self.dx != [0, 0] {
            1
        } else {
            0
        }
    }

    fn times(&self, other: &Self) -> Self {
        Self {
            field: [self.field[0] + other.field[0], self.field[1] + other.field[1]],
            dx: [self.dx[0] + other.dx[0], self.dx[1] + other.dx[1]],
            dxx: [self.dxx[0] + other.dxx[0], self.dxx[1] + other.dxx[1]],
            log: self.log + other.log,
        }
    }
}

impl Ord for JetMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for JetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Differential polynomial in two fields, canonical (merged and sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetExpr {
    vars: VarPair,
    terms: BTreeMap<JetMonomial, Rational>,
}

impl JetExpr {
    /// The zero expression.
    pub fn zero(vars: VarPair) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// A rational constant.
    pub fn constant(vars: VarPair, c: Rational) -> Self {
        Self::from_monomial(vars, JetMonomial::default(), c)
    }

    /// The constant one.
    pub fn one(vars: VarPair) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// `c` times a single monomial.
    pub fn from_monomial(vars: VarPair, m: JetMonomial, c: Rational) -> Self {
        let mut e = Self::zero(vars);
        e.add_term(m, c);
        e
    }

    /// The field `w^i`.
    pub fn field(vars: VarPair, i: usize) -> Self {
        let mut m = JetMonomial::default();
        m.field[i] = 1;
        Self::from_monomial(vars, m, Rational::one())
    }

    /// The derivative `w^i_x`.
    pub fn field_x(vars: VarPair, i: usize) -> Self {
        let mut m = JetMonomial::default();
        m.dx[i] = 1;
        Self::from_monomial(vars, m, Rational::one())
    }

    /// `ln w¹`.
    pub fn log_first(vars: VarPair) -> Self {
        let m = JetMonomial {
            log: 1,
            ..JetMonomial::default()
        };
        Self::from_monomial(vars, m, Rational::one())
    }

    /// A polynomial in the fields, as a jet-order-0 expression.
    pub fn from_bipoly(p: &BiPoly) -> Self {
        let mut e = Self::zero(p.vars());
        for (x, c) in p.terms() {
            let m = JetMonomial {
                field: [x.0 as i32, x.1 as i32],
                ..JetMonomial::default()
            };
            e.add_term(m, c.clone());
        }
        e
    }

    /// Converts back to a polynomial when the expression has jet order 0,
    /// no negative field powers and no logarithms.
    pub fn to_bipoly(&self) -> Option<BiPoly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.jet_order() > 0 || m.log > 0 || m.field[0] < 0 || m.field[1] < 0 {
                return None;
            }
            out.push((m.field[0] as u32, m.field[1] as u32, c.clone()));
        }
        Some(BiPoly::from_terms(self.vars, out))
    }

    /// Variable pair naming the two fields.
    pub fn vars(&self) -> VarPair {
        self.vars
    }

    /// Iterates over `(monomial, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter()
    }

    /// `true` for the zero expression.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order present.
    pub fn jet_order(&self) -> usize {
        self.terms.keys().map(JetMonomial::jet_order).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn assert_vars(&self, other: &Self) {
        assert_eq!(
            self.vars, other.vars,
            "jet expressions in different variable pairs cannot be combined"
        );
    }

    /// Multiplication by a rational constant.
    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Non-negative integer power.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.vars), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to the field `w^i` (jet variables held fixed).
    pub fn partial_field(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.field[i] != 0 {
                let mut n = *m;
                n.field[i] -= 1;
                out.add_term(n, c * Rational::from_integer(m.field[i].into()));
            }
            if i == 0 && m.log > 0 {
                let mut n = *m;
                n.field[0] -= 1;
                n.log -= 1;
                out.add_term(n, c * Rational::from_integer(m.log.into()));
            }
        }
        out
    }

    /// Partial derivative with respect to `w^i_x`.
    pub fn partial_dx(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.dx[i] > 0 {
                let mut n = *m;
                n.dx[i] -= 1;
                out.add_term(n, c * Rational::from_integer(m.dx[i].into()));
            }
        }
        out
    }

    /// Partial derivative with respect to `w^i_xx`.
    pub fn partial_dxx(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.dxx[i] > 0 {
                let mut n = *m;
                n.dxx[i] -= 1;
                out.add_term(n, c * Rational::from_integer(m.dxx[i].into()));
            }
        }
        out
    }

    /// Total x-derivative `D_x = Σ_i (w^i_x ∂/∂w^i + w^i_xx ∂/∂w^i_x)`.
    ///
    /// Accepts jet order at most one, so the result has jet order at most two.
    pub fn total_derivative(&self) -> Result<Self, AlgebraError> {
        let order = self.jet_order();
        if order > 1 {
            return Err(AlgebraError::JetOrderExceeded { found: order, max: 1 });
        }
        let mut out = Self::zero(self.vars);
        for i in 0..2 {
            out = &out + &(&self.partial_field(i) * &Self::field_x(self.vars, i));
            let mut wxx = JetMonomial::default();
            wxx.dxx[i] = 1;
            let wxx = Self::from_monomial(self.vars, wxx, Rational::one());
            out = &out + &(&self.partial_dx(i) * &wxx);
        }
        Ok(out)
    }

    /// Euler operator `(E_{w¹} e, E_{w²} e)` with `E_w = ∂/∂w − D_x ∂/∂w_x`.
    ///
    /// Both components vanish identically iff `e` is a total x-derivative.
    pub fn euler_operator(&self) -> Result<[Self; 2], AlgebraError> {
        let order = self.jet_order();
        if order > 1 {
            return Err(AlgebraError::JetOrderExceeded { found: order, max: 1 });
        }
        let component = |i: usize| -> Result<Self, AlgebraError> {
            Ok(&self.partial_field(i) - &self.partial_dx(i).total_derivative()?)
        };
        Ok([component(0)?, component(1)?])
    }

    /// Expresses the fields as polynomials in new variables, applying the chain
    /// rule to first derivatives: `w^i_x = Σ_k ∂_k P_i · y^k_x`.
    pub fn substitute(&self, map: &[BiPoly; 2]) -> Result<Self, AlgebraError> {
        map[0].check_vars(&map[1])?;
        let target = map[0].vars();
        let image = [JetExpr::from_bipoly(&map[0]), JetExpr::from_bipoly(&map[1])];
        let image_x: Vec<JetExpr> = (0..2)
            .map(|i| {
                (0..2).fold(JetExpr::zero(target), |acc, k| {
                    &acc + &(&JetExpr::from_bipoly(&map[i].diff(k, 1)) * &JetExpr::field_x(target, k))
                })
            })
            .collect();
        let mut out = JetExpr::zero(target);
        for (m, c) in &self.terms {
            if m.log > 0 {
                return Err(AlgebraError::UnsupportedSubstitution("logarithm of a substituted field"));
            }
            if m.field[0] < 0 || m.field[1] < 0 {
                return Err(AlgebraError::UnsupportedSubstitution("negative power of a substituted field"));
            }
            if m.dxx != [0, 0] {
                return Err(AlgebraError::UnsupportedSubstitution("second derivatives"));
            }
            let mut t = JetExpr::constant(target, c.clone());
            for i in 0..2 {
                t = &t * &image[i].pow(m.field[i] as u32);
                t = &t * &image_x[i].pow(m.dx[i]);
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl Add for &JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: &JetExpr) -> JetExpr {
        self.assert_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: &JetExpr) -> JetExpr {
        self.assert_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: &JetExpr) -> JetExpr {
        self.assert_vars(rhs);
        let mut out = JetExpr::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let [a, b] = self.vars.names();
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let mag = c.abs();
            if !mag.is_one() || *m == JetMonomial::default() {
                factors.push(mag.to_string());
            }
            let mut push = |name: String, p: i64| match p {
                0 => {}
                1 => factors.push(name),
                p => factors.push(format!("{name}^{p}")),
            };
            push(a.to_string(), m.field[0].into());
            push(b.to_string(), m.field[1].into());
            push(format!("{a}_x"), m.dx[0].into());
            push(format!("{b}_x"), m.dx[1].into());
            push(format!("{a}_xx"), m.dxx[0].into());
            push(format!("{b}_xx"), m.dxx[1].into());
            push(format!("ln({a})"), m.log.into());
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Quotient of a jet expression by a product of powers of jet-order-0 bases.
///
/// Equality is decided by cross-multiplication, so no polynomial gcd is needed.
#[derive(Clone, Debug)]
pub struct JetFrac {
    num: JetExpr,
    den: Vec<(JetExpr, u32)>,
}

impl JetFrac {
    /// A jet expression with denominator one.
    pub fn from_expr(num: JetExpr) -> Self {
        Self { num, den: Vec::new() }
    }

    /// `num / base^power`.
    ///
    /// # Panics
    /// Panics when `base` is zero or has positive jet order.
    pub fn new(num: JetExpr, base: JetExpr, power: u32) -> Self {
        assert!(!base.is_zero(), "zero denominator");
        assert_eq!(base.jet_order(), 0, "denominator bases must have jet order 0");
        let den = if power == 0 { Vec::new() } else { vec![(base, power)] };
        Self { num, den }
    }

    /// The zero fraction.
    pub fn zero(vars: VarPair) -> Self {
        Self::from_expr(JetExpr::zero(vars))
    }

    /// Numerator.
    pub fn numerator(&self) -> &JetExpr {
        &self.num
    }

    /// Denominator as `(base, power)` factors.
    pub fn denominator(&self) -> &[(JetExpr, u32)] {
        &self.den
    }

    /// Variable pair.
    pub fn vars(&self) -> VarPair {
        self.num.vars()
    }

    /// `true` when the numerator vanishes.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Highest derivative order in the numerator.
    pub fn jet_order(&self) -> usize {
        self.num.jet_order()
    }

    fn power_of(&self, base: &JetExpr) -> u32 {
        self.den.iter().find(|(b, _)| b == base).map(|(_, p)| *p).unwrap_or(0)
    }

    /// Least common denominator of two fractions (maximum power per base).
    fn lcd(&self, other: &Self) -> Vec<(JetExpr, u32)> {
        let mut out = self.den.clone();
        for (b, p) in &other.den {
            match out.iter_mut().find(|(c, _)| c == b) {
                Some(entry) => entry.1 = entry.1.max(*p),
                None => out.push((b.clone(), *p)),
            }
        }
        out
    }

    /// Numerator rewritten over a denominator that is a multiple of ours.
    fn lift(&self, den: &[(JetExpr, u32)]) -> JetExpr {
        den.iter().fold(self.num.clone(), |acc, (b, p)| {
            let missing = p - self.power_of(b);
            if missing == 0 {
                acc
            } else {
                &acc * &b.pow(missing)
            }
        })
    }

    /// Sum over the least common denominator.
    pub fn add(&self, other: &Self) -> Self {
        let den = self.lcd(other);
        Self {
            num: &self.lift(&den) + &other.lift(&den),
            den,
        }
    }

    /// Difference over the least common denominator.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Product (denominators multiply).
    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.den.clone();
        for (b, p) in &other.den {
            match den.iter_mut().find(|(c, _)| c == b) {
                Some(entry) => entry.1 += p,
                None => den.push((b.clone(), *p)),
            }
        }
        Self {
            num: &self.num * &other.num,
            den,
        }
    }

    /// Multiplication by a jet expression.
    pub fn mul_expr(&self, e: &JetExpr) -> Self {
        Self {
            num: &self.num * e,
            den: self.den.clone(),
        }
    }

    /// Multiplication by a rational constant.
    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Total x-derivative by the quotient rule:
    /// `D(N / Π bᵢ^{pᵢ}) = (N' Π bᵢ − N Σᵢ pᵢ bᵢ' Π_{j≠i} bⱼ) / Π bᵢ^{pᵢ+1}`.
    pub fn total_derivative(&self) -> Result<Self, AlgebraError> {
        let vars = self.vars();
        let prod_all = self.den.iter().fold(JetExpr::one(vars), |acc, (b, _)| &acc * b);
        let mut num = &self.num.total_derivative()? * &prod_all;
        for (i, (bi, pi)) in self.den.iter().enumerate() {
            let others = self
                .den
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(JetExpr::one(vars), |acc, (_, (b, _))| &acc * b);
            let term = &(&self.num * &bi.total_derivative()?) * &others;
            num = &num - &term.scale(&Rational::from_integer((*pi).into()));
        }
        Ok(Self {
            num,
            den: self.den.iter().map(|(b, p)| (b.clone(), p + 1)).collect(),
        })
    }

    /// Substitutes the fields in numerator and denominator bases.
    pub fn substitute(&self, map: &[BiPoly; 2]) -> Result<Self, AlgebraError> {
        let mut den = Vec::with_capacity(self.den.len());
        for (b, p) in &self.den {
            den.push((b.substitute(map)?, *p));
        }
        Ok(Self {
            num: self.num.substitute(map)?,
            den,
        })
    }
}

impl PartialEq for JetFrac {
    fn eq(&self, other: &Self) -> bool {
        let den = self.lcd(other);
        self.lift(&den) == other.lift(&den)
    }
}

impl fmt::Display for JetFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self.den.iter().map(|(b, p)| format!("({b})^{p}")).collect();
        write!(f, "({}) / ({})", self.num, den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{parse_poly, rat};

    const XS: VarPair = VarPair::XiSigma;

    fn poly(s: &str) -> JetExpr {
        JetExpr::from_bipoly(&parse_poly(s, XS).unwrap())
    }

    fn xi() -> JetExpr {
        JetExpr::field(XS, 0)
    }
    fn sigma() -> JetExpr {
        JetExpr::field(XS, 1)
    }
    fn xi_x() -> JetExpr {
        JetExpr::field_x(XS, 0)
    }
    fn sigma_x() -> JetExpr {
        JetExpr::field_x(XS, 1)
    }

    #[test]
    fn total_derivative_of_product() {
        let e = &xi() * &sigma();
        let expect = &(&xi_x() * &sigma()) + &(&xi() * &sigma_x());
        assert_eq!(e.total_derivative().unwrap(), expect);
    }

    #[test]
    fn euler_operator_annihilates_total_derivatives() {
        let e = &(&xi_x() * &sigma()) + &(&xi() * &sigma_x());
        let [a, b] = e.euler_operator().unwrap();
        assert!(a.is_zero() && b.is_zero());
        let e = &xi() * &xi_x();
        let [a, b] = e.euler_operator().unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn euler_operator_on_non_exact_density() {
        let e = &xi() * &sigma_x();
        let [a, b] = e.euler_operator().unwrap();
        assert_eq!(a, sigma_x());
        assert_eq!(b, -&xi_x());
    }

    #[test]
    fn euler_operator_with_logarithms() {
        // D_x(u ln u) = u_x ln u + u_x.
        let vars = VarPair::UV;
        let u = JetExpr::field(vars, 0);
        let lu = JetExpr::log_first(vars);
        let e = (&u * &lu).total_derivative().unwrap();
        let [a, b] = e.euler_operator().unwrap();
        assert!(a.is_zero() && b.is_zero());
        // ln u · v_x is not a total derivative: E_u = v_x / u.
        let e = &lu * &JetExpr::field_x(vars, 1);
        let [a, _] = e.euler_operator().unwrap();
        let mut m = JetMonomial::default();
        m.field[0] = -1;
        m.dx[1] = 1;
        assert_eq!(a, JetExpr::from_monomial(vars, m, rat(1, 1)));
    }

    #[test]
    fn second_order_input_is_rejected() {
        let e = (&xi_x() * &xi_x()).total_derivative().unwrap();
        assert!(matches!(
            e.euler_operator(),
            Err(AlgebraError::JetOrderExceeded { found: 2, max: 1 })
        ));
    }

    #[test]
    fn substitution_applies_chain_rule() {
        let vars = VarPair::UV;
        let u_x = JetExpr::field_x(vars, 0);
        let map = [
            parse_poly("(1-xi^2)*(1-sigma^2)", XS).unwrap(),
            parse_poly("2*xi*sigma", XS).unwrap(),
        ];
        let got = u_x.substitute(&map).unwrap();
        let expect = &(&poly("-2*xi*(1-sigma^2)") * &xi_x()) + &(&poly("-2*sigma*(1-xi^2)") * &sigma_x());
        assert_eq!(got, expect);
    }

    #[test]
    fn fractions_compare_by_cross_multiplication() {
        let d = poly("xi^2 - sigma^2");
        let a = JetFrac::new(poly("xi + sigma"), d.clone(), 1);
        let b = JetFrac::new(poly("(xi + sigma)*(xi^2 - sigma^2)"), d.clone(), 2);
        assert_eq!(a, b);
        let c = JetFrac::from_expr(poly("1")).mul(&JetFrac::new(poly("1"), poly("xi - sigma"), 1));
        assert_ne!(a, JetFrac::from_expr(poly("1")));
        // (xi + sigma)/(xi^2 - sigma^2) = 1/(xi - sigma)
        assert_eq!(a, c);
    }

    #[test]
    fn quotient_rule() {
        let d = poly("xi");
        let f = JetFrac::new(JetExpr::one(XS), d, 1);
        // D(1/xi) = -xi_x / xi^2
        let expect = JetFrac::new(-&xi_x(), poly("xi"), 2);
        assert_eq!(f.total_derivative().unwrap(), expect);
    }
}
