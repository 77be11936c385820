//! Truncated expansions of `√(c₂λ² + c₁λ + c₀)` in the spectral parameter `λ`.
//!
//! At `λ = ∞` (with `c₂` a rational square) the expansion is a Laurent series
//! `Σ_{k≥0} s_k λ^{1−k}` with polynomial coefficients. At `λ = 0` it is a Taylor
//! series whose coefficients carry half-integer powers of `c₀`:
//! `√c₀ · Σ_k p_k λ^k / c₀^k` with polynomial `p_k`.

use std::collections::BTreeMap;

use num::Zero;

use super::{rat_sqrt, AlgebraError, BiPoly, GenExpr, Rational, VarPair};

/// Where an expansion is centred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ExpansionPoint {
    /// Expansion in decreasing powers of `λ`.
    Infinity,
    /// Expansion in increasing powers of `λ`.
    Zero,
}

/// Truncated series in `λ` with coefficients of type `C`.
///
/// `truncation_order` counts retained terms beyond the leading one: at infinity
/// the powers `λ^1 … λ^{1−order}` are exact; at zero the powers `λ^0 … λ^order` are.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    point: ExpansionPoint,
    truncation_order: i32,
    coeffs: BTreeMap<i32, C>,
}

/// Series at `λ = 0` whose coefficients are radical expressions.
pub type RadicalSeries = LaurentSeries<GenExpr>;

impl<C: Clone> LaurentSeries<C> {
    /// Expansion point.
    pub fn point(&self) -> ExpansionPoint {
        self.point
    }

    /// Number of retained terms beyond the leading one.
    pub fn truncation_order(&self) -> i32 {
        self.truncation_order
    }

    /// Coefficient of `λ^power`, if stored.
    pub fn coeff(&self, power: i32) -> Option<&C> {
        self.coeffs.get(&power)
    }

    /// Iterates over `(power, coefficient)` in increasing power.
    pub fn iter(&self) -> impl Iterator<Item = (&i32, &C)> {
        self.coeffs.iter()
    }

    /// Applies `f` to every coefficient.
    pub fn map<D, F: Fn(&C) -> D>(&self, f: F) -> LaurentSeries<D> {
        LaurentSeries {
            point: self.point,
            truncation_order: self.truncation_order,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, f(c))).collect(),
        }
    }

    /// Applies a fallible `f` to every coefficient.
    pub fn try_map<D, F>(&self, f: F) -> Result<LaurentSeries<D>, AlgebraError>
    where
        F: Fn(&C) -> Result<D, AlgebraError>,
    {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(*k, f(c)?);
        }
        Ok(LaurentSeries {
            point: self.point,
            truncation_order: self.truncation_order,
            coeffs,
        })
    }
}

impl LaurentSeries<BiPoly> {
    /// Checks `s·s = c₂λ² + c₁λ + c₀` on every power the truncation determines.
    pub fn square_matches(&self, radicand: &[BiPoly; 3]) -> bool {
        let vars = radicand[0].vars();
        let lowest = 2 - self.truncation_order;
        (lowest..=2).all(|power| {
            let mut acc = BiPoly::zero(vars);
            for (a, ca) in &self.coeffs {
                if let Some(cb) = self.coeffs.get(&(power - a)) {
                    acc = &acc + &(ca * cb);
                }
            }
            let expect = match power {
                0..=2 => radicand[power as usize].clone(),
                _ => BiPoly::zero(vars),
            };
            acc == expect
        })
    }
}

impl LaurentSeries<GenExpr> {
    /// Checks `s·s = c₂λ² + c₁λ + c₀` through `λ^order`.
    pub fn square_matches(&self, radicand: &[BiPoly; 3]) -> bool {
        let g = radicand[0].clone();
        (0..=self.truncation_order).all(|power| {
            let mut acc = GenExpr::zero(g.clone());
            for (a, ca) in &self.coeffs {
                if let Some(cb) = self.coeffs.get(&(power - a)) {
                    acc = acc.add(&ca.mul(cb));
                }
            }
            let expect = match power {
                0..=2 => GenExpr::from_poly(radicand[power as usize].clone(), g.clone()),
                _ => GenExpr::zero(g.clone()),
            };
            acc == expect
        })
    }
}

/// Result of [`sqrt_series`], depending on the expansion point.
#[derive(Clone, Debug, PartialEq)]
pub enum SqrtExpansion {
    /// Laurent series at infinity with polynomial coefficients.
    Infinity(LaurentSeries<BiPoly>),
    /// Taylor series at zero with radical coefficients over `c₀`.
    Zero(RadicalSeries),
}

/// Expands `√(c₂λ² + c₁λ + c₀)` with `radicand = [c₀, c₁, c₂]`.
///
/// At infinity `c₂` must be the square of a rational constant; at zero the
/// expansion is over the opaque radical `√c₀`.
pub fn sqrt_series(
    radicand: &[BiPoly; 3],
    point: ExpansionPoint,
    order: i32,
) -> Result<SqrtExpansion, AlgebraError> {
    if order < 1 {
        return Err(AlgebraError::TruncationOrder(order));
    }
    radicand[0].check_vars(&radicand[1])?;
    radicand[0].check_vars(&radicand[2])?;
    match point {
        ExpansionPoint::Infinity => sqrt_at_infinity(radicand, order).map(SqrtExpansion::Infinity),
        ExpansionPoint::Zero => Ok(SqrtExpansion::Zero(sqrt_at_zero(radicand, order))),
    }
}

impl SqrtExpansion {
    /// The series at infinity, if that is what was computed.
    pub fn at_infinity(self) -> Option<LaurentSeries<BiPoly>> {
        match self {
            SqrtExpansion::Infinity(s) => Some(s),
            SqrtExpansion::Zero(_) => None,
        }
    }

    /// The series at zero, if that is what was computed.
    pub fn at_zero(self) -> Option<RadicalSeries> {
        match self {
            SqrtExpansion::Zero(s) => Some(s),
            SqrtExpansion::Infinity(_) => None,
        }
    }
}

fn constant_of(p: &BiPoly) -> Option<Rational> {
    if p.degree() == 0 {
        Some(p.coeff(0, 0))
    } else {
        None
    }
}

/// `s = a λ √(1 + b₁/λ + b₂/λ²)` with `a² = c₂`, `b₁ = c₁/c₂`, `b₂ = c₀/c₂`.
/// Writing `√(…) = Σ t_k λ^{−k}`, `t₀ = 1` and `2t_k = b_k − Σ_{i=1}^{k−1} t_i t_{k−i}`.
fn sqrt_at_infinity(radicand: &[BiPoly; 3], order: i32) -> Result<LaurentSeries<BiPoly>, AlgebraError> {
    let vars: VarPair = radicand[0].vars();
    let c2 = constant_of(&radicand[2])
        .filter(|c| !c.is_zero())
        .ok_or_else(|| AlgebraError::NotPerfectSquare(radicand[2].to_string()))?;
    let a = rat_sqrt(&c2).ok_or_else(|| AlgebraError::NotPerfectSquare(c2.to_string()))?;
    let inv = c2.recip();
    let b = [radicand[1].scale(&inv), radicand[0].scale(&inv)];
    let half = Rational::new(1.into(), 2.into());
    let mut t: Vec<BiPoly> = vec![BiPoly::one(vars)];
    for k in 1..=order as usize {
        let mut rhs = if k <= 2 { b[k - 1].clone() } else { BiPoly::zero(vars) };
        for i in 1..k {
            rhs = &rhs - &(&t[i] * &t[k - i]);
        }
        t.push(rhs.scale(&half));
    }
    let coeffs = t
        .into_iter()
        .enumerate()
        .map(|(k, tk)| (1 - k as i32, tk.scale(&a)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(LaurentSeries {
        point: ExpansionPoint::Infinity,
        truncation_order: order,
        coeffs,
    })
}

/// `s = √c₀ Σ p_k λ^k c₀^{−k}` with `p₀ = 1` and
/// `2p_k = [k=1]c₁ + [k=2]c₂c₀ − Σ_{i=1}^{k−1} p_i p_{k−i}`.
fn sqrt_at_zero(radicand: &[BiPoly; 3], order: i32) -> RadicalSeries {
    let vars = radicand[0].vars();
    let g = radicand[0].clone();
    let half = Rational::new(1.into(), 2.into());
    let mut p: Vec<BiPoly> = vec![BiPoly::one(vars)];
    for k in 1..=order as usize {
        let mut rhs = match k {
            1 => radicand[1].clone(),
            2 => &radicand[2] * &radicand[0],
            _ => BiPoly::zero(vars),
        };
        for i in 1..k {
            rhs = &rhs - &(&p[i] * &p[k - i]);
        }
        p.push(rhs.scale(&half));
    }
    let coeffs = p
        .into_iter()
        .enumerate()
        .map(|(k, pk)| (k as i32, GenExpr::term(pk, 1 - 2 * k as i32, 0, g.clone())))
        .collect();
    LaurentSeries {
        point: ExpansionPoint::Zero,
        truncation_order: order,
        coeffs,
    }
}

/// Radicand `[v² − 4u, −2v, 1]` of the generator `(λ − v)² − 4u`.
pub(crate) fn dnls_radicand() -> [BiPoly; 3] {
    let vars = VarPair::UV;
    let u = BiPoly::var(vars, 0);
    let v = BiPoly::var(vars, 1);
    let four = Rational::from_integer(4.into());
    [
        &(&v * &v) - &u.scale(&four),
        v.scale(&Rational::from_integer((-2).into())),
        BiPoly::one(vars),
    ]
}
