//! Polynomials in `(ξ, σ)` expanded in the inertia parameter `r` and truncated.

use super::{AlgebraError, BiPoly, VarPair};

/// Truncated series `Σ_{k=0}^{order} r^k c_k` with polynomial coefficients.
///
/// Arithmetic is performed modulo `r^{order+1}`; combining series of different
/// orders truncates to the smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSeries {
    coeffs: Vec<BiPoly>,
}

impl RSeries {
    /// Builds a series from its coefficients `[c_0, …, c_order]`.
    ///
    /// # Panics
    /// Panics when `coeffs` is empty or mixes variable pairs.
    pub fn new(coeffs: Vec<BiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        let vars = coeffs[0].vars();
        assert!(coeffs.iter().all(|c| c.vars() == vars), "mixed variable pairs");
        Self { coeffs }
    }

    /// The series `p + O(r^{order+1})`.
    pub fn constant(p: BiPoly, order: usize) -> Self {
        let vars = p.vars();
        let mut coeffs = vec![p];
        coeffs.resize(order + 1, BiPoly::zero(vars));
        Self { coeffs }
    }

    /// Highest retained power of `r`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Variable pair of the coefficients.
    pub fn vars(&self) -> VarPair {
        self.coeffs[0].vars()
    }

    /// Coefficient of `r^k` (zero beyond the truncation order).
    pub fn coeff(&self, k: usize) -> BiPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(|| BiPoly::zero(self.vars()))
    }

    /// All retained coefficients.
    pub fn coeffs(&self) -> &[BiPoly] {
        &self.coeffs
    }

    /// Returns a copy truncated to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BiPoly::zero(self.vars()));
        Self { coeffs }
    }

    /// `true` when every retained coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(BiPoly::is_zero)
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    /// Sum truncated to the common order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    /// Difference truncated to the common order.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    /// Product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k).fold(BiPoly::zero(self.vars()), |acc, i| {
                    let a = &self.coeffs[i];
                    let b = &other.coeffs[k - i];
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect();
        Self { coeffs }
    }

    /// Partial derivative of every coefficient.
    pub fn diff(&self, index: usize, order: u32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.diff(index, order)).collect(),
        }
    }

    /// Exact series quotient `self / den` when each coefficient division is exact.
    pub fn div_exact(&self, den: &Self) -> Result<Self, AlgebraError> {
        let n = self.common_order(den);
        let mut q: Vec<BiPoly> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut rem = self.coeffs[k].clone();
            for (i, qi) in q.iter().enumerate() {
                rem = &rem - &(qi * &den.coeffs[k - i]);
            }
            q.push(rem.div_exact(&den.coeffs[0])?);
        }
        Ok(Self { coeffs: q })
    }

    /// Evaluates the truncated sum at `(x, y)` for a given numeric `r`.
    pub fn eval_f64(&self, r: f64, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.eval_f64(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::parse_poly;

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    #[test]
    fn product_truncates() {
        let a = RSeries::new(vec![xs("1"), xs("xi")]);
        let b = RSeries::new(vec![xs("1"), xs("-xi")]);
        // (1 + r xi)(1 - r xi) = 1 - r^2 xi^2, truncated at first order.
        assert_eq!(a.mul(&b), RSeries::new(vec![xs("1"), xs("0")]));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = RSeries::new(vec![xs("1 - sigma^2"), xs("xi*sigma"), xs("sigma^3")]);
        let b = RSeries::new(vec![xs("xi + 2"), xs("sigma"), xs("xi^2")]);
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
    }
}
