//! Hamiltonian densities, fluxes and quasilinear matrices of the two-layer model.
//!
//! All models share the nondimensional form
//!
//! ```text
//! H(ξ, σ) = ¼ (σ² g(ξ) + c ξ²)
//! ```
//!
//! where `g` encodes the truncation in the inertia parameter `r`
//! (`(1−ξ²)/(1−rξ)` in full, `(1−ξ²)(1+rξ)` at first order, `1−ξ²` at zeroth
//! order) and `c` the potential-energy weight (`1` in Boussinesq units, `r` in
//! fixed-gravity units, `0` for the zeroth-order fixed-gravity limit).
//!
//! The equations of motion are `ξ_t = −(H_σ)_x`, `σ_t = −(H_ξ)_x`, so the
//! quasilinear matrix is `[[H_ξσ, H_σσ], [H_ξξ, H_ξσ]]`.

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratpoly::{int, rat, rat_from_f64, rat_to_f64, BiPoly, RSeries, Rational, VarPair};

/// Errors raised when selecting or evaluating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// The inertia parameter is outside `[0, 1)`.
    #[error("inertia parameter r = {0} is outside [0, 1)")]
    InvalidR(f64),
    /// The requested scaling and truncation cannot be combined.
    #[error("scaling {scaling:?} cannot be combined with order {order:?}")]
    InvalidCombination { scaling: Scaling, order: Order },
    /// A point lies outside the open square `(−1, 1)²`.
    #[error("point ({0}, {1}) lies outside the open square (-1, 1)^2")]
    OutsideDomain(f64, f64),
    /// The full model is singular at `ξ = 1/r`.
    #[error("the full model is singular at xi = 1/r")]
    Singular,
}

/// Unit system for `σ` and time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `σ` measured in units of `ρ̄√(2 g̃ h)` with reduced gravity `g̃ = g r`.
    Boussinesq,
    /// `σ` measured in units of `ρ̄√(2 g h)` with gravity held fixed.
    FixedG,
}

/// Truncation of the Hamiltonian in the inertia parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    /// Exact rational dependence on `r`.
    Full,
    /// Expansion through first order in `r`.
    #[serde(rename = "o1")]
    FirstOrder,
    /// The `r → 0` limit.
    #[serde(rename = "o0")]
    ZerothOrder,
}

/// Model selection: inertia parameter, unit system and truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    r: Rational,
    scaling: Scaling,
    order: Order,
}

impl ModelParams {
    /// Validated constructor from an exact rational `r`.
    pub fn exact(r: Rational, scaling: Scaling, order: Order) -> Result<Self, ModelError> {
        if r < Rational::zero() || r >= Rational::one() {
            return Err(ModelError::InvalidR(rat_to_f64(&r)));
        }
        if scaling == Scaling::FixedG && order == Order::FirstOrder {
            return Err(ModelError::InvalidCombination { scaling, order });
        }
        Ok(Self { r, scaling, order })
    }

    /// Validated constructor from a floating-point `r` (converted exactly).
    pub fn new(r: f64, scaling: Scaling, order: Order) -> Result<Self, ModelError> {
        let q = rat_from_f64(r).ok_or(ModelError::InvalidR(r))?;
        Self::exact(q, scaling, order)
    }

    /// Boussinesq-unit model of the given order.
    pub fn boussinesq(r: f64, order: Order) -> Result<Self, ModelError> {
        Self::new(r, Scaling::Boussinesq, order)
    }

    /// Inertia parameter as a float.
    pub fn r(&self) -> f64 {
        rat_to_f64(&self.r)
    }

    /// Inertia parameter, exactly.
    pub fn r_exact(&self) -> &Rational {
        &self.r
    }

    /// Unit system.
    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    /// Truncation order.
    pub fn order(&self) -> Order {
        self.order
    }
}

/// A Hamiltonian density with closed-form evaluators and its series in `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianDensity {
    params: ModelParams,
    r: f64,
    potential: f64,
}

/// Returns the Hamiltonian density selected by `params`.
pub fn hamiltonian(params: &ModelParams) -> HamiltonianDensity {
    let r = params.r();
    let potential = match (params.scaling, params.order) {
        (Scaling::Boussinesq, _) => 1.0,
        (Scaling::FixedG, Order::ZerothOrder) => 0.0,
        (Scaling::FixedG, _) => r,
    };
    HamiltonianDensity {
        params: params.clone(),
        r,
        potential,
    }
}

/// Second derivatives `(H_ξξ, H_ξσ, H_σσ)` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hessian {
    pub xx: f64,
    pub xs: f64,
    pub ss: f64,
}

impl HamiltonianDensity {
    /// Model parameters.
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `g, g', g''` at `ξ`.
    fn kinetic(&self, xi: f64) -> [f64; 3] {
        let r = self.r;
        match self.params.order {
            Order::Full => {
                let d = 1.0 - r * xi;
                [
                    (1.0 - xi * xi) / d,
                    (r - 2.0 * xi + r * xi * xi) / (d * d),
                    -2.0 * (1.0 - r * r) / (d * d * d),
                ]
            }
            Order::FirstOrder => [
                (1.0 - xi * xi) * (1.0 + r * xi),
                r - 2.0 * xi - 3.0 * r * xi * xi,
                -2.0 - 6.0 * r * xi,
            ],
            Order::ZerothOrder => [1.0 - xi * xi, -2.0 * xi, -2.0],
        }
    }

    /// `H(ξ, σ)`.
    pub fn value(&self, xi: f64, sigma: f64) -> f64 {
        let [g, _, _] = self.kinetic(xi);
        0.25 * (sigma * sigma * g + self.potential * xi * xi)
    }

    /// Gradient `(H_ξ, H_σ)`.
    pub fn gradient(&self, xi: f64, sigma: f64) -> [f64; 2] {
        let [g, dg, _] = self.kinetic(xi);
        [0.25 * sigma * sigma * dg + 0.5 * self.potential * xi, 0.5 * sigma * g]
    }

    /// Flux pair `(H_σ, H_ξ)` so that `(ξ, σ)_t = −∂_x (H_σ, H_ξ)`.
    pub fn flux(&self, xi: f64, sigma: f64) -> [f64; 2] {
        let [hx, hs] = self.gradient(xi, sigma);
        [hs, hx]
    }

    /// Second derivatives.
    pub fn hessian(&self, xi: f64, sigma: f64) -> Hessian {
        let [g, dg, d2g] = self.kinetic(xi);
        Hessian {
            xx: 0.25 * sigma * sigma * d2g + 0.5 * self.potential,
            xs: 0.5 * sigma * dg,
            ss: 0.5 * g,
        }
    }

    /// Quasilinear matrix `[[H_ξσ, H_σσ], [H_ξξ, H_ξσ]]` of `w_t + A w_x = 0`.
    pub fn quasilinear_matrix(&self, xi: f64, sigma: f64) -> Result<[[f64; 2]; 2], ModelError> {
        if !(xi.abs() < 1.0 && sigma.abs() < 1.0) {
            return Err(ModelError::OutsideDomain(xi, sigma));
        }
        if self.params.order == Order::Full && (1.0 - self.r * xi).abs() < f64::EPSILON {
            return Err(ModelError::Singular);
        }
        let h = self.hessian(xi, sigma);
        Ok([[h.xs, h.ss], [h.xx, h.xs]])
    }

    /// Characteristic speeds `H_ξσ ∓ √(H_ξξ H_σσ)` in increasing order, or
    /// `None` when they are complex (elliptic point).
    pub fn characteristic_speeds(&self, xi: f64, sigma: f64) -> Option<[f64; 2]> {
        let h = self.hessian(xi, sigma);
        let disc = h.xx * h.ss;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some([h.xs - s, h.xs + s])
    }

    /// `true` when `H_ξξ H_σσ > 0` (real, distinct speeds).
    pub fn is_hyperbolic(&self, xi: f64, sigma: f64) -> bool {
        let h = self.hessian(xi, sigma);
        h.xx * h.ss > 0.0
    }

    /// `g(ξ)/(1−ξ²)`, the kinetic weight with the layer-limit factor removed.
    pub fn reduced_kinetic(&self, xi: f64) -> f64 {
        let r = self.r;
        match self.params.order {
            Order::Full => 1.0 / (1.0 - r * xi),
            Order::FirstOrder => 1.0 + r * xi,
            Order::ZerothOrder => 1.0,
        }
    }

    /// Sonic value `σ_b(ξ) ≥ 0` where `H_ξξ` vanishes, or `None` when `H_ξξ`
    /// stays positive for every `σ` at this `ξ`.
    pub fn sonic_sigma(&self, xi: f64) -> Option<f64> {
        let [_, _, d2g] = self.kinetic(xi);
        if d2g < 0.0 {
            Some((-2.0 * self.potential / d2g).sqrt())
        } else {
            None
        }
    }

    /// Coefficients `[H₀, …, H_order]` of the expansion in powers of `r`.
    ///
    /// Truncated models return zeros beyond their own order.
    pub fn series_form(&self, order: usize) -> Vec<BiPoly> {
        let vars = VarPair::XiSigma;
        let quarter = rat(1, 4);
        let kinetic = BiPoly::from_terms(vars, [(0, 2, int(1)), (2, 2, int(-1))]);
        let xi2 = BiPoly::monomial(vars, 2, 0, int(1));
        let max_kinetic = match self.params.order {
            Order::Full => order,
            Order::FirstOrder => 1,
            Order::ZerothOrder => 0,
        };
        (0..=order)
            .map(|k| {
                let mut p = if k <= max_kinetic {
                    kinetic.shift(k as u32, 0)
                } else {
                    BiPoly::zero(vars)
                };
                let potential_order = match (self.params.scaling, self.params.order) {
                    (Scaling::Boussinesq, _) => Some(0),
                    (Scaling::FixedG, Order::ZerothOrder) => None,
                    (Scaling::FixedG, _) => Some(1),
                };
                if potential_order == Some(k) {
                    p = &p + &xi2;
                }
                p.scale(&quarter)
            })
            .collect()
    }

    /// The expansion as a truncated series in `r`.
    pub fn r_series(&self, order: usize) -> RSeries {
        RSeries::new(self.series_form(order))
    }

    /// Polynomials `(A, B)` and the positive weight `W` with
    /// `H_ξξ = A / W` and `H_σσ = B / W`, exact for the model's rational `r`.
    ///
    /// For the full model `W = 4(1 − rξ)³`; for truncated models `W = 1`.
    pub fn cleared_hessian(&self) -> (BiPoly, BiPoly) {
        let vars = VarPair::XiSigma;
        let r = self.params.r.clone();
        let c = match (self.params.scaling, self.params.order) {
            (Scaling::Boussinesq, _) => int(1),
            (Scaling::FixedG, Order::ZerothOrder) => int(0),
            (Scaling::FixedG, _) => r.clone(),
        };
        match self.params.order {
            Order::Full => {
                // H_ξξ = ½(c − σ²(1−r²)/(1−rξ)³), H_σσ = ½(1−ξ²)/(1−rξ).
                let d = BiPoly::from_terms(vars, [(0, 0, int(1)), (1, 0, -r.clone())]);
                let d2 = &d * &d;
                let d3 = &d2 * &d;
                let sigma2 = BiPoly::monomial(vars, 0, 2, int(1) - &r * &r);
                let a = (&d3.scale(&c) - &sigma2).scale(&int(2));
                let one_minus_xi2 = BiPoly::from_terms(vars, [(0, 0, int(1)), (2, 0, int(-1))]);
                let b = (&one_minus_xi2 * &d2).scale(&int(2));
                (a, b)
            }
            _ => {
                let h = self
                    .series_form(1)
                    .iter()
                    .enumerate()
                    .fold(BiPoly::zero(vars), |acc, (k, p)| {
                        &acc + &p.scale(&num::pow(r.clone(), k))
                    });
                (h.diff(0, 2), h.diff(1, 2))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::parse_poly;

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    fn bous(r: f64, order: Order) -> HamiltonianDensity {
        hamiltonian(&ModelParams::boussinesq(r, order).unwrap())
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::boussinesq(1.0, Order::Full).is_err());
        assert!(ModelParams::boussinesq(-0.1, Order::Full).is_err());
        assert!(matches!(
            ModelParams::new(0.1, Scaling::FixedG, Order::FirstOrder),
            Err(ModelError::InvalidCombination { .. })
        ));
    }

    #[test]
    fn boussinesq_hamiltonian_series() {
        let h = bous(0.0, Order::ZerothOrder);
        assert_eq!(h.series_form(0)[0], xs("1/4*((1-xi^2)*sigma^2 + xi^2)"));
        let h = bous(0.3, Order::Full);
        assert_eq!(h.value(0.0, 0.0), 0.0);
        assert_eq!(h.series_form(1)[1], xs("1/4*(xi*sigma^2 - xi^3*sigma^2)"));
    }

    #[test]
    fn boussinesq_fluxes_as_polynomials() {
        let h0 = &bous(0.0, Order::ZerothOrder).series_form(0)[0];
        assert_eq!(h0.diff(1, 1), xs("1/2*(1-xi^2)*sigma"));
        assert_eq!(h0.diff(0, 1), xs("1/2*xi*(1-sigma^2)"));
    }

    #[test]
    fn first_order_fluxes() {
        // σ-equation flux through O(r): σ_t = ½(ξσ² − ξ + r·½σ²(3ξ²−1))_x.
        let s = bous(0.0, Order::FirstOrder).r_series(1);
        let h_xi = s.diff(0, 1);
        assert_eq!(h_xi.coeff(0), xs("1/2*xi - 1/2*xi*sigma^2"));
        assert_eq!(h_xi.coeff(1), xs("-1/4*sigma^2*(3*xi^2 - 1)"));
        let h_sigma = s.diff(1, 1);
        assert_eq!(h_sigma.coeff(1), xs("1/2*xi*(1-xi^2)*sigma"));
    }

    #[test]
    fn flux_vanishes_at_rest() {
        for order in [Order::Full, Order::FirstOrder, Order::ZerothOrder] {
            let h = bous(0.2, order);
            assert_eq!(h.flux(0.3, 0.0)[0], 0.0);
        }
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let eps = 1e-5;
        for order in [Order::Full, Order::FirstOrder, Order::ZerothOrder] {
            let h = bous(0.37, order);
            let (x, s) = (0.21, -0.43);
            let g = h.gradient(x, s);
            let fd_x = (h.value(x + eps, s) - h.value(x - eps, s)) / (2.0 * eps);
            let fd_s = (h.value(x, s + eps) - h.value(x, s - eps)) / (2.0 * eps);
            assert!((g[0] - fd_x).abs() < 1e-8 && (g[1] - fd_s).abs() < 1e-8);
            let hs = h.hessian(x, s);
            let fd_xx = (h.gradient(x + eps, s)[0] - h.gradient(x - eps, s)[0]) / (2.0 * eps);
            let fd_xs = (h.gradient(x, s + eps)[0] - h.gradient(x, s - eps)[0]) / (2.0 * eps);
            let fd_ss = (h.gradient(x, s + eps)[1] - h.gradient(x, s - eps)[1]) / (2.0 * eps);
            assert!((hs.xx - fd_xx).abs() < 1e-7);
            assert!((hs.xs - fd_xs).abs() < 1e-7);
            assert!((hs.ss - fd_ss).abs() < 1e-7);
        }
    }

    #[test]
    fn quasilinear_matrix_at_origin() {
        let h = bous(0.0, Order::ZerothOrder);
        let a = h.quasilinear_matrix(0.0, 0.0).unwrap();
        assert_eq!(a, [[0.0, 0.5], [0.5, 0.0]]);
        // The displayed (B-ql) matrix is the negative of ours.
        let display = [[0.0, -0.5], [-0.5, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a[i][j], -display[i][j]);
            }
        }
        assert_eq!(h.characteristic_speeds(0.0, 0.0), Some([-0.5, 0.5]));
    }

    #[test]
    fn speeds_at_generic_point_and_sonic_line() {
        let h = bous(0.0, Order::ZerothOrder);
        let (x, s): (f64, f64) = (0.3, -0.6);
        let root = 0.5 * ((1.0 - x * x) * (1.0 - s * s)).sqrt();
        let [lm, lp] = h.characteristic_speeds(x, s).unwrap();
        assert!((lm - (-x * s - root)).abs() < 1e-15);
        assert!((lp - (-x * s + root)).abs() < 1e-15);
        // At ξ = 1 the speeds coincide.
        let h1 = h.hessian(1.0, s);
        assert_eq!(h1.ss, 0.0);
        assert!(h.quasilinear_matrix(1.0, s).is_err());
    }

    #[test]
    fn cleared_hessian_matches_closed_form() {
        let h = hamiltonian(&ModelParams::exact(rat(1, 3), Scaling::Boussinesq, Order::Full).unwrap());
        let (a, b) = h.cleared_hessian();
        let (x, s) = (0.25, 0.5);
        let w = 4.0 * (1.0 - x / 3.0f64).powi(3);
        let hs = h.hessian(x, s);
        assert!((a.eval_f64(x, s) / w - hs.xx).abs() < 1e-14);
        assert!((b.eval_f64(x, s) / w - hs.ss).abs() < 1e-14);
    }

    #[test]
    fn fixed_gravity_limit_drops_potential() {
        let h = hamiltonian(&ModelParams::new(0.0, Scaling::FixedG, Order::ZerothOrder).unwrap());
        assert_eq!(h.series_form(0)[0], xs("1/4*(1-xi^2)*sigma^2"));
        // Purely elliptic away from σ = 0.
        assert!(!h.is_hyperbolic(0.2, 0.3));
    }
}
