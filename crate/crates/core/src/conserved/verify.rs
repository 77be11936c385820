//! Exact conservation and involution tests.
//!
//! For Darboux-Hamiltonian systems `ξ_t = −(H_σ)_x`, `σ_t = −(H_ξ)_x` a density
//! `F(ξ, σ)` is conserved iff `F_ξξ H_σσ − H_ξξ F_σσ = 0`, and two densities are
//! in involution iff `F_ξξ G_σσ − G_ξξ F_σσ = 0`. Both criteria also have an
//! Euler-operator form, used here as an independent route.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConservedDensity, ConservedError, Density};
use crate::models::HamiltonianDensity;
use crate::ratpoly::{AlgebraError, BiPoly, GenExpr, JetExpr, RSeries, VarPair};

/// Exact or first-order-in-`r` comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncationOrder {
    /// Identity for the given rational `r` (or for all `r` with polynomial data).
    Exact,
    /// Identity modulo `r²`.
    O1,
}

/// Residual of a conservation or involution test.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Polynomial residual.
    Polynomial(BiPoly),
    /// Residual over a radical or logarithmic generator.
    Radical(GenExpr),
    /// Residual coefficients of `r⁰, r¹`.
    Series(RSeries),
}

impl Residual {
    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Polynomial(p) => p.is_zero(),
            Residual::Radical(g) => g.is_zero(),
            Residual::Series(s) => s.is_zero(),
        }
    }
}

/// Outcome of [`is_conserved`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    /// `true` when the residual vanishes identically.
    pub conserved: bool,
    /// `F_ξξ H_σσ − H_ξξ F_σσ`, cleared of the positive factor `4(1−rξ)³` for
    /// the full model.
    pub residual: Residual,
}

fn require_physical(vars: VarPair) -> Result<(), ConservedError> {
    if vars == VarPair::XiSigma {
        Ok(())
    } else {
        Err(ConservedError::Variables {
            found: vars,
            expected: VarPair::XiSigma,
        })
    }
}

/// Tests `F_ξξ H_σσ = H_ξξ F_σσ`.
///
/// `Exact` uses the closed form of the model at its rational `r`; `O1` uses the
/// series of `H` and of the density (polynomial or deformed) through first order.
pub fn is_conserved(
    f: &ConservedDensity,
    h: &HamiltonianDensity,
    order: TruncationOrder,
) -> Result<ConservationReport, ConservedError> {
    require_physical(f.vars())?;
    let residual = match order {
        TruncationOrder::Exact => {
            let (a, b) = h.cleared_hessian();
            match f.density() {
                Density::Polynomial(p) => Residual::Polynomial(&(&p.diff(0, 2) * &b) - &(&a * &p.diff(1, 2))),
                Density::Radical(g) => {
                    Residual::Radical(g.diff_n(0, 2).mul_poly(&b).sub(&g.diff_n(1, 2).mul_poly(&a)))
                }
                Density::Series(_) => {
                    return Err(ConservedError::UnsupportedDensity("exact test of a truncated deformation"))
                }
                Density::Jet(_) => return Err(ConservedError::UnsupportedDensity("jet densities")),
            }
        }
        TruncationOrder::O1 => {
            let fs = f
                .to_series(1)
                .ok_or(ConservedError::UnsupportedDensity("first-order test of a non-polynomial density"))?;
            let hs = h.r_series(1);
            Residual::Series(bracket_series(&fs, &hs))
        }
    };
    Ok(ConservationReport {
        conserved: residual.is_zero(),
        residual,
    })
}

fn bracket_series(f: &RSeries, g: &RSeries) -> RSeries {
    f.diff(0, 2).mul(&g.diff(1, 2)).sub(&g.diff(0, 2).mul(&f.diff(1, 2)))
}

/// Tests `F_ξξ G_σσ = G_ξξ F_σσ`, exactly or modulo `r²`.
pub fn in_involution(
    f: &ConservedDensity,
    g: &ConservedDensity,
    order: TruncationOrder,
) -> Result<(bool, Residual), ConservedError> {
    require_physical(f.vars())?;
    require_physical(g.vars())?;
    let residual = match order {
        TruncationOrder::Exact => match (f.density(), g.density()) {
            (Density::Polynomial(p), Density::Polynomial(q)) => {
                Residual::Polynomial(&(&p.diff(0, 2) * &q.diff(1, 2)) - &(&q.diff(0, 2) * &p.diff(1, 2)))
            }
            (Density::Series(_), _) | (_, Density::Series(_)) => {
                let (fs, gs) = series_pair(f, g, max_series_order(f).max(max_series_order(g)))?;
                Residual::Series(bracket_series_full(&fs, &gs))
            }
            _ => return Err(ConservedError::UnsupportedDensity("involution of non-polynomial densities")),
        },
        TruncationOrder::O1 => {
            let (fs, gs) = series_pair(f, g, 1)?;
            Residual::Series(bracket_series(&fs, &gs))
        }
    };
    Ok((residual.is_zero(), residual))
}

fn max_series_order(f: &ConservedDensity) -> usize {
    match f.density() {
        Density::Series(s) => s.order(),
        _ => 0,
    }
}

fn series_pair(f: &ConservedDensity, g: &ConservedDensity, order: usize) -> Result<(RSeries, RSeries), ConservedError> {
    let err = ConservedError::UnsupportedDensity("involution of non-polynomial densities");
    Ok((f.to_series(order).ok_or(err.clone())?, g.to_series(order).ok_or(err)?))
}

/// Full (untruncated) product of two polynomial series in `r`.
fn bracket_series_full(f: &RSeries, g: &RSeries) -> RSeries {
    let n = f.order() + g.order();
    let pad = |s: &RSeries| {
        let mut c = s.coeffs().to_vec();
        c.resize(n + 1, BiPoly::zero(s.vars()));
        RSeries::new(c)
    };
    bracket_series(&pad(f), &pad(g))
}

/// One row of an involution table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionEntry {
    /// Index of the first density.
    pub j: usize,
    /// Index of the second density.
    pub k: usize,
    /// Whether the pair commutes to the requested order.
    pub commutes: bool,
}

/// Tests all pairs `j < k` of the given densities in parallel.
pub fn involution_table(
    densities: &[ConservedDensity],
    order: TruncationOrder,
) -> Result<Vec<InvolutionEntry>, ConservedError> {
    let pairs: Vec<(usize, usize)> = (0..densities.len())
        .flat_map(|a| (a + 1..densities.len()).map(move |b| (a, b)))
        .collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let (commutes, _) = in_involution(&densities[a], &densities[b], order)?;
            Ok(InvolutionEntry {
                j: densities[a].index(),
                k: densities[b].index(),
                commutes,
            })
        })
        .collect()
}

/// Euler operator applied to `dF/dt = −F_ξ (H_σ)_x − F_σ (H_ξ)_x`.
///
/// Both components vanish iff `F` is conserved by the flow of the polynomial
/// Hamiltonian `H`.
pub fn conservation_euler_residual(f: &BiPoly, h: &BiPoly) -> Result<[JetExpr; 2], ConservedError> {
    require_physical(f.vars())?;
    f.check_vars(h)?;
    let jet = |p: &BiPoly| JetExpr::from_bipoly(p);
    let rate = &(&jet(&f.diff(0, 1)) * &jet(&h.diff(1, 1)).total_derivative()?)
        + &(&jet(&f.diff(1, 1)) * &jet(&h.diff(0, 1)).total_derivative()?);
    Ok((-&rate).euler_operator()?)
}

/// Euler operator applied to the bracket density `F_ξ (G_σ)_x + F_σ (G_ξ)_x`.
pub fn involution_euler_residual(f: &BiPoly, g: &BiPoly) -> Result<[JetExpr; 2], ConservedError> {
    conservation_euler_residual(f, g)
}

/// Euler operator applied to the rate of change of a `(u, v)` density along
/// `u_t = −(uv)_x`, `v_t = −(v²/2 + u)_x`. Accepts `ln u` factors.
pub fn dnls_conservation_residual(s: &JetExpr) -> Result<[JetExpr; 2], ConservedError> {
    if s.vars() != VarPair::UV {
        return Err(ConservedError::Variables {
            found: s.vars(),
            expected: VarPair::UV,
        });
    }
    if s.jet_order() > 0 {
        return Err(AlgebraError::JetOrderExceeded {
            found: s.jet_order(),
            max: 0,
        }
        .into());
    }
    let vars = VarPair::UV;
    let u = JetExpr::field(vars, 0);
    let v = JetExpr::field(vars, 1);
    let flux_u = &u * &v;
    let flux_v = &(&v * &v).scale(&crate::ratpoly::rat(1, 2)) + &u;
    let rate = &(&s.partial_field(0) * &flux_u.total_derivative()?) + &(&s.partial_field(1) * &flux_v.total_derivative()?);
    Ok((-&rate).euler_operator()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conserved::{generate_polynomial_family, Family};
    use crate::models::{hamiltonian, ModelParams, Order};
    use crate::ratpoly::parse_poly;

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    fn density(p: BiPoly) -> ConservedDensity {
        ConservedDensity::new(Family::Polynomial, 0, 0, Density::Polynomial(p))
    }

    fn h0() -> HamiltonianDensity {
        hamiltonian(&ModelParams::boussinesq(0.0, Order::ZerothOrder).unwrap())
    }

    #[test]
    fn boussinesq_hamiltonian_family_member_is_conserved() {
        let f = density(xs("(1-xi^2)*(1-sigma^2)/2"));
        let report = is_conserved(&f, &h0(), TruncationOrder::Exact).unwrap();
        assert!(report.conserved);
    }

    #[test]
    fn shear_product_survives_the_full_model() {
        let h = hamiltonian(&ModelParams::boussinesq(0.3, Order::Full).unwrap());
        let f = density(xs("xi*sigma"));
        assert!(is_conserved(&f, &h, TruncationOrder::Exact).unwrap().conserved);
    }

    #[test]
    fn non_conserved_density_has_residual() {
        let report = is_conserved(&density(xs("xi^2*sigma")), &h0(), TruncationOrder::Exact).unwrap();
        assert!(!report.conserved);
        assert!(!report.residual.is_zero());
    }

    #[test]
    fn euler_route_agrees_with_pointwise_route() {
        let h = xs("((1-xi^2)*sigma^2 + xi^2)/4");
        for f in generate_polynomial_family(6, VarPair::XiSigma).unwrap() {
            let e = conservation_euler_residual(f.as_polynomial().unwrap(), &h).unwrap();
            assert!(e[0].is_zero() && e[1].is_zero());
        }
        let e = conservation_euler_residual(&xs("xi^2*sigma"), &h).unwrap();
        assert!(!(e[0].is_zero() && e[1].is_zero()));
    }

    #[test]
    fn involution_examples() {
        let fam = generate_polynomial_family(3, VarPair::XiSigma).unwrap();
        assert!(in_involution(&fam[1], &fam[2], TruncationOrder::Exact).unwrap().0);
        let (ok, _) = in_involution(&density(xs("xi^2")), &density(xs("sigma^2")), TruncationOrder::Exact).unwrap();
        assert!(!ok);
    }

    #[test]
    fn madelung_variables_are_rejected() {
        let fam = generate_polynomial_family(2, VarPair::UV).unwrap();
        assert!(is_conserved(&fam[0], &h0(), TruncationOrder::Exact).is_err());
    }
}
