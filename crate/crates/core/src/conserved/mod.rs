//! Conserved densities of the Boussinesq system and their deformations,
//! the Poisson tensors of the Madelung form, and exact conservation and
//! involution tests.
//!
//! Three families are generated from the Casimir generator
//! `Q(λ) = −¼ √((λ − v)² − 4u)` of the pencil `P₁ − λP₀`:
//!
//! * polynomial densities from the expansion at `λ = ∞`,
//! * algebraic densities (half-integer powers of `v² − 4u`) from the expansion at `λ = 0`,
//! * Toda densities `S₁ … S₄`, which carry powers of `ln u`.
//!
//! The Madelung change of variables `u = (1−ξ²)(1−σ²)`, `v = 2ξσ` maps each
//! of them to a density in the physical variables `(ξ, σ)`.

mod families;
mod poisson;
mod verify;

pub use families::{
    casimir_coefficient, generate_algebraic_family, generate_polynomial_family, generate_toda_family,
    madelung_map, polynomial_scale, toda_to_physical, MAX_TODA_INDEX,
};
pub use poisson::{transform_tensor, MadelungDirection, OperatorEntry, PoissonOperator};
pub use verify::{
    conservation_euler_residual, dnls_conservation_residual, in_involution, involution_euler_residual,
    involution_table, is_conserved, ConservationReport, InvolutionEntry, Residual, TruncationOrder,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use serde_json::{json, Value};

use crate::ratpoly::{genexpr_to_json, jet_to_json, poly_to_json, AlgebraError, BiPoly, GenExpr, JetExpr, RSeries, VarPair};

/// Errors raised by the family generators and the verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConservedError {
    /// Requested family size below one.
    #[error("family size must be at least 1, got {0}")]
    EmptyFamily(usize),
    /// Toda densities are only available in closed form up to `S₄`.
    #[error("Toda densities are available up to index {max}, requested {requested}")]
    TodaIndex { requested: usize, max: usize },
    /// The operands are written in different variables.
    #[error("density is written in {found:?} variables, expected {expected:?}")]
    Variables { found: VarPair, expected: VarPair },
    /// The density kind is not supported by the requested operation.
    #[error("unsupported density kind for {0}")]
    UnsupportedDensity(&'static str),
    /// The Jacobian of the coordinate change vanishes identically on the input.
    #[error("singular Jacobian of the coordinate change at ({0}, {1})")]
    SingularJacobian(f64, f64),
    /// Exact-algebra failure.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Family a density belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Expansion of the Casimir generator at `λ = ∞`.
    Polynomial,
    /// Expansion of the Casimir generator at `λ = 0`.
    Algebraic,
    /// Log-bearing Toda densities.
    Toda,
}

/// Symbolic representation of a density.
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    /// A polynomial.
    Polynomial(BiPoly),
    /// Half-integer powers and logarithms of a single generator.
    Radical(GenExpr),
    /// A jet-order-0 differential polynomial, possibly with `ln u` factors.
    Jet(JetExpr),
    /// A polynomial expansion `F₀ + r F₁ + …` in the inertia parameter.
    Series(RSeries),
}

impl Density {
    /// Variables the density is written in.
    pub fn vars(&self) -> VarPair {
        match self {
            Density::Polynomial(p) => p.vars(),
            Density::Radical(g) => g.vars(),
            Density::Jet(j) => j.vars(),
            Density::Series(s) => s.vars(),
        }
    }

    /// Floating-point evaluation; series densities are evaluated at inertia parameter `r`.
    pub fn eval_f64(&self, r: f64, x: f64, y: f64) -> Option<f64> {
        match self {
            Density::Polynomial(p) => Some(p.eval_f64(x, y)),
            Density::Radical(g) => Some(g.eval_f64(x, y)),
            Density::Series(s) => Some(s.eval_f64(r, x, y)),
            Density::Jet(_) => None,
        }
    }
}

/// A conserved density tagged with its family, index and deformation order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservedDensity {
    family: Family,
    index: usize,
    deformation_order: u32,
    density: Density,
}

impl ConservedDensity {
    /// Tags a density.
    pub fn new(family: Family, index: usize, deformation_order: u32, density: Density) -> Self {
        Self {
            family,
            index,
            deformation_order,
            density,
        }
    }

    /// Family tag.
    pub fn family(&self) -> Family {
        self.family
    }

    /// Index within the family (starting at 1).
    pub fn index(&self) -> usize {
        self.index
    }

    /// `0` for Boussinesq densities, `1` for first-order deformations.
    pub fn deformation_order(&self) -> u32 {
        self.deformation_order
    }

    /// The symbolic density.
    pub fn density(&self) -> &Density {
        &self.density
    }

    /// Variables the density is written in.
    pub fn vars(&self) -> VarPair {
        self.density.vars()
    }

    /// The polynomial, when the density is one.
    pub fn as_polynomial(&self) -> Option<&BiPoly> {
        match &self.density {
            Density::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// The density as a truncated series in `r` of the given order.
    pub fn to_series(&self, order: usize) -> Option<RSeries> {
        match &self.density {
            Density::Polynomial(p) => Some(RSeries::constant(p.clone(), order)),
            Density::Series(s) => {
                let mut coeffs = s.coeffs().to_vec();
                coeffs.resize(order + 1, BiPoly::zero(s.vars()));
                coeffs.truncate(order + 1);
                Some(RSeries::new(coeffs))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Polynomial(p) => write!(f, "{p}"),
            Density::Radical(g) => write!(f, "{g}"),
            Density::Jet(e) => write!(f, "{e}"),
            Density::Series(s) => {
                let parts: Vec<String> = s
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| match k {
                        0 => format!("({c})"),
                        1 => format!("r*({c})"),
                        _ => format!("r^{k}*({c})"),
                    })
                    .collect();
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }
    }
}

impl Density {
    /// Canonical JSON form, tagged by representation.
    pub fn to_json(&self) -> Value {
        match self {
            Density::Polynomial(p) => json!({ "kind": "polynomial", "polynomial": poly_to_json(p) }),
            Density::Radical(g) => json!({ "kind": "radical", "expression": genexpr_to_json(g) }),
            Density::Jet(e) => json!({ "kind": "jet", "expression": jet_to_json(e) }),
            Density::Series(s) => {
                let coeffs: Vec<Value> = s.coeffs().iter().map(poly_to_json).collect();
                json!({ "kind": "series", "coefficients": coeffs })
            }
        }
    }
}

impl ConservedDensity {
    /// Canonical JSON form with the family tag, index and deformation order.
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "index": self.index,
            "deformation_order": self.deformation_order,
            "display": self.density.to_string(),
            "density": self.density.to_json(),
        })
    }
}
