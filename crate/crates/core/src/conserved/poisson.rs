//! First-order Poisson operators of hydrodynamic type and their transformation
//! under the Madelung change of variables.
//!
//! Every entry is stored in the normal form `c₁ ∂ + c₀` where `c₁, c₀` are jet
//! fractions. The symmetric form `g∂ + ∂g` has normal form `2g ∂ + g_x`; the
//! plain form `a∂` has `c₁ = a`; multiplication by `b` has `c₀ = b`.

use super::{madelung_map, ConservedError};
use crate::ratpoly::{int, rat, AlgebraError, BiPoly, JetExpr, JetFrac, Rational, VarPair};

/// Builder for one operator entry.
#[derive(Clone, Debug)]
pub struct OperatorEntry {
    c1: JetFrac,
    c0: JetFrac,
}

impl OperatorEntry {
    /// The zero operator.
    pub fn zero(vars: VarPair) -> Self {
        Self {
            c1: JetFrac::zero(vars),
            c0: JetFrac::zero(vars),
        }
    }

    /// `g ∂ + ∂ g`.
    pub fn symmetric(g: JetFrac) -> Result<Self, AlgebraError> {
        Ok(Self {
            c0: g.total_derivative()?,
            c1: g.scale(&int(2)),
        })
    }

    /// `a ∂`.
    pub fn plain(a: JetFrac) -> Self {
        let vars = a.vars();
        Self {
            c1: a,
            c0: JetFrac::zero(vars),
        }
    }

    /// `∂ a` (derivative acting after multiplication), i.e. `a ∂ + a_x`.
    pub fn after(a: JetFrac) -> Result<Self, AlgebraError> {
        Ok(Self {
            c0: a.total_derivative()?,
            c1: a,
        })
    }

    /// Multiplication by `b`.
    pub fn multiplication(b: JetFrac) -> Self {
        let vars = b.vars();
        Self {
            c1: JetFrac::zero(vars),
            c0: b,
        }
    }

    /// Sum of two entries.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            c1: self.c1.add(&other.c1),
            c0: self.c0.add(&other.c0),
        }
    }

    /// Coefficient of `∂`.
    pub fn c1(&self) -> &JetFrac {
        &self.c1
    }

    /// Multiplicative part.
    pub fn c0(&self) -> &JetFrac {
        &self.c0
    }
}

impl PartialEq for OperatorEntry {
    fn eq(&self, other: &Self) -> bool {
        self.c1 == other.c1 && self.c0 == other.c0
    }
}

/// A 2×2 matrix of first-order differential operators with coefficients in
/// the jet space of one variable pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonOperator {
    entries: [[OperatorEntry; 2]; 2],
}

fn frac(p: &str, vars: VarPair) -> JetFrac {
    JetFrac::from_expr(JetExpr::from_bipoly(
        &crate::ratpoly::parse_poly(p, vars).expect("built-in operator coefficient parses"),
    ))
}

impl PoissonOperator {
    /// Operator from its four entries.
    pub fn new(entries: [[OperatorEntry; 2]; 2]) -> Self {
        Self { entries }
    }

    /// Entry `(i, j)` (zero-based).
    pub fn entry(&self, i: usize, j: usize) -> &OperatorEntry {
        &self.entries[i][j]
    }

    /// Variables of the coefficients.
    pub fn vars(&self) -> VarPair {
        self.entries[0][0].c1.vars()
    }

    /// The Darboux tensor `−[[0, ∂], [∂, 0]]` in `(ξ, σ)`.
    pub fn darboux() -> Self {
        let vars = VarPair::XiSigma;
        let minus = OperatorEntry::plain(frac("-1", vars));
        Self::new([
            [OperatorEntry::zero(vars), minus.clone()],
            [minus, OperatorEntry::zero(vars)],
        ])
    }

    /// `P₀ = [[0, ∂], [∂, 0]]` in `(u, v)`.
    pub fn p0() -> Self {
        let vars = VarPair::UV;
        let d = OperatorEntry::plain(frac("1", vars));
        Self::new([[OperatorEntry::zero(vars), d.clone()], [d, OperatorEntry::zero(vars)]])
    }

    /// `P₁ = [[u∂ + ∂u, v∂], [∂v, 2∂]]` in `(u, v)`.
    pub fn p1() -> Self {
        let vars = VarPair::UV;
        let build = || -> Result<Self, AlgebraError> {
            Ok(Self::new([
                [OperatorEntry::symmetric(frac("u", vars))?, OperatorEntry::plain(frac("v", vars))],
                [OperatorEntry::after(frac("v", vars))?, OperatorEntry::plain(frac("2", vars))],
            ]))
        };
        build().expect("jet-order-0 coefficients")
    }

    /// `P₂ = [[2uv∂ + 2∂uv, 2u∂ + 2∂u + v²∂], [2u∂ + 2∂u + ∂v², 2v∂ + 2∂v]]` in `(u, v)`.
    pub fn p2() -> Self {
        let vars = VarPair::UV;
        let build = || -> Result<Self, AlgebraError> {
            let two_u = OperatorEntry::symmetric(frac("2*u", vars))?;
            Ok(Self::new([
                [
                    OperatorEntry::symmetric(frac("2*u*v", vars))?,
                    two_u.plus(&OperatorEntry::plain(frac("v^2", vars))),
                ],
                [
                    two_u.plus(&OperatorEntry::after(frac("v^2", vars))?),
                    OperatorEntry::symmetric(frac("2*v", vars))?,
                ],
            ]))
        };
        build().expect("jet-order-0 coefficients")
    }

    /// Linear combination `Σ cᵢ Pᵢ` of operators in the same variables.
    pub fn combination(terms: &[(Rational, &PoissonOperator)]) -> Self {
        let vars = terms.first().map(|t| t.1.vars()).unwrap_or(VarPair::UV);
        let mut entries: [[OperatorEntry; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| OperatorEntry::zero(vars)));
        for (c, p) in terms {
            for (i, row) in entries.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    let src = &p.entries[i][j];
                    *e = OperatorEntry {
                        c1: e.c1.add(&src.c1.scale(c)),
                        c0: e.c0.add(&src.c0.scale(c)),
                    };
                }
            }
        }
        Self::new(entries)
    }

    /// Applies the operator to a covector of jet-order-0 components:
    /// `(P f)_i = Σ_j c₁^{ij} D_x f_j + c₀^{ij} f_j`.
    pub fn apply(&self, covector: &[JetFrac; 2]) -> Result<[JetFrac; 2], AlgebraError> {
        for f in covector {
            if f.jet_order() > 0 {
                return Err(AlgebraError::JetOrderExceeded {
                    found: f.jet_order(),
                    max: 0,
                });
            }
        }
        let dx = [covector[0].total_derivative()?, covector[1].total_derivative()?];
        let row = |i: usize| {
            (0..2).fold(JetFrac::zero(self.vars()), |acc, j| {
                let e = &self.entries[i][j];
                acc.add(&e.c1.mul(&dx[j])).add(&e.c0.mul(&covector[j]))
            })
        };
        Ok([row(0), row(1)])
    }

    /// Formal skew-symmetry `P* = −P`: `c₁` symmetric and `c₀^{ij} + c₀^{ji} = D_x c₁^{ij}`.
    pub fn is_skew(&self) -> Result<bool, AlgebraError> {
        for i in 0..2 {
            for j in i..2 {
                let a = &self.entries[i][j];
                let b = &self.entries[j][i];
                if a.c1 != b.c1 {
                    return Ok(false);
                }
                if a.c0.add(&b.c0) != a.c1.total_derivative()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rewrites the coefficients in new variables through a polynomial map.
    pub fn substitute(&self, map: &[BiPoly; 2]) -> Result<Self, AlgebraError> {
        let mut entries = self.entries.clone();
        for row in entries.iter_mut() {
            for e in row.iter_mut() {
                *e = OperatorEntry {
                    c1: e.c1.substitute(map)?,
                    c0: e.c0.substitute(map)?,
                };
            }
        }
        Ok(Self::new(entries))
    }

    /// `J' = M J Mᵀ` for a Jacobian matrix `M` with jet-order-0 entries, written
    /// in the same variables as the coefficients:
    /// `c₁' = M c₁ Mᵀ`, `c₀' = M (c₁ D_x Mᵀ + c₀ Mᵀ)`.
    fn congruence(&self, m: &[[JetFrac; 2]; 2]) -> Result<Self, AlgebraError> {
        let vars = self.vars();
        let mut dm: Vec<Vec<JetFrac>> = Vec::with_capacity(2);
        for row in m {
            dm.push(vec![row[0].total_derivative()?, row[1].total_derivative()?]);
        }
        let entries = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut c1 = JetFrac::zero(vars);
                let mut c0 = JetFrac::zero(vars);
                for i in 0..2 {
                    for j in 0..2 {
                        let e = &self.entries[i][j];
                        c1 = c1.add(&m[a][i].mul(&e.c1).mul(&m[b][j]));
                        c0 = c0.add(&m[a][i].mul(&e.c1.mul(&dm[b][j]).add(&e.c0.mul(&m[b][j]))));
                    }
                }
                OperatorEntry { c1, c0 }
            })
        });
        Ok(Self::new(entries))
    }
}

/// Direction of the Madelung change of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MadelungDirection {
    /// An operator on `(ξ, σ)` pushed to `(u, v)`; coefficients stay written in `(ξ, σ)`.
    Forward,
    /// An operator on `(u, v)` pulled back to `(ξ, σ)`.
    Inverse,
}

/// Transforms a Poisson operator under the Madelung map.
///
/// Forward: `J' = Dφ J Dφᵀ` with `φ(ξ, σ) = (u, v)`; the result acts on
/// `(u, v)` covectors but its coefficients are expressed in `(ξ, σ)`. Compare it
/// with a `(u, v)` operator rewritten through [`PoissonOperator::substitute`].
///
/// Inverse: the coefficients are rewritten in `(ξ, σ)` and conjugated with
/// `Dφ⁻¹ = adj(Dφ) / det Dφ`, `det Dφ = −4(ξ² − σ²)`, which is singular on the
/// diagonals `ξ = ±σ`.
pub fn transform_tensor(p: &PoissonOperator, direction: MadelungDirection) -> Result<PoissonOperator, ConservedError> {
    let map = madelung_map();
    let vars = VarPair::XiSigma;
    let jac: [[BiPoly; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|k| map[i].diff(k, 1)));
    let lift = |q: &BiPoly| JetFrac::from_expr(JetExpr::from_bipoly(q));
    match direction {
        MadelungDirection::Forward => {
            expect_vars(p, VarPair::XiSigma)?;
            let m = std::array::from_fn(|i| std::array::from_fn(|k| lift(&jac[i][k])));
            Ok(p.congruence(&m)?)
        }
        MadelungDirection::Inverse => {
            expect_vars(p, VarPair::UV)?;
            let q = p.substitute(&map)?;
            let base = JetExpr::from_bipoly(&crate::ratpoly::parse_poly("xi^2 - sigma^2", vars)?);
            let quarter = rat(-1, 4);
            let adj = [
                [jac[1][1].clone(), -&jac[0][1]],
                [-&jac[1][0], jac[0][0].clone()],
            ];
            let m = std::array::from_fn(|i| {
                std::array::from_fn(|k| {
                    JetFrac::new(JetExpr::from_bipoly(&adj[i][k].scale(&quarter)), base.clone(), 1)
                })
            });
            Ok(q.congruence(&m)?)
        }
    }
}

fn expect_vars(p: &PoissonOperator, expected: VarPair) -> Result<(), ConservedError> {
    if p.vars() == expected {
        Ok(())
    } else {
        Err(ConservedError::Variables {
            found: p.vars(),
            expected,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grad(p: &str) -> [JetFrac; 2] {
        let q = crate::ratpoly::parse_poly(p, VarPair::UV).unwrap();
        [
            JetFrac::from_expr(JetExpr::from_bipoly(&q.diff(0, 1))),
            JetFrac::from_expr(JetExpr::from_bipoly(&q.diff(1, 1))),
        ]
    }

    #[test]
    fn standard_tensors_are_skew() {
        for p in [PoissonOperator::p0(), PoissonOperator::p1(), PoissonOperator::p2(), PoissonOperator::darboux()] {
            assert!(p.is_skew().unwrap());
        }
    }

    #[test]
    fn casimir_of_the_constant_tensor() {
        let out = PoissonOperator::p0().apply(&grad("u")).unwrap();
        assert!(out[0].is_zero() && out[1].is_zero());
    }

    #[test]
    fn non_skew_operator_is_detected() {
        let vars = VarPair::UV;
        let p = PoissonOperator::new([
            [OperatorEntry::plain(frac("u", vars)), OperatorEntry::zero(vars)],
            [OperatorEntry::zero(vars), OperatorEntry::zero(vars)],
        ]);
        assert!(!p.is_skew().unwrap());
    }

    #[test]
    fn covector_with_derivatives_is_rejected() {
        let f = JetFrac::from_expr(JetExpr::field_x(VarPair::UV, 0));
        assert!(PoissonOperator::p0().apply(&[f.clone(), f]).is_err());
    }

    #[test]
    fn wrong_variables_are_rejected() {
        assert!(transform_tensor(&PoissonOperator::p0(), MadelungDirection::Forward).is_err());
        assert!(transform_tensor(&PoissonOperator::darboux(), MadelungDirection::Inverse).is_err());
    }
}
