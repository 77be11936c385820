//! First-order deformation of the polynomial family.
//!
//! Writing `F = F₀ + r F₁` and `H = H₀ + r H₁`, the conservation condition at
//! order `r` with the Boussinesq `H₀` reads
//!
//! ```text
//! □̃ F₁ = 2 (H₁_ξξ F₀_σσ − F₀_ξξ H₁_σσ),   □̃ = (1−ξ²)∂²_ξ − (1−σ²)∂²_σ,
//! ```
//!
//! which for `H₁ = ¼ξ(1−ξ²)σ²` is `□̃F₁ = −ξ(1−ξ²)F₀_ξξ − 3ξσ²F₀_σσ`.
//!
//! `□̃` preserves the monomial subspaces `R_N = span{ξ^{2k+1}σ^{2j}}` and
//! `S_N = span{ξ^{2k}σ^{2j+1}}`, is upper triangular in the basis ordered by
//! `(k, j)`, and has a one-dimensional kernel spanned by `ξ` (resp. `σ`). Its
//! image is the hyperplane of polynomials vanishing at `(1, 1)`, so the
//! equation is solvable iff the right-hand side vanishes there.

use std::collections::BTreeMap;

use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conserved::{generate_polynomial_family, ConservedDensity, ConservedError, Density};
use crate::ratpoly::{int, rat, BiPoly, RSeries, Rational, VarPair};

/// Errors raised by the deformation solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformationError {
    /// The right-hand side does not vanish at `(ξ, σ) = (1, 1)`.
    #[error("right-hand side takes the value {0} at (1, 1); the deformation equation is not solvable")]
    Solvability(Rational),
    /// The right-hand side mixes the two parity classes.
    #[error("right-hand side lies in neither monomial subspace")]
    MixedParity,
    /// The input density is not a polynomial in `(ξ, σ)`.
    #[error("only polynomial densities in (xi, sigma) can be deformed")]
    NotPolynomial,
    /// Back-substitution left a nonzero remainder in the kernel row.
    #[error("back-substitution is inconsistent in the kernel row")]
    Inconsistent,
    /// Family generation failed.
    #[error(transparent)]
    Conserved(#[from] ConservedError),
}

/// The two invariant monomial subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceKind {
    /// `ξ^{2k+1} σ^{2j}`, `k, j = 0..N`.
    R,
    /// `ξ^{2k} σ^{2j+1}`, `k = 0..N`, `j = 0..N−1`.
    S,
}

/// A monomial subspace with its canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSubspace {
    kind: SubspaceKind,
    n: u32,
    basis: Vec<(u32, u32)>,
}

impl MonomialSubspace {
    /// The subspace `R_N` or `S_N`; the basis is ordered by `(k, j)`.
    pub fn new(kind: SubspaceKind, n: u32) -> Self {
        let j_max = match kind {
            SubspaceKind::R => n + 1,
            SubspaceKind::S => n,
        };
        let basis = (0..=n).flat_map(|k| (0..j_max).map(move |j| (k, j))).collect();
        Self { kind, n, basis }
    }

    /// Subspace kind.
    pub fn kind(&self) -> SubspaceKind {
        self.kind
    }

    /// Size parameter `N`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Basis labels `(k, j)`.
    pub fn basis(&self) -> &[(u32, u32)] {
        &self.basis
    }

    /// Dimension: `(N+1)²` for `R_N`, `N(N+1)` for `S_N`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exponents `(a, b)` of the monomial `ξ^a σ^b` labelled `(k, j)`.
    pub fn exponents(&self, (k, j): (u32, u32)) -> (u32, u32) {
        match self.kind {
            SubspaceKind::R => (2 * k + 1, 2 * j),
            SubspaceKind::S => (2 * k, 2 * j + 1),
        }
    }

    /// Label of `ξ^a σ^b`, if the monomial belongs to the subspace.
    pub fn label(&self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (k, j) = match self.kind {
            SubspaceKind::R if a % 2 == 1 && b % 2 == 0 => ((a - 1) / 2, b / 2),
            SubspaceKind::S if a % 2 == 0 && b % 2 == 1 => (a / 2, (b - 1) / 2),
            _ => return None,
        };
        let j_max = match self.kind {
            SubspaceKind::R => self.n,
            SubspaceKind::S => self.n.checked_sub(1)?,
        };
        (k <= self.n && j <= j_max).then_some((k, j))
    }

    fn position(&self, label: (u32, u32)) -> Option<usize> {
        self.basis.binary_search(&label).ok()
    }

    /// Smallest subspace containing every monomial of `p`, or `None` when the
    /// polynomial mixes parity classes (the zero polynomial yields `None` too).
    pub fn smallest_containing(p: &BiPoly) -> Option<Self> {
        let mut kind = None;
        let mut n = 0u32;
        for (e, _) in p.terms() {
            let this = match (e.0 % 2, e.1 % 2) {
                (1, 0) => SubspaceKind::R,
                (0, 1) => SubspaceKind::S,
                _ => return None,
            };
            if *kind.get_or_insert(this) != this {
                return None;
            }
            let need = match this {
                SubspaceKind::R => ((e.0 - 1) / 2).max(e.1 / 2),
                SubspaceKind::S => (e.0 / 2).max((e.1 - 1) / 2 + 1),
            };
            n = n.max(need);
        }
        kind.map(|k| Self::new(k, n.max(1)))
    }

    /// Coordinates of `p` in the basis.
    pub fn coordinates(&self, p: &BiPoly) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (e, c) in p.terms() {
            let pos = self.position(self.label(e.0, e.1)?)?;
            out[pos] = c.clone();
        }
        Some(out)
    }

    /// Polynomial with the given coordinates.
    pub fn polynomial(&self, coords: &[Rational]) -> BiPoly {
        BiPoly::from_terms(
            VarPair::XiSigma,
            self.basis.iter().zip(coords).map(|(l, c)| {
                let (a, b) = self.exponents(*l);
                (a, b, c.clone())
            }),
        )
    }

    /// Closed-form diagonal entry of `□̃` at label `(k, j)`:
    /// `2(j+k)(2j−2k−1)` on `R_N` and `2(j+k)(2j−2k+1)` on `S_N`.
    pub fn expected_diagonal(&self, (k, j): (u32, u32)) -> Rational {
        let (k, j) = (i64::from(k), i64::from(j));
        let shift = match self.kind {
            SubspaceKind::R => -1,
            SubspaceKind::S => 1,
        };
        int(2 * (j + k) * (2 * j - 2 * k + shift))
    }
}

/// `□̃ = (1−ξ²)∂²_ξ − (1−σ²)∂²_σ` applied to a polynomial.
pub fn box_operator(p: &BiPoly) -> BiPoly {
    let vars = p.vars();
    let one_minus = |i: u32, j: u32| BiPoly::from_terms(vars, [(0, 0, int(1)), (i, j, int(-1))]);
    &(&one_minus(2, 0) * &p.diff(0, 2)) - &(&one_minus(0, 2) * &p.diff(1, 2))
}

/// Matrix of `□̃` on a monomial subspace; column `c` holds the coordinates of
/// `□̃` applied to basis element `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxOperatorMatrix {
    space: MonomialSubspace,
    columns: Vec<BTreeMap<usize, Rational>>,
}

/// Builds the matrix of `□̃` on `space`.
pub fn build_box(space: &MonomialSubspace) -> BoxOperatorMatrix {
    let columns = space
        .basis()
        .iter()
        .map(|&label| {
            let (a, b) = space.exponents(label);
            let image = box_operator(&BiPoly::monomial(VarPair::XiSigma, a, b, int(1)));
            image
                .terms()
                .map(|(e, c)| {
                    let row = space
                        .label(e.0, e.1)
                        .and_then(|l| space.position(l))
                        .expect("the box operator preserves the subspace");
                    (row, c.clone())
                })
                .collect()
        })
        .collect();
    BoxOperatorMatrix {
        space: space.clone(),
        columns,
    }
}

impl BoxOperatorMatrix {
    /// The subspace.
    pub fn space(&self) -> &MonomialSubspace {
        &self.space
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Entry `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Rational {
        self.columns[col].get(&row).cloned().unwrap_or_else(Rational::zero)
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.dim()).map(|i| self.entry(i, i)).collect()
    }

    /// `true` when every nonzero entry lies on or above the diagonal.
    pub fn is_upper_triangular(&self) -> bool {
        self.columns.iter().enumerate().all(|(c, col)| col.keys().all(|&r| r <= c))
    }

    /// `true` when the diagonal matches [`MonomialSubspace::expected_diagonal`].
    pub fn diagonal_matches_formula(&self) -> bool {
        self.space
            .basis()
            .iter()
            .enumerate()
            .all(|(i, &l)| self.entry(i, i) == self.space.expected_diagonal(l))
    }

    /// Exact rank by sparse Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.dim();
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                rows[r].insert(c, v.clone());
            }
        }
        let mut used = vec![false; n];
        let mut rank = 0;
        for c in 0..n {
            let pivot = (0..n)
                .filter(|&r| !used[r] && rows[r].contains_key(&c))
                .min_by_key(|&r| (r != c, rows[r].len()));
            let Some(p) = pivot else { continue };
            used[p] = true;
            rank += 1;
            let prow = rows[p].clone();
            let pv = prow[&c].clone();
            for r in 0..n {
                if used[r] {
                    continue;
                }
                if let Some(v) = rows[r].get(&c).cloned() {
                    let factor = v / &pv;
                    for (&k, pk) in &prow {
                        let updated = rows[r].get(&k).cloned().unwrap_or_else(Rational::zero) - &factor * pk;
                        if updated.is_zero() {
                            rows[r].remove(&k);
                        } else {
                            rows[r].insert(k, updated);
                        }
                    }
                }
            }
        }
        rank
    }

    /// Dimension of the kernel.
    pub fn kernel_dimension(&self) -> usize {
        self.dim() - self.rank()
    }

    /// `true` when the kernel is spanned by the first basis monomial (`ξ` or `σ`).
    pub fn kernel_is_first_monomial(&self) -> bool {
        self.columns[0].is_empty() && self.kernel_dimension() == 1
    }

    /// Solves `□̃ x = rhs` by back-substitution with zero kernel component.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>, DeformationError> {
        let n = self.dim();
        let mut x = vec![Rational::zero(); n];
        let rows = self.rows();
        for i in (1..n).rev() {
            let mut acc = rhs[i].clone();
            for (&c, v) in &rows[i] {
                if c > i {
                    acc -= v * &x[c];
                }
            }
            x[i] = acc / self.entry(i, i);
        }
        let mut remainder = rhs[0].clone();
        for (&c, v) in &rows[0] {
            remainder -= v * &x[c];
        }
        if !remainder.is_zero() {
            return Err(DeformationError::Inconsistent);
        }
        Ok(x)
    }

    fn rows(&self) -> Vec<BTreeMap<usize, Rational>> {
        let mut rows = vec![BTreeMap::new(); self.dim()];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                rows[r].insert(c, v.clone());
            }
        }
        rows
    }
}

/// The first-order perturbation `H₁ = ¼ξ(1−ξ²)σ²` of the Boussinesq Hamiltonian.
pub fn standard_h1() -> BiPoly {
    BiPoly::from_terms(VarPair::XiSigma, [(1, 2, rat(1, 4)), (3, 2, rat(-1, 4))])
}

/// The Boussinesq Hamiltonian `H₀ = ¼((1−ξ²)σ² + ξ²)`.
pub fn standard_h0() -> BiPoly {
    BiPoly::from_terms(
        VarPair::XiSigma,
        [(0, 2, rat(1, 4)), (2, 2, rat(-1, 4)), (2, 0, rat(1, 4))],
    )
}

/// Right-hand side `2(H₁_ξξ F₀_σσ − F₀_ξξ H₁_σσ)` of the deformation equation.
pub fn deformation_rhs(f0: &BiPoly, h1: &BiPoly) -> BiPoly {
    (&(&h1.diff(0, 2) * &f0.diff(1, 2)) - &(&f0.diff(0, 2) * &h1.diff(1, 2))).scale(&int(2))
}

/// Solves `□̃F₁ = rhs(F₀, H₁)` in the smallest invariant subspace, choosing the
/// particular solution with zero coefficient on the kernel monomial.
pub fn first_order_correction(f0: &BiPoly, h1: &BiPoly) -> Result<BiPoly, DeformationError> {
    if f0.vars() != VarPair::XiSigma || h1.vars() != VarPair::XiSigma {
        return Err(DeformationError::NotPolynomial);
    }
    let rhs = deformation_rhs(f0, h1);
    if rhs.is_zero() {
        return Ok(BiPoly::zero(VarPair::XiSigma));
    }
    let at_corner = rhs.value_at_ones();
    if !at_corner.is_zero() {
        return Err(DeformationError::Solvability(at_corner));
    }
    let space = MonomialSubspace::smallest_containing(&rhs).ok_or(DeformationError::MixedParity)?;
    let coords = space.coordinates(&rhs).ok_or(DeformationError::MixedParity)?;
    let x = build_box(&space).solve(&coords)?;
    Ok(space.polynomial(&x))
}

/// Deforms a polynomial density: returns `F₀ + r F₁` as a first-order series.
pub fn deform(f0: &ConservedDensity, h1: &BiPoly) -> Result<ConservedDensity, DeformationError> {
    let p = match f0.density() {
        Density::Polynomial(p) if p.vars() == VarPair::XiSigma => p,
        _ => return Err(DeformationError::NotPolynomial),
    };
    let f1 = first_order_correction(p, h1)?;
    Ok(ConservedDensity::new(
        f0.family(),
        f0.index(),
        1,
        Density::Series(RSeries::new(vec![p.clone(), f1])),
    ))
}

/// Deformed polynomial densities `F₀,ⱼ + r F₁,ⱼ` for `j = 1..=max_index`.
pub fn deformed_family(max_index: usize) -> Result<Vec<ConservedDensity>, DeformationError> {
    let h1 = standard_h1();
    let family = generate_polynomial_family(max_index, VarPair::XiSigma)?;
    family.par_iter().map(|f| deform(f, &h1)).collect()
}

/// Residuals of the order-one and order-`r` conservation identities.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderCheck {
    /// `F₀_ξξ H₀_σσ − H₀_ξξ F₀_σσ`.
    pub order0: BiPoly,
    /// `F₁_ξξ H₀_σσ + F₀_ξξ H₁_σσ − H₁_ξξ F₀_σσ − H₀_ξξ F₁_σσ`.
    pub order1: BiPoly,
}

impl FirstOrderCheck {
    /// `true` when both residuals vanish.
    pub fn passed(&self) -> bool {
        self.order0.is_zero() && self.order1.is_zero()
    }
}

/// Checks that `F₀ + rF₁` is conserved by `H₀ + rH₁` through order `r`.
pub fn verify_first_order(f0: &BiPoly, f1: &BiPoly, h0: &BiPoly, h1: &BiPoly) -> FirstOrderCheck {
    let br = |f: &BiPoly, h: &BiPoly| &(&f.diff(0, 2) * &h.diff(1, 2)) - &(&h.diff(0, 2) * &f.diff(1, 2));
    FirstOrderCheck {
        order0: br(f0, h0),
        order1: &br(f1, h0) + &br(f0, h1),
    }
}
