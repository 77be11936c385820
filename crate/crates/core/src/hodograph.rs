//! Local solutions of the first-order deformed system by the hodograph method.
//!
//! For a density `F` conserved by the flow `ξ_t = −(H_σ)_x`, `σ_t = −(H_ξ)_x`,
//! the functions `(ξ, σ)(x, t)` defined implicitly by
//!
//! ```text
//! F_ξσ + t H_ξσ = x,      F_σσ + t H_σσ = 0
//! ```
//!
//! solve the equations of motion wherever the Jacobian of the system is
//! nonsingular. Here `F = F₀ + rF₁` is a deformed polynomial density and
//! `H = H₀ + rH₁` the first-order Hamiltonian, so the construction is exact
//! modulo `r²`.
//!
//! Two solution modes are offered. [`Expansion::Exact`] solves the implicit
//! system at the given `r` by damped Newton iteration. [`Expansion::Linearized`]
//! solves the `r = 0` system exactly and adds the first-order correction
//! `w¹ = −J₀⁻¹ G₁(w⁰)`, which is the natural reading of closed-form initial
//! profiles such as `ξ₀(x) = √((1−x)/3) + r(x+8)/9`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conserved::{is_conserved, ConservedDensity, ConservedError, TruncationOrder};
use crate::models::{hamiltonian, ModelError, ModelParams, Scaling};
use crate::ratpoly::{AlgebraError, BiPoly, PolyEval, RSeries, VarPair};

/// Errors raised while setting up or solving a hodograph problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HodographError {
    /// The density is not a polynomial (or first-order deformed) density.
    #[error("the density must be a polynomial in (xi, sigma), possibly deformed to first order")]
    UnsupportedDensity,
    /// The density is not conserved modulo `r²` by the Hamiltonian.
    #[error("the density is not conserved to first order by the Hamiltonian")]
    NotConserved,
    /// The density lacks the parity required by the initial-condition mode.
    #[error("the density must be odd in {0} for this initial-condition mode")]
    Parity(&'static str),
    /// Only Boussinesq units are supported.
    #[error("hodograph solutions require Boussinesq units")]
    Units,
    /// No real root of the initial-condition equation in `(0, 1)`.
    #[error("no initial root in (0, 1) at x = {0}")]
    NoRoot(f64),
    /// Singular Jacobian: the local solution breaks down.
    #[error("singular Jacobian at x = {x}, t = {t}")]
    Singular { x: f64, t: f64 },
    /// Newton iteration failed to converge.
    #[error("Newton iteration diverged at x = {x}, t = {t}")]
    Divergence { x: f64, t: f64 },
    /// A curve expansion does not reduce to a polynomial.
    #[error("curve expansion is not polynomial: {0}")]
    Algebra(#[from] AlgebraError),
    /// Error from the conservation test.
    #[error(transparent)]
    Conserved(#[from] ConservedError),
    /// Error from the model layer.
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How the initial data are selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialMode {
    /// Fluids at rest: `σ(x, 0) = 0`; `ξ₀` solves `x = F_ξσ(ξ₀, 0)`.
    SigmaZero,
    /// Interface near `ξ = r`: the `t = 0` system seeded at `ξ = 0` for `r = 0`.
    XiConstant,
}

/// Exact or first-order-linearized solution of the implicit system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expansion {
    /// Newton solve of the implicit system at the given `r`.
    Exact,
    /// `r = 0` solution plus the first-order correction.
    Linearized,
}

/// Which derivative: `(order in ξ, order in σ)`.
const DERIVATIVES: [(u32, u32); 5] = [(1, 1), (0, 2), (2, 1), (1, 2), (0, 3)];
const XS: usize = 0;
const SS: usize = 1;
const XXS: usize = 2;
const XSS: usize = 3;
const SSS: usize = 4;

/// Compiled derivatives of a first-order pair `P₀ + rP₁`.
#[derive(Clone, Debug)]
struct PairDerivatives {
    evals: [[PolyEval; 2]; DERIVATIVES.len()],
}

impl PairDerivatives {
    fn new(pair: &[BiPoly; 2]) -> Self {
        let evals = DERIVATIVES.map(|(a, b)| {
            [0, 1].map(|k| pair[k].diff(0, a).diff(1, b).compile())
        });
        Self { evals }
    }

    /// `P₀ + r P₁` derivative `which` at `(ξ, σ)`.
    fn at(&self, which: usize, r: f64, xi: f64, sigma: f64) -> f64 {
        let [p0, p1] = &self.evals[which];
        p0.eval(xi, sigma) + r * p1.eval(xi, sigma)
    }

    /// First-order coefficient `P₁` derivative `which`.
    fn first(&self, which: usize, xi: f64, sigma: f64) -> f64 {
        self.evals[which][1].eval(xi, sigma)
    }
}

/// Implicit hodograph problem on an `x` grid and a list of times.
#[derive(Clone, Debug)]
pub struct HodographProblem {
    density: [BiPoly; 2],
    hamiltonian: [BiPoly; 2],
    f: PairDerivatives,
    h: PairDerivatives,
    r: f64,
    mode: InitialMode,
    /// Sample positions.
    pub x: Vec<f64>,
    /// Requested times (non-negative).
    pub times: Vec<f64>,
}

/// Default grid `x ∈ [−½, ½]` with this many points.
pub const DEFAULT_X_POINTS: usize = 101;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

impl HodographProblem {
    /// Sets up the problem for a (deformed) polynomial density and a
    /// Boussinesq-unit model. The model is truncated to first order in `r`.
    ///
    /// Fails unless `F` is conserved by `H₀ + rH₁` modulo `r²`.
    pub fn new(density: &ConservedDensity, params: &ModelParams, mode: InitialMode) -> Result<Self, HodographError> {
        if params.scaling() != Scaling::Boussinesq {
            return Err(HodographError::Units);
        }
        let fs = density.to_series(1).ok_or(HodographError::UnsupportedDensity)?;
        if fs.vars() != VarPair::XiSigma {
            return Err(HodographError::UnsupportedDensity);
        }
        let h = hamiltonian(params);
        if !is_conserved(density, &h, TruncationOrder::O1)?.conserved {
            return Err(HodographError::NotConserved);
        }
        let hs = h.r_series(1);
        let density = [fs.coeff(0), fs.coeff(1)];
        let hamiltonian = [hs.coeff(0), hs.coeff(1)];
        match mode {
            InitialMode::SigmaZero if !density.iter().all(|p| p.has_parity(1, true)) => {
                return Err(HodographError::Parity("sigma"))
            }
            InitialMode::XiConstant if !density[0].has_parity(0, true) => return Err(HodographError::Parity("xi")),
            _ => {}
        }
        Ok(Self {
            f: PairDerivatives::new(&density),
            h: PairDerivatives::new(&hamiltonian),
            density,
            hamiltonian,
            r: params.r(),
            mode,
            x: linspace(-0.5, 0.5, DEFAULT_X_POINTS),
            times: vec![0.0, 0.5, 1.0, 1.5, 2.0],
        })
    }

    /// Replaces the `x` grid and the time list.
    pub fn with_grid(mut self, x: Vec<f64>, times: Vec<f64>) -> Self {
        self.x = x;
        self.times = times;
        self
    }

    /// Inertia parameter.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Initial-condition mode.
    pub fn mode(&self) -> InitialMode {
        self.mode
    }

    /// `[F₀, F₁]`.
    pub fn density(&self) -> &[BiPoly; 2] {
        &self.density
    }

    /// `[H₀, H₁]`.
    pub fn hamiltonian(&self) -> &[BiPoly; 2] {
        &self.hamiltonian
    }

    /// Residual `(F_ξσ + tH_ξσ − x, F_σσ + tH_σσ)` at inertia parameter `r`.
    fn residual_at(&self, r: f64, x: f64, t: f64, [xi, sigma]: [f64; 2]) -> [f64; 2] {
        [
            self.f.at(XS, r, xi, sigma) + t * self.h.at(XS, r, xi, sigma) - x,
            self.f.at(SS, r, xi, sigma) + t * self.h.at(SS, r, xi, sigma),
        ]
    }

    /// Jacobian of [`Self::residual_at`] with respect to `(ξ, σ)`.
    fn jacobian_at(&self, r: f64, t: f64, [xi, sigma]: [f64; 2]) -> [[f64; 2]; 2] {
        let f = |w| self.f.at(w, r, xi, sigma);
        let h = |w| self.h.at(w, r, xi, sigma);
        [
            [f(XXS) + t * h(XXS), f(XSS) + t * h(XSS)],
            [f(XSS) + t * h(XSS), f(SSS) + t * h(SSS)],
        ]
    }

    /// Max-norm residual of the implicit system at the problem's `r`.
    pub fn residual(&self, x: f64, t: f64, w: [f64; 2]) -> f64 {
        let [a, b] = self.residual_at(self.r, x, t, w);
        a.abs().max(b.abs())
    }

    /// Time-family value `−F_σσ/H_σσ` at a point (equals `t` on solutions).
    pub fn time_level(&self, [xi, sigma]: [f64; 2]) -> f64 {
        -self.f.at(SS, self.r, xi, sigma) / self.h.at(SS, self.r, xi, sigma)
    }

    /// Damped Newton solve at inertia parameter `r`.
    fn newton(&self, r: f64, x: f64, t: f64, seed: [f64; 2]) -> Result<[f64; 2], HodographError> {
        let norm = |g: [f64; 2]| g[0].abs().max(g[1].abs());
        let mut w = seed;
        let mut g = self.residual_at(r, x, t, w);
        for _ in 0..60 {
            if norm(g) <= 1e-14 {
                return Ok(w);
            }
            let j = self.jacobian_at(r, t, w);
            let step = solve2(j, [-g[0], -g[1]]).ok_or(HodographError::Singular { x, t })?;
            let mut lambda = 1.0;
            loop {
                let trial = [w[0] + lambda * step[0], w[1] + lambda * step[1]];
                let gt = self.residual_at(r, x, t, trial);
                if norm(gt) < norm(g) || lambda < 1e-6 {
                    w = trial;
                    g = gt;
                    break;
                }
                lambda *= 0.5;
            }
            if step[0].abs().max(step[1].abs()) < 1e-15 {
                break;
            }
        }
        if norm(g) <= 1e-11 {
            Ok(w)
        } else {
            Err(HodographError::Divergence { x, t })
        }
    }

    /// Exact solution at `(x, t)` by Newton iteration from `seed`, which must
    /// lie on the branch of interest (for example the solution at a nearby
    /// time). Fails when the iteration does not converge inside the physical
    /// square.
    pub fn solve_point(&self, x: f64, t: f64, seed: [f64; 2]) -> Result<[f64; 2], HodographError> {
        let w = self.newton(self.r, x, t, seed)?;
        if w[0].abs() < 1.0 && w[1].abs() < 1.0 {
            Ok(w)
        } else {
            Err(HodographError::Divergence { x, t })
        }
    }

    /// First-order correction `w¹ = −J₀⁻¹ G₁(w⁰)` at `(x, t)`.
    fn correction(&self, x: f64, t: f64, w0: [f64; 2]) -> Result<[f64; 2], HodographError> {
        let [xi, sigma] = w0;
        let g1 = [
            self.f.first(XS, xi, sigma) + t * self.h.first(XS, xi, sigma),
            self.f.first(SS, xi, sigma) + t * self.h.first(SS, xi, sigma),
        ];
        solve2(self.jacobian_at(0.0, t, w0), [-g1[0], -g1[1]]).ok_or(HodographError::Singular { x, t })
    }
}

/// Solves a 2×2 linear system, or `None` when it is numerically singular.
fn solve2(a: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    if det.abs() <= 1e-12 * scale * scale {
        return None;
    }
    Some([
        (b[0] * a[1][1] - b[1] * a[0][1]) / det,
        (a[0][0] * b[1] - a[1][0] * b[0]) / det,
    ])
}

/// Smallest root of `f` in `(0, 1)`, by scanning and bisection.
fn smallest_root(f: impl Fn(f64) -> f64) -> Option<f64> {
    const SCAN: usize = 4000;
    let mut a = 1e-9;
    let mut fa = f(a);
    for i in 1..=SCAN {
        let b = (i as f64 / SCAN as f64).min(1.0 - 1e-9);
        let fb = f(b);
        if fa == 0.0 {
            return Some(a);
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-16 {
                    break;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    None
}

/// `r = 0` initial data at `x`.
fn zeroth_order_initial(problem: &HodographProblem, x: f64) -> Result<[f64; 2], HodographError> {
    match problem.mode {
        InitialMode::SigmaZero => {
            let xi = smallest_root(|xi| problem.f.at(XS, 0.0, xi, 0.0) - x).ok_or(HodographError::NoRoot(x))?;
            problem.newton(0.0, x, 0.0, [xi, 0.0])
        }
        InitialMode::XiConstant => {
            let sigma =
                smallest_root(|s| problem.f.at(XS, 0.0, 0.0, s) - x).ok_or(HodographError::NoRoot(x))?;
            problem.newton(0.0, x, 0.0, [0.0, sigma])
        }
    }
}

/// Initial data `(ξ₀, σ₀)` at `x`.
///
/// In [`InitialMode::SigmaZero`] the root `ξ₀ ∈ (0, 1)` of `x = F_ξσ(ξ₀, 0)`
/// continuous with the smallest `r = 0` root is returned, with `σ₀ = 0`. In
/// [`InitialMode::XiConstant`] the `t = 0` system is solved from the `r = 0`
/// point `(0, σ)` with `x = F₀_ξσ(0, σ)`; to first order this gives `ξ₀ = r`.
pub fn solve_initial_condition(
    problem: &HodographProblem,
    x: f64,
    expansion: Expansion,
) -> Result<[f64; 2], HodographError> {
    let w0 = zeroth_order_initial(problem, x)?;
    let w1 = problem.correction(x, 0.0, w0)?;
    let linear = [w0[0] + problem.r * w1[0], w0[1] + problem.r * w1[1]];
    match expansion {
        Expansion::Linearized => Ok(linear),
        Expansion::Exact => problem.newton(problem.r, x, 0.0, linear),
    }
}

/// Status of one solved point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointStatus {
    /// Solved.
    Solved,
    /// Jacobian singular: the local solution has broken down.
    Breakdown,
    /// Newton iteration failed.
    Diverged,
}

/// Solution at one `(x, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodographPoint {
    /// Position.
    pub x: f64,
    /// Interface displacement (NaN unless solved).
    pub xi: f64,
    /// Momentum shear (NaN unless solved).
    pub sigma: f64,
    /// Max-norm residual of the implicit system at the problem's `r`.
    pub residual: f64,
    /// Outcome.
    pub status: PointStatus,
}

/// All points at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Time.
    pub t: f64,
    /// Points in grid order.
    pub points: Vec<HodographPoint>,
}

impl Snapshot {
    /// `true` when every point was solved.
    pub fn all_solved(&self) -> bool {
        self.points.iter().all(|p| p.status == PointStatus::Solved)
    }

    /// Largest residual over solved points.
    pub fn max_residual(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Solved)
            .fold(0.0, |m, p| m.max(p.residual))
    }
}

/// Largest continuation step in `t`.
const MAX_DT: f64 = 0.05;
/// Continuation steps below this size signal a fold of the solution surface.
const MIN_DT: f64 = 1e-5;

fn failed(x: f64, status: PointStatus) -> HodographPoint {
    HodographPoint {
        x,
        xi: f64::NAN,
        sigma: f64::NAN,
        residual: f64::NAN,
        status,
    }
}

fn status_of(e: &HodographError) -> PointStatus {
    match e {
        HodographError::Singular { .. } => PointStatus::Breakdown,
        _ => PointStatus::Diverged,
    }
}

fn determinant(j: [[f64; 2]; 2]) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Continuation state of one `x` column.
struct Column<'a> {
    problem: &'a HodographProblem,
    x: f64,
    r: f64,
    t: f64,
    w: [f64; 2],
    previous: Option<(f64, [f64; 2])>,
    orientation: f64,
}

impl Column<'_> {
    /// One continuation step to `t_next`, seeded by linear extrapolation.
    ///
    /// The step is rejected when Newton fails, when the state leaves the
    /// physical square `|ξ|, |σ| < 1`, or when the Jacobian determinant changes
    /// sign (the branch has crossed a fold).
    fn try_step(&self, t_next: f64) -> Result<[f64; 2], HodographError> {
        let (x, w) = (self.x, self.w);
        let seed = match self.previous {
            Some((tp, wp)) if self.t != tp => {
                let s = (t_next - self.t) / (self.t - tp);
                [w[0] + s * (w[0] - wp[0]), w[1] + s * (w[1] - wp[1])]
            }
            _ => w,
        };
        let next = self.problem.newton(self.r, x, t_next, seed)?;
        if !(next[0].abs() < 1.0 && next[1].abs() < 1.0) {
            return Err(HodographError::Divergence { x, t: t_next });
        }
        if determinant(self.problem.jacobian_at(self.r, t_next, next)) * self.orientation <= 0.0 {
            return Err(HodographError::Singular { x, t: t_next });
        }
        Ok(next)
    }

    /// Advances to `target` with adaptive steps. A failure persisting down to
    /// [`MIN_DT`] is reported as the breakdown of the local solution.
    fn advance(&mut self, target: f64) -> Result<[f64; 2], HodographError> {
        let mut dt = MAX_DT.min(target - self.t);
        while self.t < target {
            let t_next = if target - self.t <= dt { target } else { self.t + dt };
            match self.try_step(t_next) {
                Ok(next) => {
                    self.previous = Some((self.t, self.w));
                    self.w = next;
                    self.t = t_next;
                    dt = (2.0 * dt).min(MAX_DT);
                }
                Err(_) if dt <= MIN_DT => return Err(HodographError::Singular { x: self.x, t: t_next }),
                Err(_) => dt *= 0.5,
            }
        }
        Ok(self.w)
    }
}

/// Solves one `x` column over the sorted times by continuation in `t`.
fn solve_column(problem: &HodographProblem, x: f64, times: &[f64], expansion: Expansion) -> Vec<HodographPoint> {
    // Continuation runs on the r used by the Newton solve: r for the exact
    // branch, 0 for the linearized one.
    let r_solve = match expansion {
        Expansion::Exact => problem.r,
        Expansion::Linearized => 0.0,
    };
    let start = match expansion {
        Expansion::Exact => solve_initial_condition(problem, x, Expansion::Exact),
        Expansion::Linearized => zeroth_order_initial(problem, x),
    };
    let w = match start {
        Ok(w) => w,
        Err(e) => {
            let status = status_of(&e);
            return times.iter().map(|_| failed(x, status)).collect();
        }
    };
    let orientation = determinant(problem.jacobian_at(r_solve, 0.0, w)).signum();
    let mut column = Column {
        problem,
        x,
        r: r_solve,
        t: 0.0,
        w,
        previous: None,
        orientation,
    };
    let mut broken: Option<PointStatus> = None;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if let Some(status) = broken {
            out.push(failed(x, status));
            continue;
        }
        let point = column.advance(t).and_then(|w0| match expansion {
            Expansion::Exact => Ok(w0),
            Expansion::Linearized => {
                let w1 = problem.correction(x, t, w0)?;
                Ok([w0[0] + problem.r * w1[0], w0[1] + problem.r * w1[1]])
            }
        });
        match point {
            Ok(p) => out.push(HodographPoint {
                x,
                xi: p[0],
                sigma: p[1],
                residual: problem.residual(x, t, p),
                status: PointStatus::Solved,
            }),
            Err(e) => {
                let status = status_of(&e);
                broken = Some(status);
                out.push(failed(x, status));
            }
        }
    }
    out
}

/// Time at which the local solution through `x` breaks down, searched up to
/// `t_max`; `None` when it survives.
pub fn breakdown_time(problem: &HodographProblem, x: f64, t_max: f64) -> Result<Option<f64>, HodographError> {
    let w = solve_initial_condition(problem, x, Expansion::Exact)?;
    let orientation = determinant(problem.jacobian_at(problem.r, 0.0, w)).signum();
    let mut column = Column {
        problem,
        x,
        r: problem.r,
        t: 0.0,
        w,
        previous: None,
        orientation,
    };
    match column.advance(t_max) {
        Ok(_) => Ok(None),
        Err(HodographError::Singular { .. }) => Ok(Some(column.t)),
        Err(e) => Err(e),
    }
}

/// Solves the problem on its grid, in parallel over `x`, returning one
/// snapshot per requested time (sorted increasingly).
///
/// A breakdown at one point is reported for that point and all later times
/// of its column; other columns are unaffected.
pub fn evolve(problem: &HodographProblem, expansion: Expansion) -> Vec<Snapshot> {
    let mut times: Vec<f64> = problem.times.iter().copied().filter(|t| *t >= 0.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let columns: Vec<Vec<HodographPoint>> = problem
        .x
        .par_iter()
        .map(|&x| solve_column(problem, x, &times, expansion))
        .collect();
    times
        .iter()
        .enumerate()
        .map(|(k, &t)| Snapshot {
            t,
            points: columns.iter().map(|c| c[k]).collect(),
        })
        .collect()
}

/// Family of implicit curves in the `(ξ, σ)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// Level sets of `t = −F_σσ/H_σσ`.
    TimeFamily,
    /// Level sets of `x = F_ξσ − (F_ξξ/H_ξξ) H_ξσ`.
    SpaceFamily,
}

/// Evaluators and exact first-order expansion of a hodograph curve family.
#[derive(Clone, Debug)]
pub struct HodographCurves {
    kind: CurveKind,
    f: RSeries,
    h: RSeries,
    r: f64,
}

/// Builds the curve family of `kind` for the problem's density and Hamiltonian.
pub fn hodograph_curves(problem: &HodographProblem, kind: CurveKind) -> HodographCurves {
    HodographCurves {
        kind,
        f: RSeries::new(problem.density.to_vec()),
        h: RSeries::new(problem.hamiltonian.to_vec()),
        r: problem.r,
    }
}

impl HodographCurves {
    /// Family kind.
    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    /// Value of the family's parameter at `(ξ, σ)`, or `None` where the
    /// denominator vanishes.
    pub fn value(&self, xi: f64, sigma: f64) -> Option<f64> {
        let d = |s: &RSeries, a: u32, b: u32| s.diff(0, a).diff(1, b).eval_f64(self.r, xi, sigma);
        match self.kind {
            CurveKind::TimeFamily => {
                let den = d(&self.h, 0, 2);
                (den != 0.0).then(|| -d(&self.f, 0, 2) / den)
            }
            CurveKind::SpaceFamily => {
                let den = d(&self.h, 2, 0);
                (den != 0.0).then(|| d(&self.f, 1, 1) - d(&self.f, 2, 0) * d(&self.h, 1, 1) / den)
            }
        }
    }

    /// Exact expansion `[c₀, c₁]` of the parameter to first order in `r`,
    /// when both coefficients are polynomials.
    pub fn expansion(&self) -> Result<[BiPoly; 2], HodographError> {
        let series = match self.kind {
            CurveKind::TimeFamily => {
                let q = self.f.diff(1, 2).div_exact(&self.h.diff(1, 2))?;
                RSeries::new(q.coeffs().iter().map(|c| -c).collect())
            }
            CurveKind::SpaceFamily => {
                let q = self.f.diff(0, 2).mul(&self.h.diff(0, 1).diff(1, 1)).div_exact(&self.h.diff(0, 2))?;
                self.f.diff(0, 1).diff(1, 1).sub(&q)
            }
        };
        Ok([series.coeff(0), series.coeff(1)])
    }

    /// Samples of the level set `value = level`: for each of `n` values of
    /// `ξ` in `(−1, 1)` every sign change in `σ ∈ (−1, 1)` is located by
    /// bisection.
    pub fn level_set(&self, level: f64, n: usize) -> Vec<[f64; 2]> {
        const SCAN: usize = 400;
        let mut out = Vec::new();
        for i in 0..n {
            let xi = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            let g = |s: f64| self.value(xi, s).map(|v| v - level);
            let grid: Vec<f64> = (0..=SCAN).map(|k| -1.0 + 2.0 * k as f64 / SCAN as f64).collect();
            for pair in grid.windows(2) {
                let (mut lo, mut hi) = (pair[0].max(-1.0 + 1e-9), pair[1].min(1.0 - 1e-9));
                let (Some(mut glo), Some(ghi)) = (g(lo), g(hi)) else { continue };
                if glo == 0.0 {
                    out.push([xi, lo]);
                    continue;
                }
                if glo * ghi >= 0.0 {
                    continue;
                }
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let Some(gm) = g(mid) else { break };
                    if (gm < 0.0) == (glo < 0.0) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                out.push([xi, 0.5 * (lo + hi)]);
            }
        }
        out
    }
}

/// Physical layer variables derived from `(ξ, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerState {
    /// Interface displacement.
    pub xi: f64,
    /// Momentum shear.
    pub sigma: f64,
    /// Velocity shear `w = ū₂ − ū₁ = σ/(1 − rξ)`.
    pub w: f64,
    /// Upper-layer mean velocity `−½ w (1 + ξ)`.
    pub u1: f64,
    /// Lower-layer mean velocity `½ w (1 − ξ)`.
    pub u2: f64,
}

/// Converts `(ξ, σ)` to layer variables (unit mean density).
pub fn to_layer_variables(state: [f64; 2], params: &ModelParams) -> Result<LayerState, HodographError> {
    let [xi, sigma] = state;
    if !(xi.abs() < 1.0) {
        return Err(ModelError::OutsideDomain(xi, sigma).into());
    }
    let w = sigma / (1.0 - params.r() * xi);
    Ok(LayerState {
        xi,
        sigma,
        w,
        u1: -0.5 * w * (1.0 + xi),
        u2: 0.5 * w * (1.0 - xi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::deformed_family;
    use crate::models::Order;

    fn problem(r: f64, mode: InitialMode) -> HodographProblem {
        let fam = deformed_family(3).unwrap();
        let params = ModelParams::boussinesq(r, Order::FirstOrder).unwrap();
        HodographProblem::new(&fam[2], &params, mode).unwrap()
    }

    #[test]
    fn zero_r_profile_is_closed_form() {
        let p = problem(0.0, InitialMode::SigmaZero);
        for x in [-0.5, 0.0, 0.3] {
            let [xi, sigma] = solve_initial_condition(&p, x, Expansion::Exact).unwrap();
            assert!((xi - ((1.0 - x) / 3.0).sqrt()).abs() < 1e-13);
            assert_eq!(sigma, 0.0);
        }
    }

    #[test]
    fn linearized_xi_constant_start_is_exactly_r() {
        let p = problem(0.05, InitialMode::XiConstant);
        let [xi, sigma] = solve_initial_condition(&p, 0.2, Expansion::Linearized).unwrap();
        assert!((xi - 0.05).abs() < 1e-13);
        assert!((sigma - (0.8f64 / 3.0).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn parity_is_enforced() {
        let fam = deformed_family(4).unwrap();
        let params = ModelParams::boussinesq(0.05, Order::FirstOrder).unwrap();
        assert!(matches!(
            HodographProblem::new(&fam[3], &params, InitialMode::SigmaZero),
            Err(HodographError::Parity("sigma"))
        ));
    }

    #[test]
    fn undeformed_density_is_rejected_at_positive_r() {
        let fam = crate::conserved::generate_polynomial_family(3, VarPair::XiSigma).unwrap();
        let params = ModelParams::boussinesq(0.05, Order::FirstOrder).unwrap();
        assert!(matches!(
            HodographProblem::new(&fam[2], &params, InitialMode::SigmaZero),
            Err(HodographError::NotConserved)
        ));
    }

    #[test]
    fn layer_variables() {
        let params = ModelParams::boussinesq(0.0, Order::Full).unwrap();
        let s = to_layer_variables([0.0, 0.4], &params).unwrap();
        assert_eq!((s.w, s.u1, s.u2), (0.4, -0.2, 0.2));
        let s = to_layer_variables([0.3, 0.0], &params).unwrap();
        assert_eq!((s.w, s.u1, s.u2), (0.0, 0.0, 0.0));
        assert!(to_layer_variables([1.0, 0.0], &params).is_err());
    }

    #[test]
    fn singular_system_is_detected() {
        assert!(solve2([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0]).is_none());
        assert_eq!(solve2([[2.0, 0.0], [0.0, 4.0]], [2.0, 2.0]), Some([1.0, 0.5]));
    }
}
