//! Method-of-lines integrator for `ξ_t = −(H_σ)_x`, `σ_t = −(H_ξ)_x`.
//!
//! The simulator is an independent numerical oracle for the analytic
//! modules. Two conservative schemes are provided:
//!
//! * [`Scheme::CentralRk4`]: second-order central flux with a fourth-difference
//!   dissipation flux, integrated by classical RK4;
//! * [`Scheme::LaxFriedrichs`]: first-order local Lax–Friedrichs (Rusanov)
//!   flux with forward Euler, a robust fallback near steep gradients.
//!
//! Both are written in flux form, so the discrete sums of `ξ` and `σ` change
//! only through the boundaries. Every stage checks that the state stays in
//! the hyperbolic region; elliptic entry aborts the run.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conserved::ConservedDensity;
use crate::hodograph::{HodographError, HodographProblem};
use crate::models::{HamiltonianDensity, ModelError};
use crate::spectral::boussinesq_invariants;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// Complex characteristic speeds: the initial-value problem is ill-posed.
    #[error("elliptic region entered at x = {x} (xi = {xi}, sigma = {sigma}), t = {t}")]
    Elliptic { x: f64, xi: f64, sigma: f64, t: f64 },
    /// The state left the physical square `|ξ|, |σ| < 1`.
    #[error("state left the physical domain at x = {x} (xi = {xi}, sigma = {sigma}), t = {t}")]
    OutsideDomain { x: f64, xi: f64, sigma: f64, t: f64 },
    /// Requested time step exceeds the CFL limit.
    #[error("CFL number {0} exceeds the limit 0.5")]
    Cfl(f64),
    /// Invalid grid or configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Boundary data could not be produced.
    #[error("boundary data: {0}")]
    Boundary(#[from] HodographError),
    /// Error from the model layer.
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Spatial discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Rusanov flux with forward Euler (first order).
    LaxFriedrichs,
    /// Central flux, fourth-difference dissipation and RK4 (second order).
    CentralRk4,
}

impl Scheme {
    /// Nominal order of accuracy on smooth solutions.
    pub fn order(self) -> u32 {
        match self {
            Scheme::LaxFriedrichs => 1,
            Scheme::CentralRk4 => 2,
        }
    }
}

/// Largest admissible CFL number.
pub const MAX_CFL: f64 = 0.5;
/// Ghost cells on each side.
pub const GHOST: usize = 2;
/// Default coefficient of the fourth-difference dissipation flux.
pub const DEFAULT_DISSIPATION: f64 = 1.0 / 32.0;

/// Source of prescribed boundary values.
pub trait BoundaryData: Send {
    /// State `(ξ, σ)` at position `x` and time `t`.
    fn value(&mut self, x: f64, t: f64) -> Result<[f64; 2], SimError>;
}

/// Ghost-cell treatment.
pub enum Boundary {
    /// Periodic grid.
    Periodic,
    /// Ghost cells copy the nearest boundary node.
    ConstantExtension,
    /// Ghost cells take externally prescribed values.
    Prescribed(Box<dyn BoundaryData>),
}

impl std::fmt::Debug for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("Periodic"),
            Boundary::ConstantExtension => f.write_str("ConstantExtension"),
            Boundary::Prescribed(_) => f.write_str("Prescribed"),
        }
    }
}

/// Fields on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    /// Node positions.
    pub x: Vec<f64>,
    /// Interface displacement.
    pub xi: Vec<f64>,
    /// Momentum shear.
    pub sigma: Vec<f64>,
    /// Time.
    pub t: f64,
    /// Grid spacing.
    pub dx: f64,
    /// `true` for a periodic grid (the node at `b` is identified with `a`).
    pub periodic: bool,
}

impl GridState {
    /// Periodic grid of `n` nodes on `[a, b)`.
    pub fn periodic(n: usize, a: f64, b: f64, init: impl Fn(f64) -> [f64; 2]) -> Result<Self, SimError> {
        if n < 4 || !(b > a) {
            return Err(SimError::Config(format!("periodic grid needs n >= 4 and b > a (n = {n})")));
        }
        let dx = (b - a) / n as f64;
        Ok(Self::sample((0..n).map(|i| a + dx * i as f64).collect(), dx, true, init))
    }

    /// Bounded grid of `n` nodes on `[a, b]`, endpoints included.
    pub fn bounded(n: usize, a: f64, b: f64, init: impl Fn(f64) -> [f64; 2]) -> Result<Self, SimError> {
        if n < 4 || !(b > a) {
            return Err(SimError::Config(format!("bounded grid needs n >= 4 and b > a (n = {n})")));
        }
        let dx = (b - a) / (n - 1) as f64;
        Ok(Self::sample((0..n).map(|i| a + dx * i as f64).collect(), dx, false, init))
    }

    /// Bounded grid sampled from fallible initial data.
    pub fn try_bounded(
        n: usize,
        a: f64,
        b: f64,
        mut init: impl FnMut(f64) -> Result<[f64; 2], SimError>,
    ) -> Result<Self, SimError> {
        let mut state = Self::bounded(n, a, b, |_| [0.0, 0.0])?;
        for i in 0..n {
            [state.xi[i], state.sigma[i]] = init(state.x[i])?;
        }
        Ok(state)
    }

    fn sample(x: Vec<f64>, dx: f64, periodic: bool, init: impl Fn(f64) -> [f64; 2]) -> Self {
        let (xi, sigma) = x.iter().map(|&p| init(p)).map(|[a, b]| (a, b)).unzip();
        Self {
            x,
            xi,
            sigma,
            t: 0.0,
            dx,
            periodic,
        }
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    /// `true` for an empty grid.
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Discrete integral of `f(ξ, σ)`: rectangle rule on periodic grids
    /// (spectrally accurate) and trapezoidal rule on bounded ones.
    pub fn integral(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let n = self.len();
        let sum: f64 = (0..n)
            .map(|i| {
                let w = if !self.periodic && (i == 0 || i == n - 1) { 0.5 } else { 1.0 };
                w * f(self.xi[i], self.sigma[i])
            })
            .sum();
        sum * self.dx
    }

    /// Largest characteristic speed magnitude; fails at elliptic or
    /// out-of-domain nodes.
    pub fn max_speed(&self, h: &HamiltonianDensity) -> Result<f64, SimError> {
        let mut m = 0.0f64;
        for i in 0..self.len() {
            m = m.max(admissible_speed(h, self.x[i], self.xi[i], self.sigma[i], self.t)?);
        }
        Ok(m)
    }

    /// Linear interpolation of `(ξ, σ)` at `x` (wrapping on periodic grids,
    /// clamped otherwise).
    pub fn interpolate(&self, x: f64) -> [f64; 2] {
        let n = self.len();
        let s = (x - self.x[0]) / self.dx;
        let (i0, frac) = if self.periodic {
            let s = s.rem_euclid(n as f64);
            let i = (s.floor() as usize).min(n - 1);
            (i, s - i as f64)
        } else {
            let s = s.clamp(0.0, (n - 1) as f64);
            let i = (s.floor() as usize).min(n - 2);
            (i, s - i as f64)
        };
        let i1 = if self.periodic { (i0 + 1) % n } else { i0 + 1 };
        [
            self.xi[i0] + frac * (self.xi[i1] - self.xi[i0]),
            self.sigma[i0] + frac * (self.sigma[i1] - self.sigma[i0]),
        ]
    }
}

/// Largest speed magnitude at a node after checking admissibility.
fn admissible_speed(h: &HamiltonianDensity, x: f64, xi: f64, sigma: f64, t: f64) -> Result<f64, SimError> {
    if !(xi.abs() < 1.0 && sigma.abs() < 1.0) {
        return Err(SimError::OutsideDomain { x, xi, sigma, t });
    }
    let [lo, hi] = h
        .characteristic_speeds(xi, sigma)
        .ok_or(SimError::Elliptic { x, xi, sigma, t })?;
    Ok(lo.abs().max(hi.abs()))
}

/// Time step for a CFL number `cfl ≤ 0.5`.
pub fn stable_dt(state: &GridState, h: &HamiltonianDensity, cfl: f64) -> Result<f64, SimError> {
    if !(cfl > 0.0 && cfl <= MAX_CFL) {
        return Err(SimError::Cfl(cfl));
    }
    let speed = state.max_speed(h)?;
    Ok(cfl * state.dx / speed.max(1e-12))
}

/// Fields padded with [`GHOST`] cells on each side.
struct Padded {
    xi: Vec<f64>,
    sigma: Vec<f64>,
}

fn pad(state: &GridState, xi: &[f64], sigma: &[f64], t: f64, boundary: &mut Boundary) -> Result<Padded, SimError> {
    let n = xi.len();
    let mut p = Padded {
        xi: vec![0.0; n + 2 * GHOST],
        sigma: vec![0.0; n + 2 * GHOST],
    };
    p.xi[GHOST..GHOST + n].copy_from_slice(xi);
    p.sigma[GHOST..GHOST + n].copy_from_slice(sigma);
    for k in 1..=GHOST {
        let (left, right) = (GHOST - k, GHOST + n - 1 + k);
        let (l, r) = match boundary {
            Boundary::Periodic => ([xi[n - k], sigma[n - k]], [xi[k - 1], sigma[k - 1]]),
            Boundary::ConstantExtension => ([xi[0], sigma[0]], [xi[n - 1], sigma[n - 1]]),
            Boundary::Prescribed(data) => {
                let xl = state.x[0] - state.dx * k as f64;
                let xr = state.x[n - 1] + state.dx * k as f64;
                (data.value(xl, t)?, data.value(xr, t)?)
            }
        };
        [p.xi[left], p.sigma[left]] = l;
        [p.xi[right], p.sigma[right]] = r;
    }
    Ok(p)
}

/// Semi-discrete right-hand side `−(F_{i+½} − F_{i−½})/Δx` of both schemes.
fn rhs(
    state: &GridState,
    h: &HamiltonianDensity,
    xi: &[f64],
    sigma: &[f64],
    t: f64,
    scheme: Scheme,
    dissipation: f64,
    boundary: &mut Boundary,
) -> Result<[Vec<f64>; 2], SimError> {
    let n = xi.len();
    let p = pad(state, xi, sigma, t, boundary)?;
    let m = n + 2 * GHOST;
    let fluxes: Vec<[f64; 2]> = (0..m).into_par_iter().map(|j| h.flux(p.xi[j], p.sigma[j])).collect();
    let speeds: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let x = state.x[0] + state.dx * (j as f64 - GHOST as f64);
            admissible_speed(h, x, p.xi[j], p.sigma[j], t)
        })
        .collect::<Result<_, _>>()?;
    let a_max = speeds.iter().fold(0.0f64, |a, &b| a.max(b));
    // Interface j + ½ between padded cells j and j + 1, for j = GHOST−1 .. GHOST+n−1.
    let interface = |j: usize| -> [f64; 2] {
        let u = [&p.xi, &p.sigma];
        let mut out = [0.0; 2];
        for c in 0..2 {
            let central = 0.5 * (fluxes[j][c] + fluxes[j + 1][c]);
            out[c] = match scheme {
                Scheme::LaxFriedrichs => central - 0.5 * speeds[j].max(speeds[j + 1]) * (u[c][j + 1] - u[c][j]),
                Scheme::CentralRk4 => {
                    central
                        + dissipation * a_max * (u[c][j + 2] - 3.0 * u[c][j + 1] + 3.0 * u[c][j] - u[c][j - 1])
                }
            };
        }
        out
    };
    let faces: Vec<[f64; 2]> = (GHOST - 1..GHOST + n).into_par_iter().map(interface).collect();
    let mut out = [vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        for c in 0..2 {
            out[c][i] = -(faces[i + 1][c] - faces[i][c]) / state.dx;
        }
    }
    Ok(out)
}

fn axpy(base: &[f64], k: &[f64], a: f64) -> Vec<f64> {
    base.iter().zip(k).map(|(b, k)| b + a * k).collect()
}

/// Advances `state` by `dt`.
///
/// Fails when `dt` exceeds the CFL limit for the current state, or when any
/// stage leaves the hyperbolic region.
pub fn step(
    state: &GridState,
    h: &HamiltonianDensity,
    scheme: Scheme,
    dt: f64,
    dissipation: f64,
    boundary: &mut Boundary,
) -> Result<GridState, SimError> {
    if state.periodic != matches!(boundary, Boundary::Periodic) {
        return Err(SimError::Config("periodic grids need periodic boundaries and vice versa".into()));
    }
    let cfl = dt * state.max_speed(h)? / state.dx;
    if cfl > MAX_CFL * (1.0 + 1e-12) {
        return Err(SimError::Cfl(cfl));
    }
    let t = state.t;
    let (xi, sigma) = (&state.xi, &state.sigma);
    let mut f = |a: &[f64], b: &[f64], tt: f64| rhs(state, h, a, b, tt, scheme, dissipation, boundary);
    let (new_xi, new_sigma) = match scheme {
        Scheme::LaxFriedrichs => {
            let [k0, k1] = f(xi, sigma, t)?;
            (axpy(xi, &k0, dt), axpy(sigma, &k1, dt))
        }
        Scheme::CentralRk4 => {
            let [a0, a1] = f(xi, sigma, t)?;
            let [b0, b1] = f(&axpy(xi, &a0, 0.5 * dt), &axpy(sigma, &a1, 0.5 * dt), t + 0.5 * dt)?;
            let [c0, c1] = f(&axpy(xi, &b0, 0.5 * dt), &axpy(sigma, &b1, 0.5 * dt), t + 0.5 * dt)?;
            let [d0, d1] = f(&axpy(xi, &c0, dt), &axpy(sigma, &c1, dt), t + dt)?;
            let combine = |u: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
                (0..u.len())
                    .map(|i| u[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
                    .collect()
            };
            (combine(xi, &a0, &b0, &c0, &d0), combine(sigma, &a1, &b1, &c1, &d1))
        }
    };
    let next = GridState {
        x: state.x.clone(),
        xi: new_xi,
        sigma: new_sigma,
        t: t + dt,
        dx: state.dx,
        periodic: state.periodic,
    };
    next.max_speed(h)?;
    Ok(next)
}

/// Run parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Spatial scheme.
    pub scheme: Scheme,
    /// CFL number (at most 0.5).
    pub cfl: f64,
    /// Final time.
    pub t_end: f64,
    /// Times at which snapshots are stored (the final state is always kept).
    pub snapshot_times: Vec<f64>,
    /// Coefficient of the fourth-difference dissipation flux.
    pub dissipation: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::CentralRk4,
            cfl: 0.4,
            t_end: 1.0,
            snapshot_times: Vec::new(),
            dissipation: DEFAULT_DISSIPATION,
        }
    }
}

/// Characteristic family traced by [`run_with_traces`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Faster family, carrying `R₊`.
    Plus,
    /// Slower family, carrying `R₋`.
    Minus,
}

/// One traced characteristic with the invariant it carries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicTrace {
    /// Family.
    pub family: Family,
    /// Positions (unwrapped) at each recorded time.
    pub x: Vec<f64>,
    /// Value of the carried Riemann invariant at each recorded time.
    pub invariant: Vec<f64>,
}

impl CharacteristicTrace {
    /// `max_t |R(t) − R(0)|`.
    pub fn drift(&self) -> f64 {
        let r0 = self.invariant[0];
        self.invariant.iter().fold(0.0, |m, r| m.max((r - r0).abs()))
    }
}

/// Output of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    /// Initial state, requested snapshots and the final state, in time order.
    pub snapshots: Vec<GridState>,
    /// Number of time steps taken.
    pub steps: usize,
    /// Traced characteristics (empty unless requested).
    pub traces: Vec<CharacteristicTrace>,
}

impl RunOutput {
    /// Final state.
    pub fn final_state(&self) -> &GridState {
        self.snapshots.last().expect("a run stores at least its initial state")
    }
}

/// Integrates from `initial` to `config.t_end`.
pub fn run(
    initial: GridState,
    h: &HamiltonianDensity,
    config: &RunConfig,
    boundary: &mut Boundary,
) -> Result<RunOutput, SimError> {
    run_with_traces(initial, h, config, boundary, &[])
}

fn characteristic_speed(h: &HamiltonianDensity, w: [f64; 2], family: Family) -> Option<f64> {
    let [lo, hi] = h.characteristic_speeds(w[0], w[1])?;
    Some(match family {
        Family::Plus => hi,
        Family::Minus => lo,
    })
}

fn carried_invariant(w: [f64; 2], family: Family) -> f64 {
    let [plus, minus] = boussinesq_invariants(w[0], w[1]);
    match family {
        Family::Plus => plus,
        Family::Minus => minus,
    }
}

/// Integrates and additionally traces characteristics `dx/dt = λ±` starting
/// at the given `(position, family)` pairs, recording the Riemann invariant
/// `R±` of the Boussinesq system they carry. The traces are advanced by
/// Heun's method with speeds interpolated linearly from the grid.
pub fn run_with_traces(
    initial: GridState,
    h: &HamiltonianDensity,
    config: &RunConfig,
    boundary: &mut Boundary,
    starts: &[(f64, Family)],
) -> Result<RunOutput, SimError> {
    if !(config.t_end >= 0.0) {
        return Err(SimError::Config(format!("negative final time {}", config.t_end)));
    }
    if !(config.cfl > 0.0 && config.cfl <= MAX_CFL) {
        return Err(SimError::Cfl(config.cfl));
    }
    initial.max_speed(h)?;
    let mut targets: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > initial.t && t < config.t_end)
        .collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    targets.push(config.t_end);

    let speed_at = |s: &GridState, x: f64, family: Family| -> Result<f64, SimError> {
        let w = s.interpolate(x);
        characteristic_speed(h, w, family).ok_or(SimError::Elliptic {
            x,
            xi: w[0],
            sigma: w[1],
            t: s.t,
        })
    };
    let mut traces: Vec<CharacteristicTrace> = starts
        .iter()
        .map(|&(x, family)| CharacteristicTrace {
            family,
            x: vec![x],
            invariant: vec![carried_invariant(initial.interpolate(x), family)],
        })
        .collect();

    let mut snapshots = vec![initial.clone()];
    let mut state = initial;
    let mut steps = 0;
    for target in targets {
        while state.t < target {
            let dt = stable_dt(&state, h, config.cfl)?.min(target - state.t);
            let next = step(&state, h, config.scheme, dt, config.dissipation, boundary)?;
            for tr in &mut traces {
                let x0 = *tr.x.last().expect("traces start with one point");
                let v0 = speed_at(&state, x0, tr.family)?;
                let x_pred = x0 + dt * v0;
                let v1 = speed_at(&next, x_pred, tr.family)?;
                let x1 = x0 + 0.5 * dt * (v0 + v1);
                tr.x.push(x1);
                tr.invariant.push(carried_invariant(next.interpolate(x1), tr.family));
            }
            state = next;
            steps += 1;
            if target - state.t < 1e-14 * target.abs().max(1.0) {
                state.t = target;
            }
        }
        snapshots.push(state.clone());
    }
    Ok(RunOutput {
        snapshots,
        steps,
        traces,
    })
}

/// Time series of integrals of monitored densities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    /// Labels of the monitored quantities.
    pub labels: Vec<String>,
    /// Times of the samples.
    pub times: Vec<f64>,
    /// `values[k][s]`: integral of quantity `k` at sample `s`.
    pub values: Vec<Vec<f64>>,
}

impl DriftReport {
    /// Baseline (first sample) of quantity `k`.
    pub fn baseline(&self, k: usize) -> f64 {
        self.values[k][0]
    }

    /// `|value(t) − value(0)|` series of quantity `k`.
    pub fn drift(&self, k: usize) -> Vec<f64> {
        let v0 = self.baseline(k);
        self.values[k].iter().map(|v| (v - v0).abs()).collect()
    }

    /// Largest drift of quantity `k`.
    pub fn max_drift(&self, k: usize) -> f64 {
        self.drift(k).into_iter().fold(0.0, f64::max)
    }
}

/// A monitored quantity: a conserved density or a Casimir.
#[derive(Clone, Debug)]
pub enum Monitored {
    /// `∫ ξ dx`.
    Xi,
    /// `∫ σ dx`.
    Sigma,
    /// `∫ F dx` for a density, evaluated at the inertia parameter `r`.
    Density { label: String, density: ConservedDensity, r: f64 },
}

impl Monitored {
    fn label(&self) -> String {
        match self {
            Monitored::Xi => "int xi".into(),
            Monitored::Sigma => "int sigma".into(),
            Monitored::Density { label, .. } => label.clone(),
        }
    }

    fn integral(&self, s: &GridState) -> Result<f64, SimError> {
        match self {
            Monitored::Xi => Ok(s.integral(|xi, _| xi)),
            Monitored::Sigma => Ok(s.integral(|_, sigma| sigma)),
            Monitored::Density { density, r, label } => {
                let d = density.density();
                d.eval_f64(*r, 0.0, 0.0)
                    .ok_or_else(|| SimError::Config(format!("{label} cannot be evaluated numerically")))?;
                Ok(s.integral(|xi, sigma| d.eval_f64(*r, xi, sigma).unwrap_or(f64::NAN)))
            }
        }
    }
}

/// Integrals of the monitored quantities over a state history.
pub fn monitor(history: &[GridState], quantities: &[Monitored]) -> Result<DriftReport, SimError> {
    let values = quantities
        .iter()
        .map(|q| history.iter().map(|s| q.integral(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DriftReport {
        labels: quantities.iter().map(Monitored::label).collect(),
        times: history.iter().map(|s| s.t).collect(),
        values,
    })
}

/// Boundary values from a hodograph solution, tracked in time by Newton
/// iteration seeded with the previous value at the same position.
#[derive(Debug)]
pub struct HodographBoundary {
    problem: HodographProblem,
    cache: Vec<(f64, f64, [f64; 2])>,
}

impl HodographBoundary {
    /// Wraps a hodograph problem whose initial data are available at every
    /// ghost position.
    pub fn new(problem: HodographProblem) -> Self {
        Self {
            problem,
            cache: Vec::new(),
        }
    }

    /// Underlying problem.
    pub fn problem(&self) -> &HodographProblem {
        &self.problem
    }
}

impl BoundaryData for HodographBoundary {
    fn value(&mut self, x: f64, t: f64) -> Result<[f64; 2], SimError> {
        let tol = 1e-12 * x.abs().max(1.0);
        let entry = self.cache.iter_mut().find(|(cx, _, _)| (cx - x).abs() <= tol);
        let (t_prev, seed) = match &entry {
            Some((_, tp, w)) => (*tp, *w),
            None => (
                0.0,
                crate::hodograph::solve_initial_condition(&self.problem, x, crate::hodograph::Expansion::Exact)?,
            ),
        };
        // Sub-step when the jump from the cached time is large.
        let steps = ((t - t_prev).abs() / 0.02).ceil().max(1.0) as usize;
        let mut w = seed;
        for k in 1..=steps {
            let tk = t_prev + (t - t_prev) * k as f64 / steps as f64;
            w = self.problem.solve_point(x, tk, w)?;
        }
        match entry {
            Some(e) => *e = (x, t, w),
            None => self.cache.push((x, t, w)),
        }
        Ok(w)
    }
}
