//! Hyperbolicity geometry and Riemann-invariant analysis.
//!
//! All geometry is computed in the nondimensional variables of [`crate::models`]:
//! `ξ` in units of the half depth and `σ` in Boussinesq units `ρ̄√(2g̃h)` or
//! fixed-gravity units `ρ̄√(2gh)`, as selected by [`Scaling`]. The sonic line is
//! the curve `H_ξξ = 0`; for the full model in Boussinesq units it is
//! `|σ| = σ_b(ξ) = √((1−rξ)³/(1−r²))`.

use std::f64::consts::FRAC_PI_2;

use ode_solvers::{Dopri5, System, Vector1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{hamiltonian, HamiltonianDensity, ModelError, ModelParams, Order, Scaling};

/// Errors raised by the spectral analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// Invalid model selection.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The sonic line leaves the strip `|ξ| < 1` (the region is unbounded).
    #[error("the hyperbolicity region is unbounded for this model (sonic line missing at xi = {0})")]
    Unbounded(f64),
    /// The starting point is not strictly hyperbolic.
    #[error("start point ({0}, {1}) is not strictly inside the hyperbolicity region")]
    OutsideRegion(f64, f64),
    /// The ODE integrator failed.
    #[error("simple-wave integration failed: {0}")]
    Integration(String),
    /// The trigonometric form of the invariants is singular at this angle.
    #[error("Riemann invariants are singular at phi = {0}")]
    SingularAngle(f64),
    /// `ξ` lies outside `(−1, 1)`.
    #[error("xi = {0} lies outside (-1, 1)")]
    OutsideStrip(f64),
}

/// Geometry of the hyperbolicity region of one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    /// Inertia parameter.
    pub r: f64,
    /// Unit system of `σ`.
    pub scaling: Scaling,
    /// Truncation order of the model.
    pub order: Order,
    /// Area of `{|ξ| < 1, |σ| < σ_b(ξ)}`: the closed form when one exists,
    /// otherwise the quadrature value.
    pub area: f64,
    /// Double-exponential quadrature of `∫ 2σ_b dξ` over `(−1, 1)`.
    pub quadrature_area: f64,
    /// Closed-form area, when available for this model.
    pub closed_form_area: Option<f64>,
    #[serde(skip)]
    model: Option<HamiltonianDensity>,
}

impl HyperbolicityReport {
    /// Sonic boundary `σ_b(ξ)` for `|ξ| < 1`.
    pub fn boundary(&self, xi: f64) -> f64 {
        self.model
            .as_ref()
            .and_then(|h| h.sonic_sigma(xi))
            .unwrap_or(f64::INFINITY)
    }

    /// `n` samples `(ξ, σ_b(ξ))` on the closed interval `[−1, 1]`.
    pub fn boundary_samples(&self, n: usize) -> Vec<[f64; 2]> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let xi = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                [xi, self.boundary(xi)]
            })
            .collect()
    }
}

/// Closed-form area `4((1+r)^{5/2} − (1−r)^{5/2}) / (5r√(1−r²))` of the
/// Boussinesq-unit region of the full model, with its limit `4` at `r = 0`.
///
/// The difference of powers is evaluated as `(1−r)^{5/2}·expm1(5 artanh r)`
/// to avoid cancellation at small `r`.
pub fn boussinesq_area(r: f64) -> f64 {
    if r == 0.0 {
        return 4.0;
    }
    let difference = (1.0 - r).powf(2.5) * (5.0 * r.atanh()).exp_m1();
    4.0 * difference / (5.0 * r * (1.0 - r * r).sqrt())
}

fn closed_form_area(params: &ModelParams) -> Option<f64> {
    let r = params.r();
    match (params.scaling(), params.order()) {
        (Scaling::Boussinesq, Order::Full) => Some(boussinesq_area(r)),
        (Scaling::Boussinesq, Order::ZerothOrder) => Some(4.0),
        (Scaling::Boussinesq, Order::FirstOrder) if r == 0.0 => Some(4.0),
        (Scaling::Boussinesq, Order::FirstOrder) => {
            Some(4.0 * ((1.0 + 3.0 * r).sqrt() - (1.0 - 3.0 * r).sqrt()) / (3.0 * r))
        }
        (Scaling::FixedG, Order::Full) => Some(r.sqrt() * boussinesq_area(r)),
        (Scaling::FixedG, _) => Some(0.0),
    }
}

/// Boundary and area of the hyperbolicity region of `params`.
pub fn hyperbolic_boundary(params: &ModelParams) -> Result<HyperbolicityReport, SpectralError> {
    let h = hamiltonian(params);
    for xi in [-1.0, 1.0] {
        if h.sonic_sigma(xi).is_none() {
            return Err(SpectralError::Unbounded(xi));
        }
    }
    let quadrature_area = quadrature::double_exponential::integrate(
        |xi| 2.0 * h.sonic_sigma(xi).unwrap_or(f64::INFINITY),
        -1.0,
        1.0,
        1e-13,
    )
    .integral;
    if !quadrature_area.is_finite() {
        return Err(SpectralError::Unbounded(f64::NAN));
    }
    let closed_form_area = closed_form_area(params);
    Ok(HyperbolicityReport {
        r: params.r(),
        scaling: params.scaling(),
        order: params.order(),
        area: closed_form_area.unwrap_or(quadrature_area),
        quadrature_area,
        closed_form_area,
        model: Some(h),
    })
}

/// Characteristic family of a simple wave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveFamily {
    /// Faster family: `dσ/dξ = +√(H_ξξ/H_σσ)`.
    Plus,
    /// Slower family: `dσ/dξ = −√(H_ξξ/H_σσ)`.
    Minus,
}

impl WaveFamily {
    fn sign(self) -> f64 {
        match self {
            WaveFamily::Plus => 1.0,
            WaveFamily::Minus => -1.0,
        }
    }
}

/// How a simple-wave curve ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveEnd {
    /// Reached the sonic line, where `dσ/dξ = 0`.
    SonicLine,
    /// Reached a layer limit `|ξ| = 1`, where `dσ/dξ` is infinite.
    LayerLimit,
}

/// A simple-wave curve through a start point, sampled from its lower-`ξ` end
/// to its upper-`ξ` end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleWaveCurve {
    /// Wave family.
    pub family: WaveFamily,
    /// Samples `(ξ, σ)`, increasing in `ξ`.
    pub points: Vec<[f64; 2]>,
    /// End conditions at the lower and upper ends.
    pub ends: [CurveEnd; 2],
}

/// `2H_ξξ (1−ξ²)/g(ξ)`, the square of `dσ/dθ` along a simple wave.
fn wave_radicand(h: &HamiltonianDensity, xi: f64, sigma: f64) -> f64 {
    2.0 * h.hessian(xi, sigma).xx / h.reduced_kinetic(xi)
}

/// Simple-wave ODE in the angle `θ = arcsin ξ`:
/// `dσ/dθ = ±√(H_ξξ (1−ξ²)/H_σσ)`, regular at `|ξ| = 1`.
///
/// The independent variable is the distance `s ≥ 0` from the start angle,
/// `θ = θ₀ + direction·s`, so that the integrator always runs forward. Past
/// the sonic line the radicand is clamped to zero; the caller truncates there.
struct SimpleWaveOde<'a> {
    h: &'a HamiltonianDensity,
    sign: f64,
    theta0: f64,
    direction: f64,
}

impl System<f64, Vector1<f64>> for SimpleWaveOde<'_> {
    fn system(&self, s: f64, y: &Vector1<f64>, dy: &mut Vector1<f64>) {
        let xi = (self.theta0 + self.direction * s).sin();
        dy[0] = self.direction * self.sign * wave_radicand(self.h, xi, y[0]).max(0.0).sqrt();
    }
}

/// Number of dense-output intervals per half curve.
const WAVE_SAMPLES: f64 = 4000.0;

/// Integrates the simple wave of `family` through `start = (ξ, σ)` in both
/// directions until it meets the sonic line or a layer limit.
///
/// `tol` is the relative and absolute tolerance of the embedded 4/5 pair. The
/// sonic-line end point is located by linear interpolation of the radicand
/// between the last two dense-output samples.
pub fn simple_wave_curve(
    start: [f64; 2],
    params: &ModelParams,
    family: WaveFamily,
    tol: f64,
) -> Result<SimpleWaveCurve, SpectralError> {
    let h = hamiltonian(params);
    let [xi0, sigma0] = start;
    if !(xi0.abs() < 1.0) || !h.is_hyperbolic(xi0, sigma0) {
        return Err(SpectralError::OutsideRegion(xi0, sigma0));
    }
    let theta0 = xi0.asin();
    let threshold = 1e-12 * wave_radicand(&h, xi0, 0.0).abs();
    let mut halves = Vec::with_capacity(2);
    for end in [-FRAC_PI_2, FRAC_PI_2] {
        let direction = (end - theta0).signum();
        let ode = SimpleWaveOde {
            h: &h,
            sign: family.sign(),
            theta0,
            direction,
        };
        let length = (end - theta0).abs();
        let mut solver = Dopri5::new(ode, 0.0, length, length / WAVE_SAMPLES, Vector1::new(sigma0), tol, tol);
        solver
            .integrate()
            .map_err(|e| SpectralError::Integration(e.to_string()))?;
        let samples: Vec<(f64, f64)> = solver
            .x_out()
            .iter()
            .zip(solver.y_out())
            .map(|(s, y)| (theta0 + direction * s, y[0]))
            .collect();
        let mut points = Vec::with_capacity(samples.len());
        let mut kind = CurveEnd::LayerLimit;
        let mut previous: Option<(f64, f64, f64)> = None;
        for &(theta, sigma) in &samples {
            let xi = theta.sin();
            let rad = wave_radicand(&h, xi, sigma);
            if rad <= threshold {
                kind = CurveEnd::SonicLine;
                match previous {
                    Some((t0, s0, r0)) if rad < 0.0 => {
                        let w = r0 / (r0 - rad);
                        points.push([(t0 + w * (theta - t0)).sin(), s0 + w * (sigma - s0)]);
                    }
                    _ => points.push([xi, sigma]),
                }
                break;
            }
            points.push([xi, sigma]);
            previous = Some((theta, sigma, rad));
        }
        halves.push((points, kind));
    }
    let (mut lower, lower_end) = halves.remove(0);
    let (upper, upper_end) = halves.remove(0);
    lower.reverse();
    lower.extend(upper.into_iter().skip(1));
    Ok(SimpleWaveCurve {
        family,
        points: lower,
        ends: [lower_end, upper_end],
    })
}

/// Slope `dσ/dξ` of the simple wave of `family` at `(ξ, σ)`: `±√(H_ξξ/H_σσ)`.
///
/// Returns `f64::INFINITY` (times the sign) at `|ξ| = 1` and `0` on the sonic
/// line.
pub fn simple_wave_slope(xi: f64, sigma: f64, params: &ModelParams, family: WaveFamily) -> f64 {
    let h = hamiltonian(params);
    let hxx = h.hessian(xi, sigma).xx.max(0.0);
    let hss = h.hessian(xi, sigma).ss;
    if hss <= 0.0 {
        return family.sign() * f64::INFINITY;
    }
    family.sign() * (hxx / hss).sqrt()
}

/// Unit tangent `(dξ, dσ)` of the upper sonic branch `σ = σ_b(ξ)`, oriented
/// with `dξ > 0`. The lower branch is its reflection `(dξ, −dσ)`.
///
/// For the full model in Boussinesq units the tangent is proportional to
/// `(2√(1−r²), −3r√(1−rξ))`.
pub fn sonic_tangent(xi: f64, params: &ModelParams) -> Result<[f64; 2], SpectralError> {
    if !(xi.abs() < 1.0) {
        return Err(SpectralError::OutsideStrip(xi));
    }
    let r = params.r();
    let (dxi, dsigma) = match (params.scaling(), params.order()) {
        (Scaling::Boussinesq, Order::Full) => (2.0 * (1.0 - r * r).sqrt(), -3.0 * r * (1.0 - r * xi).sqrt()),
        (Scaling::FixedG, Order::Full) => (
            2.0 * (1.0 - r * r).sqrt(),
            -3.0 * r * (r * (1.0 - r * xi)).sqrt(),
        ),
        (Scaling::Boussinesq, Order::FirstOrder) => {
            let d = 1.0 + 3.0 * r * xi;
            if d <= 0.0 {
                return Err(SpectralError::Unbounded(xi));
            }
            (2.0 * d.powf(1.5), -3.0 * r)
        }
        (_, Order::ZerothOrder) => (1.0, 0.0),
        (Scaling::FixedG, Order::FirstOrder) => unreachable!("rejected by ModelParams"),
    };
    let norm = dxi.hypot(dsigma);
    Ok([dxi / norm, dsigma / norm])
}

/// Sonic tangent in dimensional form with unit depth and unit mean density:
/// components `(dσ, dξ) = (−3r√(g̃(1−rξ)), √(2(1−r²)))`, `σ` measured in
/// `ρ̄√(h)` units and `g̃` the reduced gravity.
///
/// Rescaling `σ` by `√(2g̃)` recovers the direction of [`sonic_tangent`].
pub fn sonic_tangent_dimensional(xi: f64, r: f64, reduced_gravity: f64) -> [f64; 2] {
    [
        -3.0 * r * (reduced_gravity * (1.0 - xi * r)).sqrt(),
        (2.0 * (1.0 - r * r)).sqrt(),
    ]
}

/// Riemann invariants `[R₊, R₋] = [√((1−ξ²)(1−σ²)) − ξσ, √((1−ξ²)(1−σ²)) + ξσ]`
/// of the Boussinesq system. `R₊` is carried by the speed `λ₊`.
pub fn boussinesq_invariants(xi: f64, sigma: f64) -> [f64; 2] {
    let s = ((1.0 - xi * xi) * (1.0 - sigma * sigma)).sqrt();
    [s - xi * sigma, s + xi * sigma]
}

/// Characteristic speeds `[λ₊, λ₋] = −ξσ ± ½√((1−ξ²)(1−σ²))` of the Boussinesq
/// system `(ξ, σ)_t + A (ξ, σ)_x = 0`.
pub fn boussinesq_speeds(xi: f64, sigma: f64) -> [f64; 2] {
    let s = 0.5 * ((1.0 - xi * xi) * (1.0 - sigma * sigma)).sqrt();
    [-xi * sigma + s, -xi * sigma - s]
}

/// Speeds from Riemann invariants: `λ₊ = ¾R₊ − ¼R₋`, `λ₋ = ¼R₊ − ¾R₋`.
pub fn speeds_from_invariants(invariants: [f64; 2]) -> [f64; 2] {
    let [rp, rm] = invariants;
    [0.75 * rp - 0.25 * rm, 0.25 * rp - 0.75 * rm]
}

/// First-order Riemann data in the angle variables `ξ = sin θ`, `σ = sin φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    /// Inertia parameter.
    pub r: f64,
}

/// Riemann data for the Boussinesq-unit model of `params`.
pub fn riemann_invariants(params: &ModelParams) -> Result<RiemannData, SpectralError> {
    if params.scaling() != Scaling::Boussinesq {
        return Err(ModelError::InvalidCombination {
            scaling: params.scaling(),
            order: params.order(),
        }
        .into());
    }
    Ok(RiemannData { r: params.r() })
}

fn check_angle(phi: f64) -> Result<f64, SpectralError> {
    let t = (0.5 * phi).tan();
    if t.abs() < 1.0 - 1e-12 && phi.abs() < FRAC_PI_2 {
        Ok(t)
    } else {
        Err(SpectralError::SingularAngle(phi))
    }
}

impl RiemannData {
    /// Zeroth-order invariants `[cos(φ+θ), cos(φ−θ)]`.
    pub fn r0(&self, theta: f64, phi: f64) -> [f64; 2] {
        [(phi + theta).cos(), (phi - theta).cos()]
    }

    /// Zeroth-order invariants in angle form `[φ+θ, φ−θ]`.
    pub fn r0_angle(&self, theta: f64, phi: f64) -> [f64; 2] {
        [phi + theta, phi - theta]
    }

    /// First-order corrections
    /// `R¹± = (3/2) sin θ tan φ + 3 sin(θ±φ) artanh(tan(φ/2)) ∓ (5/2) cos θ`
    /// to the angle-form invariants.
    pub fn r1(&self, theta: f64, phi: f64) -> Result<[f64; 2], SpectralError> {
        let t = check_angle(phi)?;
        let base = 1.5 * theta.sin() * phi.tan();
        let a = t.atanh();
        Ok([
            base + 3.0 * (theta + phi).sin() * a - 2.5 * theta.cos(),
            base + 3.0 * (theta - phi).sin() * a + 2.5 * theta.cos(),
        ])
    }

    /// `R± = (φ±θ) + r R¹±`, invariant along the first-order characteristics
    /// modulo `r²`.
    pub fn invariants(&self, theta: f64, phi: f64) -> Result<[f64; 2], SpectralError> {
        let [a, b] = self.r0_angle(theta, phi);
        let [c, d] = self.r1(theta, phi)?;
        Ok([a + self.r * c, b + self.r * d])
    }

    /// Gradients `∂(R⁰±, R¹±)/∂(ξ, σ)` as `[[∂_ξ R₊, ∂_σ R₊], [∂_ξ R₋, ∂_σ R₋]]`
    /// of the first-order invariants.
    pub fn invariant_gradients(&self, theta: f64, phi: f64) -> Result<[[f64; 2]; 2], SpectralError> {
        let t = check_angle(phi)?;
        let a = t.atanh();
        // d/dφ artanh(tan(φ/2)) = 1/(2 cos φ).
        let da = 0.5 / phi.cos();
        let (st, ct) = theta.sin_cos();
        let sec2 = 1.0 / (phi.cos() * phi.cos());
        let mut out = [[0.0; 2]; 2];
        for (row, s) in [1.0, -1.0].into_iter().enumerate() {
            let u = theta + s * phi;
            let d_theta = 1.5 * ct * phi.tan() + 3.0 * u.cos() * a + s * 2.5 * st;
            let d_phi = 1.5 * st * sec2 + 3.0 * s * u.cos() * a + 3.0 * u.sin() * da;
            let r0_theta = s;
            let r0_phi = 1.0;
            out[row] = [
                (r0_theta + self.r * d_theta) / ct,
                (r0_phi + self.r * d_phi) / phi.cos(),
            ];
        }
        Ok(out)
    }

    /// Zeroth-order speeds `λ⁰± = ½(−2 sin θ sin φ ± cos θ cos φ)`.
    pub fn lambda0(&self, theta: f64, phi: f64) -> [f64; 2] {
        let a = -theta.sin() * phi.sin();
        let b = 0.5 * theta.cos() * phi.cos();
        [a + b, a - b]
    }

    /// First-order speed corrections
    /// `λ¹± = ¼(± sin θ (1 − 3tan²φ) cos θ cos φ + (3 cos 2θ − 1) sin φ)`.
    pub fn lambda1(&self, theta: f64, phi: f64) -> [f64; 2] {
        let a = 0.25 * (3.0 * (2.0 * theta).cos() - 1.0) * phi.sin();
        let b = 0.25 * theta.sin() * (1.0 - 3.0 * phi.tan().powi(2)) * theta.cos() * phi.cos();
        [a + b, a - b]
    }

    /// `λ⁰± + r λ¹±`.
    pub fn lambda(&self, theta: f64, phi: f64) -> [f64; 2] {
        let [a, b] = self.lambda0(theta, phi);
        let [c, d] = self.lambda1(theta, phi);
        [a + self.r * c, b + self.r * d]
    }
}
