//! Hyperbolicity region, simple waves, sonic tangents and Riemann data.

use std::f64::consts::FRAC_PI_2;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use stratiflow::models::{hamiltonian, ModelParams, Order, Scaling};
use stratiflow::spectral::{
    boussinesq_area, boussinesq_invariants, boussinesq_speeds, hyperbolic_boundary, riemann_invariants,
    simple_wave_curve, sonic_tangent, sonic_tangent_dimensional, speeds_from_invariants, CurveEnd, RiemannData,
    WaveFamily,
};

fn bous(r: f64) -> ModelParams {
    ModelParams::boussinesq(r, Order::Full).unwrap()
}

fn fixed_g(r: f64) -> ModelParams {
    ModelParams::new(r, Scaling::FixedG, Order::Full).unwrap()
}

#[test]
fn closed_form_area_matches_quadrature() {
    for r in [0.1, 0.5, 0.75, 0.9] {
        let report = hyperbolic_boundary(&bous(r)).unwrap();
        assert!((report.closed_form_area.unwrap() - report.quadrature_area).abs() < 1e-8, "r = {r}");
        let report = hyperbolic_boundary(&fixed_g(r)).unwrap();
        assert!((report.closed_form_area.unwrap() - report.quadrature_area).abs() < 1e-8, "r = {r}");
    }
}

#[test]
fn area_is_increasing_and_diverges_like_inverse_root() {
    let samples: Vec<f64> = (1..200).map(|i| boussinesq_area(i as f64 / 200.0)).collect();
    assert!(samples.windows(2).all(|w| w[1] > w[0]));
    // Near r = 1 the area behaves as 16/(5√(1−r)).
    let r: f64 = 1.0 - 1e-8;
    assert!((boussinesq_area(r) * (1.0 - r).sqrt() - 16.0 / 5.0).abs() < 1e-3);
}

#[test]
fn small_r_region_is_a_trapezoid() {
    let r = 1e-4;
    let report = hyperbolic_boundary(&bous(r)).unwrap();
    for xi in [-0.9, -0.3, 0.0, 0.5, 0.9] {
        assert!((report.boundary(xi) - (1.0 - 1.5 * r * xi)).abs() < 1e-7);
    }
}

#[test]
fn fixed_gravity_strip_shrinks() {
    let areas: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8]
        .iter()
        .map(|&r| hyperbolic_boundary(&fixed_g(r)).unwrap().area)
        .collect();
    assert!(areas.windows(2).all(|w| w[1] < w[0]));
    assert!(areas[3] < 1e-3);
    for r in [0.1, 0.4] {
        let a = hyperbolic_boundary(&fixed_g(r)).unwrap().area;
        assert!((a - r.sqrt() * boussinesq_area(r)).abs() < 1e-12);
    }
}

#[test]
fn fixed_gravity_boundary_at_upper_lid_peaks_at_known_r() {
    let at_lid = |r: f64| hyperbolic_boundary(&fixed_g(r)).unwrap().boundary(1.0);
    // Golden-section search on (0, 1).
    let (mut a, mut b) = (0.01, 0.99);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if at_lid(c) > at_lid(d) {
            b = d;
        } else {
            a = c;
        }
    }
    assert!((0.5 * (a + b) - (17f64.sqrt() - 3.0) / 4.0).abs() < 1e-6);
}

#[test]
fn simple_waves_at_zero_r_match_arcsine_closed_form() {
    let p = bous(0.0);
    for (start, family) in [([0.2, 0.3], WaveFamily::Plus), ([-0.4, 0.1], WaveFamily::Minus)] {
        let curve = simple_wave_curve(start, &p, family, 1e-12).unwrap();
        let s = if family == WaveFamily::Plus { 1.0 } else { -1.0 };
        let c = start[1].asin() - s * start[0].asin();
        for [xi, sigma] in &curve.points {
            let phase = s * xi.asin() + c;
            if phase.abs() < FRAC_PI_2 - 1e-3 {
                assert!((sigma - phase.sin()).abs() < 1e-8, "{xi} {sigma}");
            }
        }
        assert!(curve.ends.contains(&CurveEnd::SonicLine));
    }
}

#[test]
fn simple_waves_meet_region_edges_with_the_expected_tangents() {
    let p = bous(0.4);
    let report = hyperbolic_boundary(&p).unwrap();
    let curve = simple_wave_curve([0.0, 0.05], &p, WaveFamily::Plus, 1e-11).unwrap();
    let n = curve.points.len();
    let last = curve.points[n - 1];
    let first = curve.points[0];
    for (end, p0, p1) in [
        (curve.ends[0], first, curve.points[1]),
        (curve.ends[1], last, curve.points[n - 2]),
    ] {
        let slope = (p1[1] - p0[1]) / (p1[0] - p0[0]);
        match end {
            CurveEnd::SonicLine => {
                assert!((p0[1].abs() - report.boundary(p0[0])).abs() < 1e-4);
                assert!(slope.abs() < 0.05, "slope {slope}");
            }
            CurveEnd::LayerLimit => {
                assert!((p0[0].abs() - 1.0).abs() < 1e-9);
                assert!(slope.abs() > 20.0, "slope {slope}");
            }
        }
    }
}

#[test]
fn sonic_tangent_degenerates_only_at_the_extremes() {
    // r = 0: the sonic line is parallel to the simple-wave tangent (dσ = 0).
    let t = sonic_tangent_dimensional(0.3, 0.0, 1.0);
    assert_eq!(t[0], 0.0);
    assert!((t[1] - 2f64.sqrt()).abs() < 1e-15);
    // r = 1: the ξ component vanishes.
    assert_eq!(sonic_tangent_dimensional(0.3, 1.0, 1.0)[1], 0.0);
    for r in [0.1, 0.5, 0.9] {
        let [ds, dx] = sonic_tangent_dimensional(0.3, r, 1.0);
        assert!(ds.abs() > 1e-3 && dx.abs() > 1e-3);
    }
}

#[test]
fn sonic_tangent_forms_agree() {
    for r in [0.1, 0.5, 0.8] {
        for xi in [-0.5, 0.2, 0.7] {
            let [dx, ds] = sonic_tangent(xi, &bous(r)).unwrap();
            // σ in the dimensional form carries a factor √(2 g̃) with g̃ = 1.
            let [ds_dim, dx_dim] = sonic_tangent_dimensional(xi, r, 1.0);
            let cross = dx * ds_dim - ds * 2f64.sqrt() * dx_dim;
            assert!(cross.abs() < 1e-14, "r = {r}, xi = {xi}");
        }
    }
}

#[test]
fn small_r_lower_sonic_branch_points_along_two_three_r() {
    let r = 1e-5;
    let [dx, ds] = sonic_tangent(0.4, &bous(r)).unwrap();
    // Lower branch is the reflection (dξ, −dσ).
    assert!((-ds / dx - 1.5 * r).abs() < 1e-9);
}

#[test]
fn boussinesq_invariant_speed_relation_holds_at_random_points() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..10_000 {
        let (xi, sigma) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let l = speeds_from_invariants(boussinesq_invariants(xi, sigma));
        let s = boussinesq_speeds(xi, sigma);
        assert!((l[0] - s[0]).abs() < 1e-14 && (l[1] - s[1]).abs() < 1e-14);
        let h = hamiltonian(&bous(0.0));
        let [lo, hi] = h.characteristic_speeds(xi, sigma).unwrap();
        assert!((hi - s[0]).abs() < 1e-14 && (lo - s[1]).abs() < 1e-14);
    }
}

#[test]
fn relation_with_swapped_slow_pairing_fails() {
    // λ₋ = ¼(R₊ − 3R₋) paired with λ₊ = ¼(3R₋ − R₊) forces λ₋ = −λ₊.
    let (xi, sigma) = (0.3, 0.4);
    let [rp, rm] = boussinesq_invariants(xi, sigma);
    let speeds = [xi * sigma + 0.5 * ((1.0 - xi * xi) * (1.0 - sigma * sigma)).sqrt(), 0.0];
    let slow_reflected = xi * sigma - 0.5 * ((1.0 - xi * xi) * (1.0 - sigma * sigma)).sqrt();
    assert!((0.25 * (3.0 * rm - rp) - speeds[0]).abs() < 1e-15);
    assert!((0.25 * (rp - 3.0 * rm) - slow_reflected).abs() > 0.1);
}

/// Residual `max |∇R · A − λ ∇R|` of the first-order invariants against the
/// first-order quasilinear matrix.
fn invariant_residual(r: f64, theta: f64, phi: f64, tan_weight: f64) -> f64 {
    let data = RiemannData { r };
    let (xi, sigma) = (theta.sin(), phi.sin());
    let a = hamiltonian(&ModelParams::boussinesq(r, Order::FirstOrder).unwrap())
        .quasilinear_matrix(xi, sigma)
        .unwrap();
    let grads = data.invariant_gradients(theta, phi).unwrap();
    let mut lambda = data.lambda0(theta, phi);
    let t2 = phi.tan().powi(2);
    let ct = theta.cos() * phi.cos();
    let base = 0.25 * (3.0 * (2.0 * theta).cos() - 1.0) * phi.sin();
    let shift = 0.25 * theta.sin() * (1.0 - tan_weight * t2) * ct;
    lambda[0] += r * (base + shift);
    lambda[1] += r * (base - shift);
    let mut worst: f64 = 0.0;
    for k in 0..2 {
        let g = grads[k];
        for col in 0..2 {
            let lhs = g[0] * a[0][col] + g[1] * a[1][col];
            worst = worst.max((lhs - lambda[k] * g[col]).abs());
        }
    }
    worst
}

#[test]
fn first_order_invariants_diagonalize_the_first_order_system() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..200 {
        let theta = rng.random_range(-1.2..1.2);
        let phi = rng.random_range(-1.2..1.2);
        let coarse = invariant_residual(2e-3, theta, phi, 3.0);
        let fine = invariant_residual(1e-3, theta, phi, 3.0);
        assert!(coarse < 1e-3, "{theta} {phi}: {coarse}");
        assert!(fine < 0.3 * coarse + 1e-13, "{theta} {phi}: {coarse} {fine}");
    }
    // The library speeds use the same weight.
    let data = RiemannData { r: 0.01 };
    let l = data.lambda(0.4, 0.3);
    let h = hamiltonian(&ModelParams::boussinesq(0.01, Order::FirstOrder).unwrap());
    let [lo, hi] = h.characteristic_speeds(0.4f64.sin(), 0.3f64.sin()).unwrap();
    assert!((l[0] - hi).abs() < 1e-3 && (l[1] - lo).abs() < 1e-3);
    assert!((l[0] - hi).abs() < 2e-3 * 0.01);
}

#[test]
fn speed_correction_with_weight_two_is_first_order_wrong() {
    let (theta, phi) = (0.5, 0.6);
    let r = 1e-3;
    assert!(invariant_residual(r, theta, phi, 2.0) > 10.0 * invariant_residual(r, theta, phi, 3.0));
    assert!(invariant_residual(r, theta, phi, 2.0) > 1e-5);
}

#[test]
fn riemann_data_requires_boussinesq_units() {
    assert!(riemann_invariants(&fixed_g(0.1)).is_err());
    assert_eq!(riemann_invariants(&bous(0.1)).unwrap().r, 0.1);
}
