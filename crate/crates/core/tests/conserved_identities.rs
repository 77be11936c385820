//! Exact identities of the conserved families and Poisson tensors.

use stratiflow::conserved::{
    casimir_coefficient, dnls_conservation_residual, generate_algebraic_family, generate_polynomial_family,
    generate_toda_family, is_conserved, madelung_map, transform_tensor, ConservedDensity, Density, MadelungDirection,
    OperatorEntry, PoissonOperator, TruncationOrder,
};
use stratiflow::models::{hamiltonian, ModelParams, Order};
use stratiflow::ratpoly::{int, parse_poly, rat, BiPoly, GenExpr, JetExpr, JetFrac, VarPair};

const XS: VarPair = VarPair::XiSigma;
const UV: VarPair = VarPair::UV;

fn xs(s: &str) -> BiPoly {
    parse_poly(s, XS).unwrap()
}

fn uv(s: &str) -> BiPoly {
    parse_poly(s, UV).unwrap()
}

fn gradient(p: &BiPoly) -> [JetFrac; 2] {
    [
        JetFrac::from_expr(JetExpr::from_bipoly(&p.diff(0, 1))),
        JetFrac::from_expr(JetExpr::from_bipoly(&p.diff(1, 1))),
    ]
}

/// `num / (ξ² − σ²)²`.
fn over_diagonal_squared(num: JetExpr) -> JetFrac {
    JetFrac::new(num, JetExpr::from_bipoly(&xs("xi^2 - sigma^2")), 2)
}

fn poly_over(s: &str) -> JetFrac {
    over_diagonal_squared(JetExpr::from_bipoly(&xs(s)))
}

/// `p · (σ ξ_x − ξ σ_x)` as a jet expression.
fn times_wronskian(p: &str) -> JetExpr {
    let p = xs(p);
    let a = JetExpr::from_bipoly(&(&p * &xs("sigma")));
    let b = JetExpr::from_bipoly(&(&p * &xs("xi")));
    &(&a * &JetExpr::field_x(XS, 0)) - &(&b * &JetExpr::field_x(XS, 1))
}

fn displayed_pullback(g11: &str, g12: &str, g22: &str, h: JetFrac, sign12: i64) -> PoissonOperator {
    let sym = |s: &str| OperatorEntry::symmetric(poly_over(s)).unwrap();
    let m12 = OperatorEntry::multiplication(h.scale(&int(sign12)));
    let m21 = OperatorEntry::multiplication(h.scale(&int(-sign12)));
    PoissonOperator::new([[sym(g11), sym(g12).plus(&m12)], [sym(g12).plus(&m21), sym(g22)]])
}

#[test]
fn casimir_generator_squares_back() {
    use stratiflow::ratpoly::{sqrt_series, ExpansionPoint};
    let radicand = [uv("v^2 - 4*u"), uv("-2*v"), uv("1")];
    for order in 1..8 {
        let s = sqrt_series(&radicand, ExpansionPoint::Infinity, order).unwrap().at_infinity().unwrap();
        assert!(s.square_matches(&radicand), "order {order}");
        let z = sqrt_series(&radicand, ExpansionPoint::Zero, order).unwrap().at_zero().unwrap();
        assert!(z.square_matches(&radicand), "order {order}");
    }
}

#[test]
fn physical_family_factorization_by_parity() {
    let base = xs("(1-xi^2)*(1-sigma^2)");
    let odd = &base * &xs("xi*sigma");
    for f in generate_polynomial_family(16, XS).unwrap().iter().skip(1) {
        let p = f.as_polynomial().unwrap();
        let divisor = if f.index() % 2 == 0 { &base } else { &odd };
        let q = p.div_exact(divisor).unwrap();
        // The cofactor is even in both variables.
        assert!(q.has_parity(0, false) && q.has_parity(1, false), "index {}", f.index());
    }
}

#[test]
fn polynomial_family_is_conserved_by_boussinesq_flow() {
    let h = hamiltonian(&ModelParams::boussinesq(0.0, Order::ZerothOrder).unwrap());
    for f in generate_polynomial_family(12, XS).unwrap() {
        assert!(is_conserved(&f, &h, TruncationOrder::Exact).unwrap().conserved, "index {}", f.index());
    }
}

#[test]
fn algebraic_family_is_conserved_by_boussinesq_flow() {
    let h = hamiltonian(&ModelParams::boussinesq(0.0, Order::ZerothOrder).unwrap());
    for f in generate_algebraic_family(6, XS).unwrap() {
        assert!(is_conserved(&f, &h, TruncationOrder::Exact).unwrap().conserved, "index {}", f.index());
    }
}

#[test]
fn algebraic_family_matches_physical_display() {
    let e = xs("xi^2 + sigma^2 - 1");
    let displayed = [
        (xs("-1/2"), 1),
        (xs("xi*sigma/4"), -1),
        (xs("(xi^2-1)*(sigma^2-1)/16"), -3),
        (xs("xi*(xi^2-1)*sigma*(sigma^2-1)/32"), -5),
        (xs("(xi^2-1)*(sigma^2-1)*(xi^2*(5*sigma^2-1)-sigma^2+1)/256"), -7),
        (xs("xi*(xi^2-1)*sigma*(sigma^2-1)*(xi^2*(7*sigma^2-3)-3*sigma^2+3)/512"), -9),
    ];
    let fam = generate_algebraic_family(6, XS).unwrap();
    for (f, (p, a)) in fam.iter().zip(displayed) {
        assert_eq!(f.density(), &Density::Radical(GenExpr::term(p, a, 0, e.clone())));
    }
    let fam = generate_algebraic_family(6, UV).unwrap();
    let d = uv("v^2 - 4*u");
    let displayed = [
        (uv("-1/4"), 1),
        (uv("v/4"), -1),
        (uv("u/2"), -3),
        (uv("u*v/2"), -5),
        (uv("u*(u+v^2)/2"), -7),
        (uv("u*v*(3*u+v^2)/2"), -9),
    ];
    for (f, (p, a)) in fam.iter().zip(displayed) {
        assert_eq!(f.density(), &Density::Radical(GenExpr::term(p, a, 0, d.clone())));
    }
}

#[test]
fn toda_densities_are_conserved_by_dnls_flow() {
    for s in generate_toda_family(4, UV).unwrap() {
        let Density::Jet(e) = s.density() else { panic!("jet density expected") };
        let [a, b] = dnls_conservation_residual(e).unwrap();
        assert!(a.is_zero() && b.is_zero(), "S{}", s.index());
    }
}

#[test]
fn toda_densities_are_conserved_in_physical_variables() {
    let h = hamiltonian(&ModelParams::boussinesq(0.0, Order::ZerothOrder).unwrap());
    for s in generate_toda_family(4, XS).unwrap() {
        assert!(is_conserved(&s, &h, TruncationOrder::Exact).unwrap().conserved, "S{}", s.index());
    }
}

#[test]
fn first_toda_density_needs_the_velocity_term() {
    // With u²/2 in place of v²/2 the density is not conserved.
    let literal = &JetExpr::from_bipoly(&uv("-u + u^2/2")) + &(&JetExpr::from_bipoly(&uv("u")) * &JetExpr::log_first(UV));
    let [a, b] = dnls_conservation_residual(&literal).unwrap();
    assert!(!(a.is_zero() && b.is_zero()));
}

#[test]
fn toda_physical_forms_match_display() {
    let g = xs("(1-xi^2)*(1-sigma^2)");
    let lg = |p: &str| GenExpr::term(xs(p), 0, 1, g.clone());
    let plain = |p: &str| GenExpr::from_poly(xs(p), g.clone());
    let displayed = [
        plain("(4*xi^2*sigma^2 - 2*(1-xi^2)*(1-sigma^2))/2").add(&lg("(1-xi^2)*(1-sigma^2)")),
        plain("4*xi^3*sigma^3/3 + 2*xi*(1-xi^2)*(1-sigma^2)*sigma").add(&lg("2*xi*(1-xi^2)*(1-sigma^2)*sigma")),
        lg("(1-xi^2)*(1-sigma^2)*(4*xi^2*sigma^2 + (1-xi^2)*(1-sigma^2))").add(&plain(
            "(16*xi^4*sigma^4 + 96*xi^2*(1-xi^2)*(1-sigma^2)*sigma^2 + 6*(1-xi^2)^2*(1-sigma^2)^2)/12",
        )),
        plain("8*xi^5*sigma^5/5 + 7*xi*(1-xi^2)^2*(1-sigma^2)^2*sigma + 64/3*xi^3*(1-xi^2)*(1-sigma^2)*sigma^3").add(
            &lg("2*xi*(1-xi^2)*(1-sigma^2)*sigma*(4*xi^2*sigma^2 + 3*(1-xi^2)*(1-sigma^2))"),
        ),
    ];
    for (s, d) in generate_toda_family(4, XS).unwrap().iter().zip(displayed) {
        assert_eq!(s.density(), &Density::Radical(d), "S{}", s.index());
    }
}

#[test]
fn lenard_magri_ladder() {
    let p0 = PoissonOperator::p0();
    let p1 = PoissonOperator::p1();
    let p2 = PoissonOperator::p2();
    for j in 0..=5 {
        let dk = |k: usize| gradient(&casimir_coefficient(k));
        assert_eq!(p1.apply(&dk(j)).unwrap(), p0.apply(&dk(j + 1)).unwrap(), "P1 dK{j} = P0 dK{}", j + 1);
        assert_eq!(p2.apply(&dk(j)).unwrap(), p0.apply(&dk(j + 2)).unwrap(), "P2 dK{j} = P0 dK{}", j + 2);
    }
}

#[test]
fn ladder_in_the_opposite_orientation_fails() {
    let p0 = PoissonOperator::p0();
    let p1 = PoissonOperator::p1();
    let dk = |k: usize| gradient(&casimir_coefficient(k));
    for j in 1..=5 {
        assert_ne!(p0.apply(&dk(j)).unwrap(), p1.apply(&dk(j + 1)).unwrap());
    }
}

#[test]
fn dnls_flow_from_the_standard_hamiltonian() {
    let p0 = PoissonOperator::p0();
    let flow = |h: BiPoly| p0.apply(&gradient(&h)).unwrap();
    let dx = |p: &str| JetFrac::from_expr(JetExpr::from_bipoly(&uv(p)).total_derivative().unwrap());
    let expected = [dx("-u*v"), dx("-(v^2/2 + u)")];
    let k3 = casimir_coefficient(3);
    assert_eq!(flow(k3.scale(&int(-1))), expected);
    // The quarter-weighted functional generates a quarter of the flow.
    let quarter = flow(k3.scale(&rat(-1, 4)));
    assert_eq!(quarter, [expected[0].scale(&rat(1, 4)), expected[1].scale(&rat(1, 4))]);
}

#[test]
fn darboux_tensor_pushes_forward_to_pencil_combination() {
    let pushed = transform_tensor(&PoissonOperator::darboux(), MadelungDirection::Forward).unwrap();
    let combo = PoissonOperator::combination(&[(int(4), &PoissonOperator::p0()), (int(-1), &PoissonOperator::p2())]);
    assert_eq!(pushed, combo.substitute(&madelung_map()).unwrap());
    assert!(pushed.is_skew().unwrap());
}

#[test]
fn constant_tensor_pulled_back_to_physical_variables() {
    let pulled = transform_tensor(&PoissonOperator::p0(), MadelungDirection::Inverse).unwrap();
    let h = over_diagonal_squared(times_wronskian("xi*sigma/4"));
    let displayed = displayed_pullback(
        "xi*sigma*(1-xi^2)/4",
        "(2*xi^2*sigma^2 - xi^2 - sigma^2)/8",
        "xi*sigma*(1-sigma^2)/4",
        h,
        -1,
    );
    assert_eq!(pulled, displayed);
    assert!(pulled.is_skew().unwrap());
}

#[test]
fn first_tensor_pulled_back_to_physical_variables() {
    let pulled = transform_tensor(&PoissonOperator::p1(), MadelungDirection::Inverse).unwrap();
    let h = over_diagonal_squared(times_wronskian("(xi^2 + sigma^2)/4"));
    let g = ["(1-xi^2)*(xi^2+sigma^2)/4", "xi*sigma*(xi^2+sigma^2-2)/4", "(1-sigma^2)*(xi^2+sigma^2)/4"];
    // The antisymmetric multiplicative part enters with −h in (1,2) and +h in (2,1).
    assert_eq!(pulled, displayed_pullback(g[0], g[1], g[2], h.clone(), -1));
    assert_ne!(pulled, displayed_pullback(g[0], g[1], g[2], h, 1));
    assert!(pulled.is_skew().unwrap());
}

#[test]
fn polynomial_densities_as_conserved_density_values() {
    let fam = generate_polynomial_family(3, XS).unwrap();
    let f: &ConservedDensity = &fam[2];
    assert_eq!(f.density().eval_f64(0.0, 0.5, 0.5), Some(0.5 * 0.5 * 0.75 * 0.75));
}
