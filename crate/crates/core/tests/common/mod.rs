//! Published listings shared by several test targets.

#![allow(dead_code)]

use stratiflow::conserved::{OperatorEntry, PoissonOperator};
use stratiflow::ratpoly::{int, parse_poly, BiPoly, JetExpr, JetFrac, VarPair};

pub fn xs(s: &str) -> BiPoly {
    parse_poly(s, VarPair::XiSigma).unwrap()
}

/// Undeformed polynomial densities `F₀,ⱼ`, `j = 1..=6`.
pub fn listed_f0(j: usize) -> BiPoly {
    match j {
        1 => xs("xi*sigma/2"),
        2 => xs("(1-xi^2)*(1-sigma^2)/2"),
        3 => xs("xi*sigma*(1-xi^2)*(1-sigma^2)"),
        4 => xs("(1-xi^2)*(1-sigma^2)*(5*xi^2*sigma^2 - sigma^2 - xi^2 + 1)/2"),
        5 => xs("xi*sigma*(1-xi^2)*(1-sigma^2)*(7*xi^2*sigma^2 - 3*sigma^2 - 3*xi^2 + 3)"),
        6 => xs("(1-xi^2)*(1-sigma^2)*(21*sigma^4*xi^4 - 14*sigma^4*xi^2 - 14*sigma^2*xi^4 + sigma^4 + 16*xi^2*sigma^2 + xi^4 - 2*sigma^2 - 2*xi^2 + 1)"),
        _ => panic!("no listing for index {j}"),
    }
}

/// First-order corrections `F₁,ⱼ`, `j = 3..=6`.
pub fn listed_f1(j: usize) -> BiPoly {
    match j {
        3 => xs("sigma*(4*sigma^2*xi^4 - 6*sigma^2*xi^2 - xi^4 + 2*sigma^2 + 6*xi^2)/2"),
        4 => xs("xi*(75*sigma^4*xi^4 - 130*sigma^4*xi^2 - 40*sigma^2*xi^4 + 55*sigma^4 + 140*sigma^2*xi^2 + xi^4 - 100*sigma^2 - 30*xi^2)/10"),
        5 => xs("sigma*(56*sigma^4*xi^6 - 110*sigma^4*xi^4 - 45*sigma^2*xi^6 + 60*sigma^4*xi^2 + 139*sigma^2*xi^4 + 5*xi^6 - 6*sigma^4 - 111*xi^2*sigma^2 - 41*xi^4 + 17*sigma^2 + 51*xi^2)/2"),
        6 => xs("xi*(3675*xi^6*sigma^6 - 8085*sigma^6*xi^4 - 3920*sigma^4*xi^6 + 5425*sigma^6*xi^2 + 11970*sigma^4*xi^4 + 861*sigma^2*xi^6 - 1015*sigma^6 - 10780*sigma^4*xi^2 - 4711*sigma^2*xi^4 - 16*xi^6 + 2730*sigma^4 + 6055*xi^2*sigma^2 + 322*xi^4 - 2205*sigma^2 - 700*xi^2)/35"),
        _ => panic!("no listing for index {j}"),
    }
}

/// `num / (ξ² − σ²)²`.
fn over_diagonal_squared(num: JetExpr) -> JetFrac {
    JetFrac::new(num, JetExpr::from_bipoly(&xs("xi^2 - sigma^2")), 2)
}

/// `p · (σ ξ_x − ξ σ_x)` as a jet expression.
fn times_wronskian(p: &str) -> JetExpr {
    let p = xs(p);
    let a = JetExpr::from_bipoly(&(&p * &xs("sigma")));
    let b = JetExpr::from_bipoly(&(&p * &xs("xi")));
    &(&a * &JetExpr::field_x(VarPair::XiSigma, 0)) - &(&b * &JetExpr::field_x(VarPair::XiSigma, 1))
}

fn displayed_pullback(g: [&str; 3], h: JetFrac) -> PoissonOperator {
    let sym = |s: &str| OperatorEntry::symmetric(over_diagonal_squared(JetExpr::from_bipoly(&xs(s)))).unwrap();
    let m12 = OperatorEntry::multiplication(h.scale(&int(-1)));
    let m21 = OperatorEntry::multiplication(h);
    PoissonOperator::new([[sym(g[0]), sym(g[1]).plus(&m12)], [sym(g[1]).plus(&m21), sym(g[2])]])
}

/// The constant tensor of the pencil written in physical variables.
pub fn displayed_p0_pullback() -> PoissonOperator {
    displayed_pullback(
        [
            "xi*sigma*(1-xi^2)/4",
            "(2*xi^2*sigma^2 - xi^2 - sigma^2)/8",
            "xi*sigma*(1-sigma^2)/4",
        ],
        over_diagonal_squared(times_wronskian("xi*sigma/4")),
    )
}

/// The first tensor of the pencil written in physical variables.
pub fn displayed_p1_pullback() -> PoissonOperator {
    displayed_pullback(
        [
            "(1-xi^2)*(xi^2+sigma^2)/4",
            "xi*sigma*(xi^2+sigma^2-2)/4",
            "(1-sigma^2)*(xi^2+sigma^2)/4",
        ],
        over_diagonal_squared(times_wronskian("(xi^2 + sigma^2)/4")),
    )
}
