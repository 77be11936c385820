//! Deformed densities against their published listings and structural checks.

mod common;

use common::{listed_f1, xs};

use stratiflow::conserved::{generate_polynomial_family, in_involution, involution_table, TruncationOrder};
use stratiflow::deformation::{
    build_box, deform, deformation_rhs, deformed_family, first_order_correction, standard_h0, standard_h1,
    verify_first_order, MonomialSubspace, SubspaceKind,
};
use stratiflow::ratpoly::{BiPoly, VarPair};

fn f0(j: usize) -> BiPoly {
    generate_polynomial_family(j, VarPair::XiSigma).unwrap()[j - 1].as_polynomial().unwrap().clone()
}

#[test]
fn corrections_match_listings() {
    for j in 3..=6 {
        assert_eq!(first_order_correction(&f0(j), &standard_h1()).unwrap(), listed_f1(j), "index {j}");
    }
}

#[test]
fn sixth_listing_with_negative_mixed_coefficient_fails() {
    // The σ⁴ξ⁴ coefficient enters with a plus sign; the minus-sign reading fails
    // the order-r conservation identity.
    let misread = &listed_f1(6) - &xs("2*11970*sigma^4*xi^5/35");
    let check = verify_first_order(&f0(6), &misread, &standard_h0(), &standard_h1());
    assert!(!check.passed());
    let check = verify_first_order(&f0(6), &listed_f1(6), &standard_h0(), &standard_h1());
    assert!(check.passed());
}

#[test]
fn listings_are_kernel_free() {
    let zero = stratiflow::ratpoly::int(0);
    for j in 3..=6 {
        let p = listed_f1(j);
        assert_eq!(p.coeff(1, 0), zero, "index {j}");
        assert_eq!(p.coeff(0, 1), zero, "index {j}");
    }
}

#[test]
fn box_structure_up_to_fourteen() {
    for n in 1..=14 {
        for kind in [SubspaceKind::R, SubspaceKind::S] {
            let m = build_box(&MonomialSubspace::new(kind, n));
            assert!(m.is_upper_triangular(), "{kind:?} {n}");
            assert!(m.diagonal_matches_formula(), "{kind:?} {n}");
            assert_eq!(m.kernel_dimension(), 1, "{kind:?} {n}");
            assert!(m.kernel_is_first_monomial(), "{kind:?} {n}");
        }
    }
}

#[test]
fn right_hand_sides_vanish_at_the_corner_and_degrees_grow_by_one() {
    for (j, f) in generate_polynomial_family(16, VarPair::XiSigma).unwrap().iter().enumerate() {
        let p = f.as_polynomial().unwrap();
        let rhs = deformation_rhs(p, &standard_h1());
        assert_eq!(rhs.value_at_ones(), stratiflow::ratpoly::int(0), "index {}", j + 1);
        let f1 = first_order_correction(p, &standard_h1()).unwrap();
        if !f1.is_zero() {
            assert_eq!(f1.degree(), p.degree() + 1, "index {}", j + 1);
        }
    }
}

#[test]
fn deformed_family_round_trips_through_verification() {
    for d in deformed_family(12).unwrap() {
        let s = d.to_series(1).unwrap();
        let check = verify_first_order(&s.coeff(0), &s.coeff(1), &standard_h0(), &standard_h1());
        assert!(check.passed(), "index {}", d.index());
    }
}

#[test]
fn deformed_densities_commute_to_first_order() {
    let fam = deformed_family(8).unwrap();
    let table = involution_table(&fam, TruncationOrder::O1).unwrap();
    assert!(table.iter().all(|e| e.commutes));
    // They do not commute exactly: the r² coefficient survives.
    let (exact, _) = in_involution(&fam[2], &fam[3], TruncationOrder::Exact).unwrap();
    assert!(!exact);
}

#[test]
fn deform_returns_tagged_series() {
    let fam = generate_polynomial_family(3, VarPair::XiSigma).unwrap();
    let d = deform(&fam[2], &standard_h1()).unwrap();
    assert_eq!(d.deformation_order(), 1);
    assert_eq!(d.to_series(1).unwrap().coeff(1), listed_f1(3));
}
