//! Generators of the polynomial, algebraic and Toda families.

use num::One;

use super::{ConservedDensity, ConservedError, Density, Family};
use crate::ratpoly::{
    dnls_radicand, int, parse_poly, rat, sqrt_series, BiPoly, ExpansionPoint, GenExpr, JetExpr, JetMonomial,
    Rational, VarPair,
};

/// Largest Toda index with a closed form.
pub const MAX_TODA_INDEX: usize = 4;

/// The Madelung map `u = (1−ξ²)(1−σ²)`, `v = 2ξσ` as substitution polynomials.
pub fn madelung_map() -> [BiPoly; 2] {
    let vars = VarPair::XiSigma;
    [
        BiPoly::from_terms(
            vars,
            [(0, 0, int(1)), (2, 0, int(-1)), (0, 2, int(-1)), (2, 2, int(1))],
        ),
        BiPoly::monomial(vars, 1, 1, int(2)),
    ]
}

/// Coefficient `K_k` of `λ^{−k}` in `Q(λ) − λ/4` at `λ = ∞`, in `(u, v)`.
///
/// `K₀ = v/4`, `K₁ = u/2`, `K₂ = uv/2`, `K₃ = u(u+v²)/2`, …
pub fn casimir_coefficient(k: usize) -> BiPoly {
    casimir_coefficients(k + 1).pop().expect("at least one coefficient")
}

fn casimir_coefficients(count: usize) -> Vec<BiPoly> {
    let radicand = dnls_radicand();
    let order = count.max(1) as i32;
    let series = sqrt_series(&radicand, ExpansionPoint::Infinity, order)
        .and_then(|s| s.at_infinity().ok_or(crate::ratpoly::AlgebraError::TruncationOrder(order)))
        .expect("the dNLS radicand has a unit leading coefficient");
    let quarter = rat(-1, 4);
    (0..count)
        .map(|k| {
            series
                .coeff(-(k as i32))
                .map(|c| c.scale(&quarter))
                .unwrap_or_else(|| BiPoly::zero(VarPair::UV))
        })
        .collect()
}

/// Scale factor relating the physical density `F₀,ⱼ` to the Madelung image of
/// `K_{j−1}`: `F₀,ⱼ = polynomial_scale(j) · K_{j−1}(u(ξ,σ), v(ξ,σ))`.
///
/// The listed physical densities coincide with the plain Madelung images, so
/// every factor is one.
pub fn polynomial_scale(_index: usize) -> Rational {
    Rational::one()
}

/// Polynomial densities with indices `1..=n_max`.
///
/// Index `j` is the coefficient of `λ^{1−j}` in `Q(λ) − λ/4` (so index 1 is
/// `v/4`, index 3 is `uv/2`). In `(ξ, σ)` the Madelung images are returned,
/// scaled by [`polynomial_scale`].
pub fn generate_polynomial_family(n_max: usize, vars: VarPair) -> Result<Vec<ConservedDensity>, ConservedError> {
    if n_max == 0 {
        return Err(ConservedError::EmptyFamily(n_max));
    }
    let map = madelung_map();
    casimir_coefficients(n_max)
        .into_iter()
        .enumerate()
        .map(|(k, kk)| {
            let index = k + 1;
            let p = match vars {
                VarPair::UV => kk,
                VarPair::XiSigma => kk.substitute(&map)?.scale(&polynomial_scale(index)),
            };
            Ok(ConservedDensity::new(Family::Polynomial, index, 0, Density::Polynomial(p)))
        })
        .collect()
}

/// Algebraic densities with indices `1..=n_max`.
///
/// Index `j` is the coefficient of `λ^{j−1}` in `Q(λ)` at `λ = 0`,
/// `−¼ p_{j−1} (v²−4u)^{1/2−(j−1)}`. In `(ξ, σ)` the generator becomes
/// `ξ² + σ² − 1` (the Madelung image of `v² − 4u` is four times it).
pub fn generate_algebraic_family(n_max: usize, vars: VarPair) -> Result<Vec<ConservedDensity>, ConservedError> {
    if n_max == 0 {
        return Err(ConservedError::EmptyFamily(n_max));
    }
    let radicand = dnls_radicand();
    let series = sqrt_series(&radicand, ExpansionPoint::Zero, n_max as i32)?
        .at_zero()
        .expect("expansion at zero");
    let quarter = rat(-1, 4);
    let map = madelung_map();
    let physical_generator = parse_poly("xi^2 + sigma^2 - 1", VarPair::XiSigma)?;
    (0..n_max)
        .map(|k| {
            let q = series
                .coeff(k as i32)
                .expect("every order up to the truncation is stored")
                .scale(&quarter);
            let q = match vars {
                VarPair::UV => q,
                VarPair::XiSigma => q.substitute(&map)?.with_generator(physical_generator.clone(), &int(4))?,
            };
            Ok(ConservedDensity::new(Family::Algebraic, k + 1, 0, Density::Radical(q)))
        })
        .collect()
}

/// `(polynomial part, coefficient of ln u)` of `S₁ … S₄` in `(u, v)`.
const TODA_FORMS: [(&str, &str); MAX_TODA_INDEX] = [
    ("-u + v^2/2", "u"),
    ("u*v + v^3/6", "u*v"),
    ("2*v^2*u + v^4/12 + u^2/2", "v^2*u + u^2"),
    ("v*(160*v^2*u + 3*v^4 + 210*u^2)/60", "v*(60*v^2*u + 180*u^2)/60"),
];

/// Toda densities `S₁ … S_{n_max}`: jet-order-0 expressions with `ln u` factors
/// in `(u, v)`, or expressions over the generator `(1−ξ²)(1−σ²)` in `(ξ, σ)`.
pub fn generate_toda_family(n_max: usize, vars: VarPair) -> Result<Vec<ConservedDensity>, ConservedError> {
    if n_max == 0 {
        return Err(ConservedError::EmptyFamily(n_max));
    }
    if n_max > MAX_TODA_INDEX {
        return Err(ConservedError::TodaIndex {
            requested: n_max,
            max: MAX_TODA_INDEX,
        });
    }
    TODA_FORMS[..n_max]
        .iter()
        .enumerate()
        .map(|(k, (plain, log))| {
            let plain = JetExpr::from_bipoly(&parse_poly(plain, VarPair::UV)?);
            let log = JetExpr::from_bipoly(&parse_poly(log, VarPair::UV)?);
            let s = &plain + &(&log * &JetExpr::log_first(VarPair::UV));
            let density = match vars {
                VarPair::UV => Density::Jet(s),
                VarPair::XiSigma => Density::Radical(toda_to_physical(&s)?),
            };
            Ok(ConservedDensity::new(Family::Toda, k + 1, 0, density))
        })
        .collect()
}

/// Rewrites a jet-order-0 expression in `(u, v)` with `ln u` factors over the
/// generator `u = (1−ξ²)(1−σ²)`: `u^a v^b (ln u)^k ↦ (2ξσ)^b · g^{a} · (ln g)^k`.
pub fn toda_to_physical(s: &JetExpr) -> Result<GenExpr, ConservedError> {
    if s.vars() != VarPair::UV {
        return Err(ConservedError::Variables {
            found: s.vars(),
            expected: VarPair::UV,
        });
    }
    if s.jet_order() > 0 {
        return Err(ConservedError::UnsupportedDensity("jet expressions with derivatives"));
    }
    let [u, v] = madelung_map();
    let mut out = GenExpr::zero(u.clone());
    for (m, c) in s.terms() {
        let JetMonomial { field, log, .. } = *m;
        if field[1] < 0 {
            return Err(ConservedError::UnsupportedDensity("negative powers of v"));
        }
        let coeff = v.pow(field[1] as u32).scale(c);
        out = out.add(&GenExpr::term(coeff, 2 * field[0], log, u.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(s: &str) -> BiPoly {
        parse_poly(s, VarPair::XiSigma).unwrap()
    }

    fn uv(s: &str) -> BiPoly {
        parse_poly(s, VarPair::UV).unwrap()
    }

    #[test]
    fn casimir_coefficients_match_expansion() {
        assert_eq!(casimir_coefficient(0), uv("v/4"));
        assert_eq!(casimir_coefficient(1), uv("u/2"));
        assert_eq!(casimir_coefficient(2), uv("u*v/2"));
        assert_eq!(casimir_coefficient(3), uv("u*(u+v^2)/2"));
        assert_eq!(casimir_coefficient(4), uv("u*v*(3*u+v^2)/2"));
        assert_eq!(casimir_coefficient(5), uv("u*(2*u^2+6*u*v^2+v^4)/2"));
    }

    #[test]
    fn madelung_images_of_simple_monomials() {
        let map = madelung_map();
        assert_eq!(uv("u").substitute(&map).unwrap(), xs("(1-xi^2)*(1-sigma^2)"));
        assert_eq!(uv("u*v/2").substitute(&map).unwrap(), xs("xi*sigma*(1-xi^2)*(1-sigma^2)"));
        assert_eq!(uv("v/4").substitute(&map).unwrap(), xs("xi*sigma/2"));
    }

    #[test]
    fn polynomial_family_indices() {
        let fam = generate_polynomial_family(4, VarPair::UV).unwrap();
        assert_eq!(fam[2].as_polynomial().unwrap(), &uv("u*v/2"));
        let fam = generate_polynomial_family(4, VarPair::XiSigma).unwrap();
        assert_eq!(fam[0].as_polynomial().unwrap(), &xs("xi*sigma/2"));
        assert_eq!(
            fam[3].as_polynomial().unwrap(),
            &xs("(1-xi^2)*(1-sigma^2)*(5*xi^2*sigma^2 - sigma^2 - xi^2 + 1)/2")
        );
        assert!(generate_polynomial_family(0, VarPair::UV).is_err());
    }

    #[test]
    fn algebraic_family_leading_terms() {
        let fam = generate_algebraic_family(3, VarPair::XiSigma).unwrap();
        let e = xs("xi^2 + sigma^2 - 1");
        let first = GenExpr::term(xs("-1/2"), 1, 0, e.clone());
        assert_eq!(fam[0].density(), &Density::Radical(first));
        let third = GenExpr::term(xs("(xi^2-1)*(sigma^2-1)/16"), -3, 0, e);
        assert_eq!(fam[2].density(), &Density::Radical(third));
        let fam = generate_algebraic_family(2, VarPair::UV).unwrap();
        let d = uv("v^2 - 4*u");
        assert_eq!(fam[1].density(), &Density::Radical(GenExpr::term(uv("v/4"), -1, 0, d)));
    }

    #[test]
    fn toda_family_bounds() {
        assert!(matches!(
            generate_toda_family(5, VarPair::UV),
            Err(ConservedError::TodaIndex { requested: 5, max: 4 })
        ));
        assert_eq!(generate_toda_family(4, VarPair::XiSigma).unwrap().len(), 4);
    }

    #[test]
    fn toda_physical_form_of_first_density() {
        let fam = generate_toda_family(1, VarPair::XiSigma).unwrap();
        let g = xs("(1-xi^2)*(1-sigma^2)");
        // ½(4ξ²σ² − 2g) + g ln g.
        let expected = GenExpr::from_poly(&xs("2*xi^2*sigma^2") - &g, g.clone())
            .add(&GenExpr::term(g.clone(), 0, 1, g));
        assert_eq!(fam[0].density(), &Density::Radical(expected));
    }
}
