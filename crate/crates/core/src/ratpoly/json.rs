//! Deterministic JSON form of polynomials, generator expressions and jet
//! expressions.
//!
//! A polynomial serializes as
//! `{"vars": "xs", "terms": [[i, j, numerator, denominator], ...]}` with terms in
//! ascending graded-lexicographic order. Integers of any size are written as
//! plain JSON numbers.
//!
//! A jet expression serializes as `{"vars": .., "terms": [[p₁, p₂, a₁, a₂, b₁,
//! b₂, l, numerator, denominator], ...]}` for the monomial
//! `w₁^p₁ w₂^p₂ (w₁_x)^a₁ (w₂_x)^a₂ (w₁_xx)^b₁ (w₂_xx)^b₂ (ln w₁)^l`, in canonical
//! order. A generator expression lists its generator polynomial and one
//! `{"half_power", "log_power", "coefficient"}` entry per term.

use std::str::FromStr;

use num::BigInt;
use serde_json::{json, Number, Value};

use super::{AlgebraError, BiPoly, GenExpr, JetExpr, Rational, VarPair};

fn big_to_json(n: &BigInt) -> Value {
    // `arbitrary_precision` keeps the literal digits, so big integers round-trip.
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal is valid JSON"))
}

fn json_to_big(v: &Value) -> Result<BigInt, AlgebraError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| AlgebraError::Json(format!("not an integer: {n}"))),
        other => Err(AlgebraError::Json(format!("expected an integer, got {other}"))),
    }
}

/// Serializes a polynomial to its canonical JSON value.
pub fn poly_to_json(p: &BiPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!([e.0, e.1, big_to_json(c.numer()), big_to_json(c.denom())]))
        .collect();
    json!({ "vars": p.vars(), "terms": terms })
}

/// Serializes a jet expression to its canonical JSON value.
pub fn jet_to_json(e: &JetExpr) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .map(|(m, c)| {
            json!([
                m.field[0],
                m.field[1],
                m.dx[0],
                m.dx[1],
                m.dxx[0],
                m.dxx[1],
                m.log,
                big_to_json(c.numer()),
                big_to_json(c.denom())
            ])
        })
        .collect();
    json!({ "vars": e.vars(), "terms": terms })
}

/// Serializes a generator expression to its canonical JSON value.
pub fn genexpr_to_json(g: &GenExpr) -> Value {
    let terms: Vec<Value> = g
        .terms()
        .map(|(&(a, k), c)| json!({ "half_power": a, "log_power": k, "coefficient": poly_to_json(c) }))
        .collect();
    json!({ "generator": poly_to_json(g.generator()), "terms": terms })
}

/// Parses the canonical JSON value produced by [`poly_to_json`].
pub fn poly_from_json(v: &Value) -> Result<BiPoly, AlgebraError> {
    let vars: VarPair = serde_json::from_value(v.get("vars").cloned().unwrap_or(Value::Null))
        .map_err(|e| AlgebraError::Json(e.to_string()))?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| AlgebraError::Json("missing `terms` array".into()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let arr = t
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| AlgebraError::Json(format!("term is not a 4-element array: {t}")))?;
        let exp = |k: usize| -> Result<u32, AlgebraError> {
            arr[k]
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| AlgebraError::Json(format!("bad exponent in {t}")))
        };
        let den = json_to_big(&arr[3])?;
        if den == BigInt::from(0) {
            return Err(AlgebraError::Json("zero denominator".into()));
        }
        out.push((exp(0)?, exp(1)?, Rational::new(json_to_big(&arr[2])?, den)));
    }
    Ok(BiPoly::from_terms(vars, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::parse_poly;

    #[test]
    fn round_trip_with_large_coefficients() {
        let p = parse_poly(
            "123456789012345678901234567890*xi^3 - 1/98765432109876543210*sigma + 7",
            VarPair::XiSigma,
        )
        .unwrap();
        let v = poly_to_json(&p);
        assert_eq!(poly_from_json(&v).unwrap(), p);
    }

    #[test]
    fn jet_terms_carry_all_exponents() {
        let e = &JetExpr::field(VarPair::UV, 0) * &JetExpr::log_first(VarPair::UV);
        let text = serde_json::to_string(&jet_to_json(&e)).unwrap();
        assert_eq!(text, r#"{"terms":[[1,0,0,0,0,0,1,1,1]],"vars":"uv"}"#);
    }

    #[test]
    fn generator_terms_are_listed_by_power() {
        let g = parse_poly("xi^2 + sigma^2 - 1", VarPair::XiSigma).unwrap();
        let e = GenExpr::term(parse_poly("-1/2", VarPair::XiSigma).unwrap(), 1, 0, g);
        let v = genexpr_to_json(&e);
        assert_eq!(v["terms"][0]["half_power"], 1);
        assert_eq!(v["terms"][0]["coefficient"]["terms"][0][2], -1);
    }

    #[test]
    fn canonical_text_is_graded_lex() {
        let p = parse_poly("sigma^2 + xi + 1/2", VarPair::XiSigma).unwrap();
        let text = serde_json::to_string(&poly_to_json(&p)).unwrap();
        assert_eq!(text, r#"{"terms":[[0,0,1,2],[1,0,1,1],[0,2,1,1]],"vars":"xs"}"#);
    }
}
