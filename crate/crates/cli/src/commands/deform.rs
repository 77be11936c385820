//! `deform` and `deform involution`.

use serde_json::{json, Value};
use stratiflow::conserved::generate_polynomial_family;
use stratiflow::deformation::{first_order_correction, standard_h0, standard_h1, verify_first_order};
use stratiflow::ratpoly::{poly_to_json, VarPair};

use super::conserved::involution;
use crate::args::{DeformAction, DeformArgs};
use crate::error::{invalid, CliError, Context};
use crate::output::Output;

pub fn deform(args: &DeformArgs, out: &mut Output) -> Result<(), CliError> {
    if let Some(DeformAction::Involution(inv)) = &args.action {
        return involution(None, Some(inv.max_index), inv.order.into(), "deform_involution", out);
    }
    let first = args.index.ok_or_else(|| invalid("--index is required"))?;
    let last = args.max_index.unwrap_or(first);
    if first == 0 || last < first {
        return Err(invalid(format!("need 1 <= --index <= --max-index, got {first} and {last}")));
    }
    let fam = generate_polynomial_family(last, VarPair::XiSigma).context("generating densities")?;
    let (h0, h1) = (standard_h0(), standard_h1());
    let mut entries: Vec<Value> = Vec::new();
    let mut all_passed = true;
    for j in first..=last {
        let f0 = fam[j - 1].as_polynomial().expect("polynomial family");
        let f1 = first_order_correction(f0, &h1).context("solving the deformation equation")?;
        let check = verify_first_order(f0, &f1, &h0, &h1);
        all_passed &= check.passed();
        entries.push(json!({
            "index": j,
            "f0": poly_to_json(f0),
            "f1": poly_to_json(&f1),
            "f0_display": f0.to_string(),
            "f1_display": f1.to_string(),
            "residual_order0": poly_to_json(&check.order0),
            "residual_order1": poly_to_json(&check.order1),
            "passed": check.passed(),
        }));
    }
    out.json("deform.json", &json!({ "densities": entries }))?;
    println!("deformed indices {first}..={last}, all verified: {all_passed}");
    Ok(())
}
