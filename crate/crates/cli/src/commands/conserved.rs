//! `conserved gen` and `conserved verify`.

use serde_json::{json, Value};
use stratiflow::conserved::{
    generate_algebraic_family, generate_polynomial_family, generate_toda_family, in_involution, involution_table,
    TruncationOrder, MAX_TODA_INDEX,
};
use stratiflow::deformation::deformed_family;

use crate::args::{FamilyArg, GenArgs, VerifyArgs};
use crate::error::{invalid, CliError, Context};
use crate::output::{Output, Table};

pub fn generate(args: &GenArgs, out: &mut Output) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let vars = args.vars.into();
    let (name, fam) = match args.family {
        FamilyArg::Poly => ("poly", generate_polynomial_family(args.n, vars)),
        FamilyArg::Alg => ("alg", generate_algebraic_family(args.n, vars)),
        FamilyArg::Toda => {
            if args.n > MAX_TODA_INDEX {
                return Err(invalid(format!("the Toda family has {MAX_TODA_INDEX} densities")));
            }
            ("toda", generate_toda_family(args.n, vars))
        }
    };
    let fam = fam.context("generating densities")?;
    let densities: Vec<Value> = fam.iter().map(|d| d.to_json()).collect();
    let vars_tag = serde_json::to_value(vars).expect("variable tags serialize");
    let file = format!("conserved_{name}_{}.json", vars_tag.as_str().unwrap_or("vars"));
    out.json(&file, &json!({ "family": name, "vars": vars_tag, "densities": densities }))?;
    println!("{} densities", fam.len());
    Ok(())
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || invalid(format!("--pairs: expected `j,k` with 1 <= j, k, got `{s}`"));
    let (j, k) = s.split_once(',').ok_or_else(bad)?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if j == 0 || k == 0 {
        return Err(bad());
    }
    Ok((j, k))
}

/// Involution table of the deformed densities, written as `stem`.
pub fn involution(
    pairs: Option<Vec<(usize, usize)>>,
    max_index: Option<usize>,
    order: TruncationOrder,
    stem: &str,
    out: &mut Output,
) -> Result<(), CliError> {
    let mut table = Table::new(&["j", "k", "commutes"]);
    match (pairs, max_index) {
        (Some(pairs), _) if !pairs.is_empty() => {
            let top = pairs.iter().map(|&(j, k)| j.max(k)).max().unwrap_or(1);
            let fam = deformed_family(top).context("deforming densities")?;
            for (j, k) in pairs {
                let (ok, _) = in_involution(&fam[j - 1], &fam[k - 1], order).context("testing involution")?;
                table.push(vec![j.into(), k.into(), ok.into()]);
            }
        }
        (_, Some(max)) if max >= 2 => {
            let fam = deformed_family(max).context("deforming densities")?;
            for e in involution_table(&fam, order).context("testing involution")? {
                table.push(vec![e.j.into(), e.k.into(), e.commutes.into()]);
            }
        }
        _ => return Err(invalid("give --pairs j,k or --max-index J with J >= 2")),
    }
    out.table(stem, &table)?;
    println!("{} pairs tested", table.len());
    Ok(())
}

pub fn verify(args: &VerifyArgs, out: &mut Output) -> Result<(), CliError> {
    let pairs = args
        .pairs
        .iter()
        .flat_map(|s| s.split_whitespace())
        .map(parse_pair)
        .collect::<Result<Vec<_>, _>>()?;
    involution(Some(pairs), args.max_index, args.order.into(), "conserved_verify", out)
}
