//! `hodograph run` and `hodograph curves`.

use serde_json::{json, Value};
use stratiflow::deformation::deformed_family;
use stratiflow::hodograph::{
    evolve, hodograph_curves, to_layer_variables, HodographProblem, PointStatus,
};
use stratiflow::models::{ModelParams, Order};
use stratiflow::ratpoly::poly_to_json;

use super::{check_r, linspace, stepped_range, time_tag};
use crate::args::{CurveArg, CurvesArgs, Format, HodographRunArgs, ProblemArgs};
use crate::error::{invalid, CliError, Context};
use crate::output::{Output, Table};

/// Builds the problem for the deformed density `F_{0,j} + r F_{1,j}`.
pub fn problem(args: &ProblemArgs) -> Result<(HodographProblem, ModelParams), CliError> {
    check_r(args.r)?;
    if args.f_index == 0 {
        return Err(invalid("--F-index must be at least 1"));
    }
    let fam = deformed_family(args.f_index).context("deforming densities")?;
    let params = ModelParams::boussinesq(args.r, Order::FirstOrder).context("selecting the model")?;
    let problem =
        HodographProblem::new(&fam[args.f_index - 1], &params, args.mode.into()).context("setting up the hodograph problem")?;
    Ok((problem, params))
}

fn status(s: PointStatus) -> &'static str {
    match s {
        PointStatus::Solved => "solved",
        PointStatus::Breakdown => "breakdown",
        PointStatus::Diverged => "diverged",
    }
}

pub fn run(args: &HodographRunArgs, out: &mut Output) -> Result<(), CliError> {
    let times = stepped_range(&args.t, "--t")?;
    if times.iter().any(|&t| t < 0.0) {
        return Err(invalid("--t: times must be non-negative"));
    }
    let x = linspace(&args.x, "--x")?;
    let (problem, params) = problem(&args.problem)?;
    let snaps = evolve(&problem.with_grid(x, times), args.expansion.into());
    let mut combined: Vec<Value> = Vec::new();
    for snap in &snaps {
        let mut table = Table::new(&["x", "xi", "sigma", "w", "u1", "u2", "status", "residual"]);
        for p in &snap.points {
            let layer = match p.status {
                PointStatus::Solved => Some(to_layer_variables([p.xi, p.sigma], &params).context("layer variables")?),
                _ => None,
            };
            let (w, u1, u2) = layer.map_or((f64::NAN, f64::NAN, f64::NAN), |l| (l.w, l.u1, l.u2));
            table.push(vec![
                p.x.into(),
                p.xi.into(),
                p.sigma.into(),
                w.into(),
                u1.into(),
                u2.into(),
                status(p.status).into(),
                p.residual.into(),
            ]);
        }
        match out.format() {
            Format::Csv => out.table(&format!("hodograph_{}", time_tag(snap.t)), &table)?,
            Format::Json => combined.push(json!({ "t": snap.t, "table": table.to_json() })),
        }
        let solved = snap.points.iter().filter(|p| p.status == PointStatus::Solved).count();
        println!("t = {}: {solved}/{} points solved, max residual {:.1e}", snap.t, snap.points.len(), snap.max_residual());
    }
    if out.format() == Format::Json {
        out.json(
            "hodograph.json",
            &json!({ "index": args.problem.f_index, "r": args.problem.r, "snapshots": combined }),
        )?;
    }
    Ok(())
}

pub fn curves(args: &CurvesArgs, out: &mut Output) -> Result<(), CliError> {
    let levels = stepped_range(&args.levels, "--levels")?;
    if args.n == 0 {
        return Err(invalid("--n must be positive"));
    }
    let (problem, _) = problem(&args.problem)?;
    let curves = hodograph_curves(&problem, args.kind.into());
    let mut table = Table::new(&["level", "xi", "sigma"]);
    for &level in &levels {
        for [xi, s] in curves.level_set(level, args.n) {
            table.push(vec![level.into(), xi.into(), s.into()]);
        }
    }
    let name = match args.kind {
        CurveArg::Time => "time",
        CurveArg::Space => "space",
    };
    out.table(&format!("hodograph_curves_{name}"), &table)?;
    if let Ok([c0, c1]) = curves.expansion() {
        out.json(
            &format!("hodograph_curves_{name}_expansion.json"),
            &json!({
                "order0": poly_to_json(&c0),
                "order1": poly_to_json(&c1),
                "order0_display": c0.to_string(),
                "order1_display": c1.to_string(),
            }),
        )?;
    }
    println!("{} level-set samples", table.len());
    Ok(())
}
