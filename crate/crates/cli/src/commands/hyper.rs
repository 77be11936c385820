//! `hyper` and `hyper simple-wave`.

use serde_json::{json, Value};
use stratiflow::models::{ModelParams, Scaling};
use stratiflow::spectral::{hyperbolic_boundary, simple_wave_curve, WaveFamily};

use super::{check_r, pair};
use crate::args::{Format, HyperAction, HyperArgs, ModelArgs, SimpleWaveArgs};
use crate::error::{invalid, CliError, Context};
use crate::output::{Output, Table};

fn params(model: &ModelArgs, fixed_gravity: bool) -> Result<ModelParams, CliError> {
    check_r(model.r)?;
    let scaling = if fixed_gravity { Scaling::FixedG } else { model.scaling.into() };
    ModelParams::new(model.r, scaling, model.order.into()).context("selecting the model")
}

pub fn hyper(args: &HyperArgs, out: &mut Output) -> Result<(), CliError> {
    if let Some(HyperAction::SimpleWave(sw)) = &args.action {
        return simple_wave(sw, out);
    }
    if args.samples < 2 {
        return Err(invalid("--samples must be at least 2"));
    }
    let params = params(&args.model, args.appendix_b)?;
    let report = hyperbolic_boundary(&params).context("computing the hyperbolicity region")?;
    let samples = report.boundary_samples(args.samples);
    let mut summary = serde_json::to_value(&report).expect("reports serialize");
    match out.format() {
        Format::Csv => {
            let mut table = Table::new(&["xi", "sigma_b"]);
            for [xi, s] in &samples {
                table.push(vec![(*xi).into(), (*s).into()]);
            }
            out.table("hyper_boundary", &table)?;
        }
        Format::Json => {
            let boundary: Vec<Value> = samples
                .iter()
                .map(|[xi, s]| json!([xi, if s.is_finite() { json!(s) } else { Value::Null }]))
                .collect();
            summary["boundary"] = Value::Array(boundary);
        }
    }
    out.json("hyper.json", &summary)?;
    println!("area = {}", report.area);
    Ok(())
}

fn simple_wave(args: &SimpleWaveArgs, out: &mut Output) -> Result<(), CliError> {
    let start = pair(&args.start, "--start")?;
    if !(args.tol > 0.0) {
        return Err(invalid("--tol must be positive"));
    }
    let params = params(&args.model, false)?;
    for family in args.family.families() {
        let curve = simple_wave_curve(start, &params, family, args.tol).context("integrating the simple wave")?;
        let stem = match family {
            WaveFamily::Plus => "simple_wave_plus",
            WaveFamily::Minus => "simple_wave_minus",
        };
        match out.format() {
            Format::Csv => {
                let mut table = Table::new(&["xi", "sigma"]);
                for [xi, s] in &curve.points {
                    table.push(vec![(*xi).into(), (*s).into()]);
                }
                out.table(stem, &table)?;
            }
            Format::Json => out.json(&format!("{stem}.json"), &serde_json::to_value(&curve).expect("curves serialize"))?,
        }
        println!("{stem}: {} points, ends {:?}", curve.points.len(), curve.ends);
    }
    Ok(())
}
