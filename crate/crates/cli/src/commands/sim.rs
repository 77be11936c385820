//! `sim run`.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde_json::json;
use stratiflow::conserved::generate_polynomial_family;
use stratiflow::deformation::deformed_family;
use stratiflow::hodograph::solve_initial_condition;
use stratiflow::models::{hamiltonian, ModelParams};
use stratiflow::ratpoly::VarPair;
use stratiflow::simulator::{monitor, run, Boundary, GridState, HodographBoundary, Monitored, RunConfig};

use super::{check_r, hodograph, time_tag};
use crate::args::{BoundaryArg, ExpansionArg, Format, ModeArg, ProblemArgs, SimRunArgs};
use crate::error::{invalid, CliError, Context};
use crate::output::{Output, Table};

/// Relative tolerance on the node spacing of file data.
const SPACING_TOL: f64 = 1e-8;

/// Splits `name:key=value,key=value` into its name and options.
fn options(spec: &str) -> Result<(&str, BTreeMap<&str, &str>), CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut map = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| invalid(format!("--ic: expected key=value, got `{item}`")))?;
        map.insert(k.trim(), v.trim());
    }
    Ok((name, map))
}

struct IcOptions<'a> {
    map: BTreeMap<&'a str, &'a str>,
    name: &'a str,
}

impl<'a> IcOptions<'a> {
    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.map.remove(key)
    }

    fn number(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| invalid(format!("--ic {}: `{key}={v}` is not a finite number", self.name))),
        }
    }

    fn choice<E: ValueEnum>(&mut self, key: &str, default: E) -> Result<E, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => E::from_str(v, true).map_err(|_| invalid(format!("--ic {}: unknown {key} `{v}`", self.name))),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(invalid(format!("--ic {}: unknown option `{k}`", self.name))),
        }
    }
}

/// Initial state and boundary treatment.
fn initial_state(args: &SimRunArgs, seed: u64) -> Result<(GridState, Boundary), CliError> {
    let (name, map) = options(&args.ic)?;
    let mut opts = IcOptions { map, name };
    let two_pi = 2.0 * std::f64::consts::PI;
    let result = match name {
        "wave" => {
            let a = opts.number("xi", 0.2)?;
            let s = opts.number("sigma", 0.2)?;
            let offset = opts.number("offset", 0.0)?;
            let state = GridState::periodic(args.nx, 0.0, 1.0, |x| {
                [offset + a * (two_pi * x).sin(), s * (two_pi * x).cos()]
            })
            .context("building the grid")?;
            (state, Boundary::Periodic)
        }
        "random" => {
            let modes = opts.number("modes", 3.0)?;
            let amp = opts.number("amp", 0.1)?;
            if modes < 1.0 || modes.fract() != 0.0 {
                return Err(invalid("--ic random: modes must be a positive integer"));
            }
            let mut rng = StdRng::seed_from_u64(seed);
            let coeffs: Vec<[f64; 4]> = (0..modes as usize)
                .map(|_| {
                    [
                        rng.random_range(-1.0..=1.0),
                        rng.random_range(0.0..two_pi),
                        rng.random_range(-1.0..=1.0),
                        rng.random_range(0.0..two_pi),
                    ]
                })
                .collect();
            let scale = amp / modes;
            let state = GridState::periodic(args.nx, 0.0, 1.0, |x| {
                coeffs.iter().enumerate().fold([0.0, 0.0], |[xi, s], (k, c)| {
                    let kx = two_pi * (k + 1) as f64 * x;
                    [xi + scale * c[0] * (kx + c[1]).sin(), s + scale * c[2] * (kx + c[3]).sin()]
                })
            })
            .context("building the grid")?;
            (state, Boundary::Periodic)
        }
        "hodograph" => {
            let index = opts.number("index", 3.0)?;
            if index < 1.0 || index.fract() != 0.0 {
                return Err(invalid("--ic hodograph: index must be a positive integer"));
            }
            let problem_args = ProblemArgs {
                f_index: index as usize,
                r: args.r,
                mode: opts.choice("mode", ModeArg::SigmaZero)?,
            };
            let a = opts.number("a", -0.5)?;
            let b = opts.number("b", -0.2)?;
            let expansion = opts.choice("expansion", ExpansionArg::Exact)?.into();
            let (problem, _) = hodograph::problem(&problem_args)?;
            let state = GridState::try_bounded(args.nx, a, b, |x| Ok(solve_initial_condition(&problem, x, expansion)?))
                .context("sampling the hodograph initial data")?;
            (state, Boundary::Prescribed(Box::new(HodographBoundary::new(problem))))
        }
        path => {
            let state = read_state(Path::new(path), args.boundary)?;
            let boundary = match args.boundary {
                BoundaryArg::Periodic => Boundary::Periodic,
                BoundaryArg::Extend => Boundary::ConstantExtension,
            };
            return Ok((state, boundary));
        }
    };
    opts.finish()?;
    Ok(result)
}

/// Reads `x,xi,sigma` rows on a uniform grid.
fn read_state(path: &Path, boundary: BoundaryArg) -> Result<GridState, CliError> {
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => invalid(format!("{}: {other:?}", path.display())),
    };
    let mut reader = csv::Reader::from_path(path).map_err(io)?;
    let headers = reader.headers().map_err(io)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| invalid(format!("{}: missing column `{name}`", path.display())))
    };
    let cols = [column("x")?, column("xi")?, column("sigma")?];
    let (mut x, mut xi, mut sigma) = (Vec::new(), Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(io)?;
        let mut vals = [0.0; 3];
        for (v, &c) in vals.iter_mut().zip(&cols) {
            let field = record.get(c).unwrap_or("").trim();
            *v = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(format!("{}: row {}: `{field}` is not a finite number", path.display(), row + 1)))?;
        }
        x.push(vals[0]);
        xi.push(vals[1]);
        sigma.push(vals[2]);
    }
    if x.len() < 4 {
        return Err(invalid(format!("{}: at least 4 rows are needed", path.display())));
    }
    let dx = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    let uniform = dx > 0.0 && x.windows(2).all(|w| ((w[1] - w[0]) - dx).abs() <= SPACING_TOL * dx);
    if !uniform {
        return Err(invalid(format!("{}: x must be increasing and uniformly spaced", path.display())));
    }
    Ok(GridState {
        x,
        xi,
        sigma,
        t: 0.0,
        dx,
        periodic: boundary == BoundaryArg::Periodic,
    })
}

fn snapshot_times(s: &str, t_end: f64) -> Result<Vec<f64>, CliError> {
    let mut times = Vec::new();
    for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let t: f64 = item
            .parse()
            .map_err(|_| invalid(format!("--snapshots: `{item}` is not a number")))?;
        if !(t > 0.0 && t <= t_end) {
            return Err(invalid(format!("--snapshots: {t} lies outside (0, T]")));
        }
        times.push(t);
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(times)
}

fn monitored(max_index: usize, r: f64) -> Result<Vec<Monitored>, CliError> {
    let mut out = vec![Monitored::Xi, Monitored::Sigma];
    if max_index == 0 {
        return Ok(out);
    }
    let undeformed = generate_polynomial_family(max_index, VarPair::XiSigma).context("generating densities")?;
    let deformed = deformed_family(max_index).context("deforming densities")?;
    for (j, (f0, f)) in undeformed.into_iter().zip(deformed).enumerate() {
        out.push(Monitored::Density {
            label: format!("F0_{}", j + 1),
            density: f0,
            r,
        });
        out.push(Monitored::Density {
            label: format!("F_{}", j + 1),
            density: f,
            r,
        });
    }
    Ok(out)
}

pub fn run_sim(args: &SimRunArgs, seed: u64, out: &mut Output) -> Result<(), CliError> {
    check_r(args.r)?;
    if args.nx < 4 {
        return Err(invalid("--nx must be at least 4"));
    }
    if !(args.t_end > 0.0 && args.t_end.is_finite()) {
        return Err(invalid("--T must be positive"));
    }
    if !(args.cfl > 0.0 && args.cfl <= 0.5) {
        return Err(invalid("--cfl must lie in (0, 0.5]"));
    }
    let params = ModelParams::new(args.r, args.scaling.into(), args.model.into()).context("selecting the model")?;
    let cfg = RunConfig {
        scheme: args.scheme.into(),
        cfl: args.cfl,
        t_end: args.t_end,
        snapshot_times: snapshot_times(&args.snapshots, args.t_end)?,
        ..RunConfig::default()
    };
    let quantities = monitored(args.monitor_max, args.r)?;
    let (state, mut boundary) = initial_state(args, seed)?;
    let output = run(state, &hamiltonian(&params), &cfg, &mut boundary).context("running the simulation")?;

    let mut tags = Vec::new();
    let mut combined = Vec::new();
    for snap in &output.snapshots {
        let tag = time_tag(snap.t);
        if tags.contains(&tag) {
            continue;
        }
        let mut table = Table::new(&["x", "xi", "sigma"]);
        for i in 0..snap.len() {
            table.push(vec![snap.x[i].into(), snap.xi[i].into(), snap.sigma[i].into()]);
        }
        match out.format() {
            Format::Csv => out.table(&format!("sim_{tag}"), &table)?,
            Format::Json => combined.push(json!({ "t": snap.t, "table": table.to_json() })),
        }
        tags.push(tag);
    }
    if out.format() == Format::Json {
        out.json("sim.json", &json!({ "steps": output.steps, "snapshots": combined }))?;
    }

    let report = monitor(&output.snapshots, &quantities).context("monitoring conserved quantities")?;
    let max_drift: Vec<_> = (0..report.labels.len())
        .map(|k| json!({ "label": report.labels[k], "max_drift": report.max_drift(k) }))
        .collect();
    out.json(
        "sim_drift.json",
        &json!({ "steps": output.steps, "report": report, "max_drift": max_drift }),
    )?;
    println!("{} steps to t = {}", output.steps, output.final_state().t);
    Ok(())
}
