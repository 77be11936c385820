//! Subcommand implementations.

pub mod conserved;
pub mod deform;
pub mod hodograph;
pub mod hyper;
pub mod sim;

use stratiflow::conserved::TruncationOrder;

use crate::args::TruncationArg;
use crate::error::{invalid, CliError};

impl From<TruncationArg> for TruncationOrder {
    fn from(t: TruncationArg) -> Self {
        match t {
            TruncationArg::O1 => TruncationOrder::O1,
            TruncationArg::Exact => TruncationOrder::Exact,
        }
    }
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: `{s}` is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("{what}: `{s}` is not finite")))
    }
}

fn three_parts<'a>(s: &'a str, what: &str, shape: &str) -> Result<[&'a str; 3], CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    <[&str; 3]>::try_from(parts).map_err(|_| invalid(format!("{what}: expected {shape}, got `{s}`")))
}

/// Parses `start:end:step` into the inclusive list `start, start + step, …, end`.
pub fn stepped_range(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let [a, b, h] = three_parts(s, what, "start:end:step")?;
    let (a, b, h) = (number(a, what)?, number(b, what)?, number(h, what)?);
    if b < a {
        return Err(invalid(format!("{what}: end {b} is below start {a}")));
    }
    if b == a {
        return Ok(vec![a]);
    }
    if !(h > 0.0) {
        return Err(invalid(format!("{what}: step must be positive")));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(invalid(format!("{what}: too many samples")));
    }
    Ok((0..=n).map(|k| a + h * k as f64).collect())
}

/// Parses `start:end:count` into `count` equally spaced points including both ends.
pub fn linspace(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let [a, b, n] = three_parts(s, what, "start:end:count")?;
    let (a, b) = (number(a, what)?, number(b, what)?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what}: `{n}` is not a count")))?;
    match n {
        0 => Err(invalid(format!("{what}: count must be positive"))),
        1 => Ok(vec![a]),
        _ if !(b > a) => Err(invalid(format!("{what}: end must exceed start"))),
        _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
    }
}

/// Parses a comma-separated pair of numbers.
pub fn pair(s: &str, what: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([number(a, what)?, number(b, what)?]),
        _ => Err(invalid(format!("{what}: expected `a,b`, got `{s}`"))),
    }
}

/// Inertia parameter check shared by all model-dependent commands.
pub fn check_r(r: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(invalid(format!("r = {r} is outside [0, 1)")))
    }
}

/// File-name fragment for a time value.
pub fn time_tag(t: f64) -> String {
    format!("t{t:.4}")
}
