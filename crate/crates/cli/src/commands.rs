//! The five verbs. Each writes its report to `out` and returns the exit code
//! to use on failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use hardy_core::bounds::{Discretization, Settings};
use hardy_core::measure::ProblemSpec;
use hardy_core::oracle::{bliss_optimizer, maximize, rayleigh};
use hardy_core::quad::GridFunction;
use hardy_core::specfun::k_factor;
use hardy_core::Error;

use crate::config::{ConfigError, RunConfig};
use crate::figures::figure;
use crate::format::{fmt_g, num, Table};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGENT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Fixed-point iterations allowed to the oracle.
pub const ORACLE_ITERS: usize = 500;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::usage(e.0)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: format!("i/o: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: format!("csv: {e}"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent(_) | Error::ZeroMass => EXIT_DIVERGENT,
        Error::Domain(_) | Error::InvalidInput(_) | Error::Parse(_) | Error::NotApplicable(_) => {
            EXIT_USAGE
        }
        _ => EXIT_NUMERIC,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub type Outcome = Result<(), Failure>;

fn settings(cfg: &RunConfig, nodes: Option<usize>) -> Settings {
    Settings {
        nodes: nodes.unwrap_or(cfg.grid_nodes),
        quad: cfg.quad,
        effort: cfg.n_iters.max(1),
        ..Settings::default()
    }
}

fn describe(spec: &ProblemSpec) -> String {
    let d = match spec.extent() {
        hardy_core::measure::Extent::Finite(d) => fmt_g(d, 12),
        hardy_core::measure::Extent::Infinite => "inf".into(),
    };
    format!(
        "p = {}, q = {}, D = {d}",
        fmt_g(spec.p(), 12),
        fmt_g(spec.q(), 12)
    )
}

fn cell(r: &hardy_core::Result<f64>) -> String {
    match r {
        Ok(v) => num(*v),
        Err(e) => format!("n/a ({e})"),
    }
}

pub fn bounds(
    cfg: &RunConfig,
    nodes: Option<usize>,
    csv_out: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let spec = cfg.spec()?;
    let disc = Discretization::new(&spec, &settings(cfg, nodes))?;
    let report = disc.report();
    writeln!(out, "{}", describe(&spec))?;
    writeln!(out, "{:<16} {:<20} at", "bound", "value")?;
    let mut table = Vec::new();
    for (name, r) in report.entries() {
        let at = report
            .locations
            .get(name)
            .map(|&x| num(x))
            .unwrap_or_default();
        let line = format!("{name:<16} {:<20} {at}", cell(r));
        writeln!(out, "{}", line.trim_end())?;
        table.push((name, r.as_ref().ok().copied(), at));
    }
    writeln!(
        out,
        "bracket          [{}, {}]",
        num(report.lower),
        num(report.upper)
    )?;
    if let Some(path) = csv_out {
        let mut w = csv::Writer::from_writer(File::create(path)?);
        w.write_record(["bound", "value", "at"])?;
        for (name, v, at) in &table {
            w.write_record([name.to_string(), v.map(num).unwrap_or_default(), at.clone()])?;
        }
        w.write_record(["lower".to_string(), num(report.lower), String::new()])?;
        w.write_record(["upper".to_string(), num(report.upper), String::new()])?;
        w.flush()?;
    }
    if report.diverges() {
        writeln!(out, "A = inf")?;
        return Err(Failure {
            code: EXIT_DIVERGENT,
            message: "A is infinite: a lower bound diverges".into(),
        });
    }
    Ok(())
}

fn verdict<F: Fn(f64, f64) -> bool>(xs: &[f64], ok: F) -> &'static str {
    if xs.windows(2).all(|w| ok(w[0], w[1])) {
        "yes"
    } else {
        "no"
    }
}

pub fn iterate(
    cfg: &RunConfig,
    n: Option<usize>,
    nodes: Option<usize>,
    out: &mut dyn Write,
) -> Outcome {
    let n = n.unwrap_or(cfg.n_iters);
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let spec = cfg.spec()?;
    let s = settings(cfg, nodes);
    let disc = Discretization::new(&spec, &s)?;
    let delta = disc.iterate_delta(n);
    let deltabar = disc.iterate_deltabar(n, s.x0_points);
    if let (Err(a), Err(_)) = (&delta, &deltabar) {
        return Err(a.clone().into());
    }
    if let Err(e @ Error::Divergent(_)) = &delta {
        writeln!(out, "{}", describe(&spec))?;
        writeln!(out, "A = inf")?;
        return Err(e.clone().into());
    }
    writeln!(out, "{}", describe(&spec))?;
    writeln!(out, "{:<4} {:<20} deltabar_n", "n", "delta_n")?;
    for k in 0..n {
        let d = delta.as_ref().map(|v| v[k]).map_err(Clone::clone);
        let b = deltabar.as_ref().map(|v| v[k]).map_err(Clone::clone);
        writeln!(out, "{:<4} {:<20} {}", k + 1, cell(&d), cell(&b))?;
    }
    if let Ok(d) = &delta {
        writeln!(
            out,
            "delta nonincreasing: {}",
            verdict(d, |a, b| b <= a * (1.0 + 1e-9))
        )?;
    }
    if let Ok(b) = &deltabar {
        writeln!(
            out,
            "deltabar nondecreasing: {}",
            verdict(b, |a, b| b >= a * (1.0 - 1e-9))
        )?;
    }
    Ok(())
}

pub fn oracle(cfg: &RunConfig, nodes: Option<usize>, out: &mut dyn Write) -> Outcome {
    let spec = cfg.spec()?;
    let disc = Discretization::new(&spec, &settings(cfg, nodes))?;
    let r = maximize(&spec, disc.grid(), ORACLE_ITERS)?;
    writeln!(out, "{}", describe(&spec))?;
    writeln!(out, "lower bound      {}", num(r.value))?;
    writeln!(out, "iterations       {}", r.iterations_used)?;
    writeln!(out, "converged        {}", r.converged)?;
    Ok(())
}

pub fn sharp(cfg: &RunConfig, nodes: Option<usize>, out: &mut dyn Write) -> Outcome {
    let spec = cfg.sharp_spec()?;
    let disc = Discretization::new(&spec, &settings(cfg, nodes))?;
    let (p, q) = (spec.p(), spec.q());
    let k = k_factor(p, q)?;
    let b = disc.basic_b()?.value;
    let cap = k * cfg.b1;
    let r = maximize(&spec, disc.grid(), ORACLE_ITERS)?;
    // Bliss profile in the variable s = φ(x).
    let g = bliss_optimizer(p, q, 1.0, 1.0)?;
    let f = GridFunction::new(
        disc.grid().clone(),
        disc.phi().values().iter().map(|&s| g.g(s)).collect(),
    )?;
    let bliss = rayleigh(disc.spec(), &f)?;
    let tol = 1e-6;
    writeln!(
        out,
        "{}  (sharp instance, B1 = {})",
        describe(&spec),
        num(cfg.b1)
    )?;
    writeln!(out, "B                {}", num(b))?;
    writeln!(out, "k*B1             {}", num(cap))?;
    writeln!(out, "oracle           {}", num(r.value))?;
    writeln!(out, "bliss quotient   {}", num(bliss))?;
    let ok = r.value <= cap + tol && bliss <= cap + tol;
    writeln!(out, "oracle <= k*B1:  {}", if ok { "yes" } else { "no" })?;
    if !ok {
        return Err(Failure {
            code: EXIT_NUMERIC,
            message: "a lower bound exceeds k*B1".into(),
        });
    }
    Ok(())
}

pub fn figure_csv(id: u32, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    if !crate::figures::IDS.contains(&id) {
        return Err(Failure::usage("--id must be 1..7"));
    }
    let t: Table = figure(id)?;
    match path {
        Some(p) => t.write_csv(File::create(p)?)?,
        None => t.write_csv(out)?,
    }
    Ok(())
}
