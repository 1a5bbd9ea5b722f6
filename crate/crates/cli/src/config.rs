//! Flat `key = value` run configuration.
//!
//! ```text
//! # unit interval, Lebesgue measures
//! p = 2
//! q = 4
//! D = 1            # or inf
//! u = 1            # constant
//! v = kind=power coef=1 exp=-0.5
//! ```
//!
//! A density is a number (constant), `kind=constant value=c`,
//! `kind=power coef=c exp=e`, `kind=tabulated nodes=x0,x1,.. values=y0,y1,..`,
//! `expr = <text>` or bare expression text in `x`.

use std::fmt;
use std::path::Path;

use hardy_core::measure::{sharp_instance, Density, Extent, ProblemSpec};
use hardy_core::quad::QuadConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Density as written in the config, kept for display.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDesc {
    pub text: String,
    pub density: Density,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub p: f64,
    pub q: f64,
    /// `None` for `D = inf`; unset means "not given".
    pub d: Option<Extent>,
    pub u: Option<DensityDesc>,
    pub v: DensityDesc,
    pub grid_nodes: usize,
    pub n_iters: usize,
    pub quad: QuadConfig,
    /// Normalization of the sharp instance.
    pub b1: f64,
}

const KEYS: [&str; 11] = [
    "p",
    "q",
    "D",
    "u",
    "v",
    "nodes",
    "grid_nodes",
    "n_iters",
    "rel_tol",
    "abs_tol",
    "B1",
];

fn number(key: &str, s: &str) -> Result<f64, ConfigError> {
    match s.trim().parse::<f64>() {
        Ok(x) => Ok(x),
        Err(_) => err(format!("{key}: not a number: {s:?}")),
    }
}

fn list(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').map(|t| number(key, t)).collect()
}

fn core_err(key: &str, e: hardy_core::Error) -> ConfigError {
    ConfigError(format!("{key}: {e}"))
}

/// Parses one density value.
pub fn parse_density(key: &str, text: &str) -> Result<DensityDesc, ConfigError> {
    let t = text.trim();
    if t.is_empty() {
        return err(format!("{key}: empty density"));
    }
    let desc = |density| {
        Ok(DensityDesc {
            text: t.to_string(),
            density,
        })
    };
    if let Ok(c) = t.parse::<f64>() {
        return desc(Density::constant(c).map_err(|e| core_err(key, e))?);
    }
    if let Some(rest) = t.strip_prefix("expr") {
        let rest = rest.trim_start();
        if let Some(src) = rest.strip_prefix('=').or_else(|| rest.strip_prefix(':')) {
            return desc(Density::expression(src.trim()).map_err(|e| core_err(key, e))?);
        }
    }
    if !t.starts_with("kind=") && !t.starts_with("kind =") {
        return desc(Density::expression(t).map_err(|e| core_err(key, e))?);
    }
    let mut kind = None;
    let mut params: Vec<(String, String)> = Vec::new();
    let normalized = t.replace(" = ", "=");
    for tok in normalized.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else {
            return err(format!("{key}: expected name=value, got {tok:?}"));
        };
        if k == "kind" {
            kind = Some(v.to_string());
        } else {
            params.push((k.to_string(), v.to_string()));
        }
    }
    let get = |name: &str| {
        params
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    };
    let allow = |names: &[&str]| -> Result<(), ConfigError> {
        for (k, _) in &params {
            if !names.contains(&k.as_str()) {
                return err(format!("{key}: unknown parameter {k:?}"));
            }
        }
        Ok(())
    };
    let need = |name: &str| get(name).ok_or_else(|| ConfigError(format!("{key}: missing {name}")));
    let density = match kind.as_deref() {
        Some("constant") => {
            allow(&["value"])?;
            Density::constant(number(key, need("value")?)?)
        }
        Some("power") => {
            allow(&["coef", "exp"])?;
            let coef = get("coef")
                .map(|c| number(key, c))
                .transpose()?
                .unwrap_or(1.0);
            Density::power_law(coef, number(key, need("exp")?)?)
        }
        Some("tabulated") => {
            allow(&["nodes", "values"])?;
            Density::tabulated(list(key, need("nodes")?)?, list(key, need("values")?)?)
        }
        Some(k) => return err(format!("{key}: unknown density kind {k:?}")),
        None => return err(format!("{key}: missing kind")),
    };
    desc(density.map_err(|e| core_err(key, e))?)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut seen: Vec<&str> = Vec::new();
        let (mut p, mut q, mut d, mut u, mut v) = (None, None, None, None, None);
        let mut grid_nodes = 2048;
        let mut n_iters = 3;
        let mut quad = QuadConfig::default();
        let mut b1 = 1.0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected key = value", lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
                return err(format!("line {}: unknown key {key:?}", lineno + 1));
            };
            if seen.contains(&key) {
                return err(format!("line {}: duplicate key {key:?}", lineno + 1));
            }
            seen.push(key);
            let count = |s: &str| -> Result<usize, ConfigError> {
                s.parse::<usize>()
                    .map_err(|_| ConfigError(format!("{key}: not a positive integer: {s:?}")))
            };
            match key {
                "p" => p = Some(number(key, value)?),
                "q" => q = Some(number(key, value)?),
                "D" => {
                    d = Some(if value.eq_ignore_ascii_case("inf") {
                        Extent::Infinite
                    } else {
                        Extent::Finite(number(key, value)?)
                    })
                }
                "u" => u = Some(parse_density(key, value)?),
                "v" => v = Some(parse_density(key, value)?),
                "nodes" | "grid_nodes" => grid_nodes = count(value)?,
                "n_iters" => n_iters = count(value)?,
                "rel_tol" => quad.rel_tol = number(key, value)?,
                "abs_tol" => quad.abs_tol = number(key, value)?,
                "B1" => b1 = number(key, value)?,
                _ => unreachable!(),
            }
        }
        if seen.contains(&"nodes") && seen.contains(&"grid_nodes") {
            return err("nodes and grid_nodes both given");
        }
        let p = p.ok_or_else(|| ConfigError("missing key p".into()))?;
        let q = q.ok_or_else(|| ConfigError("missing key q".into()))?;
        let v = match v {
            Some(v) => v,
            None => return err("missing key v"),
        };
        quad.validate().map_err(|e| core_err("quadrature", e))?;
        Ok(RunConfig {
            p,
            q,
            d,
            u,
            v,
            grid_nodes,
            n_iters,
            quad,
            b1,
        })
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        match std::fs::read_to_string(path) {
            Ok(text) => RunConfig::parse(&text),
            Err(e) => err(format!("{}: {e}", path.display())),
        }
    }

    /// The problem `(p, q, D, u, v)`; `D` and `u` are required here.
    pub fn spec(&self) -> Result<ProblemSpec, ConfigError> {
        let d = self.d.ok_or_else(|| ConfigError("missing key D".into()))?;
        let u = self
            .u
            .as_ref()
            .ok_or_else(|| ConfigError("missing key u".into()))?;
        ProblemSpec::new(self.p, self.q, d, u.density.clone(), self.v.density.clone())
            .map_err(|e| core_err("problem", e))
    }

    /// Sharp instance built from `v`, `B1`, `p`, `q`; `D` defaults to `inf`.
    pub fn sharp_spec(&self) -> Result<ProblemSpec, ConfigError> {
        if self.u.is_some() {
            return err("u is derived for the sharp instance and must not be given");
        }
        if self.q <= self.p || self.q.is_nan() {
            return err("sharp instance requires q > p");
        }
        sharp_instance(
            self.v.density.clone(),
            self.b1,
            self.p,
            self.q,
            self.d.unwrap_or(Extent::Infinite),
        )
        .map_err(|e| core_err("sharp instance", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let c = RunConfig::parse(
            "# comment\np = 2\nq = 4\nD = inf\nu = kind=power coef=1 exp=-3\nv = 1 # unit\nnodes = 512\n",
        )
        .unwrap();
        assert_eq!(
            (c.p, c.q, c.d, c.grid_nodes, c.n_iters),
            (2.0, 4.0, Some(Extent::Infinite), 512, 3)
        );
        assert_eq!(c.u.unwrap().density, Density::power_law(1.0, -3.0).unwrap());
        assert_eq!(c.v.density, Density::constant(1.0).unwrap());
    }

    #[test]
    fn density_forms() {
        let e = parse_density("u", "expr = x^(-3)").unwrap();
        assert!((e.density.eval(2.0).unwrap() - 0.125).abs() < 1e-15);
        let e = parse_density("u", "x^(-0.5)").unwrap();
        assert!((e.density.eval(4.0).unwrap() - 0.5).abs() < 1e-15);
        let c = parse_density("u", "kind=constant value=2.5").unwrap();
        assert_eq!(c.density.eval(0.3).unwrap(), 2.5);
        let t = parse_density("u", "kind=tabulated nodes=0,1,2 values=1,3,3").unwrap();
        assert_eq!(t.density.eval(0.5).unwrap(), 2.0);
        assert!(parse_density("u", "kind=power exp=1 slope=2").is_err());
        assert!(parse_density("u", "kind=bogus").is_err());
        assert!(parse_density("u", "x^").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("p = 2\nq = 2\nv = 1\ncolour = red\n").is_err());
        assert!(RunConfig::parse("p = 2\np = 3\nq = 2\nv = 1\n").is_err());
        assert!(RunConfig::parse("p = 2\nq = two\nv = 1\n").is_err());
        assert!(RunConfig::parse("q = 2\nv = 1\n").is_err());
        assert!(RunConfig::parse("p 2\n").is_err());
        let c = RunConfig::parse("p = 2\nq = 2\nv = 1\n").unwrap();
        assert!(c.spec().is_err());
        assert!(RunConfig::parse("p = 2\nq = 2\nv = 1\nrel_tol = -1\n").is_err());
    }
}
