//! Running integrals `∫₀ˣ f` and `∫ₓ^D f` tabulated on a grid.
//!
//! Every panel is integrated adaptively, so accuracy does not depend on the
//! spacing. Node slopes are the integrand values, which makes the result a
//! Hermite interpolant between nodes. A divergent first or last panel yields
//! `+∞` node values instead of an error: that is how `φ(D) = ∞` on a mapped
//! half-line or `μ(0, D) = ∞` show up.

use alloc::vec;

use super::{integrate, Grid, GridFunction, QuadConfig};
use crate::{Error, Result};

fn end_panel_failure(e: &Error) -> bool {
    matches!(e, Error::Divergent(_) | Error::NonConvergence(_))
}

/// Per-panel config: relative tolerance only. Panels next to 0 can be
/// arbitrarily small, and a bound evaluated at a small `x₀` lives entirely on
/// them, so any fixed absolute tolerance would swamp the values.
pub(crate) fn panel_cfg(cfg: &QuadConfig) -> QuadConfig {
    QuadConfig {
        abs_tol: f64::MIN_POSITIVE,
        ..*cfg
    }
}

/// `∫ f` over the whole grid, panel by panel; the closure gets the panel index.
pub(crate) fn panel_sum<F>(f: F, grid: &Grid, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(usize, f64) -> Result<f64>,
{
    let nodes = grid.nodes();
    let pc = panel_cfg(cfg);
    let mut sum = 0.0;
    for i in 0..nodes.len() - 1 {
        sum += integrate(|x| f(i, x), nodes[i], nodes[i + 1], &pc)?;
    }
    Ok(sum)
}

fn slope_at<F>(f: &F, i: usize, x: f64) -> f64
where
    F: Fn(usize, f64) -> Result<f64>,
{
    match f(i, x) {
        Ok(v) if v.is_finite() => v,
        _ => f64::NAN,
    }
}

/// `F(x) = ∫_{x_0}^x f`; the closure receives the panel index.
pub(crate) fn cum_panels<F>(f: F, grid: &Grid, cfg: &QuadConfig) -> Result<GridFunction>
where
    F: Fn(usize, f64) -> Result<f64>,
{
    let nodes = grid.nodes();
    let n = nodes.len();
    let mut values = vec![0.0f64; n];
    for i in 0..n - 1 {
        if values[i].is_infinite() {
            values[i + 1] = f64::INFINITY;
            continue;
        }
        match integrate(|x| f(i, x), nodes[i], nodes[i + 1], &panel_cfg(cfg)) {
            Ok(v) => values[i + 1] = values[i] + v,
            Err(e) if (i == 0 || i == n - 2) && end_panel_failure(&e) => {
                values[i + 1] = f64::INFINITY
            }
            Err(e) => return Err(e),
        }
    }
    let slopes = (0..n)
        .map(|j| slope_at(&f, j.min(n - 2), nodes[j]))
        .collect();
    Ok(GridFunction::with_slopes(grid.clone(), values, slopes)?.monotone_clamped())
}

/// `G(x) = ∫_x^{x_last} f`; the closure receives the panel index.
pub(crate) fn tail_panels<F>(f: F, grid: &Grid, cfg: &QuadConfig) -> Result<GridFunction>
where
    F: Fn(usize, f64) -> Result<f64>,
{
    let nodes = grid.nodes();
    let n = nodes.len();
    let mut values = vec![0.0f64; n];
    for i in (0..n - 1).rev() {
        if values[i + 1].is_infinite() {
            values[i] = f64::INFINITY;
            continue;
        }
        match integrate(|x| f(i, x), nodes[i], nodes[i + 1], &panel_cfg(cfg)) {
            Ok(v) => values[i] = values[i + 1] + v,
            Err(e) if (i == 0 || i == n - 2) && end_panel_failure(&e) => values[i] = f64::INFINITY,
            Err(e) => return Err(e),
        }
    }
    let slopes = (0..n)
        .map(|j| -slope_at(&f, j.min(n - 2), nodes[j]))
        .collect();
    Ok(GridFunction::with_slopes(grid.clone(), values, slopes)?.monotone_clamped())
}

/// Cumulative integral `F(x) = ∫_{x_0}^x f` at the grid nodes.
pub fn cum_integral<F>(f: F, grid: &Grid, cfg: &QuadConfig) -> Result<GridFunction>
where
    F: Fn(f64) -> Result<f64>,
{
    cum_panels(|_, x| f(x), grid, cfg)
}

/// Tail integral `G(x) = ∫_x^{x_last} f` at the grid nodes.
pub fn tail_integral<F>(f: F, grid: &Grid, cfg: &QuadConfig) -> Result<GridFunction>
where
    F: Fn(f64) -> Result<f64>,
{
    tail_panels(|_, x| f(x), grid, cfg)
}
