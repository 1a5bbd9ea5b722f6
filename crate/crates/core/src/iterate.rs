//! Approximating sequences: `δₙ` (upper, nonincreasing) and `δ̄ₙ` (lower).
//!
//! Upper: `f₁ = φ^{γ*}`, `fₙ₊₁(x) = ∫₀ˣ v̂ (∫_y^D fₙ^{q/p*} dμ)^{p*/q}` and
//! `δₙ = (sup fₙ₊₁/fₙ)^{1/p*}`.
//!
//! Lower: for each `x₀`, `f₁ = φ(·∧x₀)` and
//! `fₙ₊₁(x) = ∫₀^{x∧x₀} v̂ (∫_y^D fₙ^{q-1} dμ)^{p*-1}`; `δ̄ₙ` is the sup over
//! `x₀` of `‖fₙ‖_{μ,q}/‖fₙ'‖_{ν,p}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::{Discretization, Settings};
use crate::math::pow;
use crate::measure::ProblemSpec;
use crate::quad::{
    cum_panels, golden_max, panel_sum, sup_over_nodes, tail_panels, Grid, GridFunction,
};
use crate::{Error, Result};

/// State of the upper sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub n: usize,
    pub f_current: GridFunction,
    pub delta_history: Vec<f64>,
    /// Product of the factors divided out of `f` so far.
    pub normalization: f64,
}

fn finite_max(values: &[f64]) -> f64 {
    values
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

/// Rescale to max 1 among finite values; returns the factor.
fn normalize(f: &GridFunction) -> Result<(GridFunction, f64)> {
    let m = finite_max(f.values());
    if !(m > f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence("iterate underflowed to zero"));
    }
    Ok((f.scaled(1.0 / m), m))
}

impl IterationState {
    /// `f₁ = φ^{γ*}`.
    pub fn start(disc: &Discretization) -> Result<IterationState> {
        let spec = disc.spec();
        let (p_star, q) = (spec.p_star(), spec.q());
        let gamma = q / (p_star + q);
        let phi = disc.phi();
        let values: Vec<f64> = phi.values().iter().map(|&f| pow(f, gamma)).collect();
        let slopes: Vec<f64> = match phi.slopes() {
            Some(s) => phi
                .values()
                .iter()
                .zip(s)
                .map(|(&f, &d)| {
                    let v = gamma * pow(f, gamma - 1.0) * d;
                    if v.is_finite() {
                        v
                    } else {
                        f64::NAN
                    }
                })
                .collect(),
            None => vec![f64::NAN; values.len()],
        };
        let f = GridFunction::with_slopes(disc.grid().clone(), values, slopes)?;
        let (f, c) = normalize(&f)?;
        Ok(IterationState {
            n: 1,
            f_current: f,
            delta_history: Vec::new(),
            normalization: c,
        })
    }

    /// Computes `fₙ₊₁`, records `δₙ` and moves to `n + 1`.
    pub fn step(&mut self, disc: &Discretization) -> Result<f64> {
        let spec = disc.spec();
        let (p_star, q) = (spec.p_star(), spec.q());
        let f = &self.f_current;
        let grid = disc.grid();
        let cfg = &disc.settings().quad;
        let s = tail_panels(
            |i, y| Ok(pow(f.eval_panel(i, y), q / p_star) * spec.u(y)?),
            grid,
            cfg,
        )?;
        let next = cum_panels(
            |i, y| Ok(spec.vhat(y)? * pow(s.eval_panel(i, y), p_star / q)),
            grid,
            cfg,
        )?;
        let nodes = grid.nodes();
        let n = nodes.len();
        // Ratio on nodes outside the first and last two cells.
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b) = (next.values()[i], f.values()[i]);
                if i < 2 || i + 2 >= n || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
                    f64::NAN
                } else {
                    a / b
                }
            })
            .collect();
        let ratio = |x: f64| Ok(next.eval(x) / f.eval(x));
        let (_, sup) = sup_over_nodes(nodes, &vals, ratio)?.ok_or(Error::NonConvergence(
            "iterate has no usable interior nodes",
        ))?;
        let delta = pow(sup, 1.0 / p_star);
        let (f, c) = normalize(&next)?;
        self.f_current = f;
        self.normalization *= c;
        self.delta_history.push(delta);
        self.n += 1;
        Ok(delta)
    }
}

impl Discretization {
    /// `[δ₁, …, δ_{n_max}]`.
    pub fn iterate_delta(&self, n_max: usize) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Err(Error::InvalidInput("n_max must be at least 1"));
        }
        if self.spec().q() < self.spec().p() {
            return Err(Error::NotApplicable("delta iteration requires q >= p"));
        }
        if self.mu_is_zero() {
            return Ok(vec![0.0; n_max]);
        }
        if self.basic_b()?.value.is_infinite() {
            return Err(Error::Divergent("B is infinite, so delta_1 is infinite"));
        }
        let mut state = IterationState::start(self)?;
        for _ in 0..n_max {
            state.step(self)?;
        }
        Ok(state.delta_history)
    }

    /// Quotients `‖fₙ‖/‖fₙ'‖`, `n = 1..=n_max`, for one `x₀` (NaN where undefined).
    fn deltabar_chain(&self, x0: f64, n_max: usize) -> Result<Vec<f64>> {
        let spec = self.spec();
        let (p, q, p_star) = (spec.p(), spec.q(), spec.p_star());
        let cfg = &self.settings().quad;
        let phi0 = self.phi().eval(x0);
        let m0 = self.mu_tail().eval(x0);
        let mut out = vec![f64::NAN; n_max];
        if !(phi0 > 0.0) || !phi0.is_finite() || !m0.is_finite() {
            return Ok(out);
        }
        let sub: Grid = self.subgrid(x0);
        let nodes = sub.nodes();
        let last = nodes.len() - 1;
        let phi = self.phi();
        let f1: Vec<f64> = nodes.iter().map(|&x| phi.eval(x)).collect();
        let s1: Vec<f64> = nodes
            .iter()
            .map(|&x| match spec.vhat(x) {
                Ok(v) if v.is_finite() => v,
                _ => f64::NAN,
            })
            .collect();
        let mut f = GridFunction::with_slopes(sub.clone(), f1, s1)?;
        let mut energy = phi0;
        for slot in out.iter_mut() {
            let end = f.values()[last];
            if !(end > 0.0) || !end.is_finite() || !(energy > 0.0) {
                break;
            }
            let mut norm = if m0 == 0.0 { 0.0 } else { pow(end, q) * m0 };
            norm += panel_sum(
                |i, y| Ok(pow(f.eval_panel(i, y), q) * spec.u(y)?),
                &sub,
                cfg,
            )?;
            *slot = pow(norm, 1.0 / q) / pow(energy, 1.0 / p);
            // Next iterate from the normalized current one.
            let scale = 1.0 / end;
            let fs = f.scaled(scale);
            let c0 = if m0 == 0.0 { 0.0 } else { m0 };
            let tail = tail_panels(
                |i, y| Ok(pow(fs.eval_panel(i, y), q - 1.0) * spec.u(y)?),
                &sub,
                cfg,
            )?;
            let bracket = |i: usize, y: f64| tail.eval_panel(i, y) + c0;
            let next = cum_panels(
                |i, y| Ok(spec.vhat(y)? * pow(bracket(i, y), p_star - 1.0)),
                &sub,
                cfg,
            )?;
            let e = panel_sum(
                |i, y| Ok(spec.vhat(y)? * pow(bracket(i, y), p_star)),
                &sub,
                cfg,
            )?;
            f = next;
            energy = e;
        }
        Ok(out)
    }

    /// `[δ̄₁, …, δ̄_{n_max}]` with `x0_points` scan points for `x₀`.
    pub fn iterate_deltabar(&self, n_max: usize, x0_points: usize) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Err(Error::InvalidInput("n_max must be at least 1"));
        }
        if x0_points < 4 {
            return Err(Error::InvalidInput("x0 grid needs at least 4 points"));
        }
        if self.mu_is_zero() {
            return Ok(vec![0.0; n_max]);
        }
        let nodes = self.grid().nodes();
        let idx = self.x0_indices(x0_points);
        let chains: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| self.deltabar_chain(nodes[i], n_max))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(n_max);
        for k in 0..n_max {
            let mut best: Option<(usize, f64)> = None;
            for (j, c) in chains.iter().enumerate() {
                let v = c[k];
                if !v.is_nan() && best.is_none_or(|(_, b)| v > b) {
                    best = Some((j, v));
                }
            }
            let Some((j, v)) = best else {
                return Err(Error::NonConvergence(
                    "deltabar quotient undefined at every x0",
                ));
            };
            let (lo, hi) = self.x0_bracket(&idx, j);
            let g = |x0: f64| Ok(self.deltabar_chain(x0, k + 1)?[k]);
            let (_, gx) = golden_max(&g, lo, hi, 1e-10 * hi)?;
            out.push(if gx > v { gx } else { v });
        }
        Ok(out)
    }
}

pub fn iterate_delta(spec: &ProblemSpec, n_max: usize) -> Result<Vec<f64>> {
    Discretization::new(spec, &Settings::default())?.iterate_delta(n_max)
}

pub fn iterate_deltabar(spec: &ProblemSpec, n_max: usize, x0_grid_size: usize) -> Result<Vec<f64>> {
    Discretization::new(spec, &Settings::default())?.iterate_deltabar(n_max, x0_grid_size)
}
