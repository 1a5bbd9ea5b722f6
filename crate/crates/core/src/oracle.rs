//! Brute-force lower bounds from the variational formula
//! `A = sup ‖f‖_{μ,q} / ‖f'‖_{ν,p}` over `f(0) = 0`, and checks of the
//! eigenequation `(v g'^{p-1})' + u g^{q-1} = 0`.
//!
//! Test functions are piecewise linear in the working coordinate of the
//! problem (`t = x/(1+x)` on a half-line) and constant past the end of their
//! grid. Every quotient is therefore an exact lower bound on `A` up to
//! quadrature error.

use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::bounds::{Discretization, Settings};
use crate::math::{abs, pow, sin};
use crate::measure::{transform_domain, ProblemSpec};
use crate::quad::{
    cum_panels, integrate, integrate_to_infinity, tail_panels, Grid, GridFunction, QuadConfig,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RayleighResult {
    pub value: f64,
    pub argmax: GridFunction,
    pub iterations_used: usize,
    /// Whether the fixed-point loop met its tolerance.
    pub converged: bool,
}

const RESTARTS: usize = 8;
const RESTART_STEPS: usize = 3;
const TOL: f64 = 1e-10;
const SEED: u64 = 0x5eed_0a11;

fn working(spec: &ProblemSpec) -> Result<ProblemSpec> {
    if spec.working_end().is_some() {
        Ok(spec.clone())
    } else {
        Ok(transform_domain(spec)?.0)
    }
}

fn panel_cfg() -> QuadConfig {
    QuadConfig {
        abs_tol: f64::MIN_POSITIVE,
        ..QuadConfig::default()
    }
}

/// Quotient evaluator for one problem and grid; caches `∫ v` per panel and
/// `μ(end, D)`.
struct Quotient<'a> {
    spec: &'a ProblemSpec,
    grid: Grid,
    v_panels: Vec<f64>,
    mu_beyond: f64,
}

impl<'a> Quotient<'a> {
    fn new(spec: &'a ProblemSpec, grid: &Grid) -> Result<Quotient<'a>> {
        let d = spec
            .working_end()
            .ok_or(Error::Domain("rayleigh: unmapped half-line"))?;
        if grid.start() != 0.0 {
            return Err(Error::InvalidInput("rayleigh: grid must start at 0"));
        }
        if grid.end() > d * (1.0 + 1e-12) {
            return Err(Error::InvalidInput("rayleigh: grid extends beyond D"));
        }
        let cfg = panel_cfg();
        let nodes = grid.nodes();
        let v_panels = nodes
            .windows(2)
            .map(|w| integrate(|x| spec.v(x), w[0], w[1], &cfg))
            .collect::<Result<Vec<f64>>>()?;
        let end = grid.end().min(d);
        let mu_beyond = if end < d {
            integrate(|x| spec.u(x), end, d, &cfg)?
        } else {
            0.0
        };
        Ok(Quotient {
            spec,
            grid: grid.clone(),
            v_panels,
            mu_beyond,
        })
    }

    fn eval(&self, values: &[f64]) -> Result<f64> {
        if values[0] != 0.0 {
            return Err(Error::Domain("rayleigh: f(0) must be 0"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("rayleigh: f must be finite"));
        }
        let (p, q) = (self.spec.p(), self.spec.q());
        let nodes = self.grid.nodes();
        let cfg = panel_cfg();
        let mut energy = 0.0;
        let mut norm = 0.0;
        for i in 0..nodes.len() - 1 {
            let (xl, xr) = (nodes[i], nodes[i + 1]);
            let (fl, fr) = (values[i], values[i + 1]);
            let slope = (fr - fl) / (xr - xl);
            if slope != 0.0 {
                energy += pow(abs(slope), p) * self.v_panels[i];
            }
            if fl != 0.0 || fr != 0.0 {
                let f = |x: f64| {
                    let t = (x - xl) / (xr - xl);
                    let y = abs(fl + t * (fr - fl));
                    let w = self.spec.u(x)?;
                    Ok(if y == 0.0 || w == 0.0 {
                        0.0
                    } else {
                        pow(y, q) * w
                    })
                };
                norm += integrate(f, xl, xr, &cfg)?;
            }
        }
        let last = values[values.len() - 1];
        if last != 0.0 && self.mu_beyond != 0.0 {
            norm += pow(abs(last), q) * self.mu_beyond;
        }
        if !(energy > 0.0) {
            return Err(Error::ZeroDerivativeNorm);
        }
        if energy.is_infinite() {
            return Err(Error::Divergent("rayleigh: derivative norm is infinite"));
        }
        Ok(pow(norm, 1.0 / q) / pow(energy, 1.0 / p))
    }
}

/// `‖f‖_{μ,q}/‖f'‖_{ν,p}` for `f` read piecewise linearly from its node
/// values (working coordinates), constant past the end of its grid.
pub fn rayleigh(spec: &ProblemSpec, f: &GridFunction) -> Result<f64> {
    let spec = working(spec)?;
    Quotient::new(&spec, f.grid())?.eval(f.values())
}

/// Replace an infinite last value by the one before it.
fn clamp_end(values: &mut [f64]) {
    let n = values.len();
    if n >= 2 && values[n - 1].is_infinite() {
        values[n - 1] = values[n - 2];
    }
}

fn normalized(mut values: Vec<f64>) -> Option<Vec<f64>> {
    clamp_end(&mut values);
    if values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let m = values.iter().copied().fold(0.0, f64::max);
    if !(m > f64::MIN_POSITIVE) {
        return None;
    }
    Some(values.iter().map(|v| v / m).collect())
}

/// `f ← ∫₀ˣ v̂ (∫_y^D f^{q-1} dμ)^{p*-1}`, normalized to max 1.
fn ascent_step(
    spec: &ProblemSpec,
    grid: &Grid,
    values: &[f64],
    mu_beyond: f64,
) -> Result<Option<Vec<f64>>> {
    let (q, p_star) = (spec.q(), spec.p_star());
    let f = GridFunction::new(grid.clone(), values.to_vec())?;
    let cfg = QuadConfig::default();
    let last = values[values.len() - 1];
    let c0 = if mu_beyond == 0.0 {
        0.0
    } else {
        pow(last, q - 1.0) * mu_beyond
    };
    let tail = tail_panels(
        |i, y| {
            let w = spec.u(y)?;
            let fy = f.eval_panel(i, y);
            Ok(if w == 0.0 || fy == 0.0 {
                0.0
            } else {
                pow(fy, q - 1.0) * w
            })
        },
        grid,
        &cfg,
    )?;
    let next = cum_panels(
        |i, y| Ok(spec.vhat(y)? * pow(tail.eval_panel(i, y) + c0, p_star - 1.0)),
        grid,
        &cfg,
    )?;
    Ok(normalized(next.values().to_vec()))
}

/// Nondecreasing, `f(0) = 0`.
fn monotone(values: &mut [f64]) {
    values[0] = 0.0;
    for i in 1..values.len() {
        if values[i] < values[i - 1] {
            values[i] = values[i - 1];
        }
    }
}

/// Fixed-point ascent on the quotient from the best of `φ` and `φ(·∧x₀)`,
/// followed by seeded random restarts around the best function.
pub fn maximize(spec: &ProblemSpec, grid: &Grid, max_iters: usize) -> Result<RayleighResult> {
    let spec = working(spec)?;
    let settings = Settings {
        grid: Some(grid.clone()),
        ..Settings::default()
    };
    let disc = Discretization::new(&spec, &settings)?;
    if disc.mu_is_zero() {
        return Err(Error::ZeroMass);
    }
    let quot = Quotient::new(&spec, grid)?;
    let nodes = grid.nodes();
    let n = nodes.len();
    let x_end = nodes[n - 1];

    let mut phi = disc.phi().values().to_vec();
    clamp_end(&mut phi);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |cand: Vec<f64>, best: &mut Option<(f64, Vec<f64>)>| {
        if let Ok(v) = quot.eval(&cand) {
            if v.is_finite() && best.as_ref().is_none_or(|(b, _)| v > *b) {
                *best = Some((v, cand));
            }
        }
    };
    if phi.iter().all(|v| v.is_finite()) {
        consider(phi.clone(), &mut best);
    }
    let m = 64.min(n - 1);
    for k in 1..=m {
        let j = (k * (n - 1)) / m;
        let cap = phi[j];
        if cap.is_finite() {
            consider(phi.iter().map(|&f| f.min(cap)).collect(), &mut best);
        }
    }
    let Some((mut value, mut argmax)) = best else {
        return Err(Error::NonConvergence(
            "maximize: no usable starting function",
        ));
    };

    let mut current = argmax.clone();
    let mut prev = value;
    let mut converged = false;
    let mut iterations_used = 0;
    for _ in 0..max_iters {
        let Some(next) = ascent_step(&spec, grid, &current, quot.mu_beyond)? else {
            break;
        };
        iterations_used += 1;
        let Ok(v) = quot.eval(&next) else { break };
        if v > value {
            value = v;
            argmax = next.clone();
        }
        current = next;
        if abs(v - prev) <= TOL * abs(v) {
            converged = true;
            break;
        }
        prev = v;
    }

    let mut rng = SmallRng::seed_from_u64(SEED);
    for r in 0..RESTARTS {
        let sigma = 0.05 * (r + 1) as f64 / RESTARTS as f64;
        let amp: [f64; 4] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let mut cand: Vec<f64> = argmax
            .iter()
            .zip(nodes)
            .map(|(&f, &x)| {
                let s: f64 = (0..4)
                    .map(|k| amp[k] * sin((k + 1) as f64 * core::f64::consts::PI * x / x_end))
                    .sum();
                f * (1.0 + sigma * s)
            })
            .collect();
        monotone(&mut cand);
        for step in 0..=RESTART_STEPS {
            if let Ok(v) = quot.eval(&cand) {
                if v > value {
                    value = v;
                    argmax = cand.clone();
                }
            }
            if step == RESTART_STEPS {
                break;
            }
            match ascent_step(&spec, grid, &cand, quot.mu_beyond) {
                Ok(Some(next)) => cand = next,
                _ => break,
            }
        }
    }

    let argmax = GridFunction::new(grid.clone(), argmax)?;
    Ok(RayleighResult {
        value,
        argmax,
        iterations_used,
        converged,
    })
}

/// `g(x) = αx/(1+βx^γ)^{1/γ}`, `γ = q/p - 1`: the optimizer of the
/// half-line problem with `u = x^{-q/p*-1}`, `v = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlissOptimizer {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl BlissOptimizer {
    pub fn g(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return self.alpha * pow(self.beta, -1.0 / self.gamma);
        }
        self.alpha * x / pow(1.0 + self.beta * pow(x, self.gamma), 1.0 / self.gamma)
    }

    pub fn g_prime(&self, x: f64) -> f64 {
        self.alpha
            / pow(
                self.beta * pow(x, self.gamma) + 1.0,
                (self.gamma + 1.0) / self.gamma,
            )
    }
}

pub fn bliss_optimizer(p: f64, q: f64, alpha: f64, beta: f64) -> Result<BlissOptimizer> {
    if !(p > 1.0) || !(q > p) || !q.is_finite() {
        return Err(Error::Domain("bliss_optimizer: requires q > p > 1"));
    }
    if !(alpha > 0.0) || !(beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Domain(
            "bliss_optimizer: alpha and beta must be positive",
        ));
    }
    Ok(BlissOptimizer {
        alpha,
        beta,
        gamma: q / p - 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    pub epsilon_mean: f64,
    /// `max |ε(x) - mean| / mean` over the used nodes.
    pub epsilon_max_rel_dev: f64,
    /// Interior nodes where `g`, `g'` or `-(v g'^{p-1})'` was not positive.
    pub skipped: usize,
}

/// Central-difference step at `x`.
fn fd_step(spec: &ProblemSpec, x: f64) -> f64 {
    let scale = match spec.extent() {
        crate::measure::Extent::Finite(d) => x.min(d - x),
        crate::measure::Extent::Infinite => x,
    };
    1e-5 * scale
}

/// `ε(x) = -u g^{q-1} / (v g'^{p-1})'` at the interior nodes of
/// `sample_grid` (original coordinates).
pub fn eigen_residual<G, Gp>(
    spec: &ProblemSpec,
    g: G,
    g_prime: Gp,
    sample_grid: &Grid,
) -> Result<EigenResidual>
where
    G: Fn(f64) -> f64,
    Gp: Fn(f64) -> f64,
{
    let (p, q) = (spec.p(), spec.q());
    let (u, v) = (spec.u_density(), spec.v_density());
    let w = |x: f64| -> Result<f64> { Ok(v.eval(x)? * pow(g_prime(x), p - 1.0)) };
    let nodes = sample_grid.nodes();
    let mut eps = Vec::with_capacity(nodes.len());
    let mut skipped = 0;
    for &x in &nodes[1..nodes.len() - 1] {
        let (gx, dx) = (g(x), g_prime(x));
        let h = fd_step(spec, x);
        if !(gx > 0.0) || !(dx > 0.0) || !(h > 0.0) {
            skipped += 1;
            continue;
        }
        let dw = (w(x + h)? - w(x - h)?) / (2.0 * h);
        let e = -u.eval(x)? * pow(gx, q - 1.0) / dw;
        if !(dw < 0.0) || !e.is_finite() {
            skipped += 1;
            continue;
        }
        eps.push(e);
    }
    if eps.is_empty() {
        return Err(Error::NonConvergence(
            "eigen_residual: no usable sample node",
        ));
    }
    let mean = eps.iter().sum::<f64>() / eps.len() as f64;
    let dev = eps.iter().map(|e| abs(e - mean) / mean).fold(0.0, f64::max);
    Ok(EigenResidual {
        epsilon_mean: mean,
        epsilon_max_rel_dev: dev,
        skipped,
    })
}

fn over_domain<F: Fn(f64) -> Result<f64>>(spec: &ProblemSpec, f: F) -> Result<f64> {
    let cfg = QuadConfig {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: 1e-12,
        ..QuadConfig::default()
    };
    match spec.extent() {
        crate::measure::Extent::Finite(d) => integrate(f, 0.0, d, &cfg),
        crate::measure::Extent::Infinite => integrate_to_infinity(f, 0.0, &cfg),
    }
}

/// `A = ε^{1/q} (∫ v g'^p)^{1/q-1/p}` for a solution `g` of the eigenequation.
///
/// `v g'^{p-1} g` must be below `1e-6` of its interior maximum at the second
/// and the penultimate node of `sample_grid`. The result is checked against
/// the direct quotient `‖g‖_{μ,q}/‖g'‖_{ν,p}` (relative `1e-6`).
pub fn eigen_constant_a<G, Gp>(
    spec: &ProblemSpec,
    g: G,
    g_prime: Gp,
    epsilon: f64,
    sample_grid: &Grid,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
    Gp: Fn(f64) -> f64,
{
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain("eigen_constant_a: epsilon must be positive"));
    }
    let (p, q) = (spec.p(), spec.q());
    let (u, v) = (spec.u_density(), spec.v_density());
    let nodes = sample_grid.nodes();
    let n = nodes.len();
    if n < 4 {
        return Err(Error::InvalidInput(
            "eigen_constant_a: sample grid needs 4 nodes",
        ));
    }
    let flux = |x: f64| -> Result<f64> { Ok(v.eval(x)? * pow(g_prime(x), p - 1.0) * g(x)) };
    let mut max = 0.0f64;
    for &x in &nodes[1..n - 1] {
        max = max.max(abs(flux(x)?));
    }
    let lim = 1e-6 * max;
    if !(abs(flux(nodes[1])?) < lim) || !(abs(flux(nodes[n - 2])?) < lim) {
        return Err(Error::BoundaryCondition);
    }
    let energy = over_domain(spec, |x| Ok(v.eval(x)? * pow(g_prime(x), p)))?;
    let norm = over_domain(spec, |x| {
        let w = u.eval(x)?;
        Ok(if w == 0.0 { 0.0 } else { w * pow(g(x), q) })
    })?;
    let a = pow(epsilon, 1.0 / q) * pow(energy, 1.0 / q - 1.0 / p);
    let direct = pow(norm, 1.0 / q) / pow(energy, 1.0 / p);
    if !(abs(a - direct) <= 1e-6 * direct) {
        return Err(Error::NonConvergence(
            "eigen_constant_a: disagrees with the direct quotient",
        ));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;
    use crate::measure::{Density, Extent};
    use crate::quad::GridLayout;
    use crate::specfun::k_factor;
    use alloc::vec;
    use core::f64::consts::PI;

    fn unit(p: f64, q: f64) -> ProblemSpec {
        ProblemSpec::new(
            p,
            q,
            Extent::Finite(1.0),
            Density::Constant(1.0),
            Density::Constant(1.0),
        )
        .unwrap()
    }

    fn half_line(p: f64, q: f64) -> ProblemSpec {
        let e = -q / crate::conjugate(p) - 1.0;
        ProblemSpec::new(
            p,
            q,
            Extent::Infinite,
            Density::power_law(1.0, e).unwrap(),
            Density::Constant(1.0),
        )
        .unwrap()
    }

    fn geometric(lo: f64, hi: f64, n: usize) -> Grid {
        let r = pow(hi / lo, 1.0 / (n - 1) as f64);
        Grid::from_nodes((0..n).map(|i| lo * pow(r, i as f64)).collect()).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let s = unit(2.0, 2.0);
        let g = Grid::new(GridLayout::Uniform, 16, 1.0).unwrap();
        let f = GridFunction::from_fn(g, |x| x);
        assert!(abs(rayleigh(&s, &f).unwrap() - sqrt(1.0 / 3.0)) < 1e-12);
        let g = Grid::new(GridLayout::Uniform, 4097, 1.0).unwrap();
        let f = GridFunction::from_fn(g.clone(), |x| sin(PI * x / 2.0));
        assert!(abs(rayleigh(&s, &f).unwrap() - 2.0 / PI) < 1e-7);
        let z = GridFunction::from_fn(g.clone(), |_| 0.0);
        assert_eq!(rayleigh(&s, &z), Err(Error::ZeroDerivativeNorm));
        let bad = GridFunction::from_fn(g, |x| x + 1.0);
        assert!(rayleigh(&s, &bad).is_err());
    }

    #[test]
    fn scale_invariant_and_short_grid() {
        let s = unit(2.0, 4.0);
        let g = Grid::new(GridLayout::LogBothEnds, 256, 1.0).unwrap();
        let f = GridFunction::from_fn(g, |x| x * (2.0 - x));
        let a = rayleigh(&s, &f).unwrap();
        let b = rayleigh(&s, &f.scaled(7.5)).unwrap();
        assert!(abs(a - b) < 1e-14 * a);
        // f = x on [0, 1/2], constant afterwards.
        let g = Grid::new(GridLayout::Uniform, 16, 0.5).unwrap();
        let f = GridFunction::from_fn(g, |x| x);
        let s = unit(2.0, 2.0);
        let exact = sqrt((1.0 / 24.0 + 0.125) / 0.5);
        assert!(abs(rayleigh(&s, &f).unwrap() - exact) < 1e-12);
    }

    #[test]
    fn maximize_unit_interval() {
        let g = Grid::new(GridLayout::LogBothEnds, 2048, 1.0).unwrap();
        let r = maximize(&unit(2.0, 2.0), &g, 200).unwrap();
        assert!(
            r.value <= 2.0 / PI + 1e-9 && r.value > 2.0 / PI - 1e-3,
            "{}",
            r.value
        );
        assert!(abs(rayleigh(&unit(2.0, 2.0), &r.argmax).unwrap() - r.value) < 1e-12);
        assert_eq!(r.argmax.values()[0], 0.0);
        assert!(r.argmax.values().windows(2).all(|w| w[0] <= w[1]));
        let a = 0.709_827_942_242_356;
        let r = maximize(&unit(2.0, 4.0), &g, 200).unwrap();
        assert!(r.value <= a + 1e-9 && r.value > a - 2e-3, "{}", r.value);
    }

    #[test]
    fn maximize_half_line() {
        let s = half_line(2.0, 4.0);
        let g = Grid::new(GridLayout::LogBothEnds, 1024, 1.0).unwrap();
        let r = maximize(&s, &g, 200).unwrap();
        let a = pow(0.5, 0.25) * k_factor(2.0, 4.0).unwrap();
        assert!(
            r.value <= a + 1e-9 && r.value > a - 5e-3,
            "{} {}",
            r.value,
            a
        );
        let z = ProblemSpec::new(
            2.0,
            2.0,
            Extent::Finite(1.0),
            Density::Constant(0.0),
            Density::Constant(1.0),
        )
        .unwrap();
        assert_eq!(maximize(&z, &g, 10).unwrap_err(), Error::ZeroMass);
    }

    #[test]
    fn bliss() {
        let b = bliss_optimizer(2.0, 4.0, 1.0, 1.0).unwrap();
        assert!(abs(b.g(1.0) - 0.5) < 1e-15);
        assert_eq!(b.g_prime(0.0), 1.0);
        assert!(abs(b.g(1e12) - 1.0) < 1e-9 && b.g(f64::INFINITY) == 1.0);
        let c = bliss_optimizer(3.0, 7.5, 0.7, 2.3).unwrap();
        for i in 1..=100 {
            let x = 0.05 * i as f64;
            let h = 1e-6 * x;
            let fd = (c.g(x + h) - c.g(x - h)) / (2.0 * h);
            assert!(abs(fd - c.g_prime(x)) < 1e-8, "{x}");
        }
        assert!(bliss_optimizer(3.0, 3.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn eigen_bliss() {
        let s = half_line(2.0, 4.0);
        let grid = geometric(1e-4, 1e6, 502);
        for (alpha, want) in [(1.0, 0.5), (2.0, 2.0)] {
            let b = bliss_optimizer(2.0, 4.0, alpha, 1.0).unwrap();
            let r = eigen_residual(&s, |x| b.g(x), |x| b.g_prime(x), &grid).unwrap();
            assert!(
                abs(r.epsilon_mean - want) < 1e-5 * want && r.epsilon_max_rel_dev < 1e-5,
                "{r:?}"
            );
            assert_eq!(r.skipped, 0);
        }
        let b = bliss_optimizer(2.0, 4.0, 1.0, 1.0).unwrap();
        let wide = geometric(1e-8, 1e8, 200);
        let a = eigen_constant_a(&s, |x| b.g(x), |x| b.g_prime(x), 0.5, &wide).unwrap();
        let exact = pow(0.5, 0.25) * k_factor(2.0, 4.0).unwrap();
        assert!(abs(a - exact) < 1e-6 * exact, "{a} {exact}");
        // Boundary term is not small on a short grid.
        let short = geometric(1e-2, 1e2, 50);
        assert_eq!(
            eigen_constant_a(&s, |x| b.g(x), |x| b.g_prime(x), 0.5, &short),
            Err(Error::BoundaryCondition)
        );
    }

    #[test]
    fn eigen_sine() {
        let s = unit(2.0, 2.0);
        let grid = Grid::new(GridLayout::Uniform, 502, 1.0).unwrap();
        let g = |x: f64| sin(PI * x / 2.0);
        let gp = |x: f64| PI / 2.0 * crate::math::cos(PI * x / 2.0);
        let r = eigen_residual(&s, g, gp, &grid).unwrap();
        let want = 4.0 / (PI * PI);
        assert!(
            abs(r.epsilon_mean - want) < 1e-6 * want && r.epsilon_max_rel_dev < 1e-6,
            "{r:?}"
        );
        let mut nodes = vec![0.0, 1e-9];
        nodes.extend((1..100).map(|i| i as f64 / 100.0));
        nodes.extend([1.0 - 1e-9, 1.0]);
        let fine = Grid::from_nodes(nodes).unwrap();
        let a = eigen_constant_a(&s, g, gp, want, &fine).unwrap();
        assert!(abs(a - 2.0 / PI) < 1e-12);
    }
}
