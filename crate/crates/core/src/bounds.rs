//! First-step bounds on the optimal constant `A`.
//!
//! With `φ(x) = ∫₀ˣ v̂` and `M(x) = μ(x, D)`:
//!
//! | bound | side | formula |
//! |---|---|---|
//! | `B` | both | `sup φ^{1/p*} M^{1/q}`, bracket `B ≤ A ≤ k_{q,p} B` |
//! | `δ₁` | upper | `(sup C/φ^{γ*})^{1/p*}`, `C = ∫₀ˣ v̂ (∫_y^D φ^{qγ*/p*} dμ)^{p*/q}` |
//! | `δ̄₁` | lower | `sup [φ^{-q/p} ∫₀ˣ φ^q dμ + φ^{q/p*} M]^{1/q}` |
//! | `δ̃₁` | lower | sup over `x₀` of a quotient built from `f₂^{(x₀)}` |
//! | `A*` | upper | diagonal transform, `p̃ = q/p* + 1` |
//!
//! All of them work on a [`Discretization`]: `φ` and `M` tabulated once on a
//! grid, with every panel integrated adaptively. Half-line problems are mapped
//! to `(0, 1)` first; reported locations are in the original coordinate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, ln, pow, sin};
use crate::measure::{transform_domain, transform_problem, Extent, ProblemSpec};
use crate::quad::{
    cum_integral, cum_panels, golden_max, panel_sum, sup_over_nodes, tail_integral, tail_panels,
    Grid, GridFunction, GridLayout, QuadConfig,
};
use crate::specfun::{k_factor, k_tilde};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub nodes: usize,
    pub layout: GridLayout,
    pub quad: QuadConfig,
    /// Scan points for sups over `x₀`.
    pub x0_points: usize,
    /// Iterations of `δₙ` on the transformed problem behind the `A*` estimate.
    pub effort: usize,
    /// Explicit working grid; overrides `nodes` and `layout`.
    pub grid: Option<Grid>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            nodes: 2048,
            layout: GridLayout::LogBothEnds,
            quad: QuadConfig::default(),
            x0_points: 64,
            effort: 3,
            grid: None,
        }
    }
}

/// A bound value and, when meaningful, where its sup is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub at: Option<f64>,
}

impl Bound {
    fn zero() -> Bound {
        Bound {
            value: 0.0,
            at: None,
        }
    }

    fn infinite(at: Option<f64>) -> Bound {
        Bound {
            value: f64::INFINITY,
            at,
        }
    }
}

/// Growth exponent below which a sup sitting at the outermost usable node is
/// read as a divergence (`g ~ x^e` or `(D-x)^e` with `e < 0`). Logarithmic
/// growth at the grid resolution shows up around `-0.04`.
const GROWTH: f64 = -1e-2;

/// Sup of tabulated `vals` (NaN = excluded) refined by `g` between nodes.
/// An unbounded increase towards either end gives `+∞`.
pub(crate) fn grid_sup<F>(nodes: &[f64], vals: &[f64], g: F) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let Some((x, v)) = sup_over_nodes(nodes, vals, &g)? else {
        return Ok(None);
    };
    let n = nodes.len();
    let d = nodes[n - 1];
    let usable = |i: usize| (1..n - 1).contains(&i) && vals[i].is_finite() && vals[i] > 0.0;
    let best = vals[1..n - 1]
        .iter()
        .copied()
        .filter(|t| !t.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    if let Some(i) = (1..n - 1).find(|&i| !vals[i].is_nan()) {
        if usable(i) && usable(i + 1) && vals[i] >= best {
            let e = ln(vals[i] / vals[i + 1]) / ln(nodes[i] / nodes[i + 1]);
            if e < GROWTH {
                return Ok(Some((nodes[i], f64::INFINITY)));
            }
        }
    }
    if let Some(i) = (1..n - 1).rev().find(|&i| !vals[i].is_nan()) {
        if usable(i) && usable(i - 1) && vals[i] >= best {
            let e = ln(vals[i] / vals[i - 1]) / ln((d - nodes[i]) / (d - nodes[i - 1]));
            if e < GROWTH {
                return Ok(Some((nodes[i], f64::INFINITY)));
            }
        }
    }
    Ok(Some((x, v)))
}

/// `φ` and `μ(·, D)` tabulated on a working grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    original: ProblemSpec,
    spec: ProblemSpec,
    grid: Grid,
    settings: Settings,
    phi: GridFunction,
    mu: GridFunction,
}

impl Discretization {
    pub fn new(spec: &ProblemSpec, settings: &Settings) -> Result<Discretization> {
        settings.quad.validate()?;
        if settings.x0_points < 4 {
            return Err(Error::InvalidInput("x0_points must be at least 4"));
        }
        let working = if spec.extent().is_infinite() && spec.map().is_none() {
            transform_domain(spec)?.0
        } else {
            spec.clone()
        };
        let d = working
            .working_end()
            .ok_or(Error::Domain("working interval must be finite"))?;
        let grid = match &settings.grid {
            Some(g) => {
                if g.start() != 0.0 || abs(g.end() - d) > 1e-12 * d {
                    return Err(Error::InvalidInput(
                        "explicit grid must span the working interval [0, D]",
                    ));
                }
                g.clone()
            }
            None => Grid::new(settings.layout, settings.nodes, d)?,
        };
        let cfg = settings.quad;
        let phi = cum_integral(|y| working.vhat(y), &grid, &cfg)?;
        let mu = tail_integral(|y| working.u(y), &grid, &cfg)?;
        Ok(Discretization {
            original: spec.clone(),
            spec: working,
            grid,
            settings: settings.clone(),
            phi,
            mu,
        })
    }

    pub fn original(&self) -> &ProblemSpec {
        &self.original
    }

    /// Problem in working coordinates.
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn phi(&self) -> &GridFunction {
        &self.phi
    }

    pub fn mu_tail(&self) -> &GridFunction {
        &self.mu
    }

    pub(crate) fn cfg(&self) -> &QuadConfig {
        &self.settings.quad
    }

    /// True when `μ` has no mass on `(0, D)`.
    pub fn mu_is_zero(&self) -> bool {
        self.mu.values().iter().all(|&m| m == 0.0)
    }

    pub(crate) fn locate(&self, at: Option<f64>) -> Option<f64> {
        at.map(|t| self.spec.to_original(t))
    }

    fn p_star(&self) -> f64 {
        self.spec.p_star()
    }

    fn bound(&self, found: Option<(f64, f64)>, power: f64) -> Result<Bound> {
        match found {
            None => Err(Error::NonConvergence(
                "no grid node gives a finite objective",
            )),
            Some((x, v)) if v.is_infinite() => Ok(Bound::infinite(self.locate(Some(x)))),
            Some((x, v)) => Ok(Bound {
                value: pow(v.max(0.0), power),
                at: self.locate(Some(x)),
            }),
        }
    }

    fn require_diagonal_or_above(&self, what: &'static str) -> Result<()> {
        if self.spec.q() < self.spec.p() {
            return Err(Error::NotApplicable(what));
        }
        Ok(())
    }

    /// `B = sup φ^{1/p*} μ(x, D)^{1/q}`; `+∞` when `φ` or the sup diverges.
    pub fn basic_b(&self) -> Result<Bound> {
        if self.mu_is_zero() {
            return Ok(Bound::zero());
        }
        let (a, b) = (1.0 / self.p_star(), 1.0 / self.spec.q());
        let objective = |f: f64, m: f64| {
            if f == 0.0 || m == 0.0 {
                0.0
            } else {
                pow(f, a) * pow(m, b)
            }
        };
        let nodes = self.grid.nodes();
        let vals: Vec<f64> = (0..nodes.len())
            .map(|i| {
                let (f, m) = (self.phi.values()[i], self.mu.values()[i]);
                if i == 0 || i + 1 == nodes.len() || (f.is_infinite() && m == 0.0) {
                    f64::NAN
                } else {
                    objective(f, m)
                }
            })
            .collect();
        let g = |x: f64| Ok(objective(self.phi.eval(x), self.mu.eval(x)));
        self.bound(grid_sup(nodes, &vals, g)?, 1.0)
    }

    /// `(B, k_{q,p} B)`.
    pub fn basic_bracket(&self) -> Result<(f64, f64)> {
        self.require_diagonal_or_above("basic bracket requires q >= p")?;
        let b = self.basic_b()?.value;
        let k = k_factor(self.spec.p(), self.spec.q())?;
        Ok((b, if b == 0.0 { 0.0 } else { k * b }))
    }

    /// Upper bound `δ₁`.
    pub fn delta1(&self) -> Result<Bound> {
        self.require_diagonal_or_above("delta1 requires q >= p")?;
        if self.mu_is_zero() {
            return Ok(Bound::zero());
        }
        let (p_star, q) = (self.p_star(), self.spec.q());
        let gamma = q / (p_star + q);
        let k1 = q * gamma / p_star;
        let cfg = self.cfg();
        let phi = &self.phi;
        let tail = tail_panels(
            |i, y| Ok(pow(phi.eval_panel(i, y), k1) * self.spec.u(y)?),
            &self.grid,
            cfg,
        )?;
        let c = cum_panels(
            |i, y| Ok(self.spec.vhat(y)? * pow(tail.eval_panel(i, y), p_star / q)),
            &self.grid,
            cfg,
        )?;
        let nodes = self.grid.nodes();
        let denom: Vec<f64> = phi.values().iter().map(|&f| pow(f, gamma)).collect();
        let max = denom
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max);
        let vals: Vec<f64> = (0..nodes.len())
            .map(|i| {
                let (num, den) = (c.values()[i], denom[i]);
                if !(den >= 1e-13 * max) || !den.is_finite() || !num.is_finite() {
                    f64::NAN
                } else {
                    num / den
                }
            })
            .collect();
        let g = |x: f64| Ok(c.eval(x) / pow(phi.eval(x), gamma));
        self.bound(grid_sup(nodes, &vals, g)?, 1.0 / p_star)
    }

    /// Lower bound `δ̄₁`.
    pub fn deltabar1(&self) -> Result<Bound> {
        if self.mu_is_zero() {
            return Ok(Bound::zero());
        }
        let (p, q, p_star) = (self.spec.p(), self.spec.q(), self.p_star());
        let phi = &self.phi;
        let head = cum_panels(
            |i, y| Ok(pow(phi.eval_panel(i, y), q) * self.spec.u(y)?),
            &self.grid,
            self.cfg(),
        )?;
        let objective = |f: f64, h: f64, m: f64| {
            let second = if m == 0.0 {
                0.0
            } else {
                pow(f, q / p_star) * m
            };
            h / pow(f, q / p) + second
        };
        let nodes = self.grid.nodes();
        let vals: Vec<f64> = (0..nodes.len())
            .map(|i| {
                let (f, h, m) = (phi.values()[i], head.values()[i], self.mu.values()[i]);
                if !(f > 0.0) || !f.is_finite() || !h.is_finite() {
                    f64::NAN
                } else {
                    objective(f, h, m)
                }
            })
            .collect();
        let g = |x: f64| Ok(objective(phi.eval(x), head.eval(x), self.mu.eval(x)));
        self.bound(grid_sup(nodes, &vals, g)?, 1.0 / q)
    }

    /// Sub-grid `{nodes < x₀} ∪ {x₀}`; panel `i` lies inside working panel `i`.
    pub(crate) fn subgrid(&self, x0: f64) -> Grid {
        let nodes = self.grid.nodes();
        let k = nodes.partition_point(|&x| x < x0).max(1);
        let mut sub: Vec<f64> = nodes[..k].to_vec();
        sub.push(x0);
        Grid::raw(sub)
    }

    /// Objective of `δ̃₁` at one `x₀`; NaN where it is undefined.
    fn deltatilde_at(&self, x0: f64) -> Result<f64> {
        let (p, q, p_star) = (self.spec.p(), self.spec.q(), self.p_star());
        let phi0 = self.phi.eval(x0);
        let m0 = self.mu.eval(x0);
        if !(phi0 > 0.0) || !phi0.is_finite() {
            return Ok(f64::NAN);
        }
        let c0 = if m0 == 0.0 {
            0.0
        } else {
            pow(phi0, q - 1.0) * m0
        };
        let sub = self.subgrid(x0);
        let cfg = self.cfg();
        let phi = &self.phi;
        let h = tail_panels(
            |i, y| Ok(pow(phi.eval_panel(i, y), q - 1.0) * self.spec.u(y)?),
            &sub,
            cfg,
        )?;
        // The quotient scales like σ^{1/p} under h + c0 → (h + c0)/σ; without
        // the scaling f2 underflows at small x₀ when p* is large.
        let sigma = match h.values()[0] + c0 {
            s if s > 0.0 && s.is_finite() => s,
            _ => 1.0,
        };
        let f2 = cum_panels(
            |i, y| Ok(self.spec.vhat(y)? * pow((h.eval_panel(i, y) + c0) / sigma, p_star - 1.0)),
            &sub,
            cfg,
        )?;
        let f2_end = f2.values()[sub.len() - 1];
        if !f2_end.is_finite() {
            return Ok(f64::NAN);
        }
        let nodes = sub.nodes();
        let mut norm = if m0 == 0.0 { 0.0 } else { pow(f2_end, q) * m0 };
        norm += panel_sum(
            |i, y| Ok(pow(f2.eval_panel(i, y), q) * self.spec.u(y)?),
            &sub,
            cfg,
        )?;
        let mut ratio = f64::INFINITY;
        for i in 1..nodes.len() {
            let f = phi.eval(nodes[i]);
            if f > 0.0 && f.is_finite() {
                ratio = ratio.min(f2.values()[i] / f);
            }
        }
        if !ratio.is_finite() || !norm.is_finite() {
            return Ok(f64::NAN);
        }
        if !(norm > 0.0) {
            return Ok(f64::NAN);
        }
        Ok(pow(norm, (1.0 - q / p) / q) * pow(ratio, (q - 1.0) / p) * pow(sigma, 1.0 / p))
    }

    /// Lower bound `δ̃₁`: scan `x₀` over the grid, then golden refinement.
    pub fn deltatilde1(&self) -> Result<Bound> {
        if self.mu_is_zero() {
            return Ok(Bound::zero());
        }
        let (x, v) = self.scan_x0(|x0| self.deltatilde_at(x0))?;
        Ok(Bound {
            value: v,
            at: self.locate(Some(x)),
        })
    }

    /// Sup over `x₀ ∈ (0, D]` of `g`, from `x0_points` grid nodes plus one golden refinement.
    pub(crate) fn scan_x0<F>(&self, g: F) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let nodes = self.grid.nodes();
        let idx = self.x0_indices(self.settings.x0_points);
        let mut best: Option<(usize, f64)> = None;
        for (j, &i) in idx.iter().enumerate() {
            let v = g(nodes[i])?;
            if !v.is_nan() && best.is_none_or(|(_, b)| v > b) {
                best = Some((j, v));
            }
        }
        let Some((j, v)) = best else {
            return Err(Error::NonConvergence("objective is undefined at every x0"));
        };
        let (lo, hi) = self.x0_bracket(&idx, j);
        let (x, gx) = golden_max(&g, lo, hi, 1e-10 * hi)?;
        Ok(if gx > v { (x, gx) } else { (nodes[idx[j]], v) })
    }

    /// First node usable as `x₀`: the sub-grid below it must have
    /// `MIN_SUBGRID` nodes and a first cell under `1e-3·x₀`. Closer to 0 the
    /// sub-grid iterates are too coarse for their quotients to be reliable.
    fn x0_first(&self) -> usize {
        const MIN_SUBGRID: usize = 64;
        let nodes = self.grid.nodes();
        let n = nodes.len();
        let first = (MIN_SUBGRID..n - 1)
            .find(|&i| nodes[1] <= 1e-3 * nodes[i])
            .unwrap_or(n - 2);
        first.min((n - 1) / 2).max(1)
    }

    /// About `m` node indices for `x₀`, spread over the usable range, which
    /// ends at `n-2`: in the last cell a sub-grid iterate is a one-panel
    /// interpolant.
    pub(crate) fn x0_indices(&self, m: usize) -> Vec<usize> {
        let n = self.grid.len();
        let first = self.x0_first();
        let span = n - 2 - first;
        let m = m.min(span + 1).max(1);
        let mut idx: Vec<usize> = (0..m)
            .map(|k| first + (k * span) / (m - 1).max(1))
            .collect();
        idx.dedup();
        idx
    }

    /// Golden-search bracket around scan point `j`, kept inside the usable range.
    pub(crate) fn x0_bracket(&self, idx: &[usize], j: usize) -> (f64, f64) {
        let nodes = self.grid.nodes();
        let n = nodes.len();
        let lo = if j == 0 {
            nodes[idx[0]]
        } else {
            nodes[idx[j - 1]]
        };
        let hi = if j + 1 == idx.len() {
            nodes[n - 2]
        } else {
            nodes[idx[j + 1]]
        };
        (lo, hi)
    }

    /// Upper bound from the diagonal transform, with an exactness flag.
    pub fn a_star(&self, effort: usize) -> Result<(f64, bool)> {
        self.require_diagonal_or_above("A* requires q >= p")?;
        let spec = &self.original;
        let (p_star, q) = (spec.p_star(), spec.q());
        let exponent = 1.0 / p_star + 1.0 / q;
        let t = transform_problem(spec)?;
        let unit = matches!(spec.extent(), Extent::Finite(d) if d == 1.0)
            && spec.map().is_none()
            && t.u_density().is_unit()
            && t.v_density().is_unit();
        if unit {
            let pt = t.p();
            let pi = core::f64::consts::PI;
            let a = pt * sin(pi / pt) / (pi * pow(pt - 1.0, 1.0 / pt));
            return Ok((pow(a, exponent), true));
        }
        if effort == 0 {
            return Err(Error::InvalidInput("A* effort must be at least 1"));
        }
        let disc = Discretization::new(&t, &self.settings)?;
        let deltas = disc.iterate_delta(effort)?;
        Ok((pow(deltas[deltas.len() - 1], exponent), false))
    }

    pub fn report(&self) -> BoundsReport {
        let mut locations = BTreeMap::new();
        let mut take = |name: &'static str, r: Result<Bound>| -> Result<f64> {
            r.map(|b| {
                if let Some(x) = b.at {
                    locations.insert(name, x);
                }
                b.value
            })
        };
        let b = take("B", self.basic_b());
        let diagonal = self.spec.q() >= self.spec.p();
        let na = || Err(Error::NotApplicable("upper bounds require q >= p"));
        let (p, q) = (self.spec.p(), self.spec.q());
        let scaled = |k: Result<f64>| match (&b, k) {
            (Ok(b), Ok(k)) => Ok(if *b == 0.0 { 0.0 } else { k * b }),
            (Err(e), _) => Err(e.clone()),
            (_, Err(e)) => Err(e),
        };
        let (k_b, ktilde_b) = if diagonal {
            (scaled(k_factor(p, q)), scaled(k_tilde(p, q)))
        } else {
            (na(), na())
        };
        let delta1 = if diagonal {
            take("delta1", self.delta1())
        } else {
            na()
        };
        let deltabar1 = take("deltabar1", self.deltabar1());
        let deltatilde1 = take("deltatilde1", self.deltatilde1());
        let (a_star, a_star_estimate) = if !diagonal {
            (na(), na())
        } else if self.mu_is_zero() {
            (Ok(0.0), Ok(0.0))
        } else {
            match self.a_star(self.settings.effort) {
                Ok((v, true)) => (Ok(v), Ok(v)),
                Ok((v, false)) => (
                    Err(Error::NotApplicable("A* has no closed form here")),
                    Ok(v),
                ),
                Err(e) => (Err(e.clone()), Err(e)),
            }
        };
        let lower = [&b, &deltabar1, &deltatilde1]
            .iter()
            .filter_map(|r| r.as_ref().ok().copied())
            .fold(0.0, f64::max);
        let upper = [&delta1, &k_b, &a_star, &a_star_estimate]
            .iter()
            .filter_map(|r| r.as_ref().ok().copied())
            .fold(f64::INFINITY, f64::min);
        BoundsReport {
            b,
            k_b,
            ktilde_b,
            delta1,
            deltabar1,
            deltatilde1,
            a_star,
            a_star_estimate,
            lower,
            upper,
            locations,
        }
    }
}

/// Every bound of one problem. A failed component keeps its error and is left
/// out of `lower` / `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub b: Result<f64>,
    pub k_b: Result<f64>,
    pub ktilde_b: Result<f64>,
    pub delta1: Result<f64>,
    pub deltabar1: Result<f64>,
    pub deltatilde1: Result<f64>,
    /// Only when the transformed problem has a closed form.
    pub a_star: Result<f64>,
    /// `δ_effort` of the transformed problem to the power `1/p* + 1/q`.
    pub a_star_estimate: Result<f64>,
    /// `max(B, δ̄₁, δ̃₁)`
    pub lower: f64,
    /// `min(δ₁, k B, A*)`, `+∞` when none applies.
    pub upper: f64,
    /// Maximizing `x` per bound, original coordinates.
    pub locations: BTreeMap<&'static str, f64>,
}

impl BoundsReport {
    /// Named entries in display order.
    pub fn entries(&self) -> Vec<(&'static str, &Result<f64>)> {
        vec![
            ("B", &self.b),
            ("deltabar1", &self.deltabar1),
            ("deltatilde1", &self.deltatilde1),
            ("A_star", &self.a_star),
            ("A_star_estimate", &self.a_star_estimate),
            ("delta1", &self.delta1),
            ("kB", &self.k_b),
            ("ktildeB", &self.ktilde_b),
        ]
    }

    /// True when a lower bound is infinite, so `A = ∞`.
    pub fn diverges(&self) -> bool {
        self.lower.is_infinite()
    }
}

pub fn basic_b(spec: &ProblemSpec) -> Result<f64> {
    Ok(Discretization::new(spec, &Settings::default())?
        .basic_b()?
        .value)
}

pub fn basic_bracket(spec: &ProblemSpec) -> Result<(f64, f64)> {
    Discretization::new(spec, &Settings::default())?.basic_bracket()
}

pub fn delta1(spec: &ProblemSpec) -> Result<f64> {
    Ok(Discretization::new(spec, &Settings::default())?
        .delta1()?
        .value)
}

pub fn deltabar1(spec: &ProblemSpec) -> Result<f64> {
    Ok(Discretization::new(spec, &Settings::default())?
        .deltabar1()?
        .value)
}

pub fn deltatilde1(spec: &ProblemSpec) -> Result<f64> {
    Ok(Discretization::new(spec, &Settings::default())?
        .deltatilde1()?
        .value)
}

/// `(upper estimate, exact)`.
pub fn a_star(spec: &ProblemSpec, effort: usize) -> Result<(f64, bool)> {
    Discretization::new(spec, &Settings::default())?.a_star(effort)
}

/// Report with default settings. Setup failures (for example `φ` diverging
/// inside the interval) are recorded in every field.
pub fn full_report(spec: &ProblemSpec) -> BoundsReport {
    match Discretization::new(spec, &Settings::default()) {
        Ok(d) => d.report(),
        Err(e) => {
            let err = || Err(e.clone());
            BoundsReport {
                b: err(),
                k_b: err(),
                ktilde_b: err(),
                delta1: err(),
                deltabar1: err(),
                deltatilde1: err(),
                a_star: err(),
                a_star_estimate: err(),
                lower: f64::NAN,
                upper: f64::NAN,
                locations: BTreeMap::new(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate;
    use crate::math::sqrt;
    use crate::measure::Density;

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

    fn bliss(p: f64, q: f64) -> ProblemSpec {
        let u = Density::power_law(1.0, -q / conjugate(p) - 1.0).unwrap();
        ProblemSpec::new(p, q, Extent::Infinite, u, Density::Constant(1.0)).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        abs(a - b) <= rel * abs(b)
    }

    #[test]
    fn unit_interval_values() {
        let d = Discretization::new(&unit(2.0, 2.0), &Settings::default()).unwrap();
        let b = d.basic_b().unwrap();
        assert!(close(b.value, 0.5, 1e-9), "{b:?}");
        assert!(close(b.at.unwrap(), 0.5, 1e-4));
        assert!(close(d.basic_bracket().unwrap().1, 2.0 * b.value, 1e-14));
        let d1 = d.delta1().unwrap();
        assert!(close(d1.value, 0.653_830_243_005_915, 1e-8), "{d1:?}");
        assert!(close(d1.at.unwrap(), 0.731_004_43, 1e-4));
        let db = d.deltabar1().unwrap();
        assert!(close(db.value, sqrt(6.0) / 4.0, 1e-9), "{db:?}");
        let dt = d.deltatilde1().unwrap();
        assert!(close(dt.value, sqrt(6.0) / 4.0, 1e-7), "{dt:?}");
        assert!(close(dt.at.unwrap(), 0.75, 1e-4));
        let (a, exact) = d.a_star(1).unwrap();
        assert!(exact && close(a, 2.0 / core::f64::consts::PI, 1e-14));
    }

    #[test]
    fn unit_interval_p2_q4() {
        let d = Discretization::new(&unit(2.0, 4.0), &Settings::default()).unwrap();
        assert!(close(d.basic_b().unwrap().value, 0.620_403_239_401_4, 1e-8));
        assert!(close(
            d.deltabar1().unwrap().value,
            0.693_631_908_381_303,
            1e-8
        ));
        assert!(close(
            d.delta1().unwrap().value,
            0.740_146_846_208_263,
            1e-8
        ));
        let (a, exact) = d.a_star(1).unwrap();
        assert!(exact && close(a, 0.729_237_529_960_012, 1e-12));
    }

    #[test]
    fn half_line_power_law() {
        let d = Discretization::new(&bliss(2.0, 4.0), &Settings::default()).unwrap();
        assert!(close(d.basic_b().unwrap().value, pow(0.5, 0.25), 1e-6));
        assert!(close(d.deltabar1().unwrap().value, 1.0, 1e-6));
        assert!(close(d.delta1().unwrap().value, pow(1.5, 0.75), 1e-6));
        let dt = d.deltatilde1().unwrap().value;
        assert!(dt > 0.8 && dt < 1.0, "{dt}");
        let (a, exact) = d.a_star(1).unwrap();
        assert!(!exact && close(a, pow(1.5, 0.75), 1e-5), "{a}");
        let r = d.report();
        assert!(
            close(r.upper, pow(0.5, 0.25) * pow(3.0, 0.25), 1e-6),
            "{r:?}"
        );
        assert!(close(r.lower, 1.0, 1e-6));
    }

    #[test]
    fn zero_mass() {
        let s = ProblemSpec::new(
            2.0,
            3.0,
            Extent::Finite(1.0),
            Density::Constant(0.0),
            Density::Constant(1.0),
        )
        .unwrap();
        let r = full_report(&s);
        assert_eq!(r.lower, 0.0);
        assert_eq!(r.upper, 0.0);
        assert_eq!(r.b, Ok(0.0));
        assert_eq!(r.delta1, Ok(0.0));
        assert_eq!(r.deltatilde1, Ok(0.0));
    }

    #[test]
    fn divergent_b() {
        // φ = x, μ(x,1) ~ x^{-2}/2: B = ∞.
        let u = Density::power_law(1.0, -3.0).unwrap();
        let s = ProblemSpec::new(2.0, 2.0, Extent::Finite(1.0), u, Density::Constant(1.0)).unwrap();
        assert_eq!(basic_b(&s).unwrap(), f64::INFINITY);
        let r = full_report(&s);
        assert!(r.diverges());
        // v̂ = 1/x is not integrable at 0.
        let v = Density::power_law(1.0, 1.0).unwrap();
        let s = ProblemSpec::new(2.0, 2.0, Extent::Finite(1.0), Density::Constant(1.0), v).unwrap();
        assert_eq!(basic_b(&s).unwrap(), f64::INFINITY);
    }

    #[test]
    fn below_diagonal() {
        let s = unit(3.0, 2.0);
        let r = full_report(&s);
        assert!(matches!(r.delta1, Err(Error::NotApplicable(_))));
        assert!(matches!(r.k_b, Err(Error::NotApplicable(_))));
        assert_eq!(r.upper, f64::INFINITY);
        assert!(r.b.is_ok() && r.deltabar1.is_ok() && r.deltatilde1.is_ok());
        assert!(r.lower > 0.0);
    }

    #[test]
    fn grid_sup_divergence() {
        let g = Grid::new(GridLayout::LogBothEnds, 256, 1.0).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|&x| 1.0 / sqrt(x)).collect();
        let (_, s) = grid_sup(g.nodes(), &v, |x| Ok(1.0 / sqrt(x)))
            .unwrap()
            .unwrap();
        assert!(s.is_infinite());
        let v: Vec<f64> = g.nodes().iter().map(|&x| 1.0 - x).collect();
        let (_, s) = grid_sup(g.nodes(), &v, |x| Ok(1.0 - x)).unwrap().unwrap();
        assert!(s.is_finite() && s > 0.999);
        let v: Vec<f64> = g.nodes().iter().map(|&x| -ln(1.0 - x)).collect();
        let (_, s) = grid_sup(g.nodes(), &v, |x| Ok(-ln(1.0 - x)))
            .unwrap()
            .unwrap();
        assert!(s.is_infinite());
    }
}
