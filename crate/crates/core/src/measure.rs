//! Densities, problem specifications and the two problem transforms.
//!
//! A [`ProblemSpec`] holds `p`, `q`, `D` and the densities `u` of `μ` and `v`
//! of `ν`. Derived quantities: `v̂ = v^{1-p*}`, `φ(x) = ∫₀ˣ v̂` and the tail
//! `μ(x, D)`.
//!
//! A half-line problem can be mapped to `(0, 1)` by `x = t/(1-t)`
//! ([`transform_domain`]). Under the map `u` picks up the Jacobian
//! `x'(t) = (1-t)^{-2}` and `v` picks up `x'(t)^{1-p}`, so `v̂` picks up `x'(t)`
//! and both `‖f‖_{μ,q}` and `‖f'‖_{ν,p}` are preserved.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::expr::{self, Expr};
use crate::math::pow;
use crate::quad::{integrate, integrate_to_infinity, QuadConfig};
use crate::{conjugate, Error, Result};

/// Nonnegative density on `(0, D)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    /// `coef · x^exponent`
    PowerLaw {
        coef: f64,
        exponent: f64,
    },
    Constant(f64),
    Expression(Arc<Expr>),
    /// Linear interpolation, constant beyond the first and last node.
    Tabulated {
        nodes: Arc<[f64]>,
        values: Arc<[f64]>,
    },
    /// `base^exponent`
    Power {
        base: Arc<Density>,
        exponent: f64,
    },
    /// `factor · base`
    Scaled {
        base: Arc<Density>,
        factor: f64,
    },
    /// `left` on `(0, at]`, `right` on `(at, ∞)`.
    Spliced {
        left: Arc<Density>,
        right: Arc<Density>,
        at: f64,
    },
    /// Extremal `u` built from `v` by [`sharp_instance`].
    Sharp(Arc<SharpDensity>),
}

impl Density {
    pub fn power_law(coef: f64, exponent: f64) -> Result<Density> {
        if !(coef > 0.0) || !coef.is_finite() || !exponent.is_finite() {
            return Err(Error::InvalidInput(
                "power law needs coef > 0 and a finite exponent",
            ));
        }
        Ok(Density::PowerLaw { coef, exponent })
    }

    pub fn constant(value: f64) -> Result<Density> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::InvalidInput(
                "constant density must be finite and nonnegative",
            ));
        }
        Ok(Density::Constant(value))
    }

    pub fn expression(src: &str) -> Result<Density> {
        Ok(Density::Expression(Arc::new(expr::parse(src)?)))
    }

    pub fn tabulated(nodes: Vec<f64>, values: Vec<f64>) -> Result<Density> {
        if nodes.len() != values.len() || nodes.is_empty() {
            return Err(Error::InvalidInput(
                "tabulated density needs equal, nonempty node and value lists",
            ));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "tabulated nodes must be finite and strictly ascending",
            ));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput(
                "tabulated values must be finite and nonnegative",
            ));
        }
        Ok(Density::Tabulated {
            nodes: nodes.into(),
            values: values.into(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Density {
        Density::Scaled {
            base: Arc::new(self.clone()),
            factor,
        }
    }

    pub fn powered(&self, exponent: f64) -> Density {
        Density::Power {
            base: Arc::new(self.clone()),
            exponent,
        }
    }

    /// `self` up to `at`, `right` after it.
    pub fn spliced(&self, at: f64, right: Density) -> Density {
        Density::Spliced {
            left: Arc::new(self.clone()),
            right: Arc::new(right),
            at,
        }
    }

    /// True when the density is identically 1.
    pub fn is_unit(&self) -> bool {
        match self {
            Density::Constant(c) => *c == 1.0,
            Density::PowerLaw { coef, exponent } => *coef == 1.0 && *exponent == 0.0,
            Density::Power { base, .. } => base.is_unit(),
            Density::Scaled { base, factor } => *factor == 1.0 && base.is_unit(),
            _ => false,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Density::PowerLaw { coef, exponent } => Ok(coef * pow(x, *exponent)),
            Density::Constant(c) => Ok(*c),
            Density::Expression(e) => Ok(e.eval(x)?),
            Density::Tabulated { nodes, values } => {
                let n = nodes.len();
                if x <= nodes[0] {
                    return Ok(values[0]);
                }
                if x >= nodes[n - 1] {
                    return Ok(values[n - 1]);
                }
                let i = nodes.partition_point(|&t| t <= x) - 1;
                let t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
                Ok(values[i] + t * (values[i + 1] - values[i]))
            }
            Density::Power { base, exponent } => base.eval_pow(x, *exponent),
            Density::Scaled { base, factor } => Ok(factor * base.eval(x)?),
            Density::Spliced { left, right, at } => {
                if x <= *at {
                    left.eval(x)
                } else {
                    right.eval(x)
                }
            }
            Density::Sharp(s) => s.eval(x),
        }
    }

    /// `self(x)^s`, combining exponents symbolically where possible.
    pub fn eval_pow(&self, x: f64, s: f64) -> Result<f64> {
        match self {
            Density::PowerLaw { coef, exponent } => Ok(pow(*coef, s) * pow(x, exponent * s)),
            Density::Constant(c) => Ok(pow(*c, s)),
            Density::Power { base, exponent } => base.eval_pow(x, exponent * s),
            Density::Scaled { base, factor } => Ok(pow(*factor, s) * base.eval_pow(x, s)?),
            Density::Spliced { left, right, at } => {
                if x <= *at {
                    left.eval_pow(x, s)
                } else {
                    right.eval_pow(x, s)
                }
            }
            _ => Ok(pow(self.eval(x)?, s)),
        }
    }
}

/// `u(x) = c · s(x)^{-q/p*-1} · v̂(x)` with `s = ∫₀ˣ v̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpDensity {
    v: Density,
    p: f64,
    scale: f64,
    exponent: f64,
    /// `s(x) = a·x^b` when `v̂` is a power law.
    closed: Option<(f64, f64)>,
}

impl SharpDensity {
    fn vhat(&self, x: f64) -> Result<f64> {
        self.v.eval_pow(x, 1.0 - conjugate(self.p))
    }

    fn s(&self, x: f64) -> Result<f64> {
        match self.closed {
            Some((a, b)) => Ok(a * pow(x, b)),
            None => integrate(|y| self.vhat(y), 0.0, x, &QuadConfig::default()),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.scale * pow(self.s(x)?, self.exponent) * self.vhat(x)?)
    }
}

/// Right end of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent {
    Finite(f64),
    Infinite,
}

impl Extent {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extent::Infinite)
    }
}

/// Change of variable `x = t/(1-t)` from `(0, 1)` onto `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HalfLineMap;

impl HalfLineMap {
    pub fn forward(&self, t: f64) -> f64 {
        t / (1.0 - t)
    }

    pub fn inverse(&self, x: f64) -> f64 {
        if x.is_infinite() {
            1.0
        } else {
            x / (1.0 + x)
        }
    }

    /// `dx/dt`
    pub fn jacobian(&self, t: f64) -> f64 {
        let r = 1.0 - t;
        1.0 / (r * r)
    }
}

/// One Hardy problem `(p, q, D, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    p: f64,
    q: f64,
    extent: Extent,
    u: Density,
    v: Density,
    map: Option<HalfLineMap>,
}

const SAMPLE_POINTS: usize = 1000;

impl ProblemSpec {
    /// Validates the exponents and samples `u ≥ 0`, `v > 0` at 1000 points.
    pub fn new(p: f64, q: f64, extent: Extent, u: Density, v: Density) -> Result<ProblemSpec> {
        if !(p > 1.0) || !p.is_finite() || !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidInput("p and q must lie in (1, inf)"));
        }
        if let Extent::Finite(d) = extent {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::InvalidInput("D must be positive"));
            }
        }
        let spec = ProblemSpec {
            p,
            q,
            extent,
            u,
            v,
            map: None,
        };
        spec.validate_densities()?;
        Ok(spec)
    }

    fn validate_densities(&self) -> Result<()> {
        for i in 0..SAMPLE_POINTS {
            let s = (i as f64 + 0.5) / SAMPLE_POINTS as f64;
            let x = match self.extent {
                Extent::Finite(d) => d * s,
                Extent::Infinite => s / (1.0 - s),
            };
            let u = self.u.eval(x)?;
            if !(u >= 0.0) {
                return Err(Error::InvalidInput("u must be nonnegative"));
            }
            let v = self.v.eval(x)?;
            if !(v > 0.0) {
                return Err(Error::InvalidInput("v must be positive"));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p_star(&self) -> f64 {
        conjugate(self.p)
    }

    /// `D` of the original problem.
    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn u_density(&self) -> &Density {
        &self.u
    }

    pub fn v_density(&self) -> &Density {
        &self.v
    }

    pub fn map(&self) -> Option<HalfLineMap> {
        self.map
    }

    /// Right end of the working interval: 1 for a mapped problem.
    pub fn working_end(&self) -> Option<f64> {
        match (self.map, self.extent) {
            (Some(_), _) => Some(1.0),
            (None, Extent::Finite(d)) => Some(d),
            (None, Extent::Infinite) => None,
        }
    }

    /// Working coordinate to original coordinate.
    pub fn to_original(&self, t: f64) -> f64 {
        match self.map {
            Some(m) => m.forward(t),
            None => t,
        }
    }

    /// `u` in working coordinates.
    pub fn u(&self, x: f64) -> Result<f64> {
        match self.map {
            None => self.u.eval(x),
            Some(m) => {
                let u = self.u.eval(m.forward(x))?;
                Ok(if u == 0.0 { 0.0 } else { u * m.jacobian(x) })
            }
        }
    }

    /// `v` in working coordinates.
    pub fn v(&self, x: f64) -> Result<f64> {
        match self.map {
            None => self.v.eval(x),
            Some(m) => Ok(self.v.eval(m.forward(x))? * pow(m.jacobian(x), 1.0 - self.p)),
        }
    }

    /// `v̂ = v^{1-p*}` in working coordinates.
    pub fn vhat(&self, x: f64) -> Result<f64> {
        let s = 1.0 - self.p_star();
        let (y, jac) = match self.map {
            None => (x, 1.0),
            Some(m) => (m.forward(x), m.jacobian(x)),
        };
        let w = self.v.eval_pow(y, s)?;
        if w.is_infinite() && self.v.eval(y)? == 0.0 {
            return Err(Error::Domain("vhat: v vanishes"));
        }
        Ok(w * jac)
    }

    /// Same problem with `u` replaced.
    pub fn with_u(&self, u: Density) -> Result<ProblemSpec> {
        let mut s = self.clone();
        s.u = u;
        s.map = None;
        let mut out = ProblemSpec::new(s.p, s.q, s.extent, s.u, s.v)?;
        out.map = self.map;
        Ok(out)
    }

    /// Same problem with `v` replaced.
    pub fn with_v(&self, v: Density) -> Result<ProblemSpec> {
        let mut out = ProblemSpec::new(self.p, self.q, self.extent, self.u.clone(), v)?;
        out.map = self.map;
        Ok(out)
    }

    /// Same densities on another interval.
    pub fn with_extent(&self, extent: Extent) -> Result<ProblemSpec> {
        ProblemSpec::new(self.p, self.q, extent, self.u.clone(), self.v.clone())
    }
}

/// `v̂(x) = v(x)^{1-p*}` in working coordinates.
pub fn vhat(spec: &ProblemSpec, x: f64) -> Result<f64> {
    spec.vhat(x)
}

fn as_divergence(e: Error, what: &'static str) -> Error {
    match e {
        Error::NonConvergence(_) | Error::Divergent(_) => Error::Divergent(what),
        other => other,
    }
}

/// `φ(x) = ∫₀ˣ v̂` (working coordinates).
pub fn nuhat_cum(spec: &ProblemSpec, x: f64) -> Result<f64> {
    if !(x >= 0.0) || spec.working_end().is_some_and(|d| x > d) {
        return Err(Error::Domain("nuhat_cum: x outside [0, D]"));
    }
    integrate(|y| spec.vhat(y), 0.0, x, &QuadConfig::default())
        .map_err(|e| as_divergence(e, "nuhat_cum: integral of vhat is infinite"))
}

/// `μ(x, D) = ∫ₓ^D u` (working coordinates).
pub fn mu_tail(spec: &ProblemSpec, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain("mu_tail: x must be nonnegative"));
    }
    let cfg = QuadConfig::default();
    let r = match spec.working_end() {
        Some(d) if x > d => return Err(Error::Domain("mu_tail: x beyond D")),
        Some(d) => integrate(|y| spec.u(y), x, d, &cfg),
        None => integrate_to_infinity(|y| spec.u(y), x, &cfg),
    };
    r.map_err(|e| as_divergence(e, "mu_tail: tail of mu is infinite"))
}

/// Map a half-line problem onto `(0, 1)` by `x = t/(1-t)`.
pub fn transform_domain(spec: &ProblemSpec) -> Result<(ProblemSpec, HalfLineMap)> {
    if !spec.extent.is_infinite() || spec.map.is_some() {
        return Err(Error::Domain(
            "transform_domain: needs an unmapped problem with D = inf",
        ));
    }
    let mut out = spec.clone();
    out.map = Some(HalfLineMap);
    Ok((out, HalfLineMap))
}

/// The diagonal problem `(μ, ν^{q/p}, p̃, p̃)`, `p̃ = q/p* + 1`; its `v̂` equals the original.
pub fn transform_problem(spec: &ProblemSpec) -> Result<ProblemSpec> {
    if spec.q < spec.p {
        return Err(Error::Domain("transform_problem: requires q >= p"));
    }
    if spec.q == spec.p {
        return Ok(spec.clone());
    }
    let pt = spec.q / spec.p_star() + 1.0;
    let mut out = spec.clone();
    out.p = pt;
    out.q = pt;
    out.v = spec.v.powered(spec.q / spec.p);
    Ok(out)
}

/// Problem with `u = (q/p*) B1^q s^{-q/p*-1} v̂`, `s = ∫₀ˣ v̂`: its basic
/// estimate `B` equals `B1` when `D = ∞` and `s(∞) = ∞`.
pub fn sharp_instance(v: Density, b1: f64, p: f64, q: f64, extent: Extent) -> Result<ProblemSpec> {
    if !(p > 1.0) || !(q > p) || !q.is_finite() {
        return Err(Error::Domain("sharp_instance: requires q > p > 1"));
    }
    if !(b1 > 0.0) || !b1.is_finite() {
        return Err(Error::Domain("sharp_instance: B1 must be positive"));
    }
    let ps = conjugate(p);
    let s_exp = 1.0 - ps;
    let closed = match &v {
        Density::PowerLaw { coef, exponent } if exponent * s_exp > -1.0 => {
            let k = exponent * s_exp + 1.0;
            Some((pow(*coef, s_exp) / k, k))
        }
        Density::Constant(c) if *c > 0.0 => Some((pow(*c, s_exp), 1.0)),
        _ => None,
    };
    let sharp = SharpDensity {
        v: v.clone(),
        p,
        scale: q / ps * pow(b1, q),
        exponent: -q / ps - 1.0,
        closed,
    };
    // s must be finite: probe near the left end and in the middle.
    let probe = match extent {
        Extent::Finite(d) => [1e-6 * d, 0.5 * d],
        Extent::Infinite => [1e-6, 1.0],
    };
    for x in probe {
        match sharp.s(x) {
            Ok(s) if s.is_finite() && s > 0.0 => {}
            Ok(_) => return Err(Error::Divergent("sharp_instance: s(x) is not finite")),
            Err(e) => return Err(as_divergence(e, "sharp_instance: s(x) is not finite")),
        }
    }
    ProblemSpec::new(p, q, extent, Density::Sharp(Arc::new(sharp)), v)
}
