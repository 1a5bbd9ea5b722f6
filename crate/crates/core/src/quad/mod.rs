//! Quadrature, grids and sup search.
//!
//! [`integrate`] is a globally adaptive 15-point Gauss–Kronrod rule. It never
//! evaluates the integrand at an endpoint. When bisection stalls (strong
//! endpoint singularity) it falls back to tanh-sinh, which also decides
//! whether the integral diverges.

mod grid;
mod primitive;
mod search;

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::math::{abs, cosh, exp, sinh};
use crate::{Error, Result};

pub use grid::{Grid, GridFunction, GridLayout};
pub use primitive::{cum_integral, tail_integral};
pub(crate) use primitive::{cum_panels, panel_sum, tail_panels};
pub(crate) use search::{golden_max, sup_over_nodes};
pub use search::{sup_search, SearchHint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 48,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t.is_finite();
        if !ok(self.rel_tol) || !ok(self.abs_tol) {
            return Err(Error::InvalidInput(
                "quadrature tolerances must be positive",
            ));
        }
        if self.max_depth < 8 {
            return Err(Error::InvalidInput(
                "quadrature max_depth must be at least 8",
            ));
        }
        Ok(())
    }

    fn tol(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * abs(value))
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Outcome of one rule application: `None` if the integrand was not finite.
fn gk15<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Option<Segment>>
where
    F: Fn(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    if !fc.is_finite() {
        return Ok(None);
    }
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = abs(resk);
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        if !f1.is_finite() || !f2.is_finite() {
            return Ok(None);
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (abs(f1) + abs(f2));
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * abs(fc - mean);
    for j in 0..7 {
        resasc += WGK[j] * (abs(fv1[j] - mean) + abs(fv2[j] - mean));
    }
    let value = resk * h;
    let resabs = resabs * abs(h);
    let resasc = resasc * abs(h);
    let mut error = abs((resk - resg) * h);
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (libm::pow(200.0 * error / resasc, 1.5)).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Some(Segment {
        a,
        b,
        value,
        error,
        depth,
    }))
}

const MAX_SEGMENTS: usize = 4000;

/// Globally adaptive Gauss–Kronrod; `Ok(None)` when it cannot meet the tolerance.
fn adaptive<F>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let first = match gk15(f, a, b, 0)? {
        Some(s) => s,
        None => return Ok(None),
    };
    if first.error <= cfg.tol(first.value) {
        return Ok(Some(first.value));
    }
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    let mut count = 1;
    while let Some(seg) = heap.pop() {
        if total_err <= cfg.tol(total) {
            return Ok(Some(total));
        }
        let mid = 0.5 * (seg.a + seg.b);
        // Below ~100 ulps the Kronrod abscissae would round onto the ends.
        let tiny = seg.b - seg.a <= 100.0 * f64::EPSILON * abs(seg.a).max(abs(seg.b));
        if seg.depth >= cfg.max_depth || tiny {
            frozen_value += seg.value;
            frozen_error += seg.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (l, r) = match (
            gk15(f, seg.a, mid, seg.depth + 1)?,
            gk15(f, mid, seg.b, seg.depth + 1)?,
        ) {
            (Some(l), Some(r)) => (l, r),
            _ => return Ok(None),
        };
        total += l.value + r.value - seg.value;
        total_err += l.error + r.error - seg.error;
        heap.push(l);
        heap.push(r);
        count += 2;
        if count > MAX_SEGMENTS {
            break;
        }
    }
    // Refinable segments exhausted or budget spent: accept only if the frozen
    // part is already below tolerance.
    let rest: f64 = heap.iter().map(|s| s.value).sum();
    let rest_err: f64 = heap.iter().map(|s| s.error).sum();
    let value = frozen_value + rest;
    if frozen_error + rest_err <= cfg.tol(value) {
        return Ok(Some(value));
    }
    Ok(None)
}

const TS_MAX_LEVEL: u32 = 12;

/// A divergent integrand keeps weighted terms of order `u'(t)` out to the last
/// representable node, comparable to the whole sum. A convergent one decays
/// there down to the rounding-limited remainder next to the endpoint.
fn diverges(edge: f64, estimate: f64, cfg: &QuadConfig) -> bool {
    edge > cfg.tol(estimate) && edge > 1e-2 * abs(estimate)
}

/// Tanh-sinh on `(a, b)` with divergence detection at the truncation points.
fn tanh_sinh<F>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    use core::f64::consts::FRAC_PI_2;
    let width = b - a;
    let half = 0.5 * width;
    // Weighted value at parameter t on one side (left: towards a). None once
    // the abscissa is no longer distinct from the endpoint.
    let node = |t: f64, left: bool| -> Result<Option<f64>> {
        let u = FRAC_PI_2 * sinh(t);
        let d = width / (1.0 + exp(2.0 * u));
        let x = if left { a + d } else { b - d };
        if !(x > a && x < b) {
            return Ok(None);
        }
        let ch = cosh(u);
        let w = half * FRAC_PI_2 * cosh(t) / (ch * ch);
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::Eval(crate::expr::EvalError::NonFinite));
        }
        if v.is_infinite() {
            return Err(Error::Divergent("integrand is infinite near an endpoint"));
        }
        Ok(Some(w * v))
    };
    // Sum over t = start, start + step, ... on both sides; also returns the
    // largest magnitude at the last node of either side.
    let sweep = |start: f64, step: f64| -> Result<(f64, f64)> {
        let mut sum = 0.0;
        let mut edge = 0.0f64;
        for left in [true, false] {
            let mut t = start;
            let mut last = 0.0;
            while let Some(v) = node(t, left)? {
                sum += v;
                last = v;
                t += step;
                if t > 8.0 {
                    break;
                }
            }
            edge = edge.max(abs(last));
        }
        Ok((sum, edge))
    };
    let fc = f(0.5 * (a + b))?;
    if !fc.is_finite() {
        return Err(Error::Eval(crate::expr::EvalError::NonFinite));
    }
    let mut h = 1.0;
    let (s, mut edge) = sweep(1.0, 1.0)?;
    let mut sum = half * FRAC_PI_2 * fc + s;
    let mut estimate = h * sum;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        // Only the finest sweep reaches close to the endpoints.
        let (added, e) = sweep(h, 2.0 * h)?;
        edge = e;
        sum += added;
        let next = h * sum;
        let diff = abs(next - estimate);
        estimate = next;
        if level >= 3 && diff <= cfg.tol(estimate) {
            if diverges(edge, estimate, cfg) {
                return Err(Error::Divergent(
                    "integral does not converge at an endpoint",
                ));
            }
            return Ok(estimate);
        }
    }
    if diverges(edge, estimate, cfg) {
        return Err(Error::Divergent(
            "integral does not converge at an endpoint",
        ));
    }
    Err(Error::NonConvergence("adaptive quadrature"))
}

/// `∫_a^b f` with `error ≤ max(abs_tol, rel_tol·|result|)`.
///
/// Errors: [`Error::Divergent`] when the integral is infinite at an endpoint,
/// [`Error::NonConvergence`] when neither rule meets the tolerance, and any
/// error returned by `f`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("integrate: need finite a <= b"));
    }
    if a == b {
        return Ok(0.0);
    }
    match adaptive(&f, a, b, cfg)? {
        Some(v) => Ok(v),
        None => tanh_sinh(&f, a, b, cfg),
    }
}

/// `∫_a^∞ f` through `x = a + s/(1-s)`.
pub fn integrate_to_infinity<F>(f: F, a: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !a.is_finite() {
        return Err(Error::Domain("integrate_to_infinity: a must be finite"));
    }
    let g = |s: f64| {
        let r = 1.0 - s;
        let x = a + s / r;
        let v = f(x)?;
        Ok(if v == 0.0 { 0.0 } else { v / (r * r) })
    };
    integrate(g, 0.0, 1.0, cfg)
}
