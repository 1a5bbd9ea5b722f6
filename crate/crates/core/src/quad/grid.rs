use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::math::{exp, ln, pow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridLayout {
    Uniform,
    /// Geometric spacing from `1e-10·D` up to `D`.
    LogNearZero,
    /// `x = D/(1 + e^{-2s})` on a uniform `s`-grid: geometric towards both ends,
    /// down to `1e-10·D` at 0 and `1e-5·D` at `D`.
    LogBothEnds,
}

/// Smallest positive node relative to `D` for the logarithmic layouts.
const LOG_FLOOR: f64 = 1e-10;
/// Smallest gap `D - x` relative to `D`. Abscissae next to `D` are quantized at
/// one ulp of `D`, so an integrand varying on the scale `D - x` (a Jacobian of
/// the half-line map, say) carries a relative error `ε·D/(D - x)` there.
const LOG_FLOOR_RIGHT: f64 = 1e-5;

/// Strictly ascending nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Arc<[f64]>,
    layout: Option<GridLayout>,
}

impl Grid {
    pub const MIN_NODES: usize = 16;

    /// `n` nodes on `[0, end]`, both endpoints included.
    pub fn new(layout: GridLayout, n: usize, end: f64) -> Result<Grid> {
        if n < Self::MIN_NODES {
            return Err(Error::InvalidInput("grid needs at least 16 nodes"));
        }
        if !(end > 0.0) || !end.is_finite() {
            return Err(Error::InvalidInput("grid end must be positive and finite"));
        }
        let last = (n - 1) as f64;
        let mut nodes = Vec::with_capacity(n);
        match layout {
            GridLayout::Uniform => {
                for i in 0..n {
                    nodes.push(end * i as f64 / last);
                }
            }
            GridLayout::LogNearZero => {
                nodes.push(0.0);
                let span = -crate::math::ln(LOG_FLOOR);
                for i in 1..n {
                    let r = (i - 1) as f64 / (last - 1.0);
                    nodes.push(end * exp(-span * (1.0 - r)));
                }
            }
            GridLayout::LogBothEnds => {
                // s ranges over [-S_l, S_r] with 1/(1 + e^{2S}) equal to the floors.
                let s_left = 0.5 * crate::math::ln(1.0 / LOG_FLOOR - 1.0);
                let s_right = 0.5 * crate::math::ln(1.0 / LOG_FLOOR_RIGHT - 1.0);
                nodes.push(0.0);
                for i in 1..n - 1 {
                    let s = -s_left + (s_left + s_right) * i as f64 / last;
                    // Evaluate the short distance to the nearer end directly.
                    let x = if s <= 0.0 {
                        end / (1.0 + exp(-2.0 * s))
                    } else {
                        end - end / (1.0 + exp(2.0 * s))
                    };
                    nodes.push(x);
                }
                nodes.push(end);
            }
        }
        let g = Grid {
            nodes: nodes.into(),
            layout: Some(layout),
        };
        g.check()?;
        Ok(g)
    }

    /// Grid from explicit nodes (strictly ascending, finite, at least 16).
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Grid> {
        if nodes.len() < Self::MIN_NODES {
            return Err(Error::InvalidInput("grid needs at least 16 nodes"));
        }
        let g = Grid {
            nodes: nodes.into(),
            layout: None,
        };
        g.check()?;
        Ok(g)
    }

    /// Sub-grid used internally (short node lists are allowed).
    pub(crate) fn raw(nodes: Vec<f64>) -> Grid {
        Grid {
            nodes: nodes.into(),
            layout: None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.nodes.iter().any(|x| !x.is_finite()) || self.nodes[0] < 0.0 {
            return Err(Error::InvalidInput(
                "grid nodes must be finite and nonnegative",
            ));
        }
        if self.nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("grid nodes must be strictly ascending"));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn layout(&self) -> Option<GridLayout> {
        self.layout
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index `i` of the panel `[x_i, x_{i+1}]` containing `x` (clamped).
    pub fn panel(&self, x: f64) -> usize {
        let n = self.nodes.len();
        let i = self.nodes.partition_point(|&node| node <= x);
        i.saturating_sub(1).min(n - 2)
    }
}

/// Function tabulated on a grid.
///
/// Without slopes it is piecewise linear. With slopes each panel is a cubic
/// Hermite interpolant. In the first and last panel, when the end value or
/// slope is not finite, the panel uses `c + b·t^e` (`t` the scaled distance
/// from the end) fitted to the inner node: `c` is the end value when that is
/// finite, otherwise it is fitted from the next node as well.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
    slopes: Option<Vec<f64>>,
    ends: [Option<EndModel>; 2],
    /// Keep each Hermite panel within its node values.
    clamp: bool,
}

/// `c + b·t^e`
#[derive(Debug, Clone, Copy, PartialEq)]
struct EndModel {
    c: f64,
    b: f64,
    e: f64,
}

impl EndModel {
    fn eval(&self, t: f64) -> f64 {
        self.c + self.b * pow(t, self.e)
    }

    /// `f(1) = f1`, `f'(1) = d1` (in `t`), `f(r) = f2` for the next node, and the
    /// end value `f0` (possibly infinite).
    fn fit(f0: f64, f1: f64, d1: f64, next: Option<(f64, f64)>) -> Option<EndModel> {
        if !f1.is_finite() || !d1.is_finite() {
            return None;
        }
        if f0.is_finite() {
            let b = f1 - f0;
            if b == 0.0 {
                return None;
            }
            let e = d1 / b;
            return (e > 0.0).then_some(EndModel { c: f0, b, e });
        }
        if f1 == 0.0 {
            return None;
        }
        let pure = EndModel {
            c: 0.0,
            b: f1,
            e: d1 / f1,
        };
        let Some((r, f2)) = next else {
            return Some(pure);
        };
        // Solve d1·(r^e - 1)/e = f2 - f1 for e < 0; the left side increases
        // from 0 to d1·ln r.
        let target = (f2 - f1) / d1;
        let psi = |e: f64| (pow(r, e) - 1.0) / e;
        if !(target > 0.0) || !(target < ln(r)) || !f2.is_finite() {
            return Some(pure);
        }
        let (mut lo, mut hi) = (-64.0f64, -1e-12f64);
        if psi(lo) > target {
            return Some(pure);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if psi(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        let b = d1 / e;
        Some(EndModel { c: f1 - b, b, e })
    }
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<GridFunction> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput("values length must equal node count"));
        }
        Ok(GridFunction {
            grid,
            values,
            slopes: None,
            ends: [None, None],
            clamp: false,
        })
    }

    pub fn with_slopes(grid: Grid, values: Vec<f64>, slopes: Vec<f64>) -> Result<GridFunction> {
        if values.len() != grid.len() || slopes.len() != grid.len() {
            return Err(Error::InvalidInput(
                "values and slopes length must equal node count",
            ));
        }
        let ends = end_models(grid.nodes(), &values, &slopes);
        Ok(GridFunction {
            grid,
            values,
            slopes: Some(slopes),
            ends,
            clamp: false,
        })
    }

    /// With monotone node values, keep every Hermite panel between its node
    /// values. A primitive of a nonnegative integrand next to a jump of the
    /// integrand would otherwise overshoot, possibly below 0.
    pub(crate) fn monotone_clamped(mut self) -> GridFunction {
        let v = &self.values;
        self.clamp = v.windows(2).all(|w| w[0] <= w[1]) || v.windows(2).all(|w| w[0] >= w[1]);
        self
    }

    /// Samples `f` at the nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid, f: F) -> GridFunction {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        GridFunction {
            grid,
            values,
            slopes: None,
            ends: [None, None],
            clamp: false,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> Option<&[f64]> {
        self.slopes.as_deref()
    }

    /// Same function with the slopes dropped (piecewise-linear reading).
    pub fn linear(&self) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.clone(),
            slopes: None,
            ends: [None, None],
            clamp: false,
        }
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        let scale = |m: Option<EndModel>| {
            m.map(|m| EndModel {
                c: m.c * c,
                b: m.b * c,
                e: m.e,
            })
        };
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            slopes: self
                .slopes
                .as_ref()
                .map(|s| s.iter().map(|v| v * c).collect()),
            ends: [scale(self.ends[0]), scale(self.ends[1])],
            clamp: self.clamp,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_panel(self.grid.panel(x), x)
    }

    /// Value at `x`, known to lie in panel `i`.
    pub fn eval_panel(&self, i: usize, x: f64) -> f64 {
        let nodes = self.grid.nodes();
        let (xl, xr) = (nodes[i], nodes[i + 1]);
        let (fl, fr) = (self.values[i], self.values[i + 1]);
        if x <= xl {
            return fl;
        }
        if x >= xr {
            return fr;
        }
        let h = xr - xl;
        if let Some(s) = &self.slopes {
            let (sl, sr) = (s[i], s[i + 1]);
            if fl.is_finite() && fr.is_finite() && sl.is_finite() && sr.is_finite() {
                let t = (x - xl) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                let y = (2.0 * t3 - 3.0 * t2 + 1.0) * fl
                    + (t3 - 2.0 * t2 + t) * h * sl
                    + (-2.0 * t3 + 3.0 * t2) * fr
                    + (t3 - t2) * h * sr;
                return if self.clamp {
                    y.clamp(fl.min(fr), fl.max(fr))
                } else {
                    y
                };
            }
            let last = nodes.len() - 2;
            let left_bad = !fl.is_finite() || !sl.is_finite();
            if i == 0 && left_bad {
                if let Some(m) = self.ends[0] {
                    return m.eval((x - xl) / h);
                }
            }
            if i == last {
                if let Some(m) = self.ends[1] {
                    return m.eval((xr - x) / h);
                }
            }
        }
        let t = (x - xl) / h;
        fl + t * (fr - fl)
    }
}

fn end_models(nodes: &[f64], values: &[f64], slopes: &[f64]) -> [Option<EndModel>; 2] {
    let n = nodes.len();
    let left = if values[0].is_finite() && slopes[0].is_finite() {
        None
    } else {
        let h = nodes[1] - nodes[0];
        let next = (n > 2).then(|| ((nodes[2] - nodes[0]) / h, values[2]));
        EndModel::fit(values[0], values[1], h * slopes[1], next)
    };
    let right = if values[n - 1].is_finite() && slopes[n - 1].is_finite() {
        None
    } else {
        let h = nodes[n - 1] - nodes[n - 2];
        let next = (n > 2).then(|| ((nodes[n - 1] - nodes[n - 3]) / h, values[n - 3]));
        EndModel::fit(values[n - 1], values[n - 2], -h * slopes[n - 2], next)
    };
    [left, right]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    #[test]
    fn layouts_have_endpoints_and_ascend() {
        for layout in [
            GridLayout::Uniform,
            GridLayout::LogNearZero,
            GridLayout::LogBothEnds,
        ] {
            for n in [16, 17, 2048] {
                let g = Grid::new(layout, n, 3.0).unwrap();
                assert_eq!(g.len(), n);
                assert_eq!(g.start(), 0.0);
                assert_eq!(g.end(), 3.0);
                assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
            }
        }
        let g = Grid::new(GridLayout::LogBothEnds, 2048, 1.0).unwrap();
        assert!(g.nodes()[1] < 2e-10);
        assert!(1.0 - g.nodes()[2046] < 2e-5);
        assert!(Grid::new(GridLayout::Uniform, 8, 1.0).is_err());
        assert!(Grid::from_nodes(alloc::vec![0.0, 1.0]).is_err());
        let mut bad: Vec<f64> = (0..20).map(|i| i as f64).collect();
        bad[5] = 3.0;
        assert!(Grid::from_nodes(bad).is_err());
    }

    #[test]
    fn panel_lookup() {
        let g = Grid::new(GridLayout::Uniform, 17, 16.0).unwrap();
        assert_eq!(g.panel(0.0), 0);
        assert_eq!(g.panel(0.5), 0);
        assert_eq!(g.panel(1.0), 1);
        assert_eq!(g.panel(16.0), 15);
        assert_eq!(g.panel(-1.0), 0);
        assert_eq!(g.panel(99.0), 15);
    }

    #[test]
    fn interpolation_modes() {
        let g = Grid::new(GridLayout::Uniform, 17, 1.0).unwrap();
        let lin = GridFunction::from_fn(g.clone(), |x| x * x);
        assert!((lin.eval(0.03125) - 0.001953125).abs() < 1e-15);
        let vals: Vec<f64> = g.nodes().iter().map(|x| x * x * x).collect();
        let sl: Vec<f64> = g.nodes().iter().map(|x| 3.0 * x * x).collect();
        let cubic = GridFunction::with_slopes(g.clone(), vals, sl).unwrap();
        for &x in &[0.01, 0.333, 0.77, 0.999] {
            assert!((cubic.eval(x) - x * x * x).abs() < 1e-14);
        }
        // sqrt has an infinite slope at 0: the first panel is a power law.
        let vals: Vec<f64> = g.nodes().iter().map(|&x| sqrt(x)).collect();
        let sl: Vec<f64> = g.nodes().iter().map(|&x| 0.5 / sqrt(x)).collect();
        let f = GridFunction::with_slopes(g.clone(), vals, sl).unwrap();
        assert!((f.eval(1e-6) - 1e-3).abs() < 1e-15);
        // A tail vanishing like (1-x)^{3/2} at the right end.
        let vals: Vec<f64> = g.nodes().iter().map(|&x| pow(1.0 - x, 1.5)).collect();
        let mut sl: Vec<f64> = g.nodes().iter().map(|&x| -1.5 * sqrt(1.0 - x)).collect();
        sl[16] = f64::NAN;
        let f = GridFunction::with_slopes(g.clone(), vals, sl).unwrap();
        let x = 1.0 - 1e-4;
        assert!((f.eval(x) - 1e-6).abs() < 1e-18);
        // 2 - sqrt(x): finite at 0 with an infinite slope.
        let vals: Vec<f64> = g.nodes().iter().map(|&x| 2.0 - sqrt(x)).collect();
        let sl: Vec<f64> = g.nodes().iter().map(|&x| -0.5 / sqrt(x)).collect();
        let f = GridFunction::with_slopes(g.clone(), vals, sl).unwrap();
        assert!((f.eval(1e-6) - (2.0 - 1e-3)).abs() < 1e-15);
        // 1/x near 0.
        let vals: Vec<f64> = g.nodes().iter().map(|&x| 1.0 / x).collect();
        let sl: Vec<f64> = g.nodes().iter().map(|&x| -1.0 / (x * x)).collect();
        let f = GridFunction::with_slopes(g.clone(), vals, sl).unwrap();
        assert!((f.eval(1e-3) - 1e3).abs() < 1e-9);
        // 1/(1-x) - 1 towards the right end: the offset is recovered.
        let vals: Vec<f64> = g.nodes().iter().map(|&x| 1.0 / (1.0 - x) - 1.0).collect();
        let sl: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&x| 1.0 / ((1.0 - x) * (1.0 - x)))
            .collect();
        let f = GridFunction::with_slopes(g, vals, sl).unwrap();
        let x = 1.0 - 1e-3;
        assert!((f.eval(x) - 999.0).abs() < 1e-9, "{}", f.eval(x));
    }
}
