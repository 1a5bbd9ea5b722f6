use alloc::vec::Vec;

use crate::math::abs;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchHint {
    /// 64-point scan, then golden section on the bracket of the best point.
    Unimodal,
    /// 1024-point scan, then golden section on the 3 best brackets.
    General,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization on `[lo, hi]` down to width `tol`.
pub(crate) fn golden_max<F>(g: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let score = |v: f64| if v.is_nan() { f64::NEG_INFINITY } else { v };
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut gc = score(g(c)?);
    let mut gd = score(g(d)?);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if gc >= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = score(g(c)?);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = score(g(d)?);
        }
    }
    Ok(if gc >= gd { (c, gc) } else { (d, gd) })
}

/// Maximize `g` on the open interval `(a, b)`.
pub fn sup_search<F>(g: F, a: f64, b: f64, hint: SearchHint) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("sup_search: need finite a < b"));
    }
    let (n, keep) = match hint {
        SearchHint::Unimodal => (64, 1),
        SearchHint::General => (1024, 3),
    };
    let h = (b - a) / n as f64;
    let mut scan = Vec::with_capacity(n - 1);
    for i in 1..n {
        let x = a + h * i as f64;
        scan.push((x, g(x)?));
    }
    // Local maxima of the scan, best first.
    let mut peaks: Vec<usize> = (0..scan.len())
        .filter(|&i| {
            let v = scan[i].1;
            !v.is_nan()
                && (i == 0 || scan[i - 1].1.is_nan() || scan[i - 1].1 <= v)
                && (i + 1 == scan.len() || scan[i + 1].1.is_nan() || scan[i + 1].1 <= v)
        })
        .collect();
    if peaks.is_empty() {
        return Err(Error::NonConvergence(
            "sup_search: objective is NaN at every scan point",
        ));
    }
    peaks.sort_by(|&i, &j| scan[j].1.total_cmp(&scan[i].1));
    peaks.truncate(keep);
    let mut best = scan[peaks[0]];
    for &i in &peaks {
        let lo = if i == 0 { a } else { scan[i - 1].0 };
        let hi = if i + 1 == scan.len() {
            b
        } else {
            scan[i + 1].0
        };
        let tol = 1e-12 * abs(hi).max(abs(lo)).max(1.0);
        let (x, v) = golden_max(&g, lo, hi, tol)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Sup over interior nodes of `node_values` (NaN entries are excluded),
/// refined by golden section between the neighbours of the best node.
pub(crate) fn sup_over_nodes<F>(
    nodes: &[f64],
    node_values: &[f64],
    g: F,
) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut best: Option<usize> = None;
    for i in 1..nodes.len() - 1 {
        let v = node_values[i];
        if v.is_nan() {
            continue;
        }
        if best.is_none_or(|b| v > node_values[b]) {
            best = Some(i);
        }
    }
    let Some(i) = best else { return Ok(None) };
    let v = node_values[i];
    if v.is_infinite() {
        return Ok(Some((nodes[i], v)));
    }
    // Stay out of the end panels, where interpolation is only asymptotic.
    let n = nodes.len();
    let (lo, hi) = (nodes[(i - 1).max(1)], nodes[(i + 1).min(n - 2)]);
    if !(lo < hi) {
        return Ok(Some((nodes[i], v)));
    }
    let (x, gx) = golden_max(&g, lo, hi, 1e-13 * hi)?;
    Ok(Some(if gx > v { (x, gx) } else { (nodes[i], v) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{pow, sqrt};

    #[test]
    fn examples() {
        let (x, v) = sup_search(|x| Ok(x * (1.0 - x)), 0.0, 1.0, SearchHint::Unimodal).unwrap();
        assert!((x - 0.5).abs() < 1e-6 && (v - 0.25).abs() < 1e-14);
        let g = |x: f64| Ok(sqrt(x) - 0.4 * x * x);
        let (x, v) = sup_search(g, 0.0, 1.0, SearchHint::Unimodal).unwrap();
        let xs = pow(0.625, 2.0 / 3.0);
        assert!((x - xs).abs() < 1e-6);
        assert!((v - (sqrt(xs) - 0.4 * xs * xs)).abs() < 1e-14);
        assert!((v - 0.641_241).abs() < 1e-6);
        let (_, v) = sup_search(|_| Ok(2.5), 0.0, 1.0, SearchHint::General).unwrap();
        assert_eq!(v, 2.5);
    }

    #[test]
    fn general_finds_global_peak() {
        // Two bumps; the narrower one is higher.
        let g = |x: f64| {
            Ok(libm::exp(-(x - 0.2) * (x - 0.2) * 50.0)
                + 1.2 * libm::exp(-(x - 0.83) * (x - 0.83) * 4000.0))
        };
        let (x, v) = sup_search(g, 0.0, 1.0, SearchHint::General).unwrap();
        assert!((x - 0.83).abs() < 1e-4 && (v - 1.2).abs() < 1e-6, "{x} {v}");
    }

    #[test]
    fn nan_handling() {
        let r = sup_search(|_| Ok(f64::NAN), 0.0, 1.0, SearchHint::Unimodal);
        assert!(r.is_err());
        let g = |x: f64| Ok(if x < 0.5 { f64::NAN } else { 1.0 - x });
        let (x, _) = sup_search(g, 0.0, 1.0, SearchHint::General).unwrap();
        assert!((0.5..0.51).contains(&x));
        let r = sup_search(|_| Err(Error::Domain("x")), 0.0, 1.0, SearchHint::General);
        assert_eq!(r, Err(Error::Domain("x")));
    }
}
