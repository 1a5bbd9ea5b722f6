//! Closed forms for the two solvable families: the unit interval with
//! Lebesgue measures, and the half-line with `u = x^{-q/p*-1}`, `v = 1`.

use core::f64::consts::PI;

use crate::conjugate;
use crate::math::{pow, sin};
use crate::quad::{sup_search, SearchHint};
use crate::specfun::{beta_fn, inc_beta, k_factor, k_tilde};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSet {
    pub a: f64,
    pub b: f64,
    /// `k_{q,p}`; NaN when `q < p`, where the basic estimate has no factor.
    pub k: f64,
    pub k_tilde: f64,
    pub delta1: Option<f64>,
    pub deltabar1: f64,
    pub a_star: Option<f64>,
}

fn check(p: f64, q: f64) -> Result<()> {
    let ok = |t: f64| t > 1.0 && t.is_finite();
    if !ok(p) || !ok(q) {
        return Err(Error::Domain("p and q must lie in (1, inf)"));
    }
    Ok(())
}

/// Optimal constant on `(0, 1)` with `μ = ν = dx`.
pub fn example11_a(p: f64, q: f64) -> Result<f64> {
    check(p, q)?;
    let num = pow(p, 1.0 / q) * pow(q, 1.0 - 1.0 / p) * pow(p * q + p - q, 1.0 / p - 1.0 / q);
    Ok(num / (pow(p - 1.0, 1.0 / p) * beta_fn(1.0 / q, 1.0 - 1.0 / p)?))
}

/// `δ₁` on `(0, 1)`: with `a = qγ*/p* + 1`, `b = p*/q`,
/// `∫₀ˣ (1 - y^a)^b dy = B(x^a; 1/a, b+1)/a`; the sup over `x` is numeric.
pub fn example11_delta1(p: f64, q: f64) -> Result<f64> {
    check(p, q)?;
    if q < p {
        return Err(Error::NotApplicable("delta1 requires q >= p"));
    }
    let ps = conjugate(p);
    let gamma = q / (ps + q);
    let a = q * gamma / ps + 1.0;
    let b = ps / q;
    let g = |x: f64| Ok(inc_beta(pow(x, a), 1.0 / a, b + 1.0)? / a / pow(x, gamma));
    let (_, sup) = sup_search(g, 0.0, 1.0, SearchHint::General)?;
    Ok(pow(a, -1.0 / q) * pow(sup, 1.0 / ps))
}

pub fn example11(p: f64, q: f64) -> Result<ClosedFormSet> {
    check(p, q)?;
    let ps = conjugate(p);
    let a = example11_a(p, q)?;
    let denom = pow(p * q + p - q, 1.0 - 1.0 / p + 1.0 / q);
    let b = pow(p, 1.0 / q) * pow((p - 1.0) * q, 1.0 - 1.0 / p) / denom;
    let deltabar1 = pow(p, 1.0 / q) * pow((p - 1.0) * (q + 1.0), 1.0 - 1.0 / p) / denom;
    let (k, delta1, a_star) = if q >= p {
        let r = ps / (ps + q);
        let a_star = pow(ps / q, 1.0 / q) * pow(sin(PI * r) / (PI * r), 1.0 / ps + 1.0 / q);
        (k_factor(p, q)?, Some(example11_delta1(p, q)?), Some(a_star))
    } else {
        (f64::NAN, None, None)
    };
    Ok(ClosedFormSet {
        a,
        b,
        k,
        k_tilde: k_tilde(p, q)?,
        delta1,
        deltabar1,
        a_star,
    })
}

/// Half-line family, `q > p`: `A = k_{q,p} B` is attained.
pub fn example25(p: f64, q: f64) -> Result<ClosedFormSet> {
    check(p, q)?;
    if !(q > p) {
        return Err(Error::Domain("example25 requires q > p"));
    }
    let ps = conjugate(p);
    let b = pow(ps / q, 1.0 / q);
    let k = k_factor(p, q)?;
    Ok(ClosedFormSet {
        a: b * k,
        b,
        k,
        k_tilde: k_tilde(p, q)?,
        delta1: Some(pow(1.0 + ps / q, 1.0 / ps + 1.0 / q)),
        deltabar1: pow(p * ps / q, 1.0 / q),
        a_star: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{abs, sqrt};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        abs(a - b) <= tol * abs(b)
    }

    #[test]
    fn unit_interval_values() {
        let c = example11(2.0, 2.0).unwrap();
        assert!(abs(c.a - 2.0 / PI) < 1e-14);
        assert!(close(c.b, 0.5, 1e-14));
        assert!(close(c.deltabar1, sqrt(6.0) / 4.0, 1e-14));
        assert!(close(c.a_star.unwrap(), 2.0 / PI, 1e-14));
        assert!(close(c.delta1.unwrap(), 0.653_830_243_005_915, 1e-10));
        assert!(close(c.k, 2.0, 1e-14) && close(c.k_tilde, 2.0, 1e-14));
        // q = p sine formula.
        let sine = 3.0 / (PI * pow(2.0, 1.0 / 3.0)) * sin(PI / 3.0);
        assert!(close(example11(3.0, 3.0).unwrap().a, sine, 1e-13));
        assert!(close(sine, 0.656_385_051_429_764, 1e-13));
        let c = example11(2.0, 4.0).unwrap();
        assert!(close(c.a, 0.709_827_942_242_356, 1e-12));
        assert!(close(c.a_star.unwrap(), 0.729_237_529_960_012, 1e-12));
        assert!(close(c.delta1.unwrap(), 0.740_146_846_208_263, 1e-10));
        assert!(close(
            example11(2.0, 3.0).unwrap().b,
            0.570_727_705_645_511,
            1e-12
        ));
        let c = example11(5.0, 10.0).unwrap();
        assert!(close(c.a, 0.792_964_481_801_821, 1e-12));
        assert!(close(c.a_star.unwrap(), 0.797_482_002_188_367, 1e-12));
        assert!(close(c.delta1.unwrap(), 0.800_292_111_902_373, 1e-10));
        assert!(close(c.deltabar1, 0.788_438_602_024_693, 1e-12));
        let c = example11(3.0, 2.0).unwrap();
        assert!(c.delta1.is_none() && c.a_star.is_none() && c.k.is_nan());
    }

    #[test]
    fn chain_on_grid() {
        for p in [1.5, 2.0, 3.0, 5.0, 10.0] {
            for q in [p, p + 1.0, p + 5.0, p + 15.0] {
                let c = example11(p, q).unwrap();
                let (d1, s) = (c.delta1.unwrap(), c.a_star.unwrap());
                let chain = [c.b, c.deltabar1, c.a, s, d1, c.k_tilde * c.b];
                assert!(
                    chain.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)),
                    "{p} {q} {chain:?}"
                );
            }
        }
    }

    #[test]
    fn delta1_against_kb() {
        // δ₁ ≤ kB holds for moderate q - p but not for small p and large q.
        for (p, q) in [(2.0, 3.0), (2.0, 7.0), (3.0, 18.0), (1.5, 2.5)] {
            let c = example11(p, q).unwrap();
            assert!(c.delta1.unwrap() <= c.k * c.b, "{p} {q}");
        }
        let c = example11(1.5, 6.5).unwrap();
        assert!(close(c.delta1.unwrap(), 0.824_832_770_621_254, 1e-10));
        assert!(close(c.k * c.b, 0.814_797_280_230_816, 1e-12));
    }

    #[test]
    fn continuity_at_diagonal() {
        for p in [1.5, 2.0, 4.0] {
            let sine = p / (PI * pow(p - 1.0, 1.0 / p)) * sin(PI / p);
            assert!(close(example11(p, p + 1e-9).unwrap().a, sine, 1e-5));
        }
    }

    #[test]
    fn half_line_values() {
        let c = example25(2.0, 4.0).unwrap();
        assert!(close(c.b, 0.840_896_415_253_715, 1e-13));
        assert!(close(c.a, 1.106_681_919_700_322, 1e-13));
        assert!(close(c.delta1.unwrap(), pow(1.5, 0.75), 1e-14));
        assert!(close(c.deltabar1, 1.0, 1e-14));
        assert!(close(c.deltabar1 / c.b, pow(2.0, 0.25), 1e-14));
        assert!(close(c.a, c.b * c.k, 1e-15));
        assert!(close(c.delta1.unwrap(), c.k_tilde * c.b, 1e-14));
        assert!(example25(3.0, 3.0).is_err());
    }
}
