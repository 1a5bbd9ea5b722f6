//! Special functions and the sharp factors of the basic estimate.
//!
//! | function       | value                                                  |
//! |----------------|--------------------------------------------------------|
//! | [`gamma_fn`]   | `Γ(x)`                                                 |
//! | [`ln_gamma`]   | `ln Γ(x)`                                              |
//! | [`beta_fn`]    | `B(a,b) = Γ(a)Γ(b)/Γ(a+b)`                             |
//! | [`ln_beta`]    | `ln B(a,b)`                                            |
//! | [`inc_beta`]   | `∫₀ˣ s^{a-1}(1-s)^{b-1} ds` (not regularized)          |
//! | [`k_factor`]   | `k_{q,p}`                                              |
//! | [`k_tilde`]    | `k̃_{q,p} = (1+q/p*)^{1/q}(1+p*/q)^{1/p*}`             |

use crate::math::{abs, exp, ln, ln1p, pow, sin};
use crate::{conjugate, Error, Result};

use core::f64::consts::PI;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest `x` with finite `Γ(x)`.
const GAMMA_MAX: f64 = 171.624_376_956_302_7;

/// `A_g(x)` such that `Γ(x) = √(2π) t^{x-1/2} e^{-t} A_g(x)`, `t = x + g - 1/2`.
/// Accurate for `x ≥ 1/2`.
fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x - 1.0 + k as f64);
    }
    s
}

/// `Γ(x)` for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain("gamma_fn: x must be positive"));
    }
    if x > GAMMA_MAX {
        return Err(Error::Overflow("gamma_fn: result exceeds f64 range"));
    }
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
        return Ok(PI / (sin(PI * x) * gamma_fn(1.0 - x)?));
    }
    let t = x + LANCZOS_G - 0.5;
    // Split the power so t^{x-1/2} e^{-t} does not overflow before it is damped.
    let half = pow(t, 0.5 * (x - 0.5));
    let g = SQRT_2PI * lanczos_sum(x) * (half * exp(-t)) * half;
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Overflow("gamma_fn: result exceeds f64 range"))
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain("ln_gamma: x must be positive and finite"));
    }
    if x < 0.5 {
        return Ok(ln(PI / sin(PI * x)) - ln_gamma(1.0 - x)?);
    }
    let t = x + LANCZOS_G - 0.5;
    Ok(LN_SQRT_2PI + ln(lanczos_sum(x)) + (x - 0.5) * ln(t) - t)
}

/// `ln B(a, b)`, accurate also when both arguments are huge.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(
            "ln_beta: arguments must be positive and finite",
        ));
    }
    // Shift small arguments up: B(a,b) = B(a+1,b)(a+b)/a.
    if a < 1.0 {
        return Ok(ln_beta(a + 1.0, b)? + ln((a + b) / a));
    }
    if b < 1.0 {
        return Ok(ln_beta(a, b + 1.0)? + ln((a + b) / b));
    }
    // Ratio of Lanczos forms; the e^{-t} factors cancel to e^{1/2-g}.
    let c = a + b;
    let tc = c + LANCZOS_G - 0.5;
    let sums = ln(lanczos_sum(a)) + ln(lanczos_sum(b)) - ln(lanczos_sum(c));
    // ln(ta/tc) = ln1p(-(b)/tc) keeps precision when b ≪ a.
    let la = ln1p(-b / tc);
    let lb = ln1p(-a / tc);
    Ok(LN_SQRT_2PI + 0.5 - LANCZOS_G + sums + (a - 0.5) * la + (b - 0.5) * lb - 0.5 * ln(tc))
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("beta_fn: arguments must be positive"));
    }
    let v = exp(ln_beta(a, b)?);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("beta_fn: result exceeds f64 range"))
    }
}

const CF_MAX_ITER: usize = 2000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Continued fraction for the incomplete Beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if abs(v) < CF_TINY { CF_TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if abs(del - 1.0) < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence("inc_beta: continued fraction"))
}

/// Lower part `x^a (1-x)^b cf / a`, valid below the switch point.
fn inc_beta_lower(x: f64, a: f64, b: f64) -> Result<f64> {
    let front = exp(a * ln(x) + b * ln1p(-x));
    Ok(front * beta_cf(x, a, b)? / a)
}

/// Unregularized incomplete Beta `B(x; a, b) = ∫₀ˣ s^{a-1}(1-s)^{b-1} ds`.
pub fn inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain("inc_beta: x must lie in [0, 1]"));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("inc_beta: a and b must be positive"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return beta_fn(a, b);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        let full = beta_fn(a, b)?;
        let v = full - inc_beta_lower(1.0 - x, b, a)?;
        return Ok(v.max(0.0));
    }
    inc_beta_lower(x, a, b)
}

/// Below this gap the closed form `k_{p,p}` is returned.
const K_LIMIT_GAP: f64 = 1e-8;
/// Below this gap the Beta form is used.
const K_BETA_GAP: f64 = 1e-3;

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain("p must lie in (1, inf)"));
    }
    Ok(())
}

/// `k_{p,p} = p^{1/p} p*^{1/p*}`.
fn k_diagonal(p: f64) -> f64 {
    let ps = conjugate(p);
    pow(p, 1.0 / p) * pow(ps, 1.0 / ps)
}

/// Sharp factor `k_{q,p}` of the basic estimate `B ≤ A ≤ k_{q,p} B`, `1 < p ≤ q`.
pub fn k_factor(p: f64, q: f64) -> Result<f64> {
    check_p(p)?;
    if !q.is_finite() || q < p {
        return Err(Error::Domain("k_factor: requires p <= q < inf"));
    }
    let d = q - p;
    if d < K_LIMIT_GAP {
        return Ok(k_diagonal(p));
    }
    let e = 1.0 / p - 1.0 / q;
    let ln_inner = if d < K_BETA_GAP {
        ln(d) - ln(p) - ln_beta(p / d, p * (q - 1.0) / d)?
    } else {
        ln_gamma(p * q / d)? - ln_gamma(q / d)? - ln_gamma(p * (q - 1.0) / d)?
    };
    Ok(exp(e * ln_inner))
}

/// Relaxed factor `k̃_{q,p} = (1+q/p*)^{1/q} (1+p*/q)^{1/p*}`.
pub fn k_tilde(p: f64, q: f64) -> Result<f64> {
    check_p(p)?;
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Domain("k_tilde: q must lie in (1, inf)"));
    }
    let ps = conjugate(p);
    Ok(pow(1.0 + q / ps, 1.0 / q) * pow(1.0 + ps / q, 1.0 / ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    fn rel(a: f64, b: f64) -> f64 {
        abs(a - b) / abs(b)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!(rel(gamma_fn(0.5).unwrap(), sqrt(PI)) < 1e-14);
        assert!(rel(gamma_fn(4.0).unwrap(), 6.0) < 1e-14);
        let mut fact = 1.0f64;
        for n in 1..171 {
            // Γ(n+1) = n!
            fact *= n as f64;
            assert!(
                rel(gamma_fn(n as f64 + 1.0).unwrap(), fact) < 1e-12,
                "n = {n}"
            );
        }
        assert!(matches!(gamma_fn(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma_fn(-1.5), Err(Error::Domain(_))));
        assert!(matches!(gamma_fn(180.0), Err(Error::Overflow(_))));
        // Γ(x) Γ(1-x) = π / sin(πx)
        for &x in &[0.01, 0.1, 0.25, 0.4] {
            let l = gamma_fn(x).unwrap() * gamma_fn(1.0 - x).unwrap();
            assert!(rel(l, PI / sin(PI * x)) < 1e-13);
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.01, 0.3, 0.5, 1.7, 10.0, 55.5, 170.0] {
            let g = gamma_fn(x).unwrap();
            assert!(abs(ln_gamma(x).unwrap() - ln(g)) < 1e-12 * abs(ln(g)).max(1.0));
        }
    }

    #[test]
    fn beta_values() {
        assert!(rel(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-13);
        assert!(rel(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-13);
        assert!(rel(beta_fn(1.0, 3.0).unwrap(), 1.0 / 3.0) < 1e-13);
        assert_eq!(beta_fn(2.5, 7.25).unwrap(), beta_fn(7.25, 2.5).unwrap());
        assert!(beta_fn(0.0, 1.0).is_err());
        // Gamma route for moderate arguments.
        for &(a, b) in &[(0.3, 0.7), (3.5, 9.0), (20.0, 30.5), (0.25, 0.5)] {
            let g = gamma_fn(a).unwrap() * gamma_fn(b).unwrap() / gamma_fn(a + b).unwrap();
            assert!(rel(beta_fn(a, b).unwrap(), g) < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn ln_beta_large_arguments() {
        // B(a, 1) = 1/a exactly.
        for &a in &[1e3, 1e6, 1e9] {
            assert!(abs(ln_beta(a, 1.0).unwrap() + ln(a)) < 1e-9);
        }
        let n = 5e4;
        let direct = 2.0 * ln_gamma(n).unwrap() - ln_gamma(2.0 * n).unwrap();
        assert!(abs(ln_beta(n, n).unwrap() - direct) < 1e-8 * abs(direct));
    }

    #[test]
    fn inc_beta_values() {
        assert_eq!(inc_beta(0.0, 2.0, 3.0).unwrap(), 0.0);
        assert!(rel(inc_beta(1.0, 2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-13);
        assert!(rel(inc_beta(0.5, 1.0, 1.0).unwrap(), 0.5) < 1e-14);
        // ∫₀ˣ s(1-s)^2 ds = x²/2 - 2x³/3 + x⁴/4
        for &x in &[0.1, 0.3, 0.5, 0.8, 0.99] {
            let exact = x * x / 2.0 - 2.0 * x * x * x / 3.0 + x * x * x * x / 4.0;
            assert!(
                rel(inc_beta(x, 2.0, 3.0).unwrap(), exact) < 1e-12,
                "x = {x}"
            );
        }
        // ∫₀ˣ s^{-1/2}(1-s)^{-1/2} ds = 2 asin(√x)
        for &x in &[0.01, 0.2, 0.5, 0.9] {
            let exact = 2.0 * libm::asin(sqrt(x));
            assert!(rel(inc_beta(x, 0.5, 0.5).unwrap(), exact) < 1e-12);
        }
        assert!(inc_beta(1.5, 1.0, 1.0).is_err());
        assert!(inc_beta(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn inc_beta_symmetry_and_monotone() {
        for &(a, b) in &[(0.7, 2.2), (3.0, 0.4), (12.0, 15.0), (0.2, 0.2)] {
            let full = beta_fn(a, b).unwrap();
            let mut prev = 0.0;
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let l = inc_beta(x, a, b).unwrap();
                let r = full - inc_beta(1.0 - x, b, a).unwrap();
                assert!(abs(l - r) < 1e-9 * full.max(1.0), "{a} {b} {x}");
                assert!(l >= prev - 1e-15 * full);
                prev = l;
            }
        }
    }

    #[test]
    fn k_factor_values() {
        assert!(rel(k_factor(2.0, 2.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(k_factor(2.0, 4.0).unwrap(), pow(3.0, 0.25)) < 1e-12);
        let k33 = pow(3.0, 1.0 / 3.0) * pow(1.5, 2.0 / 3.0);
        assert!(rel(k_factor(3.0, 3.0).unwrap(), k33) < 1e-14);
        assert!(rel(k_factor(3.0, 3.0).unwrap(), 1.889_881_574_842_31) < 1e-12);
        assert!(k_factor(2.0, 1.5).is_err());
        assert!(k_factor(1.0, 2.0).is_err());
    }

    #[test]
    fn k_factor_continuity_at_diagonal() {
        for &p in &[1.1, 1.5, 2.0, 3.0, 7.0, 20.0] {
            let kd = k_factor(p, p).unwrap();
            for &d in &[1e-8, 2e-8, 1e-7, 1e-5, 5e-4, 9.99e-4, 1.001e-3] {
                let k = k_factor(p, p + d).unwrap();
                assert!(abs(k - kd) < 1e-6 + 10.0 * d, "p={p} d={d} k={k} kd={kd}");
            }
        }
        // The two regimes agree where they meet.
        for &p in &[1.3, 2.0, 5.0] {
            let q = p + K_BETA_GAP;
            let d = q - p;
            let e = 1.0 / p - 1.0 / q;
            let beta_form = exp(e * (ln(d) - ln(p) - ln_beta(p / d, p * (q - 1.0) / d).unwrap()));
            assert!(rel(k_factor(p, q).unwrap(), beta_form) < 1e-10);
        }
    }

    #[test]
    fn k_tilde_values() {
        assert!(rel(k_tilde(2.0, 2.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(k_tilde(2.0, 4.0).unwrap(), pow(3.0, 0.25) * sqrt(1.5)) < 1e-14);
        assert!(rel(k_tilde(2.0, 4.0).unwrap(), 1.611_854_897_735_3) < 1e-12);
        for &p in &[1.5, 3.0, 10.0] {
            assert!(rel(k_tilde(p, p).unwrap(), k_factor(p, p).unwrap()) < 1e-13);
        }
        assert!(k_tilde(2.0, 1.0).is_err());
    }

    #[test]
    fn factor_ranges() {
        let mut p = 1.05;
        while p <= 50.0 {
            let mut q = p;
            while q <= 50.0 {
                let k = k_factor(p, q).unwrap();
                let kt = k_tilde(p, q).unwrap();
                assert!((1.0..=2.0 + 1e-12).contains(&k), "k({p},{q}) = {k}");
                assert!((1.0..=2.0 + 1e-12).contains(&kt), "kt({p},{q}) = {kt}");
                assert!(kt >= k - 1e-12, "kt < k at ({p},{q})");
                q += 0.37;
            }
            p *= 1.13;
        }
    }

    #[test]
    fn ratio_maximum_on_dense_grid() {
        // Over all p the ratio peaks near p ≈ 1.43, r ≈ 1.88 at 1.26429
        // (mpmath scan); the plotted p-values stay below 1.23.
        let mut best = 0.0f64;
        let mut p = 1.1;
        while p <= 20.0 {
            let mut r = 0.02;
            while r <= 25.0 {
                let q = p + r;
                best = best.max(k_tilde(p, q).unwrap() / k_factor(p, q).unwrap());
                r += 0.02;
            }
            p += 0.01;
        }
        assert!(best >= 1.0);
        assert!(abs(best - 1.264_29) < 2e-4, "dense max {best}");
        for &p in &[1.1, 2.0, 5.0, 10.0, 20.0] {
            let mut r = 0.01;
            while r <= 25.0 {
                let q = p + r;
                let ratio = k_tilde(p, q).unwrap() / k_factor(p, q).unwrap();
                assert!((1.0..1.23).contains(&ratio), "({p},{r}) {ratio}");
                r += 0.01;
            }
        }
    }
}
