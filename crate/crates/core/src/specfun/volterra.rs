//! The Volterra kernel function and its antiderivative.
//!
//! `volterra_i(t)` is the integral over u of t^(u-1)/Gamma(u); it behaves
//! like 1/(t log^2(1/t)) near t = 0 and like e^t for large t.
//! `volterra_nu0(t)` integrates t^u/Gamma(u+1) and satisfies
//! d/dt volterra_nu0 = volterra_i with volterra_nu0(0) = 0.
//!
//! Both are computed by adaptive Gauss panels in u. The integrands are
//! entire in u and vanish super-exponentially once u passes the peak, so a
//! doubling panel sweep with an explicit geometric tail bound reaches
//! relative accuracy near 1e-12 across t in [1e-8, 150].

use crate::quad;
use crate::specfun::ln_gamma;
use crate::{CoreError, Result};

/// Integrand exponent for volterra_i: (u-1) ln t - ln Gamma(u).
#[inline]
fn integrand_i(u: f64, ln_t: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    ((u - 1.0) * ln_t - ln_gamma(u)).exp()
}

/// Integrand exponent for volterra_nu0: u ln t - ln Gamma(u+1).
#[inline]
fn integrand_nu(u: f64, ln_t: f64) -> f64 {
    if u < 0.0 {
        return 0.0;
    }
    (u * ln_t - ln_gamma(u + 1.0)).exp()
}

/// Shared panel sweep. `f(u)` must vanish at infinity super-exponentially
/// with ratio f(u+1)/f(u) = t/u (both integrands satisfy this).
fn sweep(t: f64, f: impl Fn(f64) -> f64 + Copy) -> f64 {
    // Scale of the near-origin structure: for t < 1 the mass concentrates in
    // a layer of width ~ 1/|ln t| near u = 0.
    let w = if t < 1.0 { 1.0 / (-t.ln()).max(1.0) } else { 1.0 };
    let mut edges: Vec<f64> = Vec::with_capacity(48);
    edges.push(0.0);
    let mut e = w / 64.0;
    while e < w * 4.0 {
        edges.push(e);
        e *= 2.0;
    }
    // beyond the layer, march with doubling panels through the peak
    let mut hi = edges[edges.len() - 1];
    let u_stop = 2.0 * t.max(1.0) + 60.0;
    let mut step = w.max(0.5);
    while hi < u_stop {
        hi += step;
        edges.push(hi.min(u_stop));
        step *= 2.0;
        if *edges.last().unwrap() >= u_stop {
            break;
        }
    }

    // coarse pass to set the absolute-tolerance scale; panels whose whole
    // contribution is negligible must not be refined toward their own
    // relative tolerance
    let coarse: f64 = edges
        .windows(2)
        .map(|p| quad::gl15().integrate(p[0], p[1], f))
        .sum();
    let abs_tol = 1e-16 * coarse.abs().max(f64::MIN_POSITIVE);

    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mut g = |u: f64| f(u);
        let (v, _) = quad::adaptive(&mut g, a, b, abs_tol, 5e-14);
        total += v;
    }

    // Geometric tail bound: for u >= u_stop the unit-step decay ratio is
    // t/u <= 1/2, so the tail is below 2 f(u_stop) / ln(u_stop/t)-ish; a
    // crude factor-4 envelope is ample at these scales.
    let tail_bound = 4.0 * f(u_stop);
    debug_assert!(tail_bound <= 1e-13 * total.abs().max(f64::MIN_POSITIVE) || total == 0.0);
    total
}

/// Volterra kernel function; t > 0.
pub fn volterra_i(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(CoreError::domain("volterra_i", format!("t = {t} must be > 0")));
    }
    Ok(volterra_i_raw(t))
}

pub(crate) fn volterra_i_raw(t: f64) -> f64 {
    let ln_t = t.ln();
    sweep(t, move |u| integrand_i(u, ln_t))
}

/// Antiderivative of the Volterra kernel; t >= 0, value 0 at t = 0.
pub fn volterra_nu0(t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(CoreError::domain(
            "volterra_nu0",
            format!("t = {t} must be >= 0"),
        ));
    }
    Ok(volterra_nu0_raw(t))
}

pub(crate) fn volterra_nu0_raw(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let ln_t = t.ln();
    sweep(t, move |u| integrand_nu(u, ln_t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_domain() {
        assert!(volterra_i(0.0).is_err());
        assert!(volterra_i(-1.0).is_err());
        assert!(volterra_nu0(-1e-9).is_err());
        assert_eq!(volterra_nu0(0.0).unwrap(), 0.0);
    }

    #[test]
    fn small_t_leading_law() {
        // value * t * ln^2(1/t) -> 1 with O(1/|ln t|) correction
        let t = 1e-8;
        let v = volterra_i(t).unwrap();
        let scaled = v * t * t.ln() * t.ln();
        assert!((scaled - 1.0).abs() < 0.07, "scaled = {scaled}");
    }

    #[test]
    fn large_t_exponential_law() {
        let v = volterra_i(10.0).unwrap();
        let ratio = v / 10f64.exp();
        assert!((ratio - 1.0).abs() < 1e-4, "ratio = {ratio}");
    }

    #[test]
    fn nu_derivative_matches_kernel() {
        // central difference of volterra_nu0 at t = 1
        let h = 1e-5;
        let d = (volterra_nu0(1.0 + h).unwrap() - volterra_nu0(1.0 - h).unwrap()) / (2.0 * h);
        let v = volterra_i(1.0).unwrap();
        assert!((d - v).abs() / v < 1e-8, "d={d} v={v}");
    }

    #[test]
    fn values_are_finite_over_desk_range() {
        for &t in &[1e-8, 1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 50.0, 100.0] {
            assert!(volterra_i(t).unwrap().is_finite(), "t={t}");
            assert!(volterra_nu0(t).unwrap().is_finite(), "t={t}");
        }
    }
}
