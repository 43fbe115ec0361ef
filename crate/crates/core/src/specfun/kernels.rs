//! Closed-form propagator kernels and their time integrals.
//!
//! Sign/constant conventions here are audited against defining integrals
//! (see the closed-form audit in `verify` and the oracle tests). In
//! particular `k0_evolution_diag` carries the full exponential-integral
//! combination -Ci(x) + i(Si(x) - pi/2); dropping the -i pi/2 piece is a
//! classic table-transcription slip and fails the audit.

use crate::consts::EULER_GAMMA;
use crate::quad;
use crate::specfun::sici::{exp_itail, si_ci_raw};
use crate::specfun::cin;
use crate::{CoreError, Result};
use num_complex::Complex64;

/// Free propagator kernel e^{i r^2/(4t)} / (2 i t); t != 0.
///
/// Normalisation note: this symbol integrates a unit Gaussian to 2 pi times
/// the evolved Gaussian; the operator-level evolution divides by 2 pi.
pub fn free_kernel(t: f64, r: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Err(CoreError::domain("free_kernel", "t must be nonzero"));
    }
    if r < 0.0 {
        return Err(CoreError::domain("free_kernel", format!("r = {r} must be >= 0")));
    }
    Ok(free_kernel_raw(t, r))
}

#[inline]
pub(crate) fn free_kernel_raw(t: f64, r: f64) -> Complex64 {
    // 1/(2 i t) = -i/(2t)
    Complex64::from_polar(1.0, r * r / (4.0 * t)) * Complex64::new(0.0, -0.5 / t)
}

/// Integral of the free kernel over its time lag:
/// int_0^Delta e^{i d^2/(4u)}/(2 i u) du
///   = (pi/2 - Si(a))/2 + i Ci(a)/2,   a = d^2/(4 Delta).
///
/// Diverges logarithmically as d -> 0 (domain error at d = 0).
pub fn lagged_free_integral(delta: f64, d: f64) -> Result<Complex64> {
    if !(delta > 0.0) {
        return Err(CoreError::domain(
            "lagged_free_integral",
            format!("delta = {delta} must be > 0"),
        ));
    }
    if !(d > 0.0) {
        return Err(CoreError::domain(
            "lagged_free_integral",
            format!("d = {d} must be > 0 (log-divergent at 0)"),
        ));
    }
    Ok(lagged_free_integral_raw(delta, d))
}

#[inline]
pub(crate) fn lagged_free_integral_raw(delta: f64, d: f64) -> Complex64 {
    let a = d * d / (4.0 * delta);
    // (1/2i) * G(a) with G(v) = int_v^inf e^{iw}/w dw
    exp_itail(a) * Complex64::new(0.0, -0.5)
}

/// Free evolution of a co-located Macdonald piece evaluated at its own
/// center:
/// (1/2) int_0^inf e^{-i rho tau} / (rho + lambda) d rho
///   = (1/2) e^{i lambda tau} [ -Ci(x) + i (Si(x) - pi/2) ],  x = lambda tau.
pub fn k0_evolution_diag(lambda: f64, tau: f64) -> Result<Complex64> {
    if !(lambda > 0.0) {
        return Err(CoreError::domain(
            "k0_evolution_diag",
            format!("lambda = {lambda} must be > 0"),
        ));
    }
    if !(tau > 0.0) {
        return Err(CoreError::domain(
            "k0_evolution_diag",
            format!("tau = {tau} must be > 0"),
        ));
    }
    Ok(k0_evolution_diag_raw(lambda, tau))
}

#[inline]
pub(crate) fn k0_evolution_diag_raw(lambda: f64, tau: f64) -> Complex64 {
    let x = lambda * tau;
    let (si, ci) = si_ci_raw(x);
    0.5 * Complex64::from_polar(1.0, x)
        * Complex64::new(-ci, si - std::f64::consts::FRAC_PI_2)
}

/// Remainder term Q(lambda; u) defined by the identity
/// -pi e^{i lambda u} [Ci(lambda u) - i Si(lambda u)]
///   = -pi (gamma + log lambda + log u) + Q(lambda; u) e^{i lambda u}.
///
/// Computed in the cancellation-free form
/// Q = pi Cin(x) + i pi Si(x) - pi (gamma + log x)(1 - e^{-ix}), x = lambda u,
/// which is continuous down to lambda = 0 where Q = 0.
pub fn q_remainder(lambda: f64, u: f64) -> Result<Complex64> {
    if lambda < 0.0 {
        return Err(CoreError::domain(
            "q_remainder",
            format!("lambda = {lambda} must be >= 0"),
        ));
    }
    if !(u > 0.0) {
        return Err(CoreError::domain("q_remainder", format!("u = {u} must be > 0")));
    }
    Ok(q_remainder_raw(lambda, u))
}

pub(crate) fn q_remainder_raw(lambda: f64, u: f64) -> Complex64 {
    if lambda == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let x = lambda * u;
    let pi = std::f64::consts::PI;
    let (si, _) = si_ci_raw(x);
    let log_term = EULER_GAMMA + x.ln();
    let one_minus = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -x);
    Complex64::new(pi * cin(x), pi * si) - pi * log_term * one_minus
}

/// Free evolution of a Macdonald piece evaluated at distance d from its
/// center: int_0^inf p e^{-i p^2 tau} J0(p d) / (p^2 + lambda) dp.
///
/// Evaluated through the Laplace representation of the resolvent factor,
/// which collapses the Hankel transform to
/// int_0^inf e^{-lambda s} e^{-d^2/(4(s+i tau))} / (2 (s + i tau)) ds,
/// a smooth absolutely convergent integral (the tau -> 0 limit reproduces
/// K0(sqrt(lambda) d) exactly). Panels are graded over the decay scales and
/// split so that the residual Fresnel phase moves by at most ~3 per panel.
/// The independent partitioned-oscillatory quadrature in the test tree
/// audits this route to 1e-7 absolute.
pub fn k0_evolution_offdiag(lambda: f64, tau: f64, d: f64) -> Result<Complex64> {
    if !(lambda > 0.0) || !(tau > 0.0) || !(d > 0.0) {
        return Err(CoreError::domain(
            "k0_evolution_offdiag",
            format!("lambda = {lambda}, tau = {tau}, d = {d} must all be > 0"),
        ));
    }
    Ok(k0_evolution_offdiag_raw(lambda, tau, d))
}

pub(crate) fn k0_evolution_offdiag_raw(lambda: f64, tau: f64, d: f64) -> Complex64 {
    let g = quad::gl16();
    let integrand = |s: f64| -> Complex64 {
        let w = Complex64::new(s, tau);
        (-lambda * s - d * d / (4.0 * w)).exp() / (2.0 * w)
    };
    // phase of the Fresnel factor along the real s axis
    let phase = |s: f64| d * d * tau / (4.0 * (s * s + tau * tau));

    // decay / structure scales near s = 0
    let s0 = (4.0 * tau * tau / (d * d)).min(tau).min(1.0 / lambda) / 16.0;
    let s_max = (50.0 + lambda.sqrt() * d) / lambda;

    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = 0.0_f64;
    let mut b = s0;
    while a < s_max {
        let b_clip = b.min(s_max);
        // subdivide when the oscillatory phase still moves noticeably
        let dphi = (phase(a) - phase(b_clip)).abs();
        let parts = ((dphi / 3.0).ceil() as usize).clamp(1, 256);
        let len = (b_clip - a) / parts as f64;
        for k in 0..parts {
            let pa = a + k as f64 * len;
            let pb = pa + len;
            let c = 0.5 * (pa + pb);
            let hl = 0.5 * (pb - pa);
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                panel += *w * integrand(c + hl * x);
            }
            acc += panel * hl;
        }
        a = b_clip;
        b *= 2.0;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_k0, si_ci};

    #[test]
    fn free_kernel_modulus() {
        for &(t, r) in &[(0.3, 0.0), (-0.7, 2.0), (1.5, 10.0)] {
            let v = free_kernel(t, r).unwrap();
            assert!((v.norm() - 0.5 / t.abs()).abs() < 1e-15);
        }
        let v0 = free_kernel(0.5, 0.0).unwrap();
        assert!((v0 - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(free_kernel(0.0, 1.0).is_err());
    }

    #[test]
    fn lagged_integral_limits() {
        // Delta -> 0 with fixed d: value -> 0
        let v = lagged_free_integral(1e-9, 1.0).unwrap();
        assert!(v.norm() < 1e-8, "norm = {}", v.norm());
        // triangle bound
        let (delta, d) = (1.0, 1.0);
        let a = d * d / (4.0 * delta);
        let (si, ci) = si_ci(a).unwrap();
        let bound = 0.5 * (ci.abs() + (std::f64::consts::FRAC_PI_2 - si).abs());
        assert!(lagged_free_integral(delta, d).unwrap().norm() <= bound + 1e-15);
        assert!(lagged_free_integral(1.0, 0.0).is_err());
        assert!(lagged_free_integral(0.0, 1.0).is_err());
    }

    #[test]
    fn q_remainder_identity_and_limits() {
        // Q(0; u) = 0
        assert_eq!(q_remainder(0.0, 3.7).unwrap(), Complex64::new(0.0, 0.0));
        // continuity to 0 as lambda -> 0+
        assert!(q_remainder(1e-12, 1.0).unwrap().norm() < 1e-9);
        // defining identity at (1, 1)
        let (lambda, u) = (1.0, 1.0);
        let x = lambda * u;
        let (si, ci) = si_ci(x).unwrap();
        let pi = std::f64::consts::PI;
        let lhs = -pi * Complex64::from_polar(1.0, x) * Complex64::new(ci, -si);
        let rhs = -pi * (EULER_GAMMA + lambda.ln() + u.ln())
            + q_remainder(lambda, u).unwrap() * Complex64::from_polar(1.0, x);
        assert!((lhs - rhs).norm() < 1e-9, "residual {}", (lhs - rhs).norm());
    }

    #[test]
    fn diag_evolution_small_time_log_law() {
        // value + (1/2)(gamma + log lambda + log tau) stays bounded
        for &tau in &[1e-6, 1e-4, 1e-2] {
            let lambda = 2.0;
            let v = k0_evolution_diag(lambda, tau).unwrap();
            let shifted = v + 0.5 * (EULER_GAMMA + lambda.ln() + tau.ln());
            assert!(shifted.norm() < 1.0, "tau={tau} shifted={shifted}");
        }
    }

    #[test]
    fn diag_evolution_scaling_identity() {
        // substitution rho -> lambda rho collapses the two-parameter family
        for &(lambda, tau) in &[(0.5, 1.3), (2.0, 0.7), (5.0, 0.11)] {
            let a = k0_evolution_diag(lambda, tau).unwrap();
            let b = k0_evolution_diag(1.0, lambda * tau).unwrap();
            assert!((a - b).norm() < 1e-12, "lambda={lambda} tau={tau}");
        }
    }

    #[test]
    fn offdiag_recovers_k0_as_tau_vanishes() {
        let lambda = 1.0_f64;
        let d = 1.0;
        let k0 = bessel_k0(lambda.sqrt() * d).unwrap();
        let v = k0_evolution_offdiag(lambda, 1e-7, d).unwrap();
        assert!((v.re - k0).abs() < 1e-4, "re = {} k0 = {k0}", v.re);
        let v2 = k0_evolution_offdiag(lambda, 1e-9, d).unwrap();
        assert!((v2.re - k0).abs() < 1e-5, "tighter limit");
    }

    #[test]
    fn offdiag_matches_diag_as_d_vanishes() {
        // d -> 0 joins continuously onto the co-located evolution
        let (lambda, tau) = (1.0, 0.8);
        let diag = k0_evolution_diag(lambda, tau).unwrap();
        let near = k0_evolution_offdiag(lambda, tau, 1e-6).unwrap();
        assert!((diag - near).norm() < 1e-8, "gap {}", (diag - near).norm());
    }

    #[test]
    fn offdiag_rejects_bad_arguments() {
        assert!(k0_evolution_offdiag(0.0, 1.0, 1.0).is_err());
        assert!(k0_evolution_offdiag(1.0, 0.0, 1.0).is_err());
        assert!(k0_evolution_offdiag(1.0, 1.0, 0.0).is_err());
    }
}
