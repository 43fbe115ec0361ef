//! Sine and cosine integrals.
//!
//! Power series below x = 2, modified Lentz continued fraction for the
//! exponential integral of imaginary argument above. The continued fraction
//! delivers both functions at machine accuracy for arbitrarily large x.

use crate::consts::EULER_GAMMA;
use crate::{CoreError, Result};
use num_complex::Complex64;

/// (Si(x), Ci(x)) for x > 0.
pub fn si_ci(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(CoreError::domain("si_ci", format!("x = {x} must be > 0")));
    }
    Ok(si_ci_raw(x))
}

pub(crate) fn si_ci_raw(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        (si_series(x), EULER_GAMMA + x.ln() - cin_series(x))
    } else {
        si_ci_cf(x)
    }
}

/// Si power series: sum (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
fn si_series(x: f64) -> f64 {
    let q = -x * x;
    let mut term = x; // (-1)^k x^(2k+1) / (2k+1)!
    let mut acc = x;
    for k in 1..40 {
        let n = (2 * k + 1) as f64;
        term *= q / ((n - 1.0) * n);
        acc += term / n;
        if term.abs() < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    acc
}

/// Cin(x) = gamma + ln x - Ci(x) by series: sum_{k>=1} (-1)^(k+1) x^(2k) / (2k (2k)!)
pub(crate) fn cin(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= 2.0 {
        cin_series(x)
    } else {
        let (_, ci) = si_ci_cf(x);
        EULER_GAMMA + x.ln() - ci
    }
}

fn cin_series(x: f64) -> f64 {
    let q = -x * x;
    let mut pow = 1.0; // (-x^2)^k / (2k)!
    let mut acc = 0.0;
    for k in 1..40 {
        let n = 2 * k;
        pow *= q / ((n - 1) as f64 * n as f64);
        let add = -pow / n as f64;
        acc += add;
        if add.abs() < 1e-18 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}

/// Lentz continued fraction for E1(ix); returns (Si, Ci) for x > 2.
fn si_ci_cf(x: f64) -> (f64, f64) {
    const FPMIN: f64 = 1e-290;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += Complex64::new(2.0, 0.0);
        d = one / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    // E1(ix) = e^{-ix} h = -Ci(x) + i (Si(x) - pi/2)
    let e1 = Complex64::from_polar(1.0, -x) * h;
    let ci = -e1.re;
    let si = std::f64::consts::FRAC_PI_2 + e1.im;
    (si, ci)
}

/// G(v) = integral from v to infinity of e^{iw}/w dw
///      = -Ci(v) + i (pi/2 - Si(v)), for v > 0.
///
/// This is the oscillatory tail moment used by the lagged propagator
/// integral and the wave-field reconstruction. Large arguments take a
/// short integration-by-parts recursion instead of the continued fraction;
/// reconstruction calls this in a hot loop.
pub fn exp_itail(v: f64) -> Complex64 {
    debug_assert!(v > 0.0);
    if v >= 64.0 {
        // T_m = int_v^inf e^{iw} w^-m dw; downward recursion from the
        // leading asymptotic term. Truncation below 1e-14 for v >= 64.
        const K: usize = 14;
        let phase = Complex64::from_polar(1.0, v);
        let i = Complex64::new(0.0, 1.0);
        let mut t = i * phase * v.powi(-(K as i32 + 1));
        for m in (1..=K).rev() {
            t = i * phase * v.powi(-(m as i32)) - i * (m as f64) * t;
        }
        return t;
    }
    let (si, ci) = si_ci_raw(v);
    Complex64::new(-ci, std::f64::consts::FRAC_PI_2 - si)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(si_ci(0.0).is_err());
        assert!(si_ci(-1.0).is_err());
    }

    #[test]
    fn small_argument_limits() {
        let (si, ci) = si_ci(1e-8).unwrap();
        assert!(si.abs() < 2e-8);
        assert!((ci - (EULER_GAMMA + (1e-8f64).ln())).abs() < 1e-12);
    }

    #[test]
    fn large_argument_si_limit() {
        let (si, _) = si_ci(1e3).unwrap();
        assert!((si - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    }

    #[test]
    fn series_cf_seam() {
        let (sa, ca) = si_ci(1.999_999).unwrap();
        let (sb, cb) = si_ci(2.000_001).unwrap();
        assert!((sa - sb).abs() < 1e-11, "si seam {sa} {sb}");
        assert!((ca - cb).abs() < 1e-11, "ci seam {ca} {cb}");
    }

    #[test]
    fn known_point_values() {
        // Si(1) and Ci(1), cross-checked by direct quadrature in the
        // integration tests; series values here act as smoke numbers.
        let (si, ci) = si_ci(1.0).unwrap();
        assert!((si - 0.946_083_070_367_183).abs() < 1e-12);
        assert!((ci - 0.337_403_922_900_968).abs() < 1e-12);
    }

    #[test]
    fn tail_moment_decays() {
        let g1 = exp_itail(1.0).norm();
        let g10 = exp_itail(10.0).norm();
        let g100 = exp_itail(100.0).norm();
        assert!(g1 > g10 && g10 > g100);
        assert!(g100 < 2.0 / 100.0);
    }

    #[test]
    fn tail_moment_asymptotic_seam() {
        // continued fraction vs integration-by-parts recursion
        for &v in &[63.9, 64.1, 80.0, 200.0, 5e3] {
            let (si, ci) = si_ci_cf(v);
            let exact = Complex64::new(-ci, std::f64::consts::FRAC_PI_2 - si);
            let fast = exp_itail(v);
            assert!((exact - fast).norm() < 1e-13, "v={v}");
        }
    }
}
