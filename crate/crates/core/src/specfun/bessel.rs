//! Bessel J0 and Macdonald K0.
//!
//! J0 uses the power series up to x = 14 and the Hankel asymptotic series
//! beyond; K0 uses the standard log-coupled series up to x = 2 and a
//! trapezoidal rule on exp(-x cosh t) beyond (the integrand is even and
//! analytic in a strip, so the trapezoid converges geometrically and a step
//! of 0.2 already exhausts f64). Both crossovers are audited by the
//! integral-representation oracles in the test tree.

use crate::consts::EULER_GAMMA;
use crate::{CoreError, Result};
use num_complex::Complex64;

const J0_SERIES_CUT: f64 = 14.0;
const HANKEL_TERMS: usize = 15;

/// Bessel function of the first kind, order zero. Even in x; accepts x >= 0.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(CoreError::domain("bessel_j0", format!("x = {x} must be >= 0")));
    }
    Ok(bessel_j0_raw(x))
}

pub(crate) fn bessel_j0_raw(x: f64) -> f64 {
    if x < J0_SERIES_CUT {
        j0_series_real(x)
    } else {
        // J0 = Re[ sqrt(2/(pi x)) e^{i(x - pi/4)} S_+(x) ]
        let s = hankel_series(Complex64::new(x, 0.0), 1);
        let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
        let phase = Complex64::from_polar(1.0, x - std::f64::consts::FRAC_PI_4);
        amp * (phase * s).re
    }
}

fn j0_series_real(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..80 {
        term *= q / ((k * k) as f64);
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    acc
}

/// Truncated Hankel asymptotic series S(z) with
/// H0^(1)(z) ~ sqrt(2/(pi z)) e^{i(z - pi/4)} S(z) for `branch = 1` and
/// H0^(2)(z) ~ sqrt(2/(pi z)) e^{-i(z - pi/4)} S(z) for `branch = -1`.
/// Valid for |z| >= ~13 (relative truncation error below 1e-9 there).
fn hankel_series(z: Complex64, branch: i32) -> Complex64 {
    let rot = Complex64::new(0.0, -(branch as f64));
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = term;
    for m in 0..HANKEL_TERMS {
        let mf = m as f64;
        term = term * rot * ((2.0 * mf + 1.0) * (2.0 * mf + 1.0)) / (8.0 * (mf + 1.0)) / z;
        acc += term;
    }
    acc
}

/// Modified Bessel I0 by power series (adequate for the K0 series branch).
fn bessel_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..60 {
        term *= q / ((k * k) as f64);
        acc += term;
        if term < 1e-18 * acc {
            break;
        }
    }
    acc
}

/// Macdonald function K0(x) for x > 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(CoreError::domain("bessel_k0", format!("x = {x} must be > 0")));
    }
    Ok(bessel_k0_raw(x))
}

pub(crate) fn bessel_k0_raw(x: f64) -> f64 {
    if x <= 2.0 {
        // K0 = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut acc = 0.0;
        for k in 1..60 {
            term *= q / ((k * k) as f64);
            harmonic += 1.0 / k as f64;
            let add = term * harmonic;
            acc += add;
            if add < 1e-18 * acc.max(1.0) {
                break;
            }
        }
        -( (0.5 * x).ln() + EULER_GAMMA) * bessel_i0_series(x) + acc
    } else {
        // K0(x) = int_0^inf exp(-x cosh t) dt; even analytic integrand, so
        // the trapezoid with modest step is geometrically convergent.
        let h = 0.2;
        let t_max = (1.0 + 45.0 / x).acosh();
        let n = (t_max / h).ceil() as usize + 1;
        let mut acc = 0.5 * (-x).exp();
        for k in 1..=n {
            let t = k as f64 * h;
            acc += (-x * t.cosh()).exp();
        }
        acc * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_at_zero_and_negative_rejected() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!(bessel_j0(-1.0).is_err());
    }

    #[test]
    fn j0_series_asymptotic_crossover_is_seamless() {
        // values straddling the crossover must agree through the seam
        let a = bessel_j0(13.999_999).unwrap();
        let b = bessel_j0(14.000_001).unwrap();
        assert!((a - b).abs() < 1e-9, "a={a} b={b}");
    }

    #[test]
    fn j0_first_zero() {
        let z = 2.404_825_557_695_773;
        assert!(bessel_j0(z).unwrap().abs() < 1e-9);
    }

    #[test]
    fn k0_small_argument_log_law() {
        let x = 1e-6;
        let v = bessel_k0(x).unwrap();
        let resid = v + (0.5 * x).ln() + EULER_GAMMA;
        assert!(resid.abs() < 1e-10, "resid = {resid:e}");
    }

    #[test]
    fn k0_large_argument_envelope() {
        let x = 20.0;
        let v = bessel_k0(x).unwrap();
        let scaled = v * x.exp() * (2.0 * x / std::f64::consts::PI).sqrt();
        assert!((scaled - 1.0).abs() < 1e-2, "scaled = {scaled}");
    }

    #[test]
    fn k0_rejects_nonpositive() {
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k0(-3.0).is_err());
    }

    #[test]
    fn k0_branch_seam() {
        let a = bessel_k0(1.999_999_9).unwrap();
        let b = bessel_k0(2.000_000_1).unwrap();
        assert!((a - b).abs() < 1e-11 * a.abs(), "a={a} b={b}");
    }

}
