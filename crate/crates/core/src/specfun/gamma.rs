//! Gamma function on the positive half-line (Lanczos approximation, g = 7).

use crate::{CoreError, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z >= 0.5; series argument is z - 1
    let x = z - 1.0;
    let mut acc = LANCZOS_C[0];
    for (k, c) in LANCZOS_C.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    acc
}

/// Gamma(x) for x > 0, relative accuracy around 1e-14.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(CoreError::domain("gamma_fn", format!("x = {x} must be > 0")));
    }
    if x < 0.5 {
        // reflection keeps the Lanczos argument above 0.5
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI / (s * gamma_core(1.0 - x)));
    }
    Ok(gamma_core(x))
}

fn gamma_core(z: f64) -> f64 {
    let base = z + LANCZOS_G - 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * base.powf(z - 0.5) * (-base).exp() * lanczos_sum(z)
}

/// ln Gamma(x) for x > 0; avoids overflow of Gamma itself for large x.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - ln_gamma(1.0 - x);
    }
    let base = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * base.ln() - base + lanczos_sum(x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_factorial_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() / 24.0 < 1e-13);
    }

    #[test]
    fn half_integer_value() {
        let v = gamma_fn(0.5).unwrap();
        let exact = std::f64::consts::PI.sqrt();
        assert!((v - exact).abs() / exact < 1e-13);
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-2.5).is_err());
    }

    #[test]
    fn ln_gamma_matches_gamma_for_moderate_arguments() {
        for &x in &[0.1, 0.37, 1.0, 2.5, 10.0, 30.0, 140.0] {
            let lg = ln_gamma(x);
            let g = gamma_fn(x).unwrap();
            assert!(
                (lg - g.ln()).abs() < 1e-12 * lg.abs().max(1.0),
                "x={x} lg={lg} ln g={}",
                g.ln()
            );
        }
    }

    #[test]
    fn functional_equation_holds() {
        for i in 1..200 {
            let x = 0.07 + 0.33 * i as f64;
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!((lhs - rhs).abs() / rhs.abs() < 2e-13, "x={x}");
        }
    }
}
