//! Internal quadrature building blocks: Gauss–Legendre rules with nodes
//! computed at startup (Newton on the Legendre recurrence, no coefficient
//! tables) and a deterministic adaptive panel integrator.

use std::sync::OnceLock;

/// Legendre polynomial P_n and its derivative at x, by upward recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // derivative from P_n and P_{n-1}
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
fn compute_gl(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Chebyshev-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GlRule {
    /// Integrate f over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let hl = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + hl * x);
        }
        acc * hl
    }
}

fn rule(cell: &'static OnceLock<GlRule>, n: usize) -> &'static GlRule {
    cell.get_or_init(|| {
        let (nodes, weights) = compute_gl(n);
        GlRule { nodes, weights }
    })
}

pub fn gl7() -> &'static GlRule {
    static CELL: OnceLock<GlRule> = OnceLock::new();
    rule(&CELL, 7)
}

pub fn gl15() -> &'static GlRule {
    static CELL: OnceLock<GlRule> = OnceLock::new();
    rule(&CELL, 15)
}

pub fn gl16() -> &'static GlRule {
    static CELL: OnceLock<GlRule> = OnceLock::new();
    rule(&CELL, 16)
}



/// Deterministic adaptive integration of `f` over [a, b].
///
/// Each panel is accepted when the GL15 value agrees with the sum of GL15 on
/// its halves within the share of tolerance assigned to the panel; otherwise
/// the halves are processed recursively. Returns (value, error estimate).
pub fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> (f64, f64) {
    const MAX_DEPTH: u32 = 48;
    let g = gl15();
    // coarse magnitude scale for the relative tolerance
    let coarse = g.integrate(a, b, &mut *f).abs();
    let tol_total = abs_tol.max(rel_tol * coarse.max(1e-300));

    struct Panel {
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let whole0 = g.integrate(a, b, &mut *f);
    let mut stack = vec![Panel {
        a,
        b,
        whole: whole0,
        tol: tol_total,
        depth: 0,
    }];
    let mut value = 0.0;
    let mut err = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let left = g.integrate(p.a, m, &mut *f);
        let right = g.integrate(m, p.b, &mut *f);
        let diff = (left + right - p.whole).abs();
        // rounding floor: refining below it only churns
        let floor = 4e-16 * (left.abs() + right.abs());
        if diff <= p.tol.max(floor) || p.depth >= MAX_DEPTH {
            value += left + right;
            err += diff;
        } else {
            stack.push(Panel {
                a: p.a,
                b: m,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_rules_integrate_polynomials_exactly() {
        for g in [gl7(), gl15(), gl16()] {
            let n = g.nodes.len();
            // exact for degree 2n-1
            let deg = 2 * n - 1;
            let val = g.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!(
                (val - exact).abs() < 1e-14 * exact.abs().max(1.0),
                "n={n} deg={deg} val={val} exact={exact}"
            );
        }
    }

    #[test]
    fn gl_weights_sum_to_interval_length() {
        for g in [gl15(), gl16()] {
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // integral of 1/(1e-4 + x^2) on [-1,1] = 2*atan(1e2)/1e-2
        let mut f = |x: f64| 1.0 / (1e-4 + x * x);
        let (v, _) = adaptive(&mut f, -1.0, 1.0, 0.0, 1e-12);
        let exact = 2.0 * (1e2_f64).atan() / 1e-2;
        assert!((v - exact).abs() / exact < 1e-11);
    }
}
