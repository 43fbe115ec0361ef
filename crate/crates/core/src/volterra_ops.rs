//! Discrete actions of the weakly singular convolution operator with the
//! Volterra kernel and of the logarithmic convolution operator.
//!
//! Product integration: the singular kernel factor is integrated exactly
//! against a piecewise-linear density. On a uniform grid the kernel moments
//! depend only on the lag, so a table of O(n) moments serves every row.

use crate::specfun::{volterra_i, volterra_nu0};
use crate::{Complex64, CoreError, Result};
use crate::consts::EULER_GAMMA;
use crate::quad;

/// Uniform time discretisation of an interval starting at `t0`.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    t0: f64,
    h: f64,
    n_steps: usize,
}

impl TimeGrid {
    /// Desk-scale guard: the covered interval must not exceed 100.
    pub fn new(t0: f64, h: f64, n_steps: usize) -> Result<TimeGrid> {
        if !(h > 0.0) {
            return Err(CoreError::InvalidInput(format!("step h = {h} must be > 0")));
        }
        if n_steps == 0 {
            return Err(CoreError::InvalidInput("n_steps must be >= 1".into()));
        }
        if h * n_steps as f64 > 100.0 {
            return Err(CoreError::InvalidInput(format!(
                "interval length h * n_steps = {} exceeds the desk-scale bound 100",
                h * n_steps as f64
            )));
        }
        Ok(TimeGrid { t0, h, n_steps })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of nodes (n_steps + 1).
    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    pub fn node(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.h
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|m| self.node(m)).collect()
    }

    /// Index of a node equal to `t` within a small multiple of machine
    /// rounding, if any.
    pub fn node_index(&self, t: f64) -> Option<usize> {
        let raw = (t - self.t0) / self.h;
        let m = raw.round();
        if m < 0.0 || m > self.n_steps as f64 {
            return None;
        }
        if (raw - m).abs() < 1e-9 * (1.0 + raw.abs()) {
            Some(m as usize)
        } else {
            None
        }
    }
}

/// Per-lag moments of the Volterra kernel on a uniform grid.
///
/// `moment0[k]` is the kernel mass of the k-th lag interval, formed as an
/// antiderivative difference so that row sums telescope exactly;
/// `moment1[k]` is the first moment relative to the lag interval's left
/// endpoint, from adaptive quadrature. Full weights are synthesised on the
/// fly (`weight`), which keeps the table O(n) in memory.
#[derive(Debug, Clone)]
pub struct WeightTable {
    grid: TimeGrid,
    /// nu[m] = antiderivative of the kernel at lag m*h
    nu: Vec<f64>,
    moment0: Vec<f64>,
    moment1: Vec<f64>,
    /// kernel values at node lags (used by the graded head quadrature)
    kernel_at_nodes: Vec<f64>,
}

pub fn build_weights(grid: &TimeGrid) -> Result<WeightTable> {
    let n = grid.n_steps();
    let h = grid.h();

    let mut nu = Vec::with_capacity(n + 1);
    for m in 0..=n {
        nu.push(volterra_nu0(m as f64 * h)?);
    }
    let moment0: Vec<f64> = (0..n).map(|k| nu[k + 1] - nu[k]).collect();

    let mut moment1 = Vec::with_capacity(n);
    for k in 0..n {
        moment1.push(first_moment(k, h)?);
    }

    let mut kernel_at_nodes = Vec::with_capacity(n + 1);
    kernel_at_nodes.push(f64::INFINITY); // lag 0: singular, never used directly
    for m in 1..=n {
        kernel_at_nodes.push(volterra_i(m as f64 * h)?);
    }

    Ok(WeightTable {
        grid: grid.clone(),
        nu,
        moment0,
        moment1,
        kernel_at_nodes,
    })
}

/// int over [k h, (k+1) h] of (u - k h) * kernel(u) du.
fn first_moment(k: usize, h: f64) -> Result<f64> {
    let a = k as f64 * h;
    let b = (k + 1) as f64 * h;
    if k == 0 {
        // u * kernel(u) is continuous at 0 but steep on a log scale;
        // geometric sub-panels resolve it.
        let mut total = 0.0;
        let mut lo = h;
        for _ in 0..44 {
            let hi = lo;
            lo *= 0.5;
            let mut f = |u: f64| u * volterra_i(u).unwrap_or(0.0);
            let (v, _) = quad::adaptive(&mut f, lo, hi, 0.0, 1e-11);
            total += v;
        }
        return Ok(total);
    }
    let mut f = |u: f64| (u - a) * volterra_i(u).unwrap_or(0.0);
    let (v, err) = quad::adaptive(&mut f, a, b, 0.0, 1e-11);
    if err > 1e-8 * v.abs().max(1e-300) {
        return Err(CoreError::Tolerance {
            op: "build_weights",
            requested: 1e-10,
            achieved: err / v.abs().max(1e-300),
        });
    }
    Ok(v)
}

impl WeightTable {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn moment0(&self) -> &[f64] {
        &self.moment0
    }

    pub fn moment1(&self) -> &[f64] {
        &self.moment1
    }

    /// Antiderivative of the kernel at lag m*h.
    pub fn nu_at(&self, m: usize) -> f64 {
        self.nu[m]
    }

    /// Product-integration weight of node m in row n.
    pub fn weight(&self, n: usize, m: usize) -> f64 {
        debug_assert!(m <= n && n <= self.grid.n_steps());
        let h = self.grid.h();
        let mut w = 0.0;
        if m < n {
            w += self.moment1[n - m - 1] / h;
        }
        if m >= 1 {
            let k = n - m;
            w += self.moment0[k] - self.moment1[k] / h;
        }
        w
    }

    pub fn row_sum(&self, n: usize) -> f64 {
        (0..=n).map(|m| self.weight(n, m)).sum()
    }

    /// Weight of the current node (multiplies the unknown when marching).
    pub fn self_weight(&self) -> f64 {
        self.moment0[0] - self.moment1[0] / self.grid.h()
    }

    /// Discrete action of the Volterra-kernel convolution on node samples.
    ///
    /// Exact for piecewise-linear densities up to moment quadrature error.
    pub fn apply_i(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.grid.n_steps();
        if f.len() != n + 1 {
            return Err(CoreError::LengthMismatch {
                expected: n + 1,
                got: f.len(),
            });
        }
        let h = self.grid.h();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for row in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..row {
                let m1h = self.moment1[k] / h;
                acc += f[row - 1 - k] * m1h + f[row - k] * (self.moment0[k] - m1h);
            }
            out[row] = acc;
        }
        Ok(out)
    }

    /// Same as [`apply_i`](Self::apply_i) for densities with an integrable
    /// singularity at the grid origin (e.g. -gamma - log(tau - t0)).
    ///
    /// The first panel is integrated by geometrically graded sub-panels
    /// toward t0; later panels use the standard weights on node samples of
    /// `f`. The value `f(t0)` is never evaluated.
    pub fn apply_i_graded_head(
        &self,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Vec<Complex64>> {
        let n = self.grid.n_steps();
        let h = self.grid.h();
        let t0 = self.grid.t0();

        let samples: Vec<Complex64> = (0..=n)
            .map(|m| {
                if m == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(self.grid.node(m))
                }
            })
            .collect();

        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for row in 1..=n {
            // panels 2..row via standard product integration
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..row.saturating_sub(1) {
                let m1h = self.moment1[k] / h;
                acc += samples[row - 1 - k] * m1h + samples[row - k] * (self.moment0[k] - m1h);
            }
            acc += self.graded_head(row, &f, t0, h);
            out[row] = acc;
        }
        Ok(out)
    }

    /// Head panel integral over [t0, t0 + h] for row n (lag interval
    /// [(n-1)h, nh] in the kernel variable).
    fn graded_head(&self, n: usize, f: &impl Fn(f64) -> Complex64, t0: f64, h: f64) -> Complex64 {
        let g7 = quad::gl7();
        if n == 1 {
            // both endpoints are delicate: density at v -> 0+, kernel at v -> h-
            let mut acc = Complex64::new(0.0, 0.0);
            // left half: graded toward v = 0, kernel smooth
            let mut hi = 0.5 * h;
            for _ in 0..40 {
                let lo = 0.5 * hi;
                for (x, w) in g7.nodes.iter().zip(&g7.weights) {
                    let v = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                    acc += *w * 0.5 * (hi - lo)
                        * crate::specfun::volterra_i(h - v).unwrap() * f(t0 + v);
                }
                hi = lo;
            }
            // right half in the kernel variable w = h - v: graded kernel mass
            // against midpoint values of the (smooth there) density
            let mut wb = 0.5 * h;
            for _ in 0..50 {
                let wa = 0.5 * wb;
                let mass = volterra_nu0(wb).unwrap() - volterra_nu0(wa).unwrap();
                let vmid = h - 0.5 * (wa + wb);
                acc += mass * f(t0 + vmid);
                wb = wa;
            }
            // remaining kernel mass below the grading floor
            acc += volterra_nu0(wb).unwrap() * f(t0 + h - 0.5 * wb);
            return acc;
        }

        // kernel(nh - v) on v in [0, h]: linear interpolation between node
        // values for distant rows, direct evaluation near the origin
        let k_right = self.kernel_at_nodes[n]; // lag nh (v = 0)
        let k_left = self.kernel_at_nodes[n - 1]; // lag (n-1)h (v = h)
        let use_interp = n >= 32;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut hi = h;
        for _ in 0..36 {
            let lo = 0.5 * hi;
            for (x, w) in g7.nodes.iter().zip(&g7.weights) {
                let v = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                let kern = if use_interp {
                    k_right + (k_left - k_right) * (v / h)
                } else {
                    crate::specfun::volterra_i(n as f64 * h - v).unwrap()
                };
                acc += *w * 0.5 * (hi - lo) * kern * f(t0 + v);
            }
            hi = lo;
        }
        acc
    }

    /// Residual of the unit identity: the discrete convolution of the
    /// kernel with -gamma - log(tau - t0) minus 1, per node (node 0 = 0).
    pub fn unit_identity_residual(&self) -> Result<Vec<f64>> {
        let t0 = self.grid.t0();
        let vals = self.apply_i_graded_head(|tau| {
            Complex64::new(-EULER_GAMMA - (tau - t0).ln(), 0.0)
        })?;
        Ok(vals
            .iter()
            .enumerate()
            .map(|(m, v)| if m == 0 { 0.0 } else { (v.re - 1.0).abs().max(v.im.abs()) })
            .collect())
    }
}

/// Discrete action of the logarithmic convolution operator with kernel
/// -gamma - log(t - tau); moments are elementary.
pub fn apply_j(grid: &TimeGrid, f: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = grid.n_steps();
    if f.len() != n + 1 {
        return Err(CoreError::LengthMismatch {
            expected: n + 1,
            got: f.len(),
        });
    }
    let h = grid.h();

    // antiderivatives: P(u) = u^2/2 ln u - u^2/4, Q(u) = u ln u - u
    let p = |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            0.5 * u * u * u.ln() - 0.25 * u * u
        }
    };
    let q = |u: f64| if u == 0.0 { 0.0 } else { u * u.ln() - u };

    let mut jm0 = Vec::with_capacity(n);
    let mut jm1 = Vec::with_capacity(n);
    for k in 0..n {
        let a = k as f64 * h;
        let b = (k + 1) as f64 * h;
        jm0.push(-EULER_GAMMA * h - (q(b) - q(a)));
        jm1.push(-EULER_GAMMA * h * h / 2.0 - (p(b) - p(a)) + a * (q(b) - q(a)));
    }

    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for row in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..row {
            let m1h = jm1[k] / h;
            acc += f[row - 1 - k] * m1h + f[row - k] * (jm0[k] - m1h);
        }
        out[row] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cvec(vals: &[f64]) -> Vec<Complex64> {
        vals.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 101).is_err());
        let g = TimeGrid::new(1.0, 0.5, 4).unwrap();
        assert_eq!(g.node(3), 2.5);
        assert_eq!(g.node_index(2.5), Some(3));
        assert_eq!(g.node_index(2.3), None);
    }

    #[test]
    fn row_sums_reproduce_antiderivative() {
        let grid = TimeGrid::new(0.0, 0.01, 50).unwrap();
        let table = build_weights(&grid).unwrap();
        for n in 1..=50 {
            let rs = table.row_sum(n);
            let nu = table.nu_at(n);
            assert!(
                (rs - nu).abs() <= 1e-10 * nu.abs().max(1.0),
                "n={n} rs={rs} nu={nu}"
            );
        }
    }

    #[test]
    fn single_step_consistency() {
        let grid = TimeGrid::new(0.0, 0.02, 1).unwrap();
        let table = build_weights(&grid).unwrap();
        let s = table.weight(1, 0) + table.weight(1, 1);
        let nu_h = table.nu_at(1);
        assert!((s - nu_h).abs() < 1e-12 * nu_h.max(1.0));
    }

    #[test]
    fn apply_i_zero_and_linearity() {
        let grid = TimeGrid::new(0.0, 0.05, 20).unwrap();
        let table = build_weights(&grid).unwrap();
        let zero = cvec(&vec![0.0; 21]);
        let out = table.apply_i(&zero).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));

        let f: Vec<Complex64> = (0..=20)
            .map(|m| Complex64::new((m as f64 * 0.05).sin(), 0.3 * m as f64))
            .collect();
        let g: Vec<Complex64> = (0..=20)
            .map(|m| Complex64::new(1.0 / (1.0 + m as f64), -0.1))
            .collect();
        let a = Complex64::new(2.0, -1.0);
        let b = Complex64::new(-0.5, 0.25);
        let combo: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let lhs = table.apply_i(&combo).unwrap();
        let fa = table.apply_i(&f).unwrap();
        let gb = table.apply_i(&g).unwrap();
        for n in 0..=20 {
            let rhs = a * fa[n] + b * gb[n];
            assert!((lhs[n] - rhs).norm() < 1e-13 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn apply_i_length_mismatch() {
        let grid = TimeGrid::new(0.0, 0.05, 20).unwrap();
        let table = build_weights(&grid).unwrap();
        assert!(table.apply_i(&cvec(&vec![0.0; 5])).is_err());
    }

    #[test]
    fn apply_j_constant_density() {
        // (J 1)(t) = (1 - gamma) t - t ln t
        let grid = TimeGrid::new(0.0, 0.01, 100).unwrap();
        let ones = cvec(&vec![1.0; 101]);
        let out = apply_j(&grid, &ones).unwrap();
        for n in 1..=100 {
            let t = grid.node(n);
            let exact = (1.0 - EULER_GAMMA) * t - t * t.ln();
            assert!(
                (out[n].re - exact).abs() < 1e-10 && out[n].im.abs() < 1e-14,
                "n={n} got={} exact={exact}",
                out[n].re
            );
        }
    }

    #[test]
    fn apply_j_zero() {
        let grid = TimeGrid::new(0.0, 0.1, 10).unwrap();
        let out = apply_j(&grid, &cvec(&vec![0.0; 11])).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn unit_identity_coarse() {
        // coarse grid sanity; the acceptance suite runs the tight version
        let grid = TimeGrid::new(0.0, 0.01, 60).unwrap();
        let table = build_weights(&grid).unwrap();
        let resid = table.unit_identity_residual().unwrap();
        for n in 1..=60 {
            assert!(resid[n] < 2e-2, "n={n} resid={}", resid[n]);
        }
    }

    #[test]
    fn operator_norm_estimate_shrinks_with_interval() {
        // power-iteration style estimate of the discrete operator norm
        let mut prev = f64::INFINITY;
        for &t_end in &[0.5, 0.25, 0.125] {
            let n = 64;
            let grid = TimeGrid::new(0.0, t_end / n as f64, n).unwrap();
            let table = build_weights(&grid).unwrap();
            let mut v = cvec(&vec![1.0; n + 1]);
            let mut est = 0.0;
            for _ in 0..3 {
                let w = table.apply_i(&v).unwrap();
                let norm = w.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
                est = norm
                    / v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max).max(1e-300);
                let scale = 1.0 / norm.max(1e-300);
                v = w.iter().map(|z| z * scale).collect();
            }
            assert!(est < prev, "estimate {est} did not decrease (prev {prev})");
            prev = est;
        }
    }
}
