//! Executable invariant suites with measured residuals.
//!
//! Every case produces [`InvariantReport`]s whose `measured` value comes
//! from recomputation over the produced artifacts (charge tables, field
//! samples), never from cached intermediate state. All quadratures are
//! deterministic, so two consecutive runs yield identical reports.

use crate::charge_solver::{
    bound_alpha, bound_lambda, gamma_matrix, restart_forcing, solve_charges,
    solve_with_forcing, Center, ChargeSolution, GaussianTerm, InitialState, StrengthTrajectory,
};
use crate::consts::EULER_GAMMA;
use crate::csvio;
use crate::quad;
use crate::specfun::{
    bessel_k0, k0_evolution_diag, lagged_free_integral, q_remainder, si_ci, volterra_i,
    volterra_nu0,
};
use crate::volterra_ops::{apply_j, build_weights, TimeGrid};
use crate::wavefield::{
    boundary_fit, field_norm, reconstruct, FieldEvaluator, FieldSpec, BOUNDARY_RING_RADII,
};
use crate::{Complex64, Point2, Result};

const PI: f64 = std::f64::consts::PI;

/// One check: `passed` holds exactly when `measured <= tolerance`.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: String,
}

impl InvariantReport {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64, context: impl Into<String>) -> Self {
        InvariantReport {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            context: context.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// reference states

/// Single center at the origin with constant strength.
pub fn origin_center(alpha: f64) -> Vec<Center> {
    vec![Center {
        position: Point2::new(0.0, 0.0),
        strength: StrengthTrajectory::Constant { a0: alpha },
    }]
}

/// Pure Macdonald bound state at unit charge for the given strength.
pub fn bound_state(alpha: f64) -> InitialState {
    InitialState {
        gaussians: vec![],
        charges0: vec![Complex64::new(1.0, 0.0)],
        lambda: bound_lambda(alpha),
    }
}

/// Antisymmetric two-Gaussian state: vanishes at the origin, zero charge,
/// hence exact domain data for a center at the origin.
pub fn antisymmetric_pair() -> InitialState {
    InitialState {
        gaussians: vec![
            GaussianTerm {
                amplitude: Complex64::new(1.0, 0.0),
                center: Point2::new(0.9, 0.0),
                sigma: 0.7,
            },
            GaussianTerm {
                amplitude: Complex64::new(-1.0, 0.0),
                center: Point2::new(-0.9, 0.0),
                sigma: 0.7,
            },
        ],
        charges0: vec![Complex64::new(0.0, 0.0)],
        lambda: 1.0,
    }
}

/// Off-center Gaussian with zero initial charge; drives a nontrivial
/// charge response.
pub fn offset_gaussian() -> InitialState {
    InitialState {
        gaussians: vec![GaussianTerm {
            amplitude: Complex64::new(1.0, 0.0),
            center: Point2::new(0.7, 0.0),
            sigma: 0.8,
        }],
        charges0: vec![Complex64::new(0.0, 0.0)],
        lambda: 1.0,
    }
}

// ---------------------------------------------------------------------------
// operator identities

fn antiderivative(name: &str, t: f64) -> f64 {
    match name {
        "one" => t,
        "linear" => 0.5 * t * t,
        "cos3" => (3.0 * t).sin() / 3.0,
        _ => unreachable!(),
    }
}

fn density(name: &str, t: f64) -> f64 {
    match name {
        "one" => 1.0,
        "linear" => t,
        "cos3" => (3.0 * t).cos(),
        _ => unreachable!(),
    }
}

/// IJ composition against the running integral, plus the unit identity,
/// across step sizes. `h_list` must be ordered coarse to fine by halving.
pub fn operator_identity_suite(h_list: &[f64]) -> Result<Vec<InvariantReport>> {
    let t_end = 2.0;
    let mut reports = Vec::new();
    for fname in ["one", "linear", "cos3"] {
        let mut residuals = Vec::new();
        for &h in h_list {
            let n = (t_end / h).round() as usize;
            let grid = TimeGrid::new(0.0, h, n)?;
            let table = build_weights(&grid)?;
            let samples: Vec<Complex64> = (0..=n)
                .map(|m| Complex64::new(density(fname, grid.node(m)), 0.0))
                .collect();
            let jf = apply_j(&grid, &samples)?;
            let ijf = table.apply_i(&jf)?;
            let mut worst = 0.0_f64;
            for m in 1..=n {
                let exact = antiderivative(fname, grid.node(m));
                worst = worst.max((ijf[m].re - exact).abs().max(ijf[m].im.abs()));
            }
            residuals.push(worst);
        }
        let finest = *residuals.last().unwrap();
        reports.push(InvariantReport::new(
            format!("operator_identity.{fname}"),
            finest,
            1e-3,
            format!("residuals over h={h_list:?}: {residuals:?}"),
        ));
        let mut min_ratio = f64::INFINITY;
        for w in residuals.windows(2) {
            min_ratio = min_ratio.min(w[0] / w[1].max(1e-300));
        }
        reports.push(InvariantReport::new(
            format!("operator_identity.{fname}.halving"),
            1.8 / min_ratio,
            1.0,
            format!("min residual ratio per halving = {min_ratio:.3}"),
        ));
    }

    // unit identity at the finest step
    let h = *h_list.last().unwrap();
    let n = (t_end / h).round() as usize;
    let grid = TimeGrid::new(0.0, h, n)?;
    let table = build_weights(&grid)?;
    let resid = table.unit_identity_residual()?;
    let worst = resid[1..].iter().cloned().fold(0.0, f64::max);
    reports.push(InvariantReport::new(
        "unit_identity",
        worst,
        5e-3,
        format!("h={h}, interval [{h}, {t_end}]"),
    ));
    Ok(reports)
}

// ---------------------------------------------------------------------------
// asymptotics and transform audits

/// Integral representation of K0 through the substitution w = sinh u:
/// int_0^inf cos(x w)/sqrt(1+w^2) dw, summed over half-periods with
/// iterated averaging of the alternating partial sums.
fn k0_oracle_integral(x: f64) -> f64 {
    let g = quad::gl16();
    let half = PI / x;
    let first = 0.5 * PI / x;
    let mut partials = Vec::with_capacity(48);
    let mut acc = g.integrate(0.0, first, |w| (x * w).cos() / (1.0 + w * w).sqrt());
    partials.push(acc);
    let mut a = first;
    for _ in 0..46 {
        let b = a + half;
        acc += g.integrate(a, b, |w| (x * w).cos() / (1.0 + w * w).sqrt());
        partials.push(acc);
        a = b;
    }
    // iterated averaging (Euler-style acceleration of alternating tails)
    let mut row = partials[partials.len() - 24..].to_vec();
    while row.len() > 1 {
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    row[0]
}

/// Laplace transform of the Volterra kernel at p, by quadrature with the
/// singular head taken from the antiderivative.
fn volterra_laplace(p: f64) -> Result<f64> {
    let eps = 1e-8;
    let head = volterra_nu0(eps)?; // e^{-pt} ~ 1 below eps to 1e-8 relative
    let a_end = 60.0 / (p - 1.0).max(0.5);
    let mut f = |t: f64| (-p * t).exp() * volterra_i(t).unwrap_or(0.0);
    let mut total = head;
    let mut a = eps;
    let mut b = 1e-6_f64;
    while a < a_end {
        let b_clip = b.min(a_end);
        let (v, _) = quad::adaptive(&mut f, a, b_clip, 0.0, 1e-10);
        total += v;
        a = b_clip;
        b *= 8.0;
    }
    Ok(total)
}

/// Small/large-argument laws and the Laplace-transform resolution.
pub fn asymptotics_suite() -> Result<Vec<InvariantReport>> {
    let mut reports = Vec::new();

    let t = 1e-8_f64;
    let scaled = volterra_i(t)? * t * t.ln() * t.ln();
    reports.push(InvariantReport::new(
        "volterra.small_t",
        (scaled - 1.0).abs(),
        0.07,
        format!("kernel(1e-8) * t * log^2(1/t) = {scaled:.6}"),
    ));

    let ratio = volterra_i(10.0)? / 10f64.exp();
    reports.push(InvariantReport::new(
        "volterra.large_t",
        (ratio - 1.0).abs(),
        1e-4,
        format!("kernel(10)/e^10 = {ratio:.10}"),
    ));

    let x = 1e-6_f64;
    let resid = bessel_k0(x)? + (0.5 * x).ln() + EULER_GAMMA;
    reports.push(InvariantReport::new(
        "macdonald.small_x",
        resid.abs(),
        1e-10,
        "K0(1e-6) + log(x/2) + gamma",
    ));

    let gap = (bessel_k0(1.0)? - k0_oracle_integral(1.0)).abs();
    reports.push(InvariantReport::new(
        "macdonald.integral_representation",
        gap,
        1e-9,
        "K0(1) vs cosine-transform oracle",
    ));

    let (si, _) = si_ci(1e3)?;
    reports.push(InvariantReport::new(
        "sine_integral.large_x",
        (si - 0.5 * PI).abs(),
        1e-3,
        "Si(1000) vs pi/2",
    ));
    let (si_s, ci_s) = si_ci(1e-8)?;
    reports.push(InvariantReport::new(
        "sine_cosine_integral.small_x",
        si_s.abs().max((ci_s - (EULER_GAMMA + (1e-8_f64).ln())).abs()),
        1e-10,
        "Si -> 0 and Ci -> gamma + log x",
    ));

    reports.push(InvariantReport::new(
        "remainder.vanishing_coupling",
        q_remainder(0.0, 2.3)?.norm(),
        0.0,
        "Q(0; u) = 0",
    ));

    // Laplace-transform resolution: the transform of the kernel at p
    // matches 1/log p, not p/log p.
    let p = std::f64::consts::E;
    let m = volterra_laplace(p)?;
    let against_inv = (m - 1.0 / p.ln()).abs();
    let against_p = (m - p / p.ln()).abs();
    reports.push(InvariantReport::new(
        "laplace_resolution",
        against_inv,
        1e-3,
        format!(
            "transform at p=e is {m:.8}; |.-1/log p|={against_inv:.2e}, |.-p/log p|={against_p:.2e}: matches 1/log p"
        ),
    ));

    Ok(reports)
}

// ---------------------------------------------------------------------------
// closed-form audits (defining-integral oracles)

/// Oscillatory-quadrature oracle for the lagged free-kernel integral:
/// int_a^inf e^{iv}/(2iv) dv by half-period panels plus an
/// integration-by-parts tail started far out.
fn lagged_oracle(delta: f64, d: f64) -> Complex64 {
    let a = d * d / (4.0 * delta);
    let v_big = a.max(300.0) + 2.0 * PI;
    let g = quad::gl16();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut lo = a;
    let n_panels = ((v_big - a) / PI).ceil() as usize;
    let step = (v_big - a) / n_panels.max(1) as f64;
    for _ in 0..n_panels {
        let hi = lo + step;
        let c = 0.5 * (lo + hi);
        let hl = 0.5 * step;
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            let v = c + hl * x;
            acc += *w * hl * Complex64::from_polar(1.0, v) / v;
        }
        lo = hi;
    }
    // IBP tail from v_big (terms k!/v^k, v >= 300)
    let i = Complex64::new(0.0, 1.0);
    let phase = Complex64::from_polar(1.0, v_big);
    let mut t = i * phase * v_big.powi(-11);
    for m in (1..=10).rev() {
        t = i * phase * v_big.powi(-(m as i32)) - i * (m as f64) * t;
    }
    (acc + t) / (2.0 * i)
}

/// Damped-contour oracle for the co-located kernel evolution:
/// (1/2) int_0^inf e^{-i rho tau}/(rho+lambda) d rho
///   = -(i/2) int_0^inf e^{-r tau)/(lambda - i r) dr.
fn k0diag_oracle(lambda: f64, tau: f64) -> Complex64 {
    let g = quad::gl16();
    let r_end = 50.0 / tau;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = 0.0_f64;
    let mut b = (0.125 / tau).min(0.125 / lambda.max(1e-6)).max(1e-6);
    while a < r_end {
        let hi = b.min(r_end);
        // subdivide for the resolvent scale near r ~ lambda
        let parts = 4;
        let len = (hi - a) / parts as f64;
        for k in 0..parts {
            let pa = a + k as f64 * len;
            let pb = pa + len;
            let c = 0.5 * (pa + pb);
            let hl = 0.5 * len;
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                let r = c + hl * x;
                acc += *w * hl * (-r * tau).exp() / Complex64::new(lambda, -r);
            }
        }
        a = hi;
        b *= 2.0;
    }
    Complex64::new(0.0, -0.5) * acc
}

/// Closed forms vs their defining integrals at fixed probe points.
pub fn closed_form_audit() -> Result<Vec<InvariantReport>> {
    let mut reports = Vec::new();

    let probes = [(1.0, 1.0), (0.5, 2.0), (0.03, 1.5), (2.0, 0.7), (0.2, 3.0)];
    let mut worst = 0.0_f64;
    for &(delta, d) in &probes {
        let gap = (lagged_free_integral(delta, d)? - lagged_oracle(delta, d)).norm();
        worst = worst.max(gap);
    }
    reports.push(InvariantReport::new(
        "closed_form.lagged_free_integral",
        worst,
        1e-8,
        format!("max over probes {probes:?}"),
    ));

    let probes = [(1.0, 1.0), (2.0, 0.4), (0.5, 1.7), (1.0, 0.05), (3.0, 2.0)];
    let mut worst = 0.0_f64;
    for &(lambda, tau) in &probes {
        let gap = (k0_evolution_diag(lambda, tau)? - k0diag_oracle(lambda, tau)).norm();
        worst = worst.max(gap);
    }
    reports.push(InvariantReport::new(
        "closed_form.k0_evolution_diag",
        worst,
        1e-8,
        format!("max over probes {probes:?}"),
    ));

    // strength <-> decomposition-parameter pairing: the boundary matrix
    // diagonal vanishes exactly on the bound state
    let alpha = bound_alpha(1.0);
    let g = gamma_matrix(1.0, &origin_center(alpha), 0.0)?;
    reports.push(InvariantReport::new(
        "closed_form.bound_lambda",
        g[0][0].abs(),
        1e-12,
        format!("boundary-matrix diagonal at alpha = {alpha:.8}, lambda = 1"),
    ));

    Ok(reports)
}

// ---------------------------------------------------------------------------
// dynamics cases

fn max_charge_deviation(
    sol: &ChargeSolution,
    target: impl Fn(f64) -> Complex64,
) -> f64 {
    let mut worst = 0.0_f64;
    for m in 0..sol.grid.n_nodes() {
        let t = sol.grid.node(m);
        worst = worst.max((sol.q[0][m] - target(t)).norm());
    }
    worst
}

/// Stationary bound-state charge: q(t) = q(s) e^{i lambda_alpha (t-s)}.
/// The measured deviation is recomputed from the charge CSV artifact.
pub fn bound_state_case(alpha: f64, h: f64, t_end: f64) -> Result<InvariantReport> {
    let lambda = bound_lambda(alpha);
    let centers = origin_center(alpha);
    let state = bound_state(alpha);
    let n = (t_end / h).round() as usize;
    let grid = TimeGrid::new(0.0, h, n)?;
    let sol = solve_charges(&state, &centers, &grid)?;

    let csv = csvio::charges_to_csv(&sol);
    let replay = csvio::charge_solution_from_csv(&csv)?;
    let measured = max_charge_deviation(&replay, |t| Complex64::from_polar(1.0, lambda * t));
    Ok(InvariantReport::new(
        "bound_state.stationarity",
        measured,
        1e-2,
        format!("alpha={alpha:.8} lambda={lambda:.6} h={h} T={t_end} residual_norm={:.2e}", sol.residual_norm),
    ))
}

/// Step-halving improvement of the bound-state deviation.
pub fn bound_state_halving(alpha: f64, h_list: &[f64], t_end: f64) -> Result<InvariantReport> {
    let lambda = bound_lambda(alpha);
    let centers = origin_center(alpha);
    let state = bound_state(alpha);
    let mut devs = Vec::new();
    for &h in h_list {
        let n = (t_end / h).round() as usize;
        let grid = TimeGrid::new(0.0, h, n)?;
        let sol = solve_charges(&state, &centers, &grid)?;
        devs.push(max_charge_deviation(&sol, |t| {
            Complex64::from_polar(1.0, lambda * t)
        }));
    }
    let mut worst_ratio = 0.0_f64; // fine/coarse, must stay below 1
    for w in devs.windows(2) {
        worst_ratio = worst_ratio.max(w[1] / w[0].max(1e-300));
    }
    Ok(InvariantReport::new(
        "bound_state.halving",
        worst_ratio,
        1.0,
        format!("deviations over h={h_list:?}: {devs:?}"),
    ))
}

/// Norm conservation along the evolution; `state` must be domain data.
/// With no centers the free propagator is exercised alone.
pub fn unitarity_case(
    name: &str,
    state: &InitialState,
    centers: &[Center],
    h: f64,
    checkpoints: &[f64],
    half_width: f64,
    points_per_axis: usize,
    tolerance: f64,
) -> Result<InvariantReport> {
    let t_end = checkpoints.iter().cloned().fold(0.0, f64::max);
    let n = (t_end / h).round() as usize;
    let grid = TimeGrid::new(0.0, h, n)?;
    let sol = if centers.is_empty() {
        ChargeSolution {
            grid: grid.clone(),
            q: vec![],
            residual_norm: 0.0,
        }
    } else {
        solve_charges(state, centers, &grid)?
    };
    let spec = FieldSpec {
        half_width,
        points_per_axis,
    };
    let r_max = 2.0 * half_width * 1.5 + 2.0;

    let ev0 = FieldEvaluator::new(state, centers, &sol, 0.0, r_max)?;
    let field0 = reconstruct(&ev0, spec)?;
    let (norm0, err0) = field_norm(&field0, &ev0);

    let mut lines = String::from(csvio::NORM_REPORT_HEADER);
    lines.push_str(&csvio::norm_report_line(0.0, norm0, err0));
    for &t in checkpoints {
        let ev = FieldEvaluator::new(state, centers, &sol, t, r_max)?;
        let field = reconstruct(&ev, spec)?;
        let (nt, et) = field_norm(&field, &ev);
        lines.push_str(&csvio::norm_report_line(t, nt, et));
    }

    // measured ratio recomputed from the norm-report artifact
    let mut measured = 0.0_f64;
    let mut base = None;
    for line in lines.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let norm: f64 = cols[1].parse().unwrap();
        match base {
            None => base = Some(norm),
            Some(n0) => measured = measured.max((norm / n0 - 1.0).abs()),
        }
    }
    Ok(InvariantReport::new(
        format!("unitarity.{name}"),
        measured,
        tolerance,
        format!("checkpoints {checkpoints:?}, L={half_width}, m={points_per_axis}, h={h}"),
    ))
}

/// Propagator composition: direct solve vs restart at a mid node, compared
/// on the second leg in relative max norm.
pub fn group_law_case(
    name: &str,
    state: &InitialState,
    centers: &[Center],
    h: f64,
    t_end: f64,
    s_split: f64,
) -> Result<InvariantReport> {
    let n = (t_end / h).round() as usize;
    let grid = TimeGrid::new(0.0, h, n)?;
    let direct = solve_charges(state, centers, &grid)?;

    let split = direct
        .grid
        .node_index(s_split)
        .ok_or_else(|| crate::CoreError::InvalidInput("split must be a node".into()))?;
    // causal march: the solution restricted to [0, s'] is the history
    let history = ChargeSolution {
        grid: TimeGrid::new(0.0, h, split)?,
        q: direct
            .q
            .iter()
            .map(|row| row[..=split].to_vec())
            .collect(),
        residual_norm: direct.residual_norm,
    };

    let n2 = n - split;
    let grid2 = TimeGrid::new(s_split, h, n2)?;
    let table2 = build_weights(&grid2)?;
    let mut state2 = state.clone();
    state2.charges0 = (0..centers.len()).map(|j| history.q[j][split]).collect();
    let f2 = restart_forcing(&history, state, centers, s_split, &table2)?;
    let restarted = solve_with_forcing(&state2, centers, &table2, &f2)?;

    let mut gap = 0.0_f64;
    let mut scale = 0.0_f64;
    for m in 0..=n2 {
        for j in 0..centers.len() {
            gap = gap.max((restarted.q[j][m] - direct.q[j][split + m]).norm());
            scale = scale.max(direct.q[j][split + m].norm());
        }
    }
    let measured = gap / scale.max(1e-12);
    Ok(InvariantReport::new(
        format!("group_law.{name}"),
        measured,
        1e-2,
        format!("split={s_split}, h={h}, T={t_end}, scale={scale:.3e}"),
    ))
}

/// Near-center boundary structure of the reconstructed bound state: the
/// fitted log coefficient tracks the solver charge and the fitted constant
/// tracks alpha * q(t).
pub fn boundary_condition_case(h: f64, t_end: f64) -> Result<Vec<InvariantReport>> {
    let alpha = bound_alpha(1.0);
    let centers = origin_center(alpha);
    let state = bound_state(alpha);
    let n = (t_end / h).round() as usize;
    let grid = TimeGrid::new(0.0, h, n)?;
    let sol = solve_charges(&state, &centers, &grid)?;

    let mut worst_q = 0.0_f64;
    let mut worst_c = 0.0_f64;
    for &t in &[0.5 * t_end, t_end] {
        let ev = FieldEvaluator::new(&state, &centers, &sol, t, 4.0)?;
        let (q_fit, c_fit) = boundary_fit(&ev, 0, &BOUNDARY_RING_RADII, 8)?;
        let node = sol.grid.node_index(t).unwrap();
        let q_sol = sol.q[0][node];
        worst_q = worst_q.max((q_fit - q_sol).norm() / q_sol.norm());
        worst_c = worst_c.max((c_fit - alpha * q_sol).norm() / (alpha * q_sol).norm());
    }
    Ok(vec![
        InvariantReport::new(
            "boundary_condition.log_coefficient",
            worst_q,
            0.02,
            format!("bound state, fits at t={:?}", [0.5 * t_end, t_end]),
        ),
        InvariantReport::new(
            "boundary_condition.constant",
            worst_c,
            0.01,
            format!("alpha q(t) target, alpha={alpha:.8}"),
        ),
    ])
}

// ---------------------------------------------------------------------------
// full suite

/// Scale applied to every tolerance (exploratory runs); 1.0 is
/// authoritative.
pub fn full_suite(tolerance_scale: f64) -> Result<Vec<InvariantReport>> {
    let mut reports = Vec::new();

    reports.extend(operator_identity_suite(&[4e-3, 2e-3, 1e-3])?);
    reports.extend(asymptotics_suite()?);
    reports.extend(closed_form_audit()?);

    let alpha = bound_alpha(1.0);
    reports.push(bound_state_case(alpha, 1e-3, 1.0)?);
    reports.push(bound_state_halving(alpha, &[4e-3, 2e-3, 1e-3], 1.0)?);

    reports.push(unitarity_case(
        "free",
        &antisymmetric_pair(),
        &[],
        1e-3,
        &[0.1, 0.3, 0.6],
        12.0,
        512,
        1e-6,
    )?);
    reports.push(unitarity_case(
        "two_gaussian",
        &antisymmetric_pair(),
        &origin_center(0.25),
        1e-3,
        &[0.1, 0.3, 0.6],
        12.0,
        512,
        5e-3,
    )?);

    reports.push(group_law_case(
        "bound_state",
        &bound_state(alpha),
        &origin_center(alpha),
        1e-3,
        1.0,
        0.5,
    )?);
    reports.push(group_law_case(
        "gaussian",
        &offset_gaussian(),
        &origin_center(0.25),
        1e-3,
        1.0,
        0.5,
    )?);

    reports.extend(boundary_condition_case(1e-3, 0.5)?);

    if tolerance_scale != 1.0 {
        for r in &mut reports {
            r.tolerance *= tolerance_scale;
            r.passed = r.measured <= r.tolerance;
            r.context = format!("{} [tolerances scaled x{tolerance_scale}: non-authoritative]", r.context);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotics_hold() {
        let reports = asymptotics_suite().unwrap();
        for r in &reports {
            assert!(r.passed, "{}: measured {:e} > {:e} ({})", r.name, r.measured, r.tolerance, r.context);
        }
    }

    #[test]
    fn closed_forms_match_their_oracles() {
        let reports = closed_form_audit().unwrap();
        for r in &reports {
            assert!(r.passed, "{}: measured {:e} ({})", r.name, r.measured, r.context);
        }
    }

    #[test]
    fn coarse_bound_state_report() {
        let alpha = bound_alpha(1.0);
        let r = bound_state_case(alpha, 5e-3, 0.5).unwrap();
        assert!(r.passed, "measured {:e}", r.measured);
    }

    #[test]
    fn report_pass_flag_matches_comparison() {
        let r = InvariantReport::new("x", 2.0, 1.0, "");
        assert!(!r.passed);
        let r = InvariantReport::new("x", 0.5, 1.0, "");
        assert!(r.passed);
    }

    #[test]
    fn suite_is_deterministic_at_reduced_scale() {
        // bit-for-bit identical reports on repeated runs
        let a = operator_identity_suite(&[8e-3, 4e-3]).unwrap();
        let b = operator_identity_suite(&[8e-3, 4e-3]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.measured.to_bits(), y.measured.to_bits(), "{}", x.name);
        }
        let a = asymptotics_suite().unwrap();
        let b = asymptotics_suite().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.measured.to_bits(), y.measured.to_bits(), "{}", x.name);
        }
    }
}
