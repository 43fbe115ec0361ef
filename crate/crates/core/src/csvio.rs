//! CSV artifacts: charge trajectories, field dumps, norm reports and
//! verification reports. Values are printed with 17 significant digits so
//! that artifacts are byte-reproducible and round-trip through f64 exactly.

use crate::charge_solver::ChargeSolution;
use crate::verify::InvariantReport;
use crate::volterra_ops::TimeGrid;
use crate::{Complex64, CoreError, Result};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Charge CSV: `t,re_q1,im_q1,...,re_qN,im_qN`, one row per node.
pub fn charges_to_csv(sol: &ChargeSolution) -> String {
    let n_centers = sol.q.len();
    let mut s = String::new();
    s.push('t');
    for j in 1..=n_centers {
        let _ = write!(s, ",re_q{j},im_q{j}");
    }
    s.push('\n');
    for m in 0..sol.grid.n_nodes() {
        let _ = write!(s, "{}", fmt_f(sol.grid.node(m)));
        for j in 0..n_centers {
            let _ = write!(s, ",{},{}", fmt_f(sol.q[j][m].re), fmt_f(sol.q[j][m].im));
        }
        s.push('\n');
    }
    s
}

/// Parse a charge CSV produced by [`charges_to_csv`].
pub fn charges_from_csv(text: &str) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CoreError::InvalidInput("empty charge CSV".into()))?;
    let ncols = header.split(',').count();
    if ncols < 3 || (ncols - 1) % 2 != 0 {
        return Err(CoreError::InvalidInput(format!(
            "charge CSV header has {ncols} columns"
        )));
    }
    let n_centers = (ncols - 1) / 2;
    let mut times = Vec::new();
    let mut q = vec![Vec::new(); n_centers];
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != ncols {
            return Err(CoreError::InvalidInput(format!(
                "charge CSV row {} has {} fields, expected {ncols}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CoreError::InvalidInput(format!("bad float {s:?}: {e}")))
        };
        times.push(parse(fields[0])?);
        for j in 0..n_centers {
            q[j].push(Complex64::new(
                parse(fields[1 + 2 * j])?,
                parse(fields[2 + 2 * j])?,
            ));
        }
    }
    Ok((times, q))
}

/// Reconstruct a [`ChargeSolution`] from CSV (the residual is not part of
/// the artifact; it is reported zero on re-read).
pub fn charge_solution_from_csv(text: &str) -> Result<ChargeSolution> {
    let (times, q) = charges_from_csv(text)?;
    if times.len() < 2 {
        return Err(CoreError::InvalidInput(
            "charge CSV has fewer than 2 rows".into(),
        ));
    }
    let h = times[1] - times[0];
    let grid = TimeGrid::new(times[0], h, times.len() - 1)?;
    Ok(ChargeSolution {
        grid,
        q,
        residual_norm: 0.0,
    })
}

/// Field dump CSV: `x,y,re,im`, row-major over the offset grid.
pub fn field_to_csv(points: &[(f64, f64)], values: &[Complex64]) -> String {
    let mut s = String::from("x,y,re,im\n");
    for ((x, y), v) in points.iter().zip(values) {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_f(*x),
            fmt_f(*y),
            fmt_f(v.re),
            fmt_f(v.im)
        );
    }
    s
}

pub fn field_from_csv(text: &str) -> Result<(Vec<(f64, f64)>, Vec<Complex64>)> {
    let mut pts = Vec::new();
    let mut vals = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(CoreError::InvalidInput(format!(
                "field CSV row {} has {} fields",
                i + 1,
                f.len()
            )));
        }
        let p = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CoreError::InvalidInput(format!("bad float {s:?}: {e}")))
        };
        pts.push((p(f[0])?, p(f[1])?));
        vals.push(Complex64::new(p(f[2])?, p(f[3])?));
    }
    Ok((pts, vals))
}

/// Norm report line: `t,norm,refinement_error`.
pub fn norm_report_line(t: f64, norm: f64, refinement_error: f64) -> String {
    format!(
        "{},{},{}\n",
        fmt_f(t),
        fmt_f(norm),
        fmt_f(refinement_error)
    )
}

pub const NORM_REPORT_HEADER: &str = "t,norm,refinement_error\n";

/// Verification report CSV: `name,measured,tolerance,passed,context`.
pub fn reports_to_csv(reports: &[InvariantReport]) -> String {
    let mut s = String::from("name,measured,tolerance,passed,context\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.name,
            fmt_f(r.measured),
            fmt_f(r.tolerance),
            r.passed,
            r.context.replace(',', ";")
        );
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volterra_ops::TimeGrid;

    #[test]
    fn charge_csv_round_trip() {
        let grid = TimeGrid::new(0.5, 0.25, 3).unwrap();
        let sol = ChargeSolution {
            grid,
            q: vec![
                vec![
                    Complex64::new(1.0, -0.5),
                    Complex64::new(0.125, 3.0),
                    Complex64::new(-2.0, 1e-17),
                    Complex64::new(0.3333333333333333, 7.0),
                ],
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1e-300, -1e300),
                    Complex64::new(5.5, 2.5),
                    Complex64::new(-1.0, -1.0),
                ],
            ],
            residual_norm: 0.0,
        };
        let csv = charges_to_csv(&sol);
        assert!(csv.starts_with("t,re_q1,im_q1,re_q2,im_q2\n"));
        let back = charge_solution_from_csv(&csv).unwrap();
        assert_eq!(back.q.len(), 2);
        for j in 0..2 {
            for m in 0..4 {
                assert_eq!(back.q[j][m], sol.q[j][m], "j={j} m={m}");
            }
        }
        assert_eq!(back.grid.node(2), sol.grid.node(2));
    }

    #[test]
    fn field_csv_round_trip() {
        let pts = vec![(0.1, -0.2), (3.0, 4.0)];
        let vals = vec![Complex64::new(1.5, -2.5), Complex64::new(0.0, 1e-12)];
        let csv = field_to_csv(&pts, &vals);
        let (p2, v2) = field_from_csv(&csv).unwrap();
        assert_eq!(pts, p2);
        assert_eq!(vals, v2);
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(charges_from_csv("").is_err());
        assert!(charges_from_csv("t,re_q1\n0,1\n").is_err());
        assert!(charges_from_csv("t,re_q1,im_q1\n0,1\n").is_err());
        assert!(charges_from_csv("t,re_q1,im_q1\n0,x,1\n").is_err());
    }
}
