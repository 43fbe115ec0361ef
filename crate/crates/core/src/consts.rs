//! Numerical constants shared across the crate.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub const PI: f64 = std::f64::consts::PI;
