//! Numerics for a quantum particle in the plane driven by N time-dependent
//! point interactions.
//!
//! The state is split into a regular part and log-singular parts anchored at
//! the interaction centers. The singular coefficients ("charges") obey a
//! system of weakly singular Volterra integral equations of the second kind;
//! once the charges are known the full wave field is reconstructed by
//! convolving them with the free propagator.
//!
//! Module map:
//!
//! * [`specfun`] — scalar special functions and closed-form kernels
//!   (Volterra function, Macdonald `K0`, `J0`, `Si`/`Ci`, free-propagator
//!   integrals) that everything else consumes.
//! * [`volterra_ops`] — product-integration discretisation of the weakly
//!   singular convolution operator with the Volterra kernel and of the
//!   logarithmic convolution operator.
//! * [`charge_solver`] — assembly and time-marching of the N-center charge
//!   system, including restarts from a stored charge history.
//! * [`wavefield`] — wave-field reconstruction on a spatial grid, L2 norms
//!   with local refinement, near-center boundary fits.
//! * [`verify`] — executable invariant suites (stationary bound state,
//!   norm conservation, propagator composition, operator identities,
//!   asymptotics and closed-form audits) with measured residuals.
//! * [`csvio`] — plain-text CSV artifacts shared by the CLI and the
//!   verification suites.

pub mod charge_solver;
pub mod consts;
pub mod csvio;
mod error;
pub(crate) mod quad;
pub mod specfun;
pub mod verify;
pub mod volterra_ops;
pub mod wavefield;

pub use error::CoreError;
pub use num_complex::Complex64;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
