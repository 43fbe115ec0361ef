//! Scalar special functions and closed-form propagator kernels.
//!
//! Everything here is a pure function of its arguments and safe to call from
//! any number of threads. Closed forms that admit transcription slips
//! (sine/cosine-integral combinations, Laplace-transform constants) are
//! audited against their defining integrals in the test tree and in the
//! `verify` suites; the versions exported here are the audited ones.

mod bessel;
mod gamma;
mod kernels;
mod sici;
mod volterra;

pub use bessel::{bessel_j0, bessel_k0};
pub use gamma::gamma_fn;
pub use kernels::{
    free_kernel, k0_evolution_diag, k0_evolution_offdiag, lagged_free_integral, q_remainder,
};
pub use sici::{exp_itail, si_ci};
pub use volterra::{volterra_i, volterra_nu0};

pub(crate) use gamma::ln_gamma;
pub(crate) use sici::cin;
