//! Exact scattering on the smooth asymmetric step barrier
//!
//! ```text
//! V(x) = V0 + V1 / sqrt(1 + exp(2 (x - x0) / sigma))
//! ```
//!
//! The stationary Schrödinger equation for this potential is solved in
//! closed form by a combination of two Gauss hypergeometric functions. This
//! crate evaluates that solution, its connection coefficients and the exact
//! transmission coefficient, and provides the machinery to check all of it:
//! a Heun-equation verification layer and a direct Runge–Kutta integration of
//! the Schrödinger equation.
//!
//! Modules:
//!
//! * [`specfun`]: complex gamma, log-gamma and ₂F₁ for real argument.
//! * [`model`]: the potential, its abrupt-step limit and the map x → z.
//! * [`analytic`]: scattering context, wavefunction, A/B/C amplitudes and T.
//! * [`heun`]: general Heun parameters, termination identity, residuals and
//!   local Frobenius series.
//! * [`oracle`]: RK4 integration with plane-wave matching.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analytic;
pub mod error;
pub mod heun;
pub mod model;
pub mod oracle;
pub mod specfun;

pub use analytic::{
    connection_coeffs, make_context, transmission, transmission_from_amplitudes,
    transmission_step, wavefunction, Amplitudes, ScatteringContext, TransmissionResult,
};
pub use error::{Error, Result};
pub use heun::{frobenius_series, heun_from_context, heun_residual, HeunParams, Singularity};
pub use model::BarrierParams;
pub use num_complex::Complex64;
pub use oracle::{integrate, residual_of, richardson_t, GridSpec, NumericScattering, RichardsonT};
