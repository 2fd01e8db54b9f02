//! Special-function kernel: complex gamma and the Gauss hypergeometric
//! function. Everything here is a pure function of its arguments.

mod gamma;
mod hyp2f1;

pub use gamma::{gamma, gamma_ratio, is_pole, log_gamma, rgamma, sin_pi};
pub use hyp2f1::{hyp2f1, hyp2f1_deriv, hyp2f1_via, series as hyp2f1_series, Path, MAX_TERMS};
