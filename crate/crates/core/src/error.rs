use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the scattering engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A gamma function (or a hypergeometric lower parameter) was evaluated
    /// at a non-positive integer.
    #[error("pole of the gamma function at {at}")]
    Pole { at: Complex64 },

    /// Argument outside the domain a function supports.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series failed to converge within its term budget.
    #[error("series did not converge after {terms} terms (|last term| / |sum| = {ratio:e})")]
    Accuracy { terms: usize, ratio: f64 },

    /// A result came out NaN or infinite.
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),

    #[error("invalid barrier parameters: {0}")]
    InvalidParams(String),

    /// The incident channel is closed (E <= V0).
    #[error("no propagating incident wave: E = {energy} <= V0 = {v0}")]
    NoPropagatingWave { energy: f64, v0: f64 },

    /// A connection coefficient hit a gamma pole at a channel threshold.
    #[error("threshold energy E = {energy}: gamma pole in connection coefficient, use the limiting branch")]
    Threshold { energy: f64 },

    /// Integration grid endpoints are not in the asymptotically flat region.
    #[error("grid endpoint x = {x} is not asymptotically flat (|V - V_inf| = {deviation:e})")]
    GridNotFlat { x: f64, deviation: f64 },

    /// Integration step too coarse for the local wavelength.
    #[error("step too coarse: k*h = {kh} > 0.5")]
    Resolution { kh: f64 },

    /// Local exponents differ by an integer; the Frobenius recurrence breaks down.
    #[error("resonant local exponents {0} and {1}")]
    Resonant(Complex64, Complex64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(value: Complex64, what: &'static str) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(what))
    }
}
