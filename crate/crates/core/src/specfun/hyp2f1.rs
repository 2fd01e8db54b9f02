//! Gauss hypergeometric function ₂F₁(a, b; c; w) for complex parameters and
//! real argument w < 1.
//!
//! The argument is mapped into |·| ≤ 0.5 by one of the standard linear
//! transformations before the defining power series is summed:
//!
//! | region            | evaluation                                  |
//! |-------------------|---------------------------------------------|
//! | \|w\| ≤ 0.5       | direct series                               |
//! | 0.5 < w < 1       | w → 1 − w                                   |
//! | −2 ≤ w < −0.5     | Pfaff, w → w/(w − 1)                        |
//! | w < −2            | w → 1/(1 − w)                               |
//!
//! When a transformation is degenerate (c − a − b or a − b within 1e-4 of an
//! integer) b is shifted by ±ε and ±2ε, the symmetric averages are
//! extrapolated to ε = 0, and the logarithmic limiting forms are never
//! needed. Accuracy in those cases is around 1e-12.

use num_complex::Complex64;

use super::gamma::{gamma_ratio, is_pole};
use crate::error::{finite, Error, Result};

/// Maximum number of series terms before giving up.
pub const MAX_TERMS: usize = 20_000;

/// Relative size below which a term no longer contributes.
const TERM_TOL: f64 = 1e-16;

/// Consecutive negligible terms required to stop.
const QUIET_TERMS: usize = 3;

/// Distance from an integer at which a transformation counts as degenerate.
const DEGENERATE_TOL: f64 = 1e-4;

/// Base shift of b in degenerate transformations.
const PERTURBATION: Complex64 = Complex64::new(2e-4, 2e-4);

/// Evaluation route for [`hyp2f1_via`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    /// Defining power series; needs |w| < 1.
    Series,
    /// Pfaff transformation w → w/(w − 1); needs w < 0.5.
    Pfaff,
    /// Connection formula w → 1 − w; needs 0 < w < 1.
    OneMinus,
    /// Connection formula w → 1/(1 − w); needs w < 0.
    Reciprocal,
}

impl Path {
    /// The route [`hyp2f1`] takes for argument `w`.
    pub fn select(w: f64) -> Path {
        if w.abs() <= 0.5 {
            Path::Series
        } else if w > 0.5 {
            Path::OneMinus
        } else if w >= -2.0 {
            Path::Pfaff
        } else {
            Path::Reciprocal
        }
    }

    fn admits(self, w: f64) -> bool {
        match self {
            Path::Series => w.abs() < 1.0,
            Path::Pfaff => w < 0.5,
            Path::OneMinus => w > 0.0 && w < 1.0,
            Path::Reciprocal => w < 0.0,
        }
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn near_integer(z: Complex64) -> bool {
    z.im.abs() < DEGENERATE_TOL && (z.re - z.re.round()).abs() < DEGENERATE_TOL
}

/// f(0) from (f(ε)+f(−ε))/2 and (f(2ε)+f(−2ε))/2, eliminating the ε² term.
fn extrapolated<F>(f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let even = |e: Complex64| -> Result<Complex64> { Ok(0.5 * (f(e)? + f(-e)?)) };
    let g1 = even(PERTURBATION)?;
    let g2 = even(2.0 * PERTURBATION)?;
    Ok((4.0 * g1 - g2) / 3.0)
}

fn check_args(c: Complex64, w: f64) -> Result<()> {
    if !w.is_finite() || w >= 1.0 {
        return Err(Error::Domain(format!(
            "2F1 argument w = {w} must be finite and < 1"
        )));
    }
    if is_pole(c) {
        return Err(Error::Pole { at: c });
    }
    Ok(())
}

/// Sum the defining series Σ (a)ₙ(b)ₙ / ((c)ₙ n!) wⁿ.
///
/// Accepts |w| ≤ 1; at |w| = 1 convergence is only as fast as the
/// parameters allow and the term budget may be exhausted.
pub fn series(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    if is_pole(c) {
        return Err(Error::Pole { at: c });
    }
    if !(w.abs() <= 1.0) {
        return Err(Error::Domain(format!("series argument |w| = {} > 1", w.abs())));
    }
    let mut term = one();
    let mut sum = one();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * w;
        sum += term;
        let ratio = term.norm() / sum.norm();
        if term.norm() == 0.0 || ratio < TERM_TOL {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return finite(sum, "hyp2f1 series");
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Accuracy {
        terms: MAX_TERMS,
        ratio: term.norm() / sum.norm(),
    })
}

fn pfaff(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    // F(a,b;c;w) = (1-w)^{-a} F(a, c-b; c; w/(w-1))
    let prefactor = (-a * (1.0 - w).ln()).exp();
    Ok(prefactor * series(a, c - b, c, w / (w - 1.0))?)
}

fn one_minus(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    let s = c - a - b;
    if near_integer(s) {
        return extrapolated(|e| one_minus(a, b + e, c, w));
    }
    let v = 1.0 - w;
    let first = gamma_ratio(&[c, s], &[c - a, c - b])? * series(a, b, one() - s, v)?;
    let second = gamma_ratio(&[c, -s], &[a, b])?;
    let second = if second == Complex64::new(0.0, 0.0) {
        second
    } else {
        second * (s * v.ln()).exp() * series(c - a, c - b, s + 1.0, v)?
    };
    Ok(first + second)
}

fn reciprocal(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    let d = b - a;
    if near_integer(d) {
        return extrapolated(|e| reciprocal(a, b + e, c, w));
    }
    let v = 1.0 / (1.0 - w);
    let ln_1mw = (1.0 - w).ln();
    let mut total = Complex64::new(0.0, 0.0);
    for (p, q, diff) in [(a, b, d), (b, a, -d)] {
        let coef = gamma_ratio(&[c, diff], &[q, c - p])?;
        if coef != Complex64::new(0.0, 0.0) {
            total += coef * (-p * ln_1mw).exp() * series(p, c - q, one() - diff, v)?;
        }
    }
    Ok(total)
}

/// ₂F₁(a, b; c; w) for real w < 1.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    hyp2f1_via(Path::select(w), a, b, c, w)
}

/// ₂F₁ evaluated along an explicitly chosen route.
///
/// Useful for cross-checking the transformation formulas against one another.
pub fn hyp2f1_via(path: Path, a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    check_args(c, w)?;
    if !path.admits(w) {
        return Err(Error::Domain(format!("path {path:?} cannot evaluate w = {w}")));
    }
    let value = match path {
        Path::Series => series(a, b, c, w)?,
        Path::Pfaff => pfaff(a, b, c, w)?,
        Path::OneMinus => one_minus(a, b, c, w)?,
        Path::Reciprocal => reciprocal(a, b, c, w)?,
    };
    finite(value, "hyp2f1")
}

/// d/dw ₂F₁(a, b; c; w) = (ab/c) ₂F₁(a+1, b+1; c+1; w).
pub fn hyp2f1_deriv(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    check_args(c, w)?;
    Ok(a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, w)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(x: Complex64, y: Complex64) -> f64 {
        (x - y).norm() / y.norm()
    }

    #[test]
    fn binomial_reduction() {
        // F(a, b; b; w) = (1-w)^{-a}
        let a = c(0.3, 0.7);
        let b = c(1.1, 0.0);
        for &w in &[-2.0, -0.8, 0.2, 0.9] {
            let f = hyp2f1(a, b, b, w).unwrap();
            let expected = (-a * (1.0 - w).ln()).exp();
            assert!(rel(f, expected) < 1e-12, "w = {w}: {f} vs {expected}");
        }
    }

    #[test]
    fn logarithm_reduction() {
        let f = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), 0.5).unwrap();
        assert!((f.re - 1.386_294_361_119_890_6).abs() < 1e-14);
        // 0.75 and -3 are degenerate for their transformations
        for &w in &[0.75f64, -3.0, -0.7] {
            let f = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), w).unwrap();
            let expected = -(-w).ln_1p() / w;
            assert!((f.re - expected).abs() / expected < 1e-11, "w = {w}: {f}");
            assert!(f.im.abs() < 1e-11);
        }
    }

    #[test]
    fn derivative_of_binomial() {
        let a = c(0.5, 0.0);
        let d = hyp2f1_deriv(a, c(2.0, 0.0), c(2.0, 0.0), -1.0).unwrap();
        assert!((d.re - 0.5 * 2f64.powf(-1.5)).abs() < 1e-14);
    }

    #[test]
    fn derivative_at_origin() {
        let (a, b, cc) = (c(0.4, -1.2), c(2.5, 0.3), c(-0.7, 0.9));
        let d = hyp2f1_deriv(a, b, cc, 0.0).unwrap();
        assert!(rel(d, a * b / cc) < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = c(0.5, 0.0);
        assert!(matches!(hyp2f1(p, p, p, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(p, p, p, 3.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(p, p, p, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(p, p, c(-2.0, 0.0), 0.1), Err(Error::Pole { .. })));
        assert!(matches!(
            hyp2f1_via(Path::OneMinus, p, p, c(1.5, 0.0), -0.3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn terminating_series() {
        // F(-2, b; c; w) = 1 - 2bw/c + b(b+1)w²/(c(c+1))
        let b = c(0.5, 1.0);
        let cc = c(1.5, 0.0);
        for &w in &[-5.0, -0.9, 0.3, 0.8] {
            let f = hyp2f1(c(-2.0, 0.0), b, cc, w).unwrap();
            let expected = one() - 2.0 * b * w / cc + b * (b + 1.0) * w * w / (cc * (cc + 1.0));
            assert!(rel(f, expected) < 1e-11, "w = {w}: {f} vs {expected}");
        }
    }

    #[test]
    fn slow_series_reports_accuracy_error() {
        // at w = 1 with Re(c-a-b) barely positive the tail decays like n^-1.01
        let r = series(c(1.0, 0.0), c(1.0, 0.0), c(2.01, 0.0), 1.0);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
