//! Closed-form scattering solution.
//!
//! For E above V0 the physical solution (only a transmitted wave on the
//! z → 1 side) is
//!
//! ```text
//! ψ(x) = (z+1)^α1 (z−1)^α2 [F + (α2 − α1 + b z)/(a b) F′],
//! F(z) = C2 · 2F1(a, b; a+b−c+1; (1−z)/2),
//! (a, b, c) = (α1+α2−α0−1, α1+α2+α0, 2α1),
//! ```
//!
//! with the exponent branch fixed to α0 = iσk1, α1 = iσκ/2, α2 = iσk2/2.
//! Asymptotically ψ → C e^{ik2(x−x0)} on the z → 1 side and
//! ψ → A e^{ik1(x−x0)} + B e^{−ik1(x−x0)} on the z → ∞ side. Phases of
//! A, B, C are referred to x0.
//!
//! For σ > 0 the same formulas describe the time-reversed scattering state;
//! T and R are unchanged because the potential is real.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::model::{self, BarrierParams};
use crate::specfun::{gamma_ratio, hyp2f1, hyp2f1_deriv};

/// Half-width of the energy band around V0 + V1 treated as the threshold.
pub const THRESHOLD_REL: f64 = 1e-12;

/// Beyond this z the large-argument connection form of ₂F₁ is used.
const FAR_SIDE_Z: f64 = 3.0;

/// Energy-dependent quantities for one (barrier, E) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringContext {
    pub params: BarrierParams,
    pub energy: f64,
    /// Incident-side wave number √(2m(E−V0))/ħ.
    pub k1: f64,
    /// Transmitted-side wave number; purely imaginary (Im > 0) below V0+V1.
    pub k2: Complex64,
    /// Auxiliary wave number √(2m(E−V0+V1))/ħ; κ² = 2k1² − k2².
    pub kappa: Complex64,
    pub alpha0: Complex64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// Asymptotic plane-wave amplitudes, relative to C2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    /// Incident wave e^{ik1(x−x0)}.
    pub a: Complex64,
    /// Reflected wave e^{−ik1(x−x0)}.
    pub b: Complex64,
    /// Transmitted wave e^{ik2(x−x0)}.
    pub c: Complex64,
}

impl Amplitudes {
    pub fn reflection_amplitude(&self) -> Complex64 {
        self.b / self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionResult {
    pub t: f64,
    pub r: f64,
    /// Abrupt-step transmission at the same energy.
    pub t_sp: f64,
    /// Connection amplitudes for C2 = 1; present above the barrier only.
    pub amplitudes: Option<Amplitudes>,
}

fn csqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

fn pow2(z: Complex64) -> Complex64 {
    (z * LN_2).exp()
}

/// e^w − 1 without cancellation for small |w|.
fn expm1c(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * s * s, w.re.exp() * w.im.sin())
}

impl ScatteringContext {
    /// Hypergeometric lower parameter of the physical solution, a+b−c+1 = 2α2.
    pub fn c_prime(&self) -> Complex64 {
        self.a + self.b - self.c + 1.0
    }

    /// True when the transmitted channel is open (E above V0+V1 and outside
    /// the threshold band).
    pub fn is_above_barrier(&self) -> bool {
        let p = &self.params;
        let band = THRESHOLD_REL * p.v1.abs().max(1.0);
        self.energy - p.v_near() >= band
    }

    pub fn is_at_threshold(&self) -> bool {
        let p = &self.params;
        let band = THRESHOLD_REL * p.v1.abs().max(1.0);
        (self.energy - p.v_near()).abs() < band
    }
}

/// Build the scattering context for energy `energy`.
pub fn make_context(p: &BarrierParams, energy: f64) -> Result<ScatteringContext> {
    p.validate()?;
    if !energy.is_finite() {
        return Err(Error::Domain(format!("energy {energy} is not finite")));
    }
    if energy <= p.v0 {
        return Err(Error::NoPropagatingWave { energy, v0: p.v0 });
    }
    let s = p.energy_scale();
    let k1 = (s * (energy - p.v0)).sqrt();
    let k2 = csqrt(s * (energy - p.v0 - p.v1));
    let kappa = csqrt(s * (energy - p.v0 + p.v1));
    let i_sigma = Complex64::new(0.0, p.sigma);
    let alpha0 = i_sigma * k1;
    let alpha1 = i_sigma * kappa / 2.0;
    let alpha2 = i_sigma * k2 / 2.0;
    Ok(ScatteringContext {
        params: *p,
        energy,
        k1,
        k2,
        kappa,
        alpha0,
        alpha1,
        alpha2,
        a: alpha1 + alpha2 - alpha0 - 1.0,
        b: alpha1 + alpha2 + alpha0,
        c: 2.0 * alpha1,
    })
}

/// ψ(x) for the solution with only a transmitted wave on the z → 1 side.
pub fn wavefunction(ctx: &ScatteringContext, x: f64, c2: Complex64) -> Result<Complex64> {
    if c2 == Complex64::new(0.0, 0.0) {
        return Ok(c2);
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} is not finite")));
    }
    let p = &ctx.params;
    let (a, b) = (ctx.a, ctx.b);
    let (al1, al2) = (ctx.alpha1, ctx.alpha2);
    let cp = ctx.c_prime();
    let ab = a * b;

    let t = p.scaled(x);
    let ln_z = model::ln_z_of_x(p, x);
    let (ln_zp1, ln_zm1) = if t <= 0.0 {
        let z = model::z_of_x(p, x);
        let ln_zp1 = (1.0 + z).ln();
        (ln_zp1, 2.0 * t - ln_zp1)
    } else {
        let inv_z = (-ln_z).exp();
        (ln_z + inv_z.ln_1p(), ln_z + (-inv_z).ln_1p())
    };
    let log_prefactor = al1 * ln_zp1 + al2 * ln_zm1;

    let bracket = if ln_z <= FAR_SIDE_Z.ln() {
        let z = model::z_of_x(p, x);
        let w = -0.5 * model::z_minus_one(p, x);
        let f = hyp2f1(a, b, cp, w)?;
        let df_dz = -0.5 * hyp2f1_deriv(a, b, cp, w)?;
        f + (al2 - al1 + b * z) / ab * df_dz
    } else {
        far_side_bracket(ctx, ln_zp1)?
    };
    finite(c2 * log_prefactor.exp() * bracket, "wavefunction")
}

/// F + g F′ on the z > 3 side, expanded through the w → 1/(1−w) connection
/// formula with v = 2/(1+z). The leading O(z) parts of F and g F′ cancel
/// analytically, so each branch is assembled from O(1) pieces:
///
/// ```text
/// [F + gF′]_a = K_a v^{a+1} { (b+α1−α2)/(2b) G_a − [b + (α2−α1−b) v/2]/(ab) G_a′ }
/// [F + gF′]_b = K_b v^b { [(a−b) + (b+α1−α2) v/2]/a G_b − v [b + (α2−α1−b) v/2]/(ab) G_b′ }
/// ```
fn far_side_bracket(ctx: &ScatteringContext, ln_zp1: f64) -> Result<Complex64> {
    let (a, b) = (ctx.a, ctx.b);
    let (al1, al2) = (ctx.alpha1, ctx.alpha2);
    let cp = ctx.c_prime();
    let ab = a * b;
    let ln_v = LN_2 - ln_zp1;
    let v = ln_v.exp();
    let one = Complex64::new(1.0, 0.0);

    let k_a = gamma_ratio(&[cp, b - a], &[b, cp - a])?;
    let k_b = gamma_ratio(&[cp, a - b], &[a, cp - b])?;
    let shared = (b + (al2 - al1 - b) * (0.5 * v)) / ab;

    let mut total = Complex64::new(0.0, 0.0);
    if k_a != Complex64::new(0.0, 0.0) {
        let (p1, p2, p3) = (a, cp - b, a - b + one);
        let g = hyp2f1(p1, p2, p3, v)?;
        let dg = hyp2f1_deriv(p1, p2, p3, v)?;
        let inner = (b + al1 - al2) / (2.0 * b) * g - shared * dg;
        total += k_a * ((a + 1.0) * ln_v).exp() * inner;
    }
    if k_b != Complex64::new(0.0, 0.0) {
        let (p1, p2, p3) = (b, cp - a, b - a + one);
        let g = hyp2f1(p1, p2, p3, v)?;
        let dg = hyp2f1_deriv(p1, p2, p3, v)?;
        let inner = ((a - b) + (b + al1 - al2) * (0.5 * v)) / a * g - v * shared * dg;
        total += k_b * (b * ln_v).exp() * inner;
    }
    Ok(total)
}

/// Asymptotic amplitudes A, B, C of the physical solution scaled by `c2`.
pub fn connection_coeffs(ctx: &ScatteringContext, c2: Complex64) -> Result<Amplitudes> {
    let (al0, al1, al2) = (ctx.alpha0, ctx.alpha1, ctx.alpha2);
    let zero = Complex64::new(0.0, 0.0);
    if al0 == zero || al2 == zero || ctx.is_at_threshold() {
        return Err(Error::Threshold { energy: ctx.energy });
    }
    let one = Complex64::new(1.0, 0.0);

    let g_a = gamma_ratio(
        &[2.0 * al0, 2.0 * al2],
        &[al0 - al1 + al2 + one, al0 + al1 + al2 + one],
    )?;
    let a = -pow2(al1 + al2 - al0) * (al1 - al2) * (al1 + al2) * g_a * c2;

    let g_b = gamma_ratio(
        &[-2.0 * al0, 2.0 * al2],
        &[-al0 - al1 + al2, -al0 + al1 + al2],
    )?;
    let b = pow2(al1 + al2 + al0) * g_b * c2;

    let c = pow2(al1 - al2 - 2.0) * (2.0 - al0 / al2) * c2;

    Ok(Amplitudes {
        a: finite(a, "amplitude A")?,
        b: finite(b, "amplitude B")?,
        c: finite(c, "amplitude C")?,
    })
}

/// T = (k2/k1)|C/A|² from the gamma-function amplitudes.
///
/// Requires an open transmitted channel. With A = 0 (no step at all) the
/// barrier is absent and T = 1.
pub fn transmission_from_amplitudes(ctx: &ScatteringContext) -> Result<f64> {
    if !ctx.is_above_barrier() {
        return Err(Error::Domain(format!(
            "transmitted channel closed at E = {}",
            ctx.energy
        )));
    }
    let amps = connection_coeffs(ctx, Complex64::new(1.0, 0.0))?;
    if amps.a.norm() == 0.0 {
        return Ok(1.0);
    }
    Ok(ctx.k2.re / ctx.k1 * (amps.c / amps.a).norm_sqr())
}

/// Closed-form (T, R) for an open channel, in a cancellation-free factored
/// form. With u = π|σ|, S = 2k1 + k2 and d = 2k1 − k2 − κ:
///
/// ```text
/// T = expm1(−4uk1) expm1(−2uk2) / [expm1(−u(S−κ)) expm1(−u(S+κ))]
/// R = expm1(−ud) expm1(−u(2k1−k2+κ)) e^{−2uk2} / [expm1(−u(S−κ)) expm1(−u(S+κ))]
/// ```
///
/// which equals 2 sinh(2πσk1) sinh(πσk2) / (cosh[πσ(2k1+k2)] − cosh[πσκ]).
fn closed_form(ctx: &ScatteringContext) -> (f64, f64) {
    let p = &ctx.params;
    let u = PI * p.sigma.abs();
    let k1 = ctx.k1;
    let k2 = ctx.k2.re;
    let kappa = ctx.kappa;
    // k1 − k2 and d without subtractive cancellation
    let dk = p.energy_scale() * p.v1 / (k1 + k2);
    let g = 2.0 * k1 - k2 + kappa;
    let d = 2.0 * dk * dk / g;
    let denom = expm1c(-u * (2.0 * k2 + d)) * expm1c(-u * (4.0 * k1 - d));
    let t = ((-4.0 * u * k1).exp_m1() * (-2.0 * u * k2).exp_m1() / denom).re;
    let r = (expm1c(-u * d) * expm1c(-u * g) * (-2.0 * u * k2).exp() / denom).re;
    if r <= 0.5 {
        (1.0 - r, r)
    } else {
        (t, 1.0 - t)
    }
}

/// Transmission and reflection coefficients at energy `energy`.
///
/// Below V0 + V1 (and inside the threshold band) the transmitted channel is
/// evanescent and T = 0, R = 1.
pub fn transmission(p: &BarrierParams, energy: f64) -> Result<TransmissionResult> {
    let ctx = make_context(p, energy)?;
    let t_sp = step_from_context(&ctx);
    if !ctx.is_above_barrier() {
        return Ok(TransmissionResult {
            t: 0.0,
            r: 1.0,
            t_sp,
            amplitudes: None,
        });
    }
    let (t, r) = closed_form(&ctx);
    let amplitudes = connection_coeffs(&ctx, Complex64::new(1.0, 0.0)).ok();
    Ok(TransmissionResult {
        t,
        r,
        t_sp,
        amplitudes,
    })
}

fn step_from_context(ctx: &ScatteringContext) -> f64 {
    if !ctx.is_above_barrier() {
        return 0.0;
    }
    let (k1, k2) = (ctx.k1, ctx.k2.re);
    4.0 * k1 * k2 / ((k1 + k2) * (k1 + k2))
}

/// Abrupt-step transmission 4k1k2/(k1+k2)²; zero when the channel is closed.
pub fn transmission_step(p: &BarrierParams, energy: f64) -> Result<f64> {
    Ok(step_from_context(&make_context(p, energy)?))
}
