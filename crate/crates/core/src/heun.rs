//! General Heun equation view of the barrier problem.
//!
//! Writing ψ = (z+1)^α1 (z−1)^α2 u(z) turns the Schrödinger equation into
//!
//! ```text
//! u'' + (γ/(z−a1) + δ/(z−a2) + ε/(z−a3)) u' + (αβ z − q)/((z−a1)(z−a2)(z−a3)) u = 0
//! ```
//!
//! with (a1, a2, a3) = (−1, 1, 0), γ = 1+2α1, δ = 1+2α2, ε = −1,
//! (α, β) = (α1+α2−α0, α1+α2+α0) and q = α2 − α1. The two-term
//! hypergeometric solution exists because q(q + γ − δ) = αβ, which reduces
//! to α0² = 2(α1² + α2²).

use num_complex::Complex64;

use crate::analytic::ScatteringContext;
use crate::error::{Error, Result};
use crate::specfun::hyp2f1;

/// Closest a residual probe may come to a singular point.
const SINGULAR_MARGIN: f64 = 1e-3;

/// Tolerance used to recognise local exponents and integer differences.
const EXPONENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub epsilon: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Accessory parameter.
    pub q: Complex64,
}

/// One of the three finite singular points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    A1,
    A2,
    A3,
}

impl HeunParams {
    pub fn location(&self, s: Singularity) -> f64 {
        match s {
            Singularity::A1 => self.a1,
            Singularity::A2 => self.a2,
            Singularity::A3 => self.a3,
        }
    }

    /// Exponent parameter attached to a singular point (γ, δ or ε).
    pub fn exponent_param(&self, s: Singularity) -> Complex64 {
        match s {
            Singularity::A1 => self.gamma,
            Singularity::A2 => self.delta,
            Singularity::A3 => self.epsilon,
        }
    }

    /// Local exponents {0, 1 − γ_j} at a singular point.
    pub fn local_exponents(&self, s: Singularity) -> [Complex64; 2] {
        [Complex64::new(0.0, 0.0), 1.0 - self.exponent_param(s)]
    }

    /// γ + δ + ε − α − β − 1; zero for a well-formed Heun equation.
    pub fn fuchs_defect(&self) -> Complex64 {
        self.gamma + self.delta + self.epsilon - self.alpha - self.beta - 1.0
    }

    /// q(q + γ − δ) − αβ; zero when the two-term termination applies.
    pub fn termination_defect(&self) -> Complex64 {
        self.q * (self.q + self.gamma - self.delta) - self.alpha * self.beta
    }

    /// Left-hand side of the Heun equation for given u, u′, u″ at z.
    pub fn ode_lhs(&self, z: f64, u: Complex64, du: Complex64, d2u: Complex64) -> Complex64 {
        let (z1, z2, z3) = (z - self.a1, z - self.a2, z - self.a3);
        let p = self.gamma / z1 + self.delta / z2 + self.epsilon / z3;
        let r = (self.alpha * self.beta * z - self.q) / (z1 * z2 * z3);
        d2u + p * du + r * u
    }

    fn check_regular(&self, z: f64) -> Result<()> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("z = {z} is not finite")));
        }
        for a in [self.a1, self.a2, self.a3] {
            if (z - a).abs() < SINGULAR_MARGIN {
                return Err(Error::Domain(format!("z = {z} too close to singular point {a}")));
            }
        }
        Ok(())
    }
}

/// Heun parameters of the barrier problem for a scattering context.
pub fn heun_from_context(ctx: &ScatteringContext) -> HeunParams {
    let (al0, al1, al2) = (ctx.alpha0, ctx.alpha1, ctx.alpha2);
    HeunParams {
        a1: -1.0,
        a2: 1.0,
        a3: 0.0,
        gamma: 1.0 + 2.0 * al1,
        delta: 1.0 + 2.0 * al2,
        epsilon: Complex64::new(-1.0, 0.0),
        alpha: al1 + al2 - al0,
        beta: al1 + al2 + al0,
        q: al2 - al1,
    }
}

/// u, u′, u″ of the physical (transmitted-wave) Heun solution
///
/// ```text
/// u = F + (α2 − α1 + b z)/(a b) F′,   F = C2 · 2F1(a, b; 2α2; (1−z)/2)
/// ```
///
/// with all z-derivatives taken through the contiguous relation
/// dⁿ/dwⁿ 2F1(a,b;c;w) = (a)ₙ(b)ₙ/(c)ₙ 2F1(a+n,b+n;c+n;w).
pub fn physical_solution(
    ctx: &ScatteringContext,
    z: f64,
    c2: Complex64,
) -> Result<[Complex64; 3]> {
    let (a, b) = (ctx.a, ctx.b);
    let cp = ctx.c_prime();
    let w = 0.5 * (1.0 - z);
    // F^(n) in z, n = 0..3
    let mut f = [Complex64::new(0.0, 0.0); 4];
    let mut coef = c2;
    for (n, slot) in f.iter_mut().enumerate() {
        let nf = n as f64;
        if n > 0 {
            let m = nf - 1.0;
            coef *= (a + m) * (b + m) / (cp + m) * -0.5;
        }
        *slot = coef * hyp2f1(a + nf, b + nf, cp + nf, w)?;
    }
    let g = (ctx.alpha2 - ctx.alpha1 + b * z) / (a * b);
    let inv_a = 1.0 / a;
    let u = f[0] + g * f[1];
    let du = (1.0 + inv_a) * f[1] + g * f[2];
    let d2u = (1.0 + 2.0 * inv_a) * f[2] + g * f[3];
    Ok([u, du, d2u])
}

/// Scaled Heun-equation residual of the physical solution at z:
/// |u″ + P u′ + R u| / max(|u|, |u′|, |u″|).
pub fn heun_residual(h: &HeunParams, ctx: &ScatteringContext, z: f64, c2: Complex64) -> Result<f64> {
    h.check_regular(z)?;
    let [u, du, d2u] = physical_solution(ctx, z, c2)?;
    let scale = u.norm().max(du.norm()).max(d2u.norm());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(h.ode_lhs(z, u, du, d2u).norm() / scale)
}

/// Maximum residual over a probe set, scaled by the largest of |u|, |u′|,
/// |u″| seen anywhere on the set.
pub fn heun_residual_grid(
    h: &HeunParams,
    ctx: &ScatteringContext,
    zs: &[f64],
    c2: Complex64,
) -> Result<f64> {
    let mut scale: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for &z in zs {
        h.check_regular(z)?;
        let [u, du, d2u] = physical_solution(ctx, z, c2)?;
        scale = scale.max(u.norm()).max(du.norm()).max(d2u.norm());
        worst = worst.max(h.ode_lhs(z, u, du, d2u).norm());
    }
    Ok(if scale == 0.0 { 0.0 } else { worst / scale })
}

/// 25 points on [1.05, 6], geometrically spaced in z − 1.
pub fn probe_grid() -> Vec<f64> {
    let (lo, hi) = (0.05f64, 5.0f64);
    let n = 25;
    (0..n)
        .map(|i| 1.0 + lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Local Frobenius solution (z − z0)^s Σ cₙ (z − z0)ⁿ about a singular point.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusSeries {
    pub center: f64,
    pub exponent: Complex64,
    pub coefficients: Vec<Complex64>,
}

impl FrobeniusSeries {
    /// Partial sums of u, u′, u″ at z.
    pub fn eval(&self, z: f64) -> [Complex64; 3] {
        let t = Complex64::new(z - self.center, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (mut u, mut du, mut d2u) = (zero, zero, zero);
        let ln_t = t.ln();
        for (n, &c) in self.coefficients.iter().enumerate() {
            let e = self.exponent + n as f64;
            let pw = (e * ln_t).exp();
            u += c * pw;
            du += c * e * pw / t;
            d2u += c * e * (e - 1.0) * pw / (t * t);
        }
        [u, du, d2u]
    }
}

/// Frobenius coefficients about `point` for local exponent `exponent`.
///
/// With P = (z−a1)(z−a2)(z−a3) = p1 t + p2 t² + t³, Q = q0 + q1 t + q2 t²
/// and αβz − q = r0 + r1 t in t = z − a_j, the coefficients obey
///
/// ```text
/// (n+s)(p1(n+s−1) + q0) cₙ = −[p2(n+s−1)(n+s−2) + q1(n+s−1) + r0] cₙ₋₁
///                            −[(n+s−2)(n+s−3) + q2(n+s−2) + r1] cₙ₋₂
/// ```
pub fn frobenius_series(
    h: &HeunParams,
    point: Singularity,
    exponent: Complex64,
    n_terms: usize,
) -> Result<FrobeniusSeries> {
    let [e0, e1] = h.local_exponents(point);
    let other = if (exponent - e0).norm() < EXPONENT_TOL {
        e1
    } else if (exponent - e1).norm() < EXPONENT_TOL {
        e0
    } else {
        return Err(Error::Domain(format!(
            "{exponent} is not a local exponent at {} (expected {e0} or {e1})",
            h.location(point)
        )));
    };
    let gap = other - exponent;
    if gap.im.abs() < EXPONENT_TOL && (gap.re - gap.re.round()).abs() < EXPONENT_TOL {
        return Err(Error::Resonant(exponent, other));
    }

    let zj = h.location(point);
    let others: Vec<(f64, Complex64)> = [
        (h.a1, h.gamma),
        (h.a2, h.delta),
        (h.a3, h.epsilon),
    ]
    .into_iter()
    .filter(|&(a, _)| a != zj)
    .collect();
    let (d1, d2) = (zj - others[0].0, zj - others[1].0);
    let p1 = d1 * d2;
    let p2 = d1 + d2;

    // Q expanded about zj: each term is coef · (z − a_m)(z − a_n)
    let pairs = [
        (h.gamma, h.a2, h.a3),
        (h.delta, h.a1, h.a3),
        (h.epsilon, h.a1, h.a2),
    ];
    let mut q0 = Complex64::new(0.0, 0.0);
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = Complex64::new(0.0, 0.0);
    for (coef, am, an) in pairs {
        let (em, en) = (zj - am, zj - an);
        q0 += coef * em * en;
        q1 += coef * (em + en);
        q2 += coef;
    }
    let ab = h.alpha * h.beta;
    let r0 = ab * zj - h.q;
    let r1 = ab;

    let s = exponent;
    let mut c: Vec<Complex64> = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        if n == 0 {
            c.push(Complex64::new(1.0, 0.0));
            continue;
        }
        let m = s + n as f64;
        let lead = m * (p1 * (m - 1.0) + q0);
        let mut rhs = -(p2 * (m - 1.0) * (m - 2.0) + q1 * (m - 1.0) + r0) * c[n - 1];
        if n >= 2 {
            rhs -= ((m - 2.0) * (m - 3.0) + q2 * (m - 2.0) + r1) * c[n - 2];
        }
        c.push(rhs / lead);
    }
    Ok(FrobeniusSeries {
        center: zj,
        exponent,
        coefficients: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::make_context;
    use crate::model::BarrierParams;

    fn ctx(v1: f64, sigma: f64, e: f64) -> ScatteringContext {
        make_context(&BarrierParams::new(0.0, v1, 0.0, sigma).unwrap(), e).unwrap()
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn identities_hold() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        assert!(h.fuchs_defect().norm() < 1e-15);
        assert!(h.termination_defect().norm() < 1e-12);
        assert_eq!((h.a1, h.a2, h.a3), (-1.0, 1.0, 0.0));
        assert_eq!(h.epsilon, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn flat_potential_has_zero_accessory() {
        let h = heun_from_context(&ctx(0.0, -1.0, 2.0));
        assert_eq!(h.q, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn residual_small_on_reference_points() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        for z in [1.1, 1.5, 2.0, 3.0, 5.0] {
            let r = heun_residual(&h, &c, z, ONE).unwrap();
            assert!(r < 1e-9, "z = {z}: {r}");
        }
    }

    #[test]
    fn residual_zero_for_trivial_solution() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        assert_eq!(heun_residual(&h, &c, 2.0, Complex64::new(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn perturbed_accessory_is_detected() {
        let c = ctx(1.0, -1.0, 2.0);
        let mut h = heun_from_context(&c);
        h.q += 0.1;
        for z in [1.1, 1.5, 2.0] {
            assert!(heun_residual(&h, &c, z, ONE).unwrap() > 1e-3);
        }
    }

    #[test]
    fn residual_rejects_singular_points() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        assert!(heun_residual(&h, &c, 1.0, ONE).is_err());
        assert!(heun_residual(&h, &c, f64::INFINITY, ONE).is_err());
    }

    #[test]
    fn probe_grid_shape() {
        let g = probe_grid();
        assert_eq!(g.len(), 25);
        assert!((g[0] - 1.05).abs() < 1e-15 && (g[24] - 6.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn first_coefficient_from_substitution() {
        // u = 1 + c1 (z−1): the t⁰ coefficient of P u″ + Q u′ + R u is q0 c1 + r0
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        let s = frobenius_series(&h, Singularity::A2, Complex64::new(0.0, 0.0), 2).unwrap();
        let c1 = s.coefficients[1];
        // at z = 1: (z+1)(z−0) = 2, so q0 = 2δ; r0 = αβ − q
        let expected = -(h.alpha * h.beta - h.q) / (2.0 * h.delta);
        assert!((c1 - expected).norm() < 1e-14);
        // the truncated P·(ODE) is then O(t) near the centre
        for t in [1e-4, 1e-5] {
            let z = 1.0 + t;
            let [u, du, d2u] = s.eval(z);
            let p = (z + 1.0) * (z - 1.0) * z;
            let lhs = h.ode_lhs(z, u, du, d2u) * p;
            assert!(lhs.norm() / t < 50.0);
        }
    }

    #[test]
    fn one_term_series_leading_order() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        let s = frobenius_series(&h, Singularity::A2, Complex64::new(0.0, 0.0), 1).unwrap();
        assert_eq!(s.coefficients, vec![ONE]);
        // residual of u = 1 is (αβz − q)/P: O(1/t), but P·residual stays bounded
        let z = 1.0 + 1e-6;
        let [u, du, d2u] = s.eval(z);
        let p = (z + 1.0) * (z - 1.0) * z;
        assert!((h.ode_lhs(z, u, du, d2u) * p - (h.alpha * h.beta * z - h.q)).norm() < 1e-12);
    }

    #[test]
    fn frobenius_errors() {
        let c = ctx(1.0, -1.0, 2.0);
        let h = heun_from_context(&c);
        // ε = −1 gives exponents {0, 2} at z = 0
        assert!(matches!(
            frobenius_series(&h, Singularity::A3, Complex64::new(0.0, 0.0), 10),
            Err(Error::Resonant(..))
        ));
        assert!(matches!(
            frobenius_series(&h, Singularity::A2, Complex64::new(0.3, 0.0), 10),
            Err(Error::Domain(_))
        ));
    }
}
