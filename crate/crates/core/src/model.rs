//! The smooth asymmetric step potential, its abrupt-step limit and the
//! coordinate map z(x) that carries the real line onto (1, ∞).
//!
//! Orientation: the side where (x − x0)/σ → +∞ maps to z → ∞ and sits at
//! V0; the opposite side maps to z → 1 and sits at V0 + V1. With σ < 0 the
//! barrier therefore steps up to the right.

use crate::error::{Error, Result};

/// Exponent magnitude beyond which exp() is treated as saturated.
const EXP_CLAMP: f64 = 700.0;

/// Physical parameters of the barrier.
///
/// Construct through [`BarrierParams::new`] / [`BarrierParams::with_units`]
/// so the invariants (σ ≠ 0, m > 0, ħ > 0, all finite) are checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierParams {
    /// Energy origin.
    pub v0: f64,
    /// Step height (may be negative).
    pub v1: f64,
    /// Step position.
    pub x0: f64,
    /// Signed steepness length.
    pub sigma: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for BarrierParams {
    fn default() -> Self {
        BarrierParams {
            v0: 0.0,
            v1: 1.0,
            x0: 0.0,
            sigma: -1.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl BarrierParams {
    /// Barrier in units ħ = m = 1.
    pub fn new(v0: f64, v1: f64, x0: f64, sigma: f64) -> Result<Self> {
        Self::with_units(v0, v1, x0, sigma, 1.0, 1.0)
    }

    pub fn with_units(v0: f64, v1: f64, x0: f64, sigma: f64, mass: f64, hbar: f64) -> Result<Self> {
        let p = BarrierParams {
            v0,
            v1,
            x0,
            sigma,
            mass,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.v0, self.v1, self.x0, self.sigma, self.mass, self.hbar];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.sigma == 0.0 {
            return Err(Error::InvalidParams("sigma must be nonzero".into()));
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidParams("mass must be positive".into()));
        }
        if self.hbar <= 0.0 {
            return Err(Error::InvalidParams("hbar must be positive".into()));
        }
        Ok(())
    }

    /// 2m/ħ², the factor converting energies to squared wave numbers.
    pub fn energy_scale(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// Wave number √(2m(E − V)/ħ²) for E ≥ V.
    pub fn wave_number(&self, kinetic: f64) -> f64 {
        (self.energy_scale() * kinetic).sqrt()
    }

    /// Potential on the z → ∞ side.
    pub fn v_far(&self) -> f64 {
        self.v0
    }

    /// Potential on the z → 1 side.
    pub fn v_near(&self) -> f64 {
        self.v0 + self.v1
    }

    /// Dimensionless coordinate (x − x0)/σ.
    pub fn scaled(&self, x: f64) -> f64 {
        (x - self.x0) / self.sigma
    }

    pub fn potential(&self, x: f64) -> f64 {
        potential(self, x)
    }

    /// The same barrier reflected about x0 (σ → −σ).
    pub fn mirrored(&self) -> Self {
        BarrierParams {
            sigma: -self.sigma,
            ..*self
        }
    }
}

/// V(x) = V0 + V1 / √(1 + e^{2(x−x0)/σ}).
pub fn potential(p: &BarrierParams, x: f64) -> f64 {
    let s = 2.0 * p.scaled(x);
    if s > EXP_CLAMP {
        p.v0
    } else if s < -EXP_CLAMP {
        p.v0 + p.v1
    } else {
        p.v0 + p.v1 / (1.0 + s.exp()).sqrt()
    }
}

/// The σ → 0 limit: V0 on the z → ∞ side, V0 + V1 on the other, and the
/// midpoint V0 + V1/2 exactly at x0.
pub fn potential_step(p: &BarrierParams, x: f64) -> f64 {
    let s = p.scaled(x);
    if s > 0.0 {
        p.v0
    } else if s < 0.0 {
        p.v0 + p.v1
    } else {
        p.v0 + 0.5 * p.v1
    }
}

/// ln z(x), finite on the whole real line.
pub fn ln_z_of_x(p: &BarrierParams, x: f64) -> f64 {
    let t = p.scaled(x);
    if t > 0.0 {
        t + 0.5 * (-2.0 * t).exp().ln_1p()
    } else {
        0.5 * (2.0 * t).exp().ln_1p()
    }
}

/// z(x) = √(1 + e^{2(x−x0)/σ}) ∈ (1, ∞). Overflows to +∞ once
/// (x − x0)/σ exceeds ~709.
pub fn z_of_x(p: &BarrierParams, x: f64) -> f64 {
    let t = p.scaled(x);
    if t > 0.5 * EXP_CLAMP {
        ln_z_of_x(p, x).exp()
    } else {
        (1.0 + (2.0 * t).exp()).sqrt()
    }
}

/// z(x) − 1 without cancellation near z = 1.
pub fn z_minus_one(p: &BarrierParams, x: f64) -> f64 {
    let t = p.scaled(x);
    if t > 0.0 {
        z_of_x(p, x) - 1.0
    } else {
        let e = (2.0 * t).exp();
        e / (1.0 + (1.0 + e).sqrt())
    }
}

/// ρ(z) = dz/dx = (z² − 1)/(σ z).
pub fn rho(p: &BarrierParams, z: f64) -> Result<f64> {
    if !(z > 1.0) {
        return Err(Error::Domain(format!("rho requires z > 1, got {z}")));
    }
    Ok((z - 1.0) * (z + 1.0) / (p.sigma * z))
}
