//! Van der Waals interaction between Rydberg-excited molecules and the
//! resulting blockade radius.

use crate::physconst::{COULOMB_K, HBAR};
use crate::{Error, Result};

/// Default factor by which U must exceed ħΩ to count as blockaded.
pub const DEFAULT_BLOCKADE_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RydbergParams {
    /// Transition dipole moments, C·m.
    pub d1: f64,
    pub d2: f64,
    /// Förster defect δ, J.
    pub delta: f64,
    pub n_ryd: u32,
    /// Rabi frequency Ω, rad/s.
    pub rabi: f64,
    /// Pair interaction shift U, J.
    pub u_int: f64,
}

impl RydbergParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("d1", self.d1),
            ("d2", self.d2),
            ("delta", self.delta),
            ("rabi", self.rabi),
        ] {
            positive(name, value)?;
        }
        if self.n_ryd < 1 {
            return Err(Error::invalid("n_ryd", "must be at least 1"));
        }
        Ok(())
    }

    pub fn c6(&self) -> Result<f64> {
        c6_coefficient(self.d1, self.d2, self.delta)
    }

    pub fn is_blockaded(&self) -> Result<bool> {
        blockade_regime(self.u_int, self.rabi, DEFAULT_BLOCKADE_MARGIN)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive, got {value}"),
        ))
    }
}

/// C₆ = (d₁d₂/(4πε₀))² / (2δ), J·m⁶.
pub fn c6_coefficient(d1: f64, d2: f64, delta: f64) -> Result<f64> {
    positive("d1", d1)?;
    positive("d2", d2)?;
    if delta == 0.0 {
        return Err(Error::invalid(
            "delta",
            "zero Förster defect is the resonant case, not van der Waals",
        ));
    }
    positive("delta", delta)?;
    let dd = d1 * d2 * COULOMB_K;
    Ok(dd * dd / (2.0 * delta))
}

/// Rescales C₆ from `n_ref` to `n_ryd` with the n¹¹ law (d ∝ n², δ ∝ n⁻³).
pub fn c6_scaled(c6_ref: f64, n_ref: u32, n_ryd: u32) -> Result<f64> {
    positive("c6_ref", c6_ref)?;
    if n_ref < 1 || n_ryd < 1 {
        return Err(Error::invalid(
            "n",
            "principal quantum numbers must be at least 1",
        ));
    }
    Ok(c6_ref * (n_ryd as f64 / n_ref as f64).powi(11))
}

/// R = (C₆ / ħΩ)^(1/6), m.
pub fn blockade_radius(c6: f64, rabi: f64) -> Result<f64> {
    positive("c6", c6)?;
    positive("rabi", rabi)?;
    Ok((c6 / (HBAR * rabi)).powf(1.0 / 6.0))
}

/// U ≥ margin·ħΩ, boundary inclusive.
pub fn blockade_regime(u_int: f64, rabi: f64, margin: f64) -> Result<bool> {
    if margin.is_nan() || margin < 1.0 {
        return Err(Error::invalid(
            "margin",
            format!("must be >= 1, got {margin}"),
        ));
    }
    positive("rabi", rabi)?;
    Ok(u_int >= margin * HBAR * rabi)
}
