//! Physical constants (CODATA 2018, SI) and the handful of unit conversions
//! needed at the I/O boundary.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Planck constant, J·s (exact).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Elementary charge, C (exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Coulomb constant 1/(4πε₀), N·m²/C².
pub const COULOMB_K: f64 = 1.0 / (4.0 * PI * EPSILON_0);
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// One Debye in C·m.
pub const DEBYE: f64 = 3.335_64e-30;

/// The constant set as a value, for callers that want to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub h: f64,
    pub c: f64,
    pub e_charge: f64,
    pub coulomb_k: f64,
    pub k_b: f64,
    pub debye: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        hbar: HBAR,
        h: H,
        c: C,
        e_charge: E_CHARGE,
        coulomb_k: COULOMB_K,
        k_b: K_B,
        debye: DEBYE,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    DipoleMoment,
    ElectricField,
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Debye,
    CoulombMeter,
    VoltPerMicron,
    VoltPerMeter,
    Hertz,
    RadPerSecond,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Debye | Unit::CoulombMeter => Dimension::DipoleMoment,
            Unit::VoltPerMicron | Unit::VoltPerMeter => Dimension::ElectricField,
            Unit::Hertz | Unit::RadPerSecond => Dimension::Frequency,
        }
    }

    /// Multiplier taking a value in this unit to the SI unit of its class
    /// (C·m, V/m, rad/s).
    fn to_si(self) -> f64 {
        match self {
            Unit::Debye => DEBYE,
            Unit::CoulombMeter => 1.0,
            Unit::VoltPerMicron => 1.0e6,
            Unit::VoltPerMeter => 1.0,
            Unit::Hertz => 2.0 * PI,
            Unit::RadPerSecond => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Debye => "D",
            Unit::CoulombMeter => "C*m",
            Unit::VoltPerMicron => "V/um",
            Unit::VoltPerMeter => "V/m",
            Unit::Hertz => "Hz",
            Unit::RadPerSecond => "rad/s",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unit = match s.trim() {
            "D" | "Debye" | "debye" => Unit::Debye,
            "C*m" | "Cm" | "C·m" => Unit::CoulombMeter,
            "V/um" | "V/µm" | "V/μm" => Unit::VoltPerMicron,
            "V/m" => Unit::VoltPerMeter,
            "Hz" => Unit::Hertz,
            "rad/s" => Unit::RadPerSecond,
            other => {
                return Err(Error::invalid(
                    "unit",
                    format!("unrecognized unit `{other}`"),
                ))
            }
        };
        Ok(unit)
    }
}

/// Converts `value` between two units of the same dimension class.
///
/// Frequencies convert with the explicit factor 2π (Hz → rad/s).
pub fn convert_units(value: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::IncompatibleUnits { from, to });
    }
    if from == to {
        return Ok(value);
    }
    let factor = from.to_si() / to.to_si();
    Ok(value * factor)
}
