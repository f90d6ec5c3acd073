//! Library side of the command-line tool: molecule registry, single-point
//! reports, parameter sweeps and csv/json emission.

mod commands;
mod registry;
mod report;
mod sweep;

pub use commands::{
    blockade_report, gate_report, lifetime_report, spectrum_report, threshold_report, Output,
};
pub use registry::{load_registry, MoleculeRecord, MoleculeRegistry};
pub use report::{emit_report, render_report, write_report, Cell, ReportFormat, ReportRow};
pub use sweep::{run_sweep, FixedValues, OutputKey, Spacing, SweepRange, SweepSpec, SweepVariable};

use crate::physconst::{convert_units, Unit};
use crate::{Error, Result};

/// Parses `VALUE[unit]`, e.g. `300`, `300V/m`, `1e4 V/um`, and returns the
/// value in the SI unit of `default`'s dimension class. A bare number is
/// taken to be in `default`.
pub fn parse_quantity(text: &str, default: Unit) -> Result<f64> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(_, ch)| (ch.is_alphabetic() && ch != 'e' && ch != 'E') || ch == '/' || ch == 'µ')
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| Error::invalid("value", format!("cannot parse number in `{text}`")))?;
    let unit = if unit.trim().is_empty() {
        default
    } else {
        unit.parse::<Unit>()?
    };
    let si = match default.dimension() {
        crate::physconst::Dimension::DipoleMoment => Unit::CoulombMeter,
        crate::physconst::Dimension::ElectricField => Unit::VoltPerMeter,
        crate::physconst::Dimension::Frequency => Unit::RadPerSecond,
    };
    convert_units(value, unit, si)
}
