use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::registry::MoleculeRegistry;
use super::report::ReportRow;
use crate::coherence::{decay_rate, mean_lifetime, thermal_threshold_field, DecayInput};
use crate::physconst::{HBAR, K_B};
use crate::rydberg::{blockade_radius, c6_scaled};
use crate::spectrum::{
    anharmonicity, intrinsic_frequency, solve_spectrum, validity_report, DriveField, GridConfig,
    MoleculeSpec, PotentialModel,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Field,
    Temperature,
    NRyd,
    Rabi,
}

impl SweepVariable {
    fn column(self) -> &'static str {
        match self {
            SweepVariable::Field => "E_V_per_m",
            SweepVariable::Temperature => "T_K",
            SweepVariable::NRyd => "n_ryd",
            SweepVariable::Rabi => "rabi_rad_per_s",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(SweepVariable::Field),
            "T" => Ok(SweepVariable::Temperature),
            "n_ryd" => Ok(SweepVariable::NRyd),
            "rabi" => Ok(SweepVariable::Rabi),
            other => Err(Error::InvalidSweep(format!(
                "unknown swept variable `{other}` (expected E, T, n_ryd or rabi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(Error::InvalidSweep(format!("unknown spacing `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepRange {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "points must be >= 2, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidSweep(format!(
                "need start < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "log spacing needs start > 0, got {}",
                self.start
            )));
        }
        Ok(())
    }

    /// The swept values in ascending order; both endpoints are exact.
    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.points - 1) as f64;
        let mut values: Vec<f64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect();
        values[0] = self.start;
        values[self.points - 1] = self.stop;
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKey {
    Omega0,
    Lambda,
    Gaps,
    Gamma,
    Tau,
    ThresholdField,
    C6,
    BlockadeRadius,
}

impl OutputKey {
    pub const ALL: [OutputKey; 8] = [
        OutputKey::Omega0,
        OutputKey::Lambda,
        OutputKey::Gaps,
        OutputKey::Gamma,
        OutputKey::Tau,
        OutputKey::ThresholdField,
        OutputKey::C6,
        OutputKey::BlockadeRadius,
    ];

    pub fn key(self) -> &'static str {
        match self {
            OutputKey::Omega0 => "omega0",
            OutputKey::Lambda => "lambda",
            OutputKey::Gaps => "gaps",
            OutputKey::Gamma => "gamma",
            OutputKey::Tau => "tau",
            OutputKey::ThresholdField => "threshold_field",
            OutputKey::C6 => "c6",
            OutputKey::BlockadeRadius => "blockade_radius",
        }
    }

    fn needs_field(self) -> bool {
        matches!(
            self,
            OutputKey::Omega0
                | OutputKey::Lambda
                | OutputKey::Gaps
                | OutputKey::Gamma
                | OutputKey::Tau
        )
    }
}

impl fmt::Display for OutputKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for OutputKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OutputKey::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| Error::UnknownOutput(s.to_string()))
    }
}

/// Values held constant during a sweep. Only the ones the requested outputs
/// depend on need to be set.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedValues {
    /// V/m.
    pub field: Option<f64>,
    /// K.
    pub temperature: Option<f64>,
    pub n_ryd: Option<u32>,
    /// rad/s.
    pub rabi: Option<f64>,
    pub n_vib: u32,
    pub levels: usize,
    pub model: PotentialModel,
    /// Reference C₆ (J·m⁶) and the principal quantum number it belongs to.
    pub c6_ref: Option<f64>,
    pub n_ref: Option<u32>,
}

impl Default for FixedValues {
    fn default() -> Self {
        FixedValues {
            field: None,
            temperature: None,
            n_ryd: None,
            rabi: None,
            n_vib: 1,
            levels: 6,
            model: PotentialModel::Quartic,
            c6_ref: None,
            n_ref: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub molecule: String,
    pub variable: SweepVariable,
    pub range: SweepRange,
    pub fixed: FixedValues,
    pub outputs: Vec<OutputKey>,
}

impl SweepSpec {
    /// Parses a comma-separated output list such as `omega0,gaps`.
    pub fn parse_outputs(list: &str) -> Result<Vec<OutputKey>> {
        let mut keys = Vec::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let key: OutputKey = part.parse()?;
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        if keys.is_empty() {
            return Err(Error::InvalidSweep("no outputs requested".into()));
        }
        Ok(keys)
    }

    fn has_field(&self) -> bool {
        self.variable == SweepVariable::Field || self.fixed.field.is_some()
    }

    fn has_temperature(&self) -> bool {
        self.variable == SweepVariable::Temperature || self.fixed.temperature.is_some()
    }

    fn has_n_ryd(&self) -> bool {
        self.variable == SweepVariable::NRyd || self.fixed.n_ryd.is_some()
    }

    fn has_rabi(&self) -> bool {
        self.variable == SweepVariable::Rabi || self.fixed.rabi.is_some()
    }

    fn missing(&self, key: OutputKey, what: &str) -> Error {
        Error::InvalidSweep(format!("output `{key}` needs {what}"))
    }

    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        if self.outputs.is_empty() {
            return Err(Error::InvalidSweep("no outputs requested".into()));
        }
        for &key in &self.outputs {
            if key.needs_field() && !self.has_field() {
                return Err(self.missing(key, "a field value"));
            }
            match key {
                OutputKey::Gaps if self.fixed.levels < 2 => {
                    return Err(Error::InvalidSweep(
                        "output `gaps` needs levels >= 2".into(),
                    ));
                }
                OutputKey::ThresholdField if !self.has_temperature() => {
                    return Err(self.missing(key, "a temperature"));
                }
                OutputKey::C6 | OutputKey::BlockadeRadius => {
                    if self.fixed.c6_ref.is_none() {
                        return Err(self.missing(key, "a reference C6 value"));
                    }
                    if self.has_n_ryd() && self.fixed.n_ref.is_none() {
                        return Err(self.missing(key, "the reference n of the given C6"));
                    }
                    if key == OutputKey::BlockadeRadius && !self.has_rabi() {
                        return Err(self.missing(key, "a Rabi frequency"));
                    }
                }
                _ => {}
            }
        }
        if self.variable == SweepVariable::NRyd {
            for v in self.range.values()? {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(Error::InvalidSweep(format!(
                        "n_ryd sweep must land on positive integers, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

struct Point {
    field: Option<f64>,
    temperature: Option<f64>,
    n_ryd: Option<u32>,
    rabi: Option<f64>,
}

fn evaluate(spec: &SweepSpec, mol: &MoleculeSpec, value: f64) -> Result<ReportRow> {
    let f = &spec.fixed;
    let mut p = Point {
        field: f.field,
        temperature: f.temperature,
        n_ryd: f.n_ryd,
        rabi: f.rabi,
    };
    match spec.variable {
        SweepVariable::Field => p.field = Some(value),
        SweepVariable::Temperature => p.temperature = Some(value),
        SweepVariable::NRyd => p.n_ryd = Some(value as u32),
        SweepVariable::Rabi => p.rabi = Some(value),
    }

    let mut row = ReportRow::new();
    match spec.variable {
        SweepVariable::NRyd => row.push(spec.variable.column(), super::Cell::Count(value as u64)),
        _ => row.number(spec.variable.column(), value),
    };

    let field = p.field.map(DriveField::new).transpose()?;
    let mut grid_converged = None;
    for &key in &spec.outputs {
        match key {
            OutputKey::Omega0 => {
                row.number("omega0_rad_per_s", intrinsic_frequency(mol, field.unwrap()));
            }
            OutputKey::Lambda => {
                row.number("lambda", anharmonicity(mol, field.unwrap())?);
            }
            OutputKey::Gaps => {
                let field = field.unwrap();
                let lambda = anharmonicity(mol, field)?;
                let grid = GridConfig::default_for(f.model, lambda);
                let res = solve_spectrum(mol, field, &grid, f.levels)?;
                for (n, gap) in res.gaps.iter().enumerate() {
                    row.number(format!("gap_{n}_J"), *gap);
                }
                grid_converged = res.validity.grid_converged;
            }
            OutputKey::Gamma | OutputKey::Tau => {
                let nu_eg = intrinsic_frequency(mol, field.unwrap()) / (2.0 * std::f64::consts::PI);
                let input = DecayInput::for_molecule(mol, nu_eg, f.n_vib)?;
                if key == OutputKey::Gamma {
                    row.number("gamma_per_s", decay_rate(&input));
                } else {
                    row.number("tau_s", mean_lifetime(&input));
                }
            }
            OutputKey::ThresholdField => {
                row.number(
                    "threshold_field_V_per_m",
                    thermal_threshold_field(p.temperature.unwrap(), mol)?,
                );
            }
            OutputKey::C6 | OutputKey::BlockadeRadius => {
                let c6_ref = f.c6_ref.unwrap();
                let c6 = match p.n_ryd {
                    Some(n) => c6_scaled(c6_ref, f.n_ref.unwrap(), n)?,
                    None => c6_ref,
                };
                if key == OutputKey::C6 {
                    row.number("c6_J_m6", c6);
                } else {
                    row.number("blockade_radius_m", blockade_radius(c6, p.rabi.unwrap())?);
                }
            }
        }
    }

    if let Some(field) = field {
        row.flag(
            "small_angle_ok",
            validity_report(mol, field)?.small_angle_ok,
        );
        if let Some(t) = p.temperature {
            let omega0 = intrinsic_frequency(mol, field);
            row.flag("noise_suppressed", K_B * t < HBAR * omega0);
        }
    }
    if spec.outputs.contains(&OutputKey::Gaps) {
        row.flag("grid_converged", grid_converged.unwrap_or(true));
    }
    Ok(row)
}

/// Evaluates every point of `spec`. Rows come back in ascending swept-value
/// order regardless of how the work was scheduled.
pub fn run_sweep(spec: &SweepSpec, registry: &MoleculeRegistry) -> Result<Vec<ReportRow>> {
    let mol = registry.get(&spec.molecule)?;
    spec.validate()?;
    let values = spec.range.values()?;
    values
        .par_iter()
        .map(|&v| evaluate(spec, &mol, v))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
