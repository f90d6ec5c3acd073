//! Single-point reports behind the non-sweep subcommands. Each returns its
//! data rows and, separately, any validity warnings.

use super::report::{Cell, ReportRow};
use crate::coherence::{
    angle_matrix_element_sq, decay_rate, mean_lifetime, thermal_threshold_field, DecayInput,
};
use crate::dynamics::{simulate_gate, standard_cz_pulses, BlockadeMode};
use crate::physconst::{HBAR, K_B};
use crate::rydberg::{blockade_radius, blockade_regime, DEFAULT_BLOCKADE_MARGIN};
use crate::spectrum::{
    anharmonicity, intrinsic_frequency, solve_spectrum, DriveField, GridConfig, MoleculeSpec,
    PotentialModel,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub rows: Vec<ReportRow>,
    pub warnings: Vec<String>,
}

/// Lowest `levels` energies, one row per level. `grid` defaults to
/// [`GridConfig::default_for`].
pub fn spectrum_report(
    mol: &MoleculeSpec,
    field: DriveField,
    model: PotentialModel,
    levels: usize,
    grid: Option<GridConfig>,
) -> Result<Output> {
    let lambda = anharmonicity(mol, field)?;
    let grid = grid.unwrap_or_else(|| GridConfig::default_for(model, lambda));
    let res = solve_spectrum(mol, field, &grid, levels)?;
    let scaled = res.scaled_energies();

    let mut out = Output::default();
    for (n, (&e, &s)) in res.energies.iter().zip(&scaled).enumerate() {
        let mut row = ReportRow::new();
        row.push("level", Cell::Count(n as u64))
            .number("energy_J", e)
            .number("energy_hbar_omega0", s)
            .number("omega0_rad_per_s", res.omega0)
            .number("lambda", res.lambda);
        out.rows.push(row);
    }
    let v = &res.validity;
    if !v.small_angle_ok {
        out.warnings.push(format!(
            "zero-point angular spread {:.4} rad at E = {:e} V/m violates the small-angle condition",
            v.zero_point_spread_rad,
            field.strength()
        ));
    }
    if v.grid_converged == Some(false) {
        out.warnings
            .push("energies changed by more than 1e-8 relative under grid doubling".into());
    }
    Ok(out)
}

pub fn lifetime_report(mol: &MoleculeSpec, nu_eg: f64, n_vib: u32) -> Result<Output> {
    let input = DecayInput::for_molecule(mol, nu_eg, n_vib)?;
    let mut row = ReportRow::new();
    row.number("nu_eg_Hz", nu_eg)
        .push("n_vib", Cell::Count(n_vib as u64))
        .number("theta_eg_sq_rad2", angle_matrix_element_sq(&input))
        .number("gamma_per_s", decay_rate(&input))
        .number("tau_s", mean_lifetime(&input));
    Ok(Output {
        rows: vec![row],
        warnings: Vec::new(),
    })
}

/// Threshold field at `temperature`; with a field given, also whether the
/// thermal condition k_B T < ħω₀ holds there.
pub fn threshold_report(
    mol: &MoleculeSpec,
    temperature: f64,
    field: Option<DriveField>,
) -> Result<Output> {
    let threshold = thermal_threshold_field(temperature, mol)?;
    let mut out = Output::default();
    let mut row = ReportRow::new();
    row.number("T_K", temperature)
        .number("threshold_field_V_per_m", threshold);
    if let Some(field) = field {
        let omega0 = intrinsic_frequency(mol, field);
        let ok = K_B * temperature < HBAR * omega0;
        row.number("E_V_per_m", field.strength())
            .flag("noise_suppressed", ok);
        if !ok {
            out.warnings.push(format!(
                "E = {:e} V/m is below the thermal threshold {threshold:e} V/m at {temperature} K",
                field.strength()
            ));
        }
    }
    out.rows.push(row);
    Ok(out)
}

/// Blockade radius for `c6` at `rabi`; with `u_over_omega` given, the
/// regime check for U = ratio·ħΩ.
pub fn blockade_report(c6: f64, rabi: f64, u_over_omega: Option<f64>) -> Result<Output> {
    let mut out = Output::default();
    let mut row = ReportRow::new();
    row.number("c6_J_m6", c6)
        .number("rabi_rad_per_s", rabi)
        .number("blockade_radius_m", blockade_radius(c6, rabi)?);
    if let Some(ratio) = u_over_omega {
        let u = ratio * HBAR * rabi;
        let ok = blockade_regime(u, rabi, DEFAULT_BLOCKADE_MARGIN)?;
        row.number("u_int_J", u).flag("blockaded", ok);
        if !ok {
            out.warnings.push(format!(
                "U/(hbar*Omega) = {ratio} is below the blockade margin {DEFAULT_BLOCKADE_MARGIN}"
            ));
        }
    }
    out.rows.push(row);
    Ok(out)
}

/// Controlled-phase sequence at U = ratio·ħΩ: the four diagonal phases,
/// leakage and fidelity to diag(1, −1, −1, −1).
pub fn gate_report(rabi: f64, u_over_omega: f64, mode: BlockadeMode) -> Result<Output> {
    let seq = standard_cz_pulses(rabi)?;
    let u = u_over_omega * HBAR * rabi;
    let gate = simulate_gate(&seq, u, mode)?;

    let mut out = Output::default();
    let mut row = ReportRow::new();
    row.number("u_over_omega", u_over_omega);
    for (label, o) in ["00", "01", "10", "11"].iter().zip(&gate.outputs) {
        let f = o.phase_factor();
        row.number(format!("phase_{label}_re"), f.re)
            .number(format!("phase_{label}_im"), f.im);
    }
    row.number("leakage", gate.leakage())
        .number("max_leakage", gate.max_leakage())
        .number("cz_fidelity", gate.cz_fidelity())
        .number("duration_s", seq.total_duration());
    out.rows.push(row);
    if mode == BlockadeMode::FiniteU && u_over_omega < DEFAULT_BLOCKADE_MARGIN {
        out.warnings.push(format!(
            "U/(hbar*Omega) = {u_over_omega} is below the blockade margin {DEFAULT_BLOCKADE_MARGIN}"
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(row: &ReportRow, name: &str) -> f64 {
        row.get(name).unwrap().as_f64().unwrap()
    }

    #[test]
    fn spectrum_rows_per_level() {
        let hcl = MoleculeSpec::hcl();
        let out = spectrum_report(
            &hcl,
            DriveField::new(1e12).unwrap(),
            PotentialModel::Quartic,
            6,
            None,
        )
        .unwrap();
        assert_eq!(out.rows.len(), 6);
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        let e: Vec<f64> = out.rows.iter().map(|r| num(r, "energy_J")).collect();
        let gaps: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{gaps:?}");

        let out = spectrum_report(
            &hcl,
            DriveField::new(300.0).unwrap(),
            PotentialModel::FullCosine,
            3,
            None,
        )
        .unwrap();
        assert!(
            out.warnings[0].contains("small-angle"),
            "{:?}",
            out.warnings
        );
    }

    #[test]
    fn gate_phases() {
        let out = gate_report(1e6, 100.0, BlockadeMode::Ideal).unwrap();
        let row = &out.rows[0];
        for (label, want) in [("00", 1.0), ("01", -1.0), ("10", -1.0), ("11", -1.0)] {
            assert!((num(row, &format!("phase_{label}_re")) - want).abs() < 1e-12);
        }
        assert!((num(row, "cz_fidelity") - 1.0).abs() < 1e-12);

        let out = gate_report(1e6, 3.0, BlockadeMode::FiniteU).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(num(&out.rows[0], "cz_fidelity") < 0.999);
    }

    #[test]
    fn blockade_and_threshold() {
        let out = blockade_report(1.0546e-46, 1e6, Some(5.0)).unwrap();
        assert!((num(&out.rows[0], "blockade_radius_m") / 1e-3 - 1.0).abs() < 1e-3);
        assert_eq!(out.rows[0].get("blockaded"), Some(Cell::Flag(false)));
        assert_eq!(out.warnings.len(), 1);

        let hcl = MoleculeSpec::hcl();
        let out = threshold_report(&hcl, 300.0, Some(DriveField::new(300.0).unwrap())).unwrap();
        assert_eq!(out.rows[0].get("noise_suppressed"), Some(Cell::Flag(false)));
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn lifetime_row() {
        let out = lifetime_report(&MoleculeSpec::hcl(), 1e13, 1).unwrap();
        let row = &out.rows[0];
        assert!((num(row, "tau_s") / 0.07 - 1.0).abs() < 0.05);
        assert!((num(row, "tau_s") * num(row, "gamma_per_s") - 1.0).abs() < 1e-12);
    }
}
