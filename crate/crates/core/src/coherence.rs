//! Spontaneous-emission lifetime of the qubit and the thermal-noise
//! threshold field.

use std::f64::consts::PI;

use serde::Serialize;

use crate::physconst::{C, COULOMB_K, E_CHARGE, H, HBAR, K_B};
use crate::spectrum::{anharmonicity, intrinsic_frequency, DriveField, MoleculeSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayInput {
    /// Transition frequency ν_eg, Hz.
    pub nu_eg: f64,
    /// Moment of inertia, kg·m².
    pub inertia: f64,
    /// Dipole length, m.
    pub length: f64,
    /// Vibrational quantum number of the excited level.
    pub n_vib: u32,
}

impl DecayInput {
    pub fn new(nu_eg: f64, inertia: f64, length: f64, n_vib: u32) -> Result<Self> {
        let input = DecayInput {
            nu_eg,
            inertia,
            length,
            n_vib,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("nu_eg", self.nu_eg),
            ("J", self.inertia),
            ("l", self.length),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        if self.n_vib < 1 {
            return Err(Error::invalid("n_vib", "must be at least 1"));
        }
        Ok(())
    }

    /// The molecule's J and l at an explicit transition frequency.
    pub fn for_molecule(mol: &MoleculeSpec, nu_eg: f64, n_vib: u32) -> Result<Self> {
        DecayInput::new(nu_eg, mol.inertia, mol.length, n_vib)
    }
}

/// Harmonic-oscillator angle matrix element |θ_eg|² = n h / (8π² J ν_eg).
pub fn angle_matrix_element_sq(input: &DecayInput) -> f64 {
    input.n_vib as f64 * H / (8.0 * PI * PI * input.inertia * input.nu_eg)
}

/// Γ = 4(2π)⁴ ν³ (e²/4πε₀) l² |θ_eg|² / (3hc³), s⁻¹.
pub fn decay_rate(input: &DecayInput) -> f64 {
    let two_pi = 2.0 * PI;
    let theta_sq = angle_matrix_element_sq(input);
    4.0 * two_pi.powi(4)
        * input.nu_eg.powi(3)
        * (E_CHARGE * E_CHARGE * COULOMB_K)
        * input.length.powi(2)
        * theta_sq
        / (3.0 * H * C.powi(3))
}

/// τ = 3Jc³ / (2(2π)² ν² (e²/4πε₀) l² n), s.
///
/// Evaluated in closed form rather than as `1 / decay_rate`.
pub fn mean_lifetime(input: &DecayInput) -> f64 {
    let two_pi = 2.0 * PI;
    3.0 * input.inertia * C.powi(3)
        / (2.0
            * two_pi.powi(2)
            * input.nu_eg.powi(2)
            * (E_CHARGE * E_CHARGE * COULOMB_K)
            * input.length.powi(2)
            * input.n_vib as f64)
}

/// Field E* at which ħ√(pE/J) = k_B T; stronger fields suppress thermal
/// excitation. E* = (k_B T)² J / (ħ² p).
pub fn thermal_threshold_field(temperature: f64, mol: &MoleculeSpec) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::invalid(
            "T",
            format!("must be positive, got {temperature}"),
        ));
    }
    let thermal = K_B * temperature;
    Ok(thermal * thermal * mol.inertia / (HBAR * HBAR * mol.dipole))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitParams {
    pub omega0: f64,
    pub lambda: f64,
    /// ν_eg = ω₀/2π used for the decay rate, Hz.
    pub nu_eg: f64,
    pub gamma: f64,
    pub tau: f64,
    /// Threshold field at `temperature`, V/m.
    pub threshold_field: f64,
    pub temperature: f64,
    /// k_B T < ħω₀ at this operating point.
    pub noise_suppressed: bool,
}

/// Everything about one operating point, with ν_eg taken from the field.
pub fn qubit_summary(
    mol: &MoleculeSpec,
    field: DriveField,
    temperature: f64,
    n_vib: u32,
) -> Result<QubitParams> {
    mol.validate()?;
    let lambda = anharmonicity(mol, field)?;
    let omega0 = intrinsic_frequency(mol, field);
    let nu_eg = omega0 / (2.0 * PI);
    let input = DecayInput::for_molecule(mol, nu_eg, n_vib)?;
    let gamma = decay_rate(&input);
    let threshold_field = thermal_threshold_field(temperature, mol)?;
    Ok(QubitParams {
        omega0,
        lambda,
        nu_eg,
        gamma,
        tau: 1.0 / gamma,
        threshold_field,
        temperature,
        noise_suppressed: K_B * temperature < HBAR * omega0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hcl_decay() -> DecayInput {
        DecayInput::for_molecule(&MoleculeSpec::hcl(), 1e13, 1).unwrap()
    }

    #[test]
    fn hcl_lifetime() {
        let input = hcl_decay();
        let tau = mean_lifetime(&input);
        assert!((tau / 6.77e-2 - 1.0).abs() < 5e-3, "{tau}");
        let gamma = decay_rate(&input);
        assert!((gamma / 14.77 - 1.0).abs() < 5e-3, "{gamma}");
        assert!((gamma * tau - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decay_rate_scalings() {
        let base = hcl_decay();
        let g = decay_rate(&base);
        let tau = mean_lifetime(&base);
        let n2 = DecayInput { n_vib: 2, ..base };
        assert!((decay_rate(&n2) / g - 2.0).abs() < 1e-14);
        assert!((mean_lifetime(&n2) / tau - 0.5).abs() < 1e-14);
        let nu2 = DecayInput {
            nu_eg: 2.0 * base.nu_eg,
            ..base
        };
        assert!((decay_rate(&nu2) / g - 4.0).abs() < 1e-14);
        assert!((mean_lifetime(&nu2) / tau - 0.25).abs() < 1e-14);
    }

    #[test]
    fn substituted_form_matches() {
        let input = hcl_decay();
        let compact = 8.0 * PI * PI / 3.0
            * input.n_vib as f64
            * input.nu_eg.powi(2)
            * COULOMB_K
            * E_CHARGE.powi(2)
            * input.length.powi(2)
            / (input.inertia * C.powi(3));
        assert!((decay_rate(&input) / compact - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rate_and_lifetime_are_inverse_over_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..1_000_000 {
            let input = DecayInput {
                nu_eg: 10f64.powf(rng.random_range(6.0..15.0)),
                inertia: 10f64.powf(rng.random_range(-48.0..-44.0)),
                length: 10f64.powf(rng.random_range(-11.0..-8.0)),
                n_vib: rng.random_range(1..20),
            };
            let (gamma, tau) = (decay_rate(&input), mean_lifetime(&input));
            assert!(gamma > 0.0 && tau > 0.0);
            worst = worst.max((gamma * tau - 1.0).abs());
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn invalid_decay_inputs() {
        assert!(DecayInput::new(0.0, 1.0, 1.0, 1).is_err());
        assert!(DecayInput::new(1.0, 1.0, 1.0, 0).is_err());
        assert!(DecayInput::new(1.0, -1.0, 1.0, 1).is_err());
    }

    #[test]
    fn hcl_thresholds() {
        let hcl = MoleculeSpec::hcl();
        let room = thermal_threshold_field(300.0, &hcl).unwrap();
        let cold = thermal_threshold_field(3.0, &hcl).unwrap();
        assert!((room / 1.156e10 - 1.0).abs() < 2e-3, "{room}");
        assert!((cold / 1.156e6 - 1.0).abs() < 2e-3, "{cold}");
        let hot = thermal_threshold_field(3000.0, &hcl).unwrap();
        assert!((hot / room - 100.0).abs() < 1e-10);
        assert!(thermal_threshold_field(0.0, &hcl).is_err());
    }

    #[test]
    fn threshold_inverts_the_condition() {
        let hcl = MoleculeSpec::hcl();
        for t in [0.01, 3.0, 77.0, 300.0, 1e4] {
            let e = thermal_threshold_field(t, &hcl).unwrap();
            let w = intrinsic_frequency(&hcl, DriveField::new(e).unwrap());
            assert!((HBAR * w / (K_B * t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn summary_at_weak_field_is_noisy() {
        let hcl = MoleculeSpec::hcl();
        let q = qubit_summary(&hcl, DriveField::new(300.0).unwrap(), 300.0, 1).unwrap();
        assert!(!q.noise_suppressed);
        assert!((q.gamma * q.tau - 1.0).abs() < 1e-12);
        assert!(q.gamma > 0.0 && q.tau > 0.0 && q.threshold_field > 0.0);
    }

    #[test]
    fn summary_at_threshold_is_on_the_boundary() {
        let hcl = MoleculeSpec::hcl();
        let q = qubit_summary(&hcl, DriveField::new(1.16e10).unwrap(), 300.0, 1).unwrap();
        assert!((HBAR * q.omega0 / (K_B * 300.0) - 1.0).abs() < 0.01);
        assert!(qubit_summary(&hcl, DriveField::new(0.0).unwrap(), 300.0, 1).is_err());
    }

    proptest! {
        #[test]
        fn threshold_is_exact_inverse_and_positive(
            p_debye in 0.05f64..10.0,
            j_exp in -48.0f64..-44.0,
            t in 1e-3f64..1e4,
            n_vib in 1u32..10,
        ) {
            let mol = MoleculeSpec::new("m", p_debye * crate::physconst::DEBYE, 10f64.powf(j_exp), 1e-10).unwrap();
            let e = thermal_threshold_field(t, &mol).unwrap();
            prop_assert!(e > 0.0);
            let w = intrinsic_frequency(&mol, DriveField::new(e).unwrap());
            prop_assert!((HBAR * w / (K_B * t) - 1.0).abs() < 1e-12);
            let q = qubit_summary(&mol, DriveField::new(e).unwrap(), t, n_vib).unwrap();
            prop_assert!(q.gamma > 0.0 && q.tau > 0.0 && q.omega0 > 0.0 && q.lambda > 0.0);
        }
    }
}
