//! Amplitude damping of one qubit:
//! dρ/dt = Γ [σ₋ρσ₊ − ½(σ₊σ₋ρ + ρσ₊σ₋)], σ₊ = |1⟩⟨0|, σ₋ = |0⟩⟨1|.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const DET_TOL: f64 = 1e-10;
const DIAG_TOL: f64 = 1e-12;

/// 2×2 density matrix in the basis (|0⟩, |1⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(Matrix2<Complex64>);

impl DensityMatrix2 {
    /// Builds ρ from its independent entries; ρ₁₀ is set to conj(ρ₀₁).
    pub fn new(rho00: f64, rho01: Complex64, rho11: f64) -> Result<Self> {
        let m = Matrix2::new(
            Complex64::new(rho00, 0.0),
            rho01,
            rho01.conj(),
            Complex64::new(rho11, 0.0),
        );
        Self::from_matrix(m)
    }

    pub fn from_matrix(m: Matrix2<Complex64>) -> Result<Self> {
        let rho = DensityMatrix2(m);
        rho.check()?;
        Ok(rho)
    }

    pub fn ground() -> Self {
        DensityMatrix2(Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ))
    }

    pub fn excited() -> Self {
        DensityMatrix2(Matrix2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ))
    }

    /// (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let half = Complex64::new(0.5, 0.0);
        DensityMatrix2(Matrix2::new(half, half, half, half))
    }

    pub fn rho00(&self) -> Complex64 {
        self.0[(0, 0)]
    }
    pub fn rho01(&self) -> Complex64 {
        self.0[(0, 1)]
    }
    pub fn rho10(&self) -> Complex64 {
        self.0[(1, 0)]
    }
    pub fn rho11(&self) -> Complex64 {
        self.0[(1, 1)]
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    pub fn determinant(&self) -> f64 {
        (self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]).re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let off = (self.0[(1, 0)] - self.0[(0, 1)].conj()).norm();
        let diag = self.0[(0, 0)].im.abs().max(self.0[(1, 1)].im.abs());
        off.max(diag)
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn check(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::invalid(
                "rho",
                format!("not Hermitian (error {herm:e})"),
            ));
        }
        let trace = self.trace();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::invalid("rho", format!("trace {trace} is not 1")));
        }
        if self.determinant() < -DET_TOL
            || self.0[(0, 0)].re < -DIAG_TOL
            || self.0[(1, 1)].re < -DIAG_TOL
        {
            return Err(Error::invalid("rho", "not positive semidefinite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepper {
    /// Closed-form solution.
    Exact,
    /// Classical fourth-order Runge–Kutta with fixed step `dt` (the last step
    /// is shortened to land on `t`).
    Rk4 { dt: f64 },
}

/// Right-hand side of the damping equation.
pub fn lindblad_rhs(rho: &Matrix2<Complex64>, gamma: f64) -> Matrix2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let lower = Matrix2::new(zero, one, zero, zero); // σ₋ = |0⟩⟨1|
    let raise = lower.adjoint();
    let number = raise * lower;
    let jump = lower * rho * raise;
    let anti = number * rho + rho * number;
    (jump - anti * Complex64::new(0.5, 0.0)) * Complex64::new(gamma, 0.0)
}

pub fn evolve_lindblad(
    rho0: &DensityMatrix2,
    gamma: f64,
    t: f64,
    stepper: Stepper,
) -> Result<DensityMatrix2> {
    rho0.check()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid(
            "gamma",
            format!("must be non-negative, got {gamma}"),
        ));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(
            "t",
            format!("must be non-negative, got {t}"),
        ));
    }
    if t == 0.0 {
        return Ok(*rho0);
    }

    match stepper {
        Stepper::Exact => {
            let population = (-gamma * t).exp();
            let coherence = (-0.5 * gamma * t).exp();
            let rho11 = rho0.rho11().re * population;
            let rho01 = rho0.rho01() * coherence;
            let m = Matrix2::new(
                Complex64::new(1.0 - rho11, 0.0),
                rho01,
                rho01.conj(),
                Complex64::new(rho11, 0.0),
            );
            Ok(DensityMatrix2(m))
        }
        Stepper::Rk4 { dt } => {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
            }
            if dt * gamma > 0.1 {
                return Err(Error::UnstableStep {
                    product: dt * gamma,
                });
            }
            let steps = (t / dt).ceil() as usize;
            let h = t / steps as f64;
            let half = Complex64::new(0.5 * h, 0.0);
            let full = Complex64::new(h, 0.0);
            let sixth = Complex64::new(h / 6.0, 0.0);
            let two = Complex64::new(2.0, 0.0);
            let mut rho = rho0.0;
            for _ in 0..steps {
                let k1 = lindblad_rhs(&rho, gamma);
                let k2 = lindblad_rhs(&(rho + k1 * half), gamma);
                let k3 = lindblad_rhs(&(rho + k2 * half), gamma);
                let k4 = lindblad_rhs(&(rho + k3 * full), gamma);
                rho += (k1 + k2 * two + k3 * two + k4) * sixth;
            }
            Ok(DensityMatrix2(rho))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GAMMA: f64 = 14.77;

    #[test]
    fn excited_population_after_one_lifetime() {
        let rho = evolve_lindblad(
            &DensityMatrix2::excited(),
            GAMMA,
            1.0 / GAMMA,
            Stepper::Exact,
        )
        .unwrap();
        assert!((rho.rho11().re - (-1f64).exp()).abs() < 1e-12);
        assert!((rho.rho11().re - 0.36788).abs() < 1e-5);
    }

    #[test]
    fn coherence_decays_at_half_rate() {
        let rho0 = DensityMatrix2::plus();
        let rho = evolve_lindblad(&rho0, GAMMA, 2.0 / GAMMA, Stepper::Exact).unwrap();
        assert!((rho.rho01().re - 0.5 * (-1f64).exp()).abs() < 1e-12);
        assert!(rho.rho01().im.abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let rho0 = DensityMatrix2::new(0.3, Complex64::new(0.1, -0.2), 0.7).unwrap();
        for stepper in [Stepper::Exact, Stepper::Rk4 { dt: 1e-3 }] {
            assert_eq!(evolve_lindblad(&rho0, GAMMA, 0.0, stepper).unwrap(), rho0);
        }
    }

    #[test]
    fn rk4_step_guard() {
        let err = evolve_lindblad(
            &DensityMatrix2::excited(),
            GAMMA,
            1.0,
            Stepper::Rk4 { dt: 0.2 / GAMMA },
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnstableStep { .. }), "{err}");
    }

    #[test]
    fn rk4_matches_exact() {
        let rho0 = DensityMatrix2::new(0.2, Complex64::new(0.3, 0.25), 0.8).unwrap();
        for t in [0.5 / GAMMA, 3.0 / GAMMA] {
            let exact = evolve_lindblad(&rho0, GAMMA, t, Stepper::Exact).unwrap();
            let rk4 = evolve_lindblad(&rho0, GAMMA, t, Stepper::Rk4 { dt: 1e-3 / GAMMA }).unwrap();
            assert!((exact.matrix() - rk4.matrix()).norm() < 1e-9);
        }
    }

    #[test]
    fn invalid_states_rejected() {
        assert!(DensityMatrix2::new(0.5, Complex64::new(0.0, 0.0), 0.6).is_err());
        assert!(DensityMatrix2::new(0.5, Complex64::new(0.6, 0.0), 0.5).is_err());
        assert!(DensityMatrix2::new(1.1, Complex64::new(0.0, 0.0), -0.1).is_err());
        let m = Matrix2::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(0.2, 0.0),
            Complex64::new(0.5, 0.0),
        );
        assert!(DensityMatrix2::from_matrix(m).is_err());
    }

    fn valid_rho() -> impl Strategy<Value = DensityMatrix2> {
        (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(p, frac, phase)| {
            let max = (p * (1.0 - p)).sqrt();
            let c = Complex64::from_polar(frac * max, phase);
            DensityMatrix2::new(1.0 - p, c, p).unwrap()
        })
    }

    proptest! {
        #[test]
        fn evolution_stays_physical(rho0 in valid_rho(), t_units in 0.0f64..10.0) {
            let t = t_units / GAMMA;
            let exact = evolve_lindblad(&rho0, GAMMA, t, Stepper::Exact).unwrap();
            prop_assert!(exact.check().is_ok());
            let rk4 = evolve_lindblad(&rho0, GAMMA, t, Stepper::Rk4 { dt: 0.01 / GAMMA }).unwrap();
            prop_assert!(rk4.check().is_ok());
        }
    }
}
