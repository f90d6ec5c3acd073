//! Two three-level molecules {|0⟩, |1⟩, |r⟩}⊗2 driven between a qubit level
//! and the Rydberg level, with a van der Waals shift U on |rr⟩.
//!
//! Units: ħ = 1 inside this module, so Hamiltonians are in rad/s. The
//! interaction U enters the public API in joules and is divided by ħ once.
//!
//! Phase convention: a resonant pulse of area A rotates (|c⟩, |r⟩) by
//! exp(−i(A/2)σₓ). A π pulse maps |c⟩ → −i|r⟩ and a 2π pulse gives −1.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

use crate::physconst::HBAR;
use crate::{Error, Result};

type Vector9 = SVector<Complex64, 9>;
type Matrix9 = SMatrix<Complex64, 9, 9>;

const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Zero,
    One,
    Rydberg,
}

impl Level {
    const ALL: [Level; 3] = [Level::Zero, Level::One, Level::Rydberg];

    fn index(self) -> usize {
        match self {
            Level::Zero => 0,
            Level::One => 1,
            Level::Rydberg => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitLevel {
    Zero,
    One,
}

impl From<QubitLevel> for Level {
    fn from(q: QubitLevel) -> Level {
        match q {
            QubitLevel::Zero => Level::Zero,
            QubitLevel::One => Level::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Molecule {
    /// Left factor of the product basis; the control in the CZ sequence.
    First,
    /// Right factor; the target.
    Second,
}

fn basis_index(a: Level, b: Level) -> usize {
    3 * a.index() + b.index()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Amplitudes over 00, 01, 0r, 10, 11, 1r, r0, r1, rr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoMoleculeState(Vector9);

impl TwoMoleculeState {
    pub fn basis(a: Level, b: Level) -> Self {
        let mut v = Vector9::zeros();
        v[basis_index(a, b)] = c(1.0);
        TwoMoleculeState(v)
    }

    pub fn from_amplitudes(amplitudes: [Complex64; 9]) -> Result<Self> {
        let state = TwoMoleculeState(Vector9::from_column_slice(&amplitudes));
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid("state", format!("norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// (|0r⟩ + |r0⟩)/√2.
    pub fn psi_plus() -> Self {
        Self::symmetric_pair(1.0)
    }

    /// (|0r⟩ − |r0⟩)/√2.
    pub fn psi_minus() -> Self {
        Self::symmetric_pair(-1.0)
    }

    fn symmetric_pair(sign: f64) -> Self {
        let mut v = Vector9::zeros();
        v[basis_index(Level::Zero, Level::Rydberg)] = c(FRAC_1_SQRT_2);
        v[basis_index(Level::Rydberg, Level::Zero)] = c(sign * FRAC_1_SQRT_2);
        TwoMoleculeState(v)
    }

    pub fn amplitude(&self, a: Level, b: Level) -> Complex64 {
        self.0[basis_index(a, b)]
    }

    pub fn population(&self, a: Level, b: Level) -> f64 {
        self.amplitude(a, b).norm_sqr()
    }

    pub fn amplitudes(&self) -> [Complex64; 9] {
        let mut out = [c(0.0); 9];
        out.copy_from_slice(self.0.as_slice());
        out
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &TwoMoleculeState) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &TwoMoleculeState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Probability outside the four qubit states.
    pub fn leakage(&self) -> f64 {
        let kept: f64 = QUBIT_BASIS
            .iter()
            .map(|&(a, b)| self.population(a.into(), b.into()))
            .sum();
        (self.0.norm_squared() - kept).max(0.0)
    }
}

/// One laser segment: `target` is driven between `coupled` and |r⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub target: Molecule,
    pub coupled: QubitLevel,
    /// Pulse area Ω·duration, rad.
    pub area: f64,
    /// Ω, rad/s.
    pub rabi: f64,
    /// Laser detuning Δ, rad/s; enters as −Δ|r⟩⟨r|.
    pub detuning: f64,
}

impl PulseSegment {
    pub fn resonant(target: Molecule, coupled: QubitLevel, area: f64, rabi: f64) -> Self {
        PulseSegment {
            target,
            coupled,
            area,
            rabi,
            detuning: 0.0,
        }
    }

    pub fn duration(&self) -> f64 {
        self.area / self.rabi
    }

    fn validate(&self) -> Result<()> {
        if !(self.area.is_finite() && self.area > 0.0) {
            return Err(Error::invalid(
                "area",
                format!("must be positive, got {}", self.area),
            ));
        }
        if !(self.rabi.is_finite() && self.rabi > 0.0) {
            return Err(Error::invalid(
                "rabi",
                format!("must be positive, got {}", self.rabi),
            ));
        }
        if !self.detuning.is_finite() {
            return Err(Error::invalid("detuning", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    segments: Vec<PulseSegment>,
}

impl PulseSequence {
    pub fn new(segments: Vec<PulseSegment>) -> Result<Self> {
        for s in &segments {
            s.validate()?;
        }
        Ok(PulseSequence { segments })
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn durations(&self) -> Vec<f64> {
        self.segments.iter().map(PulseSegment::duration).collect()
    }

    pub fn total_duration(&self) -> f64 {
        self.durations().iter().sum()
    }
}

/// π on the control, 2π on the target, π on the control; every segment
/// couples |1⟩ ↔ |r⟩.
pub fn standard_cz_pulses(rabi: f64) -> Result<PulseSequence> {
    PulseSequence::new(vec![
        PulseSegment::resonant(Molecule::First, QubitLevel::One, PI, rabi),
        PulseSegment::resonant(Molecule::Second, QubitLevel::One, 2.0 * PI, rabi),
        PulseSegment::resonant(Molecule::First, QubitLevel::One, PI, rabi),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockadeMode {
    /// |rr⟩ is removed from the dynamics entirely.
    Ideal,
    /// Full nine-level evolution with the finite shift U.
    FiniteU,
}

/// How finite-U segments are propagated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Propagator {
    /// exp(−iHt) from the Hermitian eigendecomposition of H.
    #[default]
    Exact,
    /// Fixed-step RK4 with the given number of steps per period of the
    /// fastest frequency in H.
    Rk4 { steps_per_period: usize },
}

struct Drive {
    target: Molecule,
    coupled: Level,
    rabi: f64,
    detuning: f64,
}

fn hamiltonian(drives: &[Drive], u_over_hbar: f64) -> Matrix9 {
    let mut h = Matrix9::zeros();
    for d in drives {
        for other in Level::ALL {
            let (ground, rydberg) = match d.target {
                Molecule::First => (
                    basis_index(d.coupled, other),
                    basis_index(Level::Rydberg, other),
                ),
                Molecule::Second => (
                    basis_index(other, d.coupled),
                    basis_index(other, Level::Rydberg),
                ),
            };
            h[(ground, rydberg)] += c(0.5 * d.rabi);
            h[(rydberg, ground)] += c(0.5 * d.rabi);
            h[(rydberg, rydberg)] -= c(d.detuning);
        }
    }
    let rr = basis_index(Level::Rydberg, Level::Rydberg);
    h[(rr, rr)] += c(u_over_hbar);
    h
}

fn propagate(h: &Matrix9, psi: &Vector9, t: f64, propagator: Propagator) -> Result<Vector9> {
    if t == 0.0 {
        return Ok(*psi);
    }
    let out = match propagator {
        Propagator::Exact => {
            let eigen = h.symmetric_eigen();
            let phases = Matrix9::from_diagonal(
                &eigen
                    .eigenvalues
                    .map(|e| Complex64::from_polar(1.0, -e * t)),
            );
            let u = eigen.eigenvectors * phases * eigen.eigenvectors.adjoint();
            u * psi
        }
        Propagator::Rk4 { steps_per_period } => {
            let omega_max = (0..9)
                .map(|i| h.row(i).iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max);
            let periods = t * omega_max / (2.0 * PI);
            let steps = ((periods * steps_per_period as f64).ceil() as usize).max(1);
            let dt = t / steps as f64;
            let minus_i = Complex64::new(0.0, -1.0);
            let rhs = |v: &Vector9| (h * v) * minus_i;
            let mut v = *psi;
            for _ in 0..steps {
                let k1 = rhs(&v);
                let k2 = rhs(&(v + k1 * c(0.5 * dt)));
                let k3 = rhs(&(v + k2 * c(0.5 * dt)));
                let k4 = rhs(&(v + k3 * c(dt)));
                v += (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(dt / 6.0);
            }
            v
        }
    };
    let drift = (out.norm() - psi.norm()).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::NormDrift { drift });
    }
    Ok(out)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "t",
            format!("must be non-negative, got {t}"),
        ))
    }
}

fn check_rabi(rabi: f64) -> Result<()> {
    if rabi.is_finite() && rabi > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "rabi",
            format!("must be positive, got {rabi}"),
        ))
    }
}

/// Both molecules driven 0 ↔ r simultaneously, starting from |00⟩.
pub fn collective_rabi(
    rabi: f64,
    u_int: f64,
    t: f64,
    mode: BlockadeMode,
) -> Result<TwoMoleculeState> {
    check_rabi(rabi)?;
    check_time(t)?;
    match mode {
        BlockadeMode::Ideal => {
            // {|00⟩, |ψ₊⟩} is a two-level system with coupling √2Ω.
            let angle = 0.5 * SQRT_2 * rabi * t;
            let mut v = Vector9::zeros();
            v[basis_index(Level::Zero, Level::Zero)] = c(angle.cos());
            let excited = Complex64::new(0.0, -angle.sin() * FRAC_1_SQRT_2);
            v[basis_index(Level::Zero, Level::Rydberg)] = excited;
            v[basis_index(Level::Rydberg, Level::Zero)] = excited;
            Ok(TwoMoleculeState(v))
        }
        BlockadeMode::FiniteU => {
            let drives = [Molecule::First, Molecule::Second].map(|target| Drive {
                target,
                coupled: Level::Zero,
                rabi,
                detuning: 0.0,
            });
            let h = hamiltonian(&drives, u_int / HBAR);
            let start = TwoMoleculeState::basis(Level::Zero, Level::Zero).0;
            Ok(TwoMoleculeState(propagate(
                &h,
                &start,
                t,
                Propagator::Exact,
            )?))
        }
    }
}

/// Exact 2×2 propagator on (|c⟩, |r⟩) for H = (Ω/2)σₓ − Δ|r⟩⟨r|.
fn two_level_propagator(rabi: f64, detuning: f64, t: f64) -> Matrix2<Complex64> {
    let w = 0.5 * (rabi * rabi + detuning * detuning).sqrt();
    let (sin, cos) = (w * t).sin_cos();
    let global = Complex64::from_polar(1.0, 0.5 * detuning * t);
    // exp(−i t [[Δ/2, Ω/2], [Ω/2, −Δ/2]])
    let s = if w > 0.0 { sin / w } else { t };
    let i = Complex64::new(0.0, 1.0);
    Matrix2::new(
        c(cos) - i * (0.5 * detuning * s),
        -i * (0.5 * rabi * s),
        -i * (0.5 * rabi * s),
        c(cos) + i * (0.5 * detuning * s),
    ) * global
}

/// One segment with the |rr⟩ amplitude projected out: when the other
/// molecule sits in |r⟩ the drive is inert.
fn apply_ideal(psi: &mut Vector9, seg: &PulseSegment) {
    let u = two_level_propagator(seg.rabi, seg.detuning, seg.duration());
    let coupled = Level::from(seg.coupled);
    for other in [Level::Zero, Level::One] {
        let (g, r) = match seg.target {
            Molecule::First => (
                basis_index(coupled, other),
                basis_index(Level::Rydberg, other),
            ),
            Molecule::Second => (
                basis_index(other, coupled),
                basis_index(other, Level::Rydberg),
            ),
        };
        let (a, b) = (psi[g], psi[r]);
        psi[g] = u[(0, 0)] * a + u[(0, 1)] * b;
        psi[r] = u[(1, 0)] * a + u[(1, 1)] * b;
    }
}

const QUBIT_BASIS: [(QubitLevel, QubitLevel); 4] = [
    (QubitLevel::Zero, QubitLevel::Zero),
    (QubitLevel::Zero, QubitLevel::One),
    (QubitLevel::One, QubitLevel::Zero),
    (QubitLevel::One, QubitLevel::One),
];

/// Ideal controlled-phase target diag(1, −1, −1, −1).
pub const CZ_TARGET: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct BasisOutput {
    pub input: (QubitLevel, QubitLevel),
    pub final_state: TwoMoleculeState,
    /// Diagonal amplitude ⟨input|U|input⟩.
    pub amplitude: Complex64,
    /// Argument of `amplitude`, rad.
    pub phase: f64,
    pub leakage: f64,
}

impl BasisOutput {
    /// `amplitude / |amplitude|`.
    pub fn phase_factor(&self) -> Complex64 {
        let n = self.amplitude.norm();
        if n > 0.0 {
            self.amplitude / n
        } else {
            c(0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateResult {
    /// In the order 00, 01, 10, 11.
    pub outputs: Vec<BasisOutput>,
    /// ⟨a|U|b⟩ over the qubit basis.
    pub qubit_block: Matrix4<Complex64>,
}

impl GateResult {
    pub fn phase_factors(&self) -> [Complex64; 4] {
        let mut out = [c(0.0); 4];
        for (slot, o) in out.iter_mut().zip(&self.outputs) {
            *slot = o.phase_factor();
        }
        out
    }

    /// Mean probability leaving the qubit subspace over the four inputs.
    pub fn leakage(&self) -> f64 {
        self.outputs.iter().map(|o| o.leakage).sum::<f64>() / 4.0
    }

    pub fn max_leakage(&self) -> f64 {
        self.outputs.iter().map(|o| o.leakage).fold(0.0, f64::max)
    }

    /// |Tr(V†M)|²/16 against a diagonal target V.
    pub fn fidelity_to_diagonal(&self, target: [f64; 4]) -> f64 {
        let trace: Complex64 = (0..4).map(|k| self.qubit_block[(k, k)] * target[k]).sum();
        trace.norm_sqr() / 16.0
    }

    pub fn cz_fidelity(&self) -> f64 {
        self.fidelity_to_diagonal(CZ_TARGET)
    }
}

pub fn simulate_gate(seq: &PulseSequence, u_int: f64, mode: BlockadeMode) -> Result<GateResult> {
    simulate_gate_with(seq, u_int, mode, Propagator::default())
}

/// Runs `seq` on each computational basis state.
pub fn simulate_gate_with(
    seq: &PulseSequence,
    u_int: f64,
    mode: BlockadeMode,
    propagator: Propagator,
) -> Result<GateResult> {
    if let Propagator::Rk4 { steps_per_period } = propagator {
        if steps_per_period == 0 {
            return Err(Error::invalid("steps_per_period", "must be positive"));
        }
    }
    let u_over_hbar = u_int / HBAR;
    let hamiltonians: Vec<Matrix9> = match mode {
        BlockadeMode::Ideal => Vec::new(),
        BlockadeMode::FiniteU => seq
            .segments()
            .iter()
            .map(|s| {
                let drive = Drive {
                    target: s.target,
                    coupled: s.coupled.into(),
                    rabi: s.rabi,
                    detuning: s.detuning,
                };
                hamiltonian(&[drive], u_over_hbar)
            })
            .collect(),
    };

    let mut outputs = Vec::with_capacity(4);
    let mut block = Matrix4::zeros();
    for (col, &(a, b)) in QUBIT_BASIS.iter().enumerate() {
        let mut psi = TwoMoleculeState::basis(a.into(), b.into()).0;
        match mode {
            BlockadeMode::Ideal => {
                for seg in seq.segments() {
                    apply_ideal(&mut psi, seg);
                }
            }
            BlockadeMode::FiniteU => {
                for (seg, h) in seq.segments().iter().zip(&hamiltonians) {
                    psi = propagate(h, &psi, seg.duration(), propagator)?;
                }
            }
        }
        let state = TwoMoleculeState(psi);
        for (row, &(x, y)) in QUBIT_BASIS.iter().enumerate() {
            block[(row, col)] = state.amplitude(x.into(), y.into());
        }
        let amplitude = block[(col, col)];
        outputs.push(BasisOutput {
            input: (a, b),
            final_state: state,
            amplitude,
            phase: amplitude.arg(),
            leakage: state.leakage(),
        });
    }
    Ok(GateResult {
        outputs,
        qubit_block: block,
    })
}
