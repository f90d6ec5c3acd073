//! Open-system decay of a single qubit and coherent two-molecule blockade
//! dynamics.
//!
//! The two parts are independent: gate simulations are pure-state and do
//! not include spontaneous decay.

mod blockade;
mod lindblad;

pub use blockade::{
    collective_rabi, simulate_gate, simulate_gate_with, standard_cz_pulses, BasisOutput,
    BlockadeMode, GateResult, Level, Molecule, Propagator, PulseSegment, PulseSequence, QubitLevel,
    TwoMoleculeState, CZ_TARGET,
};
pub use lindblad::{evolve_lindblad, lindblad_rhs, DensityMatrix2, Stepper};

pub use num_complex::Complex64;
