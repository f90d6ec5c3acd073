//! Spectrum of a dipolar molecule librating about a uniform field.
//!
//! The pendulum Hamiltonian `-(ħ²/2J) d²/dθ² + V(θ)` is written in the
//! scaled coordinate `ξ = θ / √λ`, where `λ = ħ/√(pEJ)`, giving
//!
//! ```text
//! H / ħω₀ = -½ d²/dξ² + ½ξ² - (λ/24) ξ⁴      (quartic model)
//! ```
//!
//! It is discretized with second-order central differences into a symmetric
//! tridiagonal matrix. Eigenvalues are computed on the requested grid and on
//! a grid with half the spacing, and the two are combined by Richardson
//! extrapolation to remove the leading `O(Δξ²)` error. A third, finer grid
//! is used only to decide whether the result is converged.

mod tridiag;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::physconst::HBAR;
use crate::{Error, Result};
use tridiag::SymTridiagonal;

/// One molecular species. All quantities SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeSpec {
    pub name: String,
    /// Electric dipole moment p, C·m.
    pub dipole: f64,
    /// Moment of inertia J about the libration axis, kg·m².
    pub inertia: f64,
    /// Dipole length l, m.
    pub length: f64,
}

impl MoleculeSpec {
    pub fn new(name: impl Into<String>, dipole: f64, inertia: f64, length: f64) -> Result<Self> {
        let spec = MoleculeSpec {
            name: name.into(),
            dipole,
            inertia,
            length,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("p", self.dipole), ("J", self.inertia), ("l", self.length)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        Ok(())
    }

    /// Hydrogen chloride: p = 1 D, J = 2.5e-47 kg·m², l = 0.128 nm.
    pub fn hcl() -> Self {
        MoleculeSpec {
            name: "HCl".to_string(),
            dipole: crate::physconst::DEBYE,
            inertia: 2.5e-47,
            length: 0.128e-9,
        }
    }
}

/// Uniform external field strength, V/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField(f64);

impl DriveField {
    pub fn new(strength: f64) -> Result<Self> {
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::invalid(
                "E",
                format!("must be non-negative, got {strength}"),
            ));
        }
        Ok(DriveField(strength))
    }

    pub fn strength(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialModel {
    /// `(pE/2) θ²`
    Harmonic,
    /// `(pE/2)(θ² - θ⁴/12)`
    Quartic,
    /// `-pE cos θ`, periodic on `[-π, π)`, reported relative to `-pE`.
    FullCosine,
}

impl FromStr for PotentialModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(PotentialModel::Harmonic),
            "quartic" => Ok(PotentialModel::Quartic),
            "cosine" | "full_cosine" => Ok(PotentialModel::FullCosine),
            other => Err(Error::invalid(
                "model",
                format!("expected harmonic|quartic|cosine, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialModel::Harmonic => "harmonic",
            PotentialModel::Quartic => "quartic",
            PotentialModel::FullCosine => "cosine",
        })
    }
}

pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
const MIN_POINTS: usize = 201;
const CONVERGENCE_TOL: f64 = 1e-8;

/// Discretization of the scaled coordinate.
///
/// For the hard-wall models the grid spans `[-L, L]` with `n_points` nodes
/// including both walls. The periodic cosine model ignores `half_width` and
/// places `n_points` nodes on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub n_points: usize,
    pub half_width: f64,
    pub model: PotentialModel,
}

impl GridConfig {
    pub fn new(n_points: usize, half_width: f64, model: PotentialModel) -> Result<Self> {
        let grid = GridConfig {
            n_points,
            half_width,
            model,
        };
        grid.check_shape()?;
        Ok(grid)
    }

    /// 2001 points; `L = min(12, 0.9·√(6/λ))` for the quartic model and
    /// `L = 12` otherwise.
    pub fn default_for(model: PotentialModel, lambda: f64) -> Self {
        let half_width = match model {
            PotentialModel::Quartic if lambda > 0.0 => {
                DEFAULT_HALF_WIDTH.min(0.9 * turnover_xi(lambda))
            }
            _ => DEFAULT_HALF_WIDTH,
        };
        GridConfig {
            n_points: DEFAULT_POINTS,
            half_width,
            model,
        }
    }

    fn check_shape(&self) -> Result<()> {
        if self.n_points < MIN_POINTS || self.n_points.is_multiple_of(2) {
            return Err(Error::invalid(
                "n_points",
                format!("must be odd and >= {MIN_POINTS}, got {}", self.n_points),
            ));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::invalid(
                "half_width",
                format!("must be positive, got {}", self.half_width),
            ));
        }
        Ok(())
    }

    fn check_for(&self, lambda: f64) -> Result<()> {
        self.check_shape()?;
        if self.model == PotentialModel::Quartic && lambda > 0.0 {
            let turnover = turnover_xi(lambda);
            if self.half_width >= turnover {
                return Err(Error::GridTurnover {
                    lambda,
                    half_width: self.half_width,
                    turnover,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    /// Ground-state angular spread √(ħ/(2Jω₀)), rad.
    pub zero_point_spread_rad: f64,
    /// Spread within the 0.1 rad small-angle bound.
    pub small_angle_ok: bool,
    /// Location √(6/λ) of the quartic potential maximum in ξ.
    pub turnover_xi: f64,
    /// `None` until a spectrum has actually been solved.
    pub grid_converged: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub model: PotentialModel,
    /// ω₀, rad/s.
    pub omega0: f64,
    /// Dimensionless anharmonicity ħ/√(pEJ).
    pub lambda: f64,
    /// Level energies, J.
    pub energies: Vec<f64>,
    /// `E_{n+1} - E_n`, J.
    pub gaps: Vec<f64>,
    /// Node positions of the requested grid in ξ.
    pub xi: Vec<f64>,
    /// One array per level on `xi`, normalized with trapezoidal weight.
    pub eigenvectors: Vec<Vec<f64>>,
    pub validity: ValidityReport,
    refined: Discretized,
}

impl SpectrumResult {
    /// Level energies in units of ħω₀.
    pub fn scaled_energies(&self) -> Vec<f64> {
        let unit = HBAR * self.omega0;
        self.energies.iter().map(|e| e / unit).collect()
    }

    pub fn scaled_gaps(&self) -> Vec<f64> {
        let unit = HBAR * self.omega0;
        self.gaps.iter().map(|g| g / unit).collect()
    }

    /// Grid spacing of `xi`.
    pub fn step(&self) -> f64 {
        self.xi[1] - self.xi[0]
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }
}

/// Small-oscillation angular frequency √(pE/J), rad/s.
pub fn intrinsic_frequency(mol: &MoleculeSpec, field: DriveField) -> f64 {
    (mol.dipole * field.strength() / mol.inertia).sqrt()
}

/// λ = ħ/√(pEJ).
pub fn anharmonicity(mol: &MoleculeSpec, field: DriveField) -> Result<f64> {
    if field.strength() == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(HBAR / (mol.dipole * field.strength() * mol.inertia).sqrt())
}

fn turnover_xi(lambda: f64) -> f64 {
    (6.0 / lambda).sqrt()
}

pub fn validity_report(mol: &MoleculeSpec, field: DriveField) -> Result<ValidityReport> {
    let lambda = anharmonicity(mol, field)?;
    let omega0 = intrinsic_frequency(mol, field);
    let spread = (HBAR / (2.0 * mol.inertia * omega0)).sqrt();
    Ok(ValidityReport {
        zero_point_spread_rad: spread,
        small_angle_ok: spread <= 0.1,
        turnover_xi: turnover_xi(lambda),
        grid_converged: None,
    })
}

/// Eigenpairs of the dimensionless Hamiltonian on one grid.
#[derive(Debug, Clone)]
struct Discretized {
    step: f64,
    xi: Vec<f64>,
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

/// Dimensionless spectrum: energies in units of ħω₀, ξ-grid eigenvectors.
#[derive(Debug, Clone)]
pub struct ScaledSpectrum {
    pub energies: Vec<f64>,
    pub xi: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid_converged: bool,
    refined: Discretized,
}

fn scaled_potential(model: PotentialModel, lambda: f64, xi: f64) -> f64 {
    match model {
        PotentialModel::Harmonic => 0.5 * xi * xi,
        PotentialModel::Quartic => 0.5 * xi * xi - lambda / 24.0 * xi.powi(4),
        PotentialModel::FullCosine => {
            // (1 - cos θ)/λ without the cancellation at small θ.
            let half = 0.5 * lambda.sqrt() * xi;
            2.0 * half.sin().powi(2) / lambda
        }
    }
}

/// Node count after halving the spacing `level` times.
fn refine(grid: &GridConfig, level: u32) -> usize {
    let mut n = grid.n_points;
    for _ in 0..level {
        n = match grid.model {
            PotentialModel::FullCosine => 2 * n + 1,
            _ => 2 * n - 1,
        };
    }
    n
}

fn discretize(
    model: PotentialModel,
    lambda: f64,
    n_points: usize,
    half_width: f64,
    n_levels: usize,
    with_vectors: bool,
) -> Discretized {
    match model {
        PotentialModel::FullCosine => discretize_periodic(lambda, n_points, n_levels, with_vectors),
        _ => discretize_hard_wall(model, lambda, n_points, half_width, n_levels, with_vectors),
    }
}

fn discretize_hard_wall(
    model: PotentialModel,
    lambda: f64,
    n_points: usize,
    half_width: f64,
    n_levels: usize,
    with_vectors: bool,
) -> Discretized {
    let step = 2.0 * half_width / (n_points - 1) as f64;
    let center = (n_points / 2) as f64;
    let xi: Vec<f64> = (0..n_points).map(|j| (j as f64 - center) * step).collect();
    let kinetic = 0.5 / (step * step);

    let interior = &xi[1..n_points - 1];
    let diag = interior
        .iter()
        .map(|&x| 2.0 * kinetic + scaled_potential(model, lambda, x))
        .collect();
    let off = vec![-kinetic; interior.len() - 1];
    let matrix = SymTridiagonal::new(diag, off);
    let values = matrix.lowest_eigenvalues(n_levels);

    let mut vectors = Vec::new();
    if with_vectors {
        let mut inner: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        for &value in &values {
            let v = matrix.eigenvector(value, &inner);
            inner.push(v);
        }
        vectors = inner
            .into_iter()
            .map(|v| {
                let mut full = Vec::with_capacity(n_points);
                full.push(0.0);
                full.extend(v);
                full.push(0.0);
                finish_vector(full, step)
            })
            .collect();
    }
    Discretized {
        step,
        xi,
        values,
        vectors,
    }
}

/// The cosine potential is even, so the periodic problem splits into an
/// even and an odd block, each a plain symmetric tridiagonal matrix.
fn discretize_periodic(
    lambda: f64,
    n_points: usize,
    n_levels: usize,
    with_vectors: bool,
) -> Discretized {
    let half = n_points / 2;
    let theta_step = 2.0 * PI / n_points as f64;
    let step = theta_step / lambda.sqrt();
    let xi: Vec<f64> = (0..n_points)
        .map(|j| (j as f64 - half as f64) * step)
        .collect();
    let kinetic = 0.5 / (step * step);
    let v = |k: usize| scaled_potential(PotentialModel::FullCosine, lambda, k as f64 * step);

    // Even block: nodes 0..=half; ψ(-k) = ψ(k) and the wrap neighbour of
    // node `half` is node `-half`. Row 0 is symmetrized by scaling ψ₀ by 1/√2.
    let mut even_diag: Vec<f64> = (0..=half).map(|k| 2.0 * kinetic + v(k)).collect();
    even_diag[half] -= kinetic;
    let mut even_off = vec![-kinetic; half];
    even_off[0] = -std::f64::consts::SQRT_2 * kinetic;
    let even = SymTridiagonal::new(even_diag, even_off);

    // Odd block: nodes 1..=half with ψ₀ = 0 and ψ(-half) = -ψ(half).
    let mut odd_diag: Vec<f64> = (1..=half).map(|k| 2.0 * kinetic + v(k)).collect();
    odd_diag[half - 1] += kinetic;
    let odd = SymTridiagonal::new(odd_diag, vec![-kinetic; half - 1]);

    let even_values = even.lowest_eigenvalues(n_levels);
    let odd_values = odd.lowest_eigenvalues(n_levels);

    let mut tagged: Vec<(f64, bool, usize)> = even_values
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, true, i))
        .chain(odd_values.iter().enumerate().map(|(i, &e)| (e, false, i)))
        .collect();
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
    tagged.truncate(n_levels);
    let values = tagged.iter().map(|t| t.0).collect();

    let mut vectors = Vec::new();
    if with_vectors {
        let mut even_vecs: Vec<Vec<f64>> = Vec::new();
        for &e in &even_values {
            let v = even.eigenvector(e, &even_vecs);
            even_vecs.push(v);
        }
        let mut odd_vecs: Vec<Vec<f64>> = Vec::new();
        for &e in &odd_values {
            let v = odd.eigenvector(e, &odd_vecs);
            odd_vecs.push(v);
        }
        vectors = tagged
            .iter()
            .map(|&(_, is_even, i)| {
                let full: Vec<f64> = (0..n_points)
                    .map(|j| {
                        let k = j as isize - half as isize;
                        let a = k.unsigned_abs();
                        if is_even {
                            let u = even_vecs[i][a];
                            if a == 0 {
                                u * std::f64::consts::SQRT_2
                            } else {
                                u
                            }
                        } else if a == 0 {
                            0.0
                        } else {
                            k.signum() as f64 * odd_vecs[i][a - 1]
                        }
                    })
                    .collect();
                finish_vector(full, step)
            })
            .collect();
    }
    Discretized {
        step,
        xi,
        values,
        vectors,
    }
}

/// Trapezoidal normalization plus the sign convention: the first component
/// that is not negligible (above 1e-8 of the peak) is positive.
fn finish_vector(mut v: Vec<f64>, step: f64) -> Vec<f64> {
    let norm = (step * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs())) / norm;
    let first = v
        .iter()
        .map(|x| x / norm)
        .find(|x| x.abs() > 1e-8 * peak)
        .unwrap_or(1.0);
    let scale = if first < 0.0 { -norm } else { norm };
    v.iter_mut().for_each(|x| *x /= scale);
    v
}

fn extrapolate(coarse: f64, fine: f64, ratio: f64) -> f64 {
    let r2 = ratio * ratio;
    (r2 * fine - coarse) / (r2 - 1.0)
}

/// Solves the dimensionless problem directly at anharmonicity `lambda`.
///
/// `lambda` is ignored by the harmonic model and must be positive for the
/// others.
pub fn solve_dimensionless(
    lambda: f64,
    grid: &GridConfig,
    n_levels: usize,
) -> Result<ScaledSpectrum> {
    if n_levels < 2 {
        return Err(Error::invalid(
            "n_levels",
            format!("need at least 2, got {n_levels}"),
        ));
    }
    if grid.model != PotentialModel::Harmonic && !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(
            "lambda",
            format!("must be positive, got {lambda}"),
        ));
    }
    grid.check_for(lambda)?;
    let unknowns = match grid.model {
        PotentialModel::FullCosine => grid.n_points,
        _ => grid.n_points - 2,
    };
    if n_levels > unknowns {
        return Err(Error::invalid(
            "n_levels",
            format!("{n_levels} exceeds the {unknowns} grid unknowns"),
        ));
    }

    let solve = |level: u32, vectors: bool| {
        discretize(
            grid.model,
            lambda,
            refine(grid, level),
            grid.half_width,
            n_levels,
            vectors,
        )
    };
    let (coarse, (fine, finest)) = rayon::join(
        || solve(0, true),
        || rayon::join(|| solve(1, true), || solve(2, false)),
    );

    let ratio = coarse.step / fine.step;
    let ratio_next = fine.step / finest.step;
    let energies: Vec<f64> = coarse
        .values
        .iter()
        .zip(&fine.values)
        .map(|(&c, &f)| extrapolate(c, f, ratio))
        .collect();
    let grid_converged = energies
        .iter()
        .zip(fine.values.iter().zip(&finest.values))
        .all(|(&e, (&f, &ff))| {
            let next = extrapolate(f, ff, ratio_next);
            (next - e).abs() <= CONVERGENCE_TOL * e.abs()
        });

    Ok(ScaledSpectrum {
        energies,
        xi: coarse.xi,
        eigenvectors: coarse.vectors,
        grid_converged,
        refined: fine,
    })
}

impl ScaledSpectrum {
    /// `⟨i|ξ|j⟩`, Richardson-extrapolated like the energies.
    pub fn xi_matrix_element(&self, i: usize, j: usize) -> Result<f64> {
        extrapolated_element(&self.xi, &self.eigenvectors, &self.refined, i, j)
    }
}

fn extrapolated_element(
    xi: &[f64],
    vectors: &[Vec<f64>],
    refined: &Discretized,
    i: usize,
    j: usize,
) -> Result<f64> {
    let available = vectors.len();
    for index in [i, j] {
        if index >= available {
            return Err(Error::LevelOutOfRange { index, available });
        }
    }
    let step = xi[1] - xi[0];
    let coarse = position_element(xi, &vectors[i], &vectors[j], step);
    let fine = position_element(
        &refined.xi,
        &refined.vectors[i],
        &refined.vectors[j],
        refined.step,
    );
    Ok(extrapolate(coarse, fine, step / refined.step))
}

fn position_element(xi: &[f64], a: &[f64], b: &[f64], step: f64) -> f64 {
    step * xi
        .iter()
        .zip(a.iter().zip(b))
        .map(|(x, (u, v))| u * x * v)
        .sum::<f64>()
}

/// Lowest `n_levels` eigenpairs of the pendulum Hamiltonian.
pub fn solve_spectrum(
    mol: &MoleculeSpec,
    field: DriveField,
    grid: &GridConfig,
    n_levels: usize,
) -> Result<SpectrumResult> {
    mol.validate()?;
    let lambda = anharmonicity(mol, field)?;
    let omega0 = intrinsic_frequency(mol, field);
    let scaled = solve_dimensionless(lambda, grid, n_levels)?;

    let unit = HBAR * omega0;
    let energies: Vec<f64> = scaled.energies.iter().map(|e| e * unit).collect();
    let gaps = energies.windows(2).map(|w| w[1] - w[0]).collect();
    let mut validity = validity_report(mol, field)?;
    validity.grid_converged = Some(scaled.grid_converged);

    Ok(SpectrumResult {
        model: grid.model,
        omega0,
        lambda,
        energies,
        gaps,
        xi: scaled.xi,
        eigenvectors: scaled.eigenvectors,
        validity,
        refined: scaled.refined,
    })
}

/// `⟨i|θ|j⟩` in radians, with θ = √λ·ξ.
pub fn transition_matrix_element(res: &SpectrumResult, i: usize, j: usize) -> Result<f64> {
    let element = extrapolated_element(&res.xi, &res.eigenvectors, &res.refined, i, j)?;
    Ok(res.lambda.sqrt() * element)
}
