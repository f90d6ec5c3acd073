use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dipolar_qubit::cli::{
    blockade_report, emit_report, gate_report, lifetime_report, load_registry, parse_quantity,
    run_sweep, spectrum_report, threshold_report, write_report, Cell, FixedValues,
    MoleculeRegistry, Output, ReportFormat, Spacing, SweepRange, SweepSpec, SweepVariable,
};
use dipolar_qubit::dynamics::BlockadeMode;
use dipolar_qubit::physconst::Unit;
use dipolar_qubit::rydberg::c6_scaled;
use dipolar_qubit::spectrum::{DriveField, GridConfig, MoleculeSpec, PotentialModel};
use dipolar_qubit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "dipolar-qubit",
    version,
    about = "Pendulum qubits from polar molecules"
)]
struct Cli {
    /// Molecule registry (JSON); the bundled one is used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest pendulum levels at one field.
    Spectrum(SpectrumArgs),
    /// Spontaneous-emission rate and lifetime.
    Lifetime(LifetimeArgs),
    /// Field needed to suppress thermal excitation.
    Threshold(ThresholdArgs),
    /// Blockade radius and regime check.
    Blockade(BlockadeArgs),
    /// Controlled-phase gate phases, leakage and fidelity.
    Gate(GateArgs),
    /// Sweep one variable and tabulate outputs.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct MoleculeArg {
    #[arg(long, default_value = "HCl")]
    molecule: String,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    molecule: MoleculeArg,
    /// VALUE[V/m|V/um]
    #[arg(long, value_parser = parse_field)]
    field: f64,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value = "quartic", value_parser = parse_model)]
    model: PotentialModel,
    /// Grid points (odd); default grid when omitted.
    #[arg(long)]
    points: Option<usize>,
    /// Grid half-width in the scaled coordinate.
    #[arg(long)]
    half_width: Option<f64>,
}

#[derive(Args)]
struct LifetimeArgs {
    #[command(flatten)]
    molecule: MoleculeArg,
    /// Transition frequency, Hz. Taken from --field when omitted.
    #[arg(long, conflicts_with = "field")]
    nu_eg: Option<f64>,
    #[arg(long, value_parser = parse_field)]
    field: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n_vib: u32,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    molecule: MoleculeArg,
    /// Temperature, K.
    #[arg(long)]
    temperature: f64,
    /// Operating field to check against the threshold.
    #[arg(long, value_parser = parse_field)]
    field: Option<f64>,
}

#[derive(Args)]
struct BlockadeArgs {
    /// C6 coefficient, J*m^6 (at --n-ref when --n-ryd is given).
    #[arg(long)]
    c6: f64,
    #[arg(long, requires = "n_ryd")]
    n_ref: Option<u32>,
    #[arg(long, requires = "n_ref")]
    n_ryd: Option<u32>,
    /// VALUE[rad/s|Hz]
    #[arg(long, value_parser = parse_rate)]
    rabi: f64,
    #[arg(long)]
    u_over_omega: Option<f64>,
}

#[derive(Args)]
struct GateArgs {
    /// VALUE[rad/s|Hz]
    #[arg(long, value_parser = parse_rate, default_value = "1e6")]
    rabi: f64,
    #[arg(long, default_value_t = 100.0)]
    u_over_omega: f64,
    /// ideal | finite
    #[arg(long, default_value = "finite", value_parser = parse_mode)]
    mode: BlockadeMode,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    molecule: MoleculeArg,
    /// E | T | n_ryd | rabi
    #[arg(long, value_parser = parse_variable)]
    vary: SweepVariable,
    /// Range start, in the swept variable's units (suffixes allowed for E and rabi).
    #[arg(long, allow_hyphen_values = true)]
    start: String,
    #[arg(long, allow_hyphen_values = true)]
    stop: String,
    #[arg(long)]
    points: usize,
    /// linear | log
    #[arg(long, default_value = "linear", value_parser = parse_spacing)]
    spacing: Spacing,
    /// Comma-separated: omega0,lambda,gaps,gamma,tau,threshold_field,c6,blockade_radius
    #[arg(long)]
    outputs: String,
    #[arg(long, value_parser = parse_field)]
    field: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    n_ryd: Option<u32>,
    #[arg(long, value_parser = parse_rate)]
    rabi: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n_vib: u32,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    #[arg(long, default_value = "quartic", value_parser = parse_model)]
    model: PotentialModel,
    /// Reference C6, J*m^6.
    #[arg(long)]
    c6: Option<f64>,
    #[arg(long)]
    n_ref: Option<u32>,
}

fn parse_format(s: &str) -> Result<ReportFormat> {
    s.parse()
}

fn parse_field(s: &str) -> Result<f64> {
    parse_quantity(s, Unit::VoltPerMeter)
}

fn parse_rate(s: &str) -> Result<f64> {
    parse_quantity(s, Unit::RadPerSecond)
}

fn parse_model(s: &str) -> Result<PotentialModel> {
    s.parse()
}

fn parse_variable(s: &str) -> Result<SweepVariable> {
    s.parse()
}

fn parse_spacing(s: &str) -> Result<Spacing> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<BlockadeMode> {
    match s {
        "ideal" => Ok(BlockadeMode::Ideal),
        "finite" | "finite_u" => Ok(BlockadeMode::FiniteU),
        other => Err(Error::InvalidParameter {
            name: "mode",
            reason: format!("expected ideal or finite, got `{other}`"),
        }),
    }
}

fn registry(cli: &Cli) -> Result<MoleculeRegistry> {
    match &cli.registry {
        Some(path) => load_registry(path),
        None => Ok(MoleculeRegistry::bundled()),
    }
}

fn molecule(cli: &Cli, arg: &MoleculeArg) -> Result<MoleculeSpec> {
    registry(cli)?.get(&arg.molecule)
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec> {
    let bound = |s: &str| match a.vary {
        SweepVariable::Field => parse_field(s),
        SweepVariable::Rabi => parse_rate(s),
        _ => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidSweep(format!("cannot parse range bound `{s}`"))),
    };
    Ok(SweepSpec {
        molecule: a.molecule.molecule.clone(),
        variable: a.vary,
        range: SweepRange {
            start: bound(&a.start)?,
            stop: bound(&a.stop)?,
            points: a.points,
            spacing: a.spacing,
        },
        fixed: FixedValues {
            field: a.field,
            temperature: a.temperature,
            n_ryd: a.n_ryd,
            rabi: a.rabi,
            n_vib: a.n_vib,
            levels: a.levels,
            model: a.model,
            c6_ref: a.c6,
            n_ref: a.n_ref,
        },
        outputs: SweepSpec::parse_outputs(&a.outputs)?,
    })
}

/// Warnings for rows whose validity flags are false.
fn flag_warnings(out: &mut Output) {
    let messages = [
        (
            "small_angle_ok",
            "zero-point spread exceeds the small-angle limit",
        ),
        ("noise_suppressed", "field below the thermal threshold"),
        (
            "grid_converged",
            "spectrum not converged under grid doubling",
        ),
    ];
    for (column, message) in messages {
        let bad = out
            .rows
            .iter()
            .filter(|r| r.get(column) == Some(Cell::Flag(false)))
            .count();
        if bad > 0 {
            out.warnings
                .push(format!("{message} in {bad} of {} rows", out.rows.len()));
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Spectrum(a) => {
            let mol = molecule(cli, &a.molecule)?;
            let grid = match (a.points, a.half_width) {
                (None, None) => None,
                (points, half_width) => Some(GridConfig::new(
                    points.unwrap_or(dipolar_qubit::spectrum::DEFAULT_POINTS),
                    half_width.unwrap_or(dipolar_qubit::spectrum::DEFAULT_HALF_WIDTH),
                    a.model,
                )?),
            };
            spectrum_report(&mol, DriveField::new(a.field)?, a.model, a.levels, grid)
        }
        Command::Lifetime(a) => {
            let mol = molecule(cli, &a.molecule)?;
            let nu_eg = match (a.nu_eg, a.field) {
                (Some(nu), _) => nu,
                (None, Some(e)) => {
                    dipolar_qubit::spectrum::intrinsic_frequency(&mol, DriveField::new(e)?)
                        / (2.0 * std::f64::consts::PI)
                }
                (None, None) => {
                    return Err(Error::InvalidParameter {
                        name: "nu_eg",
                        reason: "give --nu-eg or --field".into(),
                    });
                }
            };
            lifetime_report(&mol, nu_eg, a.n_vib)
        }
        Command::Threshold(a) => {
            let mol = molecule(cli, &a.molecule)?;
            let field = a.field.map(DriveField::new).transpose()?;
            threshold_report(&mol, a.temperature, field)
        }
        Command::Blockade(a) => {
            let c6 = match (a.n_ref, a.n_ryd) {
                (Some(n_ref), Some(n_ryd)) => c6_scaled(a.c6, n_ref, n_ryd)?,
                _ => a.c6,
            };
            blockade_report(c6, a.rabi, a.u_over_omega)
        }
        Command::Gate(a) => gate_report(a.rabi, a.u_over_omega, a.mode),
        Command::Sweep(a) => {
            let spec = sweep_spec(a)?;
            let rows = run_sweep(&spec, &registry(cli)?)?;
            let mut out = Output {
                rows,
                warnings: Vec::new(),
            };
            flag_warnings(&mut out);
            Ok(out)
        }
    }
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    let line = message.to_string().replace('\n', " ");
    eprintln!("error: {}", line.trim());
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail(first.trim_start_matches("error:"));
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => return fail(e),
    };
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cli.out {
        Some(path) => emit_report(&out.rows, cli.format, path),
        None => write_report(&out.rows, cli.format, io::stdout().lock()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
