//! Command-line front end: figure-data emission and parameter sweeps.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

use dipolewave::error::Error;
use dipolewave::figures::{
    cmd_fig1, cmd_fig2, cmd_fig3, cmd_overlap, cmd_stats, cmd_sweep, OutputFormat, OverlapFamily,
    StatsMode, SweepFixed, SweepSpec, SweepVariable,
};
use dipolewave::quad::DEFAULT_N_ALPHA;
use dipolewave::spectra::DipolePolarization;

#[derive(Parser)]
#[command(
    name = "dipolewave",
    version,
    about = "Dipole-wave content of focused beams and photon statistics of the scattered light"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the table to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Gauss-Legendre nodes per polar panel; the azimuthal rule uses twice
    /// this count.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,

    /// Reserved for future stochastic paths; recorded, unused by the
    /// deterministic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON config file mirroring the flags; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Quabis,
    Sine,
    TruncatedLongitudinal,
    TruncatedTransverse,
    Dipole,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Closed,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariableArg {
    Theta,
    AbsEta,
    A,
    S,
    Delta,
}

#[derive(Subcommand)]
enum Command {
    /// Dipole content of one beam family at one cap half-angle.
    Overlap(OverlapArgs),
    /// Weak-driving g2(0) versus |eta| for the phases pi/(2n), n = 1..7.
    Fig1,
    /// Quabis-family dipole contents (a = 2, 1, 0) and the longitudinal
    /// maximum versus the cap half-angle.
    Fig2,
    /// Maximum transverse/longitudinal contents and the sine wave versus
    /// the cap half-angle.
    Fig3,
    /// Flux ratio and photon statistics at one parameter point.
    Stats(StatsArgs),
    /// One-variable parameter sweep.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OverlapArgs {
    /// Beam family.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,

    /// Quabis apodization parameter a = f/w0.
    #[arg(long)]
    a: Option<f64>,

    /// Cap half-angle in degrees.
    #[arg(long)]
    theta_deg: Option<f64>,

    /// Dipole index of a dipole-family beam.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i32>,

    /// Overlap target dipole index; defaults to the family's natural
    /// target (M = 0 for longitudinal families, the x-polarized transverse
    /// combination for transverse families).
    #[arg(long, allow_hyphen_values = true)]
    dipole_m: Option<i32>,
}

#[derive(Args)]
struct StatsArgs {
    /// Real part of eta.
    #[arg(long, allow_hyphen_values = true)]
    eta_re: Option<f64>,

    /// Imaginary part of eta.
    #[arg(long, allow_hyphen_values = true)]
    eta_im: Option<f64>,

    /// Saturation parameter s = 8|beta|^2/Gamma.
    #[arg(long)]
    s: Option<f64>,

    /// Dimensionless detuning delta = 2 Delta/Gamma.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,

    /// Correlation delays in units of 1/Gamma; repeatable.
    #[arg(long = "tau")]
    taus: Vec<f64>,

    /// Which route to report.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept variable.
    #[arg(long, value_enum)]
    var: Option<VariableArg>,

    /// Lower end of the sweep range (degrees for theta).
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,

    /// Upper end of the sweep range (degrees for theta).
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,

    /// Number of grid points (>= 2).
    #[arg(long)]
    steps: Option<usize>,

    /// Beam family for theta sweeps.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,

    /// Quabis apodization parameter.
    #[arg(long)]
    a: Option<f64>,

    /// Fixed cap half-angle in degrees (apodization sweeps).
    #[arg(long)]
    theta_deg: Option<f64>,

    /// Fixed eta, real part.
    #[arg(long, allow_hyphen_values = true)]
    eta_re: Option<f64>,

    /// Fixed eta, imaginary part.
    #[arg(long, allow_hyphen_values = true)]
    eta_im: Option<f64>,

    /// Phase of eta for |eta| sweeps, in radians.
    #[arg(long, allow_hyphen_values = true)]
    eta_phase: Option<f64>,

    /// Fixed saturation parameter.
    #[arg(long)]
    s: Option<f64>,

    /// Fixed dimensionless detuning.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
}

/// JSON config mirroring the flags; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    format: Option<String>,
    out: Option<PathBuf>,
    quad_nodes: Option<usize>,
    seed: Option<u64>,
    family: Option<String>,
    a: Option<f64>,
    theta_deg: Option<f64>,
    m: Option<i32>,
    dipole_m: Option<i32>,
    eta_re: Option<f64>,
    eta_im: Option<f64>,
    eta_phase: Option<f64>,
    s: Option<f64>,
    delta: Option<f64>,
    #[serde(alias = "tau")]
    taus: Option<Vec<f64>>,
    mode: Option<String>,
    var: Option<String>,
    lo: Option<f64>,
    hi: Option<f64>,
    steps: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Domain(_) | Error::Contract(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, Error> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("invalid config {}: {e}", path.display())))
}

fn parse_family(name: &str) -> Result<FamilyArg, Error> {
    match name {
        "quabis" => Ok(FamilyArg::Quabis),
        "sine" => Ok(FamilyArg::Sine),
        "truncated-longitudinal" => Ok(FamilyArg::TruncatedLongitudinal),
        "truncated-transverse" => Ok(FamilyArg::TruncatedTransverse),
        "dipole" => Ok(FamilyArg::Dipole),
        other => Err(Error::Domain(format!("unknown family '{other}' in config"))),
    }
}

fn parse_mode(name: &str) -> Result<ModeArg, Error> {
    match name {
        "closed" => Ok(ModeArg::Closed),
        "oracle" => Ok(ModeArg::Oracle),
        "both" => Ok(ModeArg::Both),
        other => Err(Error::Domain(format!("unknown mode '{other}' in config"))),
    }
}

fn parse_variable(name: &str) -> Result<VariableArg, Error> {
    match name {
        "theta" => Ok(VariableArg::Theta),
        "abs-eta" | "abs_eta" => Ok(VariableArg::AbsEta),
        "a" => Ok(VariableArg::A),
        "s" => Ok(VariableArg::S),
        "delta" => Ok(VariableArg::Delta),
        other => Err(Error::Domain(format!(
            "unknown sweep variable '{other}' in config"
        ))),
    }
}

fn parse_format(name: &str) -> Result<FormatArg, Error> {
    match name {
        "csv" => Ok(FormatArg::Csv),
        "json" => Ok(FormatArg::Json),
        other => Err(Error::Domain(format!("unknown format '{other}' in config"))),
    }
}

fn overlap_family(family: FamilyArg, a: f64, m: i32) -> OverlapFamily {
    match family {
        FamilyArg::Quabis => OverlapFamily::Quabis { a },
        FamilyArg::Sine => OverlapFamily::Sine,
        FamilyArg::TruncatedLongitudinal => OverlapFamily::TruncatedDipole {
            polarization: DipolePolarization::Longitudinal,
        },
        FamilyArg::TruncatedTransverse => OverlapFamily::TruncatedDipole {
            polarization: DipolePolarization::Transverse,
        },
        FamilyArg::Dipole => OverlapFamily::Dipole { m },
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let config = load_config(&cli.config)?;

    let format = match (&cli.format, &config.format) {
        (Some(FormatArg::Json), _) => OutputFormat::Json,
        (Some(FormatArg::Csv), _) => OutputFormat::Csv,
        (None, Some(name)) => match parse_format(name)? {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        (None, None) => OutputFormat::Csv,
    };
    let out = cli.out.clone().or_else(|| config.out.clone());
    let n_alpha = cli
        .quad_nodes
        .or(config.quad_nodes)
        .unwrap_or(DEFAULT_N_ALPHA);
    if n_alpha == 0 {
        return Err(Error::Domain("--quad-nodes must be positive".into()));
    }
    let n_beta = 2 * n_alpha;

    let mut table = match &cli.command {
        Command::Overlap(args) => {
            let family_arg = match (args.family, &config.family) {
                (Some(f), _) => f,
                (None, Some(name)) => parse_family(name)?,
                (None, None) => {
                    return Err(Error::Domain(
                        "overlap requires --family (or a config entry)".into(),
                    ))
                }
            };
            let a = args.a.or(config.a).unwrap_or(0.0);
            let m = args.m.or(config.m).unwrap_or(0);
            let theta_deg = args.theta_deg.or(config.theta_deg).unwrap_or(90.0);
            let family = overlap_family(family_arg, a, m);
            cmd_overlap(
                family,
                theta_deg.to_radians(),
                args.dipole_m.or(config.dipole_m),
                n_alpha,
                n_beta,
            )?
        }
        Command::Fig1 => cmd_fig1()?,
        Command::Fig2 => cmd_fig2(n_alpha)?,
        Command::Fig3 => cmd_fig3(n_alpha, n_beta)?,
        Command::Stats(args) => {
            let eta = Complex64::new(
                args.eta_re.or(config.eta_re).unwrap_or(1.0),
                args.eta_im.or(config.eta_im).unwrap_or(0.0),
            );
            let s = args.s.or(config.s).unwrap_or(1e-4);
            let delta = args.delta.or(config.delta).unwrap_or(0.0);
            let taus = if args.taus.is_empty() {
                config.taus.clone().unwrap_or_default()
            } else {
                args.taus.clone()
            };
            let mode = match (args.mode, &config.mode) {
                (Some(m), _) => m,
                (None, Some(name)) => parse_mode(name)?,
                (None, None) => ModeArg::Both,
            };
            let mode = match mode {
                ModeArg::Closed => StatsMode::Closed,
                ModeArg::Oracle => StatsMode::Oracle,
                ModeArg::Both => StatsMode::Both,
            };
            cmd_stats(eta, s, delta, &taus, mode)?
        }
        Command::Sweep(args) => {
            let var_arg = match (args.var, &config.var) {
                (Some(v), _) => v,
                (None, Some(name)) => parse_variable(name)?,
                (None, None) => {
                    return Err(Error::Domain(
                        "sweep requires --var (or a config entry)".into(),
                    ))
                }
            };
            let variable = match var_arg {
                VariableArg::Theta => SweepVariable::Theta,
                VariableArg::AbsEta => SweepVariable::AbsEta,
                VariableArg::A => SweepVariable::Apodization,
                VariableArg::S => SweepVariable::Saturation,
                VariableArg::Delta => SweepVariable::Delta,
            };
            let lo = args
                .lo
                .or(config.lo)
                .ok_or_else(|| Error::Domain("sweep requires --lo".into()))?;
            let hi = args
                .hi
                .or(config.hi)
                .ok_or_else(|| Error::Domain("sweep requires --hi".into()))?;
            let steps = args
                .steps
                .or(config.steps)
                .ok_or_else(|| Error::Domain("sweep requires --steps".into()))?;
            let family_arg = match (args.family, &config.family) {
                (Some(f), _) => Some(f),
                (None, Some(name)) => Some(parse_family(name)?),
                (None, None) => None,
            };
            let a = args.a.or(config.a).unwrap_or(0.0);
            let family = overlap_family(family_arg.unwrap_or(FamilyArg::Quabis), a, 0);
            let (lo, hi) = match variable {
                SweepVariable::Theta => (lo.to_radians(), hi.to_radians()),
                _ => (lo, hi),
            };
            let fixed = SweepFixed {
                family,
                theta: args
                    .theta_deg
                    .or(config.theta_deg)
                    .unwrap_or(90.0)
                    .to_radians(),
                eta: Complex64::new(
                    args.eta_re.or(config.eta_re).unwrap_or(1.0),
                    args.eta_im.or(config.eta_im).unwrap_or(0.0),
                ),
                eta_phase: args.eta_phase.or(config.eta_phase).unwrap_or(0.0),
                s: args.s.or(config.s).unwrap_or(1e-4),
                delta: args.delta.or(config.delta).unwrap_or(0.0),
                n_alpha,
                n_beta,
            };
            cmd_sweep(&SweepSpec {
                variable,
                lo,
                hi,
                steps,
                fixed,
            })?
        }
    };

    if let Some(seed) = cli.seed.or(config.seed) {
        table.push_meta("seed", seed.to_string());
    }

    let rendered = table.render(format);
    match out {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| Error::Numeric(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(())
}
