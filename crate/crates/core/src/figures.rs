//! Parameter sweeps and machine-readable figure tables.
//!
//! Tables are rectangular, carry a `#`-prefixed meta block with the command
//! parameters and grid sizes, and never contain non-finite numbers: a
//! divergent or undefined quantity is emitted as the in-band token `inf`,
//! `undefined`, or `nan` so sweeps never abort. Rendering a table twice
//! with the same inputs yields byte-identical output.

use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fmt;

use crate::bloch::{AtomParams, DriveAmplitude};
use crate::error::{Error, Result};
use crate::oracle::{flux_exact, g2_exact};
use crate::overlap::{
    dipole_overlap_with_grid, max_overlap_longitudinal, max_overlap_transverse,
    transverse_dipole_overlap_with_grid, OverlapResult,
};
use crate::quad::QuadratureGrid;
use crate::spectra::{
    dipole_spectrum, quabis_spectrum_with_grid, sine_spectrum_with_grid,
    truncated_dipole_spectrum_with_grid, AngularSpectrum, DipolePolarization,
};
use crate::stats::{weak_drive_g2, DetectionChannel};

/// One table cell: a finite number or a tagged token.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    /// Divergent quantity.
    Inf,
    /// Quantity undefined at these parameters.
    Undefined,
    /// Intentionally empty cell.
    Nan,
}

impl Value {
    /// Wraps a number, rejecting non-finite values (those must be tokens).
    pub fn finite(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(Value::Number(x))
        } else {
            Err(Error::numeric(format!("non-finite table value {x}")))
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }
}

fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{}", format_number(*x)),
            Value::Inf => write!(f, "inf"),
            Value::Undefined => write!(f, "undefined"),
            Value::Nan => write!(f, "nan"),
        }
    }
}

/// Output format for rendered tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A rectangular table of named numeric series plus provenance meta.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    meta: Vec<(String, String)>,
}

impl FigureTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::contract(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn meta(&self) -> &[(String, String)] {
        &self.meta
    }

    /// Cell accessor by row index and column name.
    pub fn cell(&self, row: usize, column: &str) -> Option<Value> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|r| r[j])
    }

    /// Seals the meta block with a reproducibility hash over the command
    /// parameters recorded so far.
    fn seal_meta(&mut self) {
        let mut hasher = Sha256::new();
        for (key, value) in &self.meta {
            hasher.update(key.as_bytes());
            hasher.update([0x1f]);
            hasher.update(value.as_bytes());
            hasher.update([0x1e]);
        }
        let digest = hasher.finalize();
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        self.meta.push(("input-hash".to_string(), hex));
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = serde_json::Map::new();
        for (key, value) in &self.meta {
            meta.insert(key.clone(), serde_json::Value::String(value.clone()));
        }
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|cell| match cell {
                            Value::Number(x) => serde_json::Number::from_f64(*x)
                                .map(serde_json::Value::Number)
                                .unwrap_or_else(|| serde_json::Value::String("nan".to_string())),
                            other => serde_json::Value::String(other.to_string()),
                        })
                        .collect(),
                )
            })
            .collect();
        let document = serde_json::json!({
            "meta": serde_json::Value::Object(meta),
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&document).expect("table serializes");
        text.push('\n');
        text
    }
}

/// Beam family selector for overlap commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OverlapFamily {
    Quabis { a: f64 },
    Sine,
    TruncatedDipole { polarization: DipolePolarization },
    Dipole { m: i32 },
}

impl fmt::Display for OverlapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverlapFamily::Quabis { a } => write!(f, "quabis(a={a})"),
            OverlapFamily::Sine => write!(f, "sine"),
            OverlapFamily::TruncatedDipole { polarization } => {
                write!(f, "truncated-dipole({polarization})")
            }
            OverlapFamily::Dipole { m } => write!(f, "dipole(M={m})"),
        }
    }
}

fn build_spectrum(
    family: OverlapFamily,
    theta: f64,
    grid: &QuadratureGrid,
) -> Result<AngularSpectrum> {
    match family {
        OverlapFamily::Quabis { a } => quabis_spectrum_with_grid(a, theta, grid),
        OverlapFamily::Sine => sine_spectrum_with_grid(theta, grid),
        OverlapFamily::TruncatedDipole { polarization } => {
            truncated_dipole_spectrum_with_grid(polarization, theta, grid)
        }
        OverlapFamily::Dipole { m } => dipole_spectrum(m),
    }
}

fn family_overlap(
    family: OverlapFamily,
    spectrum: &AngularSpectrum,
    dipole_m: Option<i32>,
    grid: &QuadratureGrid,
) -> Result<OverlapResult> {
    match dipole_m {
        Some(m) => dipole_overlap_with_grid(spectrum, m, grid),
        None => match family {
            OverlapFamily::Sine
            | OverlapFamily::TruncatedDipole {
                polarization: DipolePolarization::Transverse,
            } => transverse_dipole_overlap_with_grid(spectrum, grid),
            OverlapFamily::Dipole { m } => dipole_overlap_with_grid(spectrum, m, grid),
            _ => dipole_overlap_with_grid(spectrum, 0, grid),
        },
    }
}

/// Single-point overlap report: `𝒪_d`, `p`, the normalization integral, and
/// the grid sizes.
pub fn cmd_overlap(
    family: OverlapFamily,
    theta: f64,
    dipole_m: Option<i32>,
    n_alpha: usize,
    n_beta: usize,
) -> Result<FigureTable> {
    let cap = match family {
        // The dipole family lives on the full sphere.
        OverlapFamily::Dipole { .. } => PI,
        _ => theta,
    };
    let grid = QuadratureGrid::new(cap, n_alpha, n_beta)?;
    let spectrum = build_spectrum(family, cap, &grid)?;
    let result = family_overlap(family, &spectrum, dipole_m, &grid)?;
    let mut table = FigureTable::new(
        ["o_re", "o_im", "p", "norm_const", "n_alpha", "n_beta"]
            .map(String::from)
            .to_vec(),
    );
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "overlap");
    table.push_meta("family", family.to_string());
    table.push_meta("theta", format_number(cap));
    table.push_meta(
        "dipole-target",
        match dipole_m {
            Some(m) => format!("M={m}"),
            None => "auto".to_string(),
        },
    );
    table.push_meta("n-alpha", n_alpha.to_string());
    table.push_meta("n-beta", n_beta.to_string());
    table.seal_meta();
    table.push_row(vec![
        Value::finite(result.overlap().re)?,
        Value::finite(result.overlap().im)?,
        Value::finite(result.content())?,
        Value::finite(spectrum.norm_const())?,
        Value::Number(n_alpha as f64),
        Value::Number(n_beta as f64),
    ])?;
    Ok(table)
}

/// Weak-driving `g²(0)` versus `|η|` for the complex phases `φ = π/(2n)`,
/// `n = 1..7`; 801 points on `|η| ∈ [0, 8]`.
pub fn cmd_fig1() -> Result<FigureTable> {
    let mut columns = vec!["abs_eta".to_string()];
    for n in 1..=7 {
        columns.push(format!("g2_phase_n{n}"));
    }
    let mut table = FigureTable::new(columns);
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "fig1");
    table.push_meta("abs-eta-grid", "0.01*k, k=0..800");
    table.push_meta("phases", "pi/(2n), n=1..7");
    table.seal_meta();
    for k in 0..=800 {
        let abs_eta = 0.01 * k as f64;
        let mut row = vec![Value::finite(abs_eta)?];
        for n in 1..=7 {
            let phase = PI / (2.0 * n as f64);
            let eta = Complex64::from_polar(abs_eta, phase);
            let cell = match weak_drive_g2(eta) {
                Ok(value) => Value::finite(value)?,
                Err(Error::Divergent(_)) => Value::Inf,
                Err(other) => return Err(other),
            };
            row.push(cell);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Dipole content of the Quabis family for `a = 2, 1, 0` plus the
/// longitudinal maximum, versus the cap half-angle.
pub fn cmd_fig2(n_alpha: usize) -> Result<FigureTable> {
    let mut table = FigureTable::new(
        ["theta", "p_a2", "p_a1", "p_a0", "p_max"]
            .map(String::from)
            .to_vec(),
    );
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "fig2");
    table.push_meta("theta-grid", "k*pi/181, k=1..181");
    table.push_meta("n-alpha", n_alpha.to_string());
    table.seal_meta();
    for k in 1..=181 {
        let theta = PI * k as f64 / 181.0;
        let grid = QuadratureGrid::new(theta, n_alpha, 1)?;
        let mut row = vec![Value::finite(theta)?];
        for a in [2.0, 1.0, 0.0] {
            let spectrum = quabis_spectrum_with_grid(a, theta, &grid)?;
            let p = dipole_overlap_with_grid(&spectrum, 0, &grid)?.content();
            row.push(Value::finite(p)?);
        }
        row.push(Value::finite(max_overlap_longitudinal(theta)?)?);
        table.push_row(row)?;
    }
    Ok(table)
}

/// Maximum transverse and longitudinal dipole contents plus the sine-wave
/// content (populated for `θ ≤ π/2` only), versus the cap half-angle.
pub fn cmd_fig3(n_alpha: usize, n_beta: usize) -> Result<FigureTable> {
    let mut table = FigureTable::new(
        ["theta", "p_trans_max", "p_long_max", "p_sine"]
            .map(String::from)
            .to_vec(),
    );
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "fig3");
    table.push_meta("theta-grid", "k*pi/181, k=1..181");
    table.push_meta("n-alpha", n_alpha.to_string());
    table.push_meta("n-beta", n_beta.to_string());
    table.seal_meta();
    for k in 1..=181 {
        let theta = PI * k as f64 / 181.0;
        let sine = if theta <= PI / 2.0 + 1e-12 {
            let grid = QuadratureGrid::new(theta, n_alpha, n_beta)?;
            let spectrum = sine_spectrum_with_grid(theta, &grid)?;
            let p = transverse_dipole_overlap_with_grid(&spectrum, &grid)?.content();
            Value::finite(p)?
        } else {
            Value::Nan
        };
        table.push_row(vec![
            Value::finite(theta)?,
            Value::finite(max_overlap_transverse(theta)?)?,
            Value::finite(max_overlap_longitudinal(theta)?)?,
            sine,
        ])?;
    }
    Ok(table)
}

/// Which route `cmd_stats` reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsMode {
    /// Weak-driving on-resonance closed forms.
    Closed,
    /// Exact master-equation / regression values.
    Oracle,
    /// Both plus relative deviation columns.
    Both,
}

impl fmt::Display for StatsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsMode::Closed => write!(f, "closed"),
            StatsMode::Oracle => write!(f, "oracle"),
            StatsMode::Both => write!(f, "both"),
        }
    }
}

fn relative_deviation(closed: Value, oracle: Value) -> Value {
    match (closed.as_number(), oracle.as_number()) {
        (Some(c), Some(o)) => Value::Number((o - c).abs() / c.abs().max(1.0)),
        _ => Value::Nan,
    }
}

/// Flux ratio, `g²(0)`, and `g²(τ)` for one parameter point. Rates are in
/// units of `Γ` (the drive amplitude is derived from the saturation
/// parameter `s`); `η` carries the user-supplied phase.
pub fn cmd_stats(
    eta: Complex64,
    s: f64,
    delta: f64,
    taus: &[f64],
    mode: StatsMode,
) -> Result<FigureTable> {
    if !eta.re.is_finite() || !eta.im.is_finite() {
        return Err(Error::domain("eta must be finite"));
    }
    let params = AtomParams::from_delta(1.0, delta)?;
    let drive = DriveAmplitude::from_saturation(s, &params)?;
    let channel = DetectionChannel::unit_dipole(1.0)?;
    let beta = drive.beta();

    let closed_flux = Value::finite((eta - 2.0).norm_sqr())?;
    let closed_g2 = match weak_drive_g2(eta) {
        Ok(v) => Value::finite(v)?,
        Err(Error::Divergent(_)) => Value::Inf,
        Err(other) => return Err(other),
    };

    let oracle_cells = |taus: &[f64]| -> Result<(Value, Value, Vec<Value>)> {
        let flux_ratio = if beta.norm_sqr() > 0.0 {
            let f0 = (channel.d_factor() * beta).norm_sqr();
            Value::finite(flux_exact(&channel, eta, beta, &params)? / f0)?
        } else {
            Value::Undefined
        };
        let g2_cell = |tau: f64| -> Result<Value> {
            match g2_exact(&channel, eta, beta, &params, tau) {
                Ok(v) => Value::finite(v),
                Err(Error::Undefined(_)) => Ok(Value::Undefined),
                Err(other) => Err(other),
            }
        };
        let g2_zero = g2_cell(0.0)?;
        let g2_taus = taus.iter().map(|&t| g2_cell(t)).collect::<Result<_>>()?;
        Ok((flux_ratio, g2_zero, g2_taus))
    };

    let mut columns = Vec::new();
    let mut row = Vec::new();
    match mode {
        StatsMode::Closed => {
            columns.extend(["closed_flux_ratio".to_string(), "closed_g2_0".to_string()]);
            row.extend([closed_flux, closed_g2]);
            for (i, _) in taus.iter().enumerate() {
                columns.push(format!("closed_g2_tau{}", i + 1));
                row.push(Value::Nan);
            }
        }
        StatsMode::Oracle => {
            let (flux_ratio, g2_zero, g2_taus) = oracle_cells(taus)?;
            columns.extend(["oracle_flux_ratio".to_string(), "oracle_g2_0".to_string()]);
            row.extend([flux_ratio, g2_zero]);
            for (i, cell) in g2_taus.into_iter().enumerate() {
                columns.push(format!("oracle_g2_tau{}", i + 1));
                row.push(cell);
            }
        }
        StatsMode::Both => {
            let (flux_ratio, g2_zero, g2_taus) = oracle_cells(taus)?;
            columns.extend([
                "closed_flux_ratio".to_string(),
                "oracle_flux_ratio".to_string(),
                "flux_ratio_rel_dev".to_string(),
                "closed_g2_0".to_string(),
                "oracle_g2_0".to_string(),
                "g2_0_rel_dev".to_string(),
            ]);
            row.extend([
                closed_flux,
                flux_ratio,
                relative_deviation(closed_flux, flux_ratio),
                closed_g2,
                g2_zero,
                relative_deviation(closed_g2, g2_zero),
            ]);
            for (i, cell) in g2_taus.into_iter().enumerate() {
                columns.push(format!("oracle_g2_tau{}", i + 1));
                row.push(cell);
            }
        }
    }

    let mut table = FigureTable::new(columns);
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "stats");
    table.push_meta(
        "eta",
        format!("{}+{}i", format_number(eta.re), format_number(eta.im)),
    );
    table.push_meta("s", format_number(s));
    table.push_meta("delta", format_number(delta));
    table.push_meta("gamma", "1 (rates in units of the decay rate)");
    table.push_meta(
        "tau-list",
        taus.iter()
            .map(|t| format_number(*t))
            .collect::<Vec<_>>()
            .join(" "),
    );
    table.push_meta("mode", mode.to_string());
    table.seal_meta();
    table.push_row(row)?;
    Ok(table)
}

/// Swept variable of a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Cap half-angle; reports the family overlap.
    Theta,
    /// `|η|` at fixed phase; reports the weak-driving closed forms.
    AbsEta,
    /// Quabis apodization parameter at fixed `θ`.
    Apodization,
    /// Saturation parameter; reports oracle flux ratio and `g²(0)`.
    Saturation,
    /// Dimensionless detuning; reports oracle flux ratio and `g²(0)`.
    Delta,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SweepVariable::Theta => "theta",
            SweepVariable::AbsEta => "abs_eta",
            SweepVariable::Apodization => "a",
            SweepVariable::Saturation => "s",
            SweepVariable::Delta => "delta",
        };
        write!(f, "{name}")
    }
}

/// Fixed parameters accompanying a sweep; fields irrelevant to the swept
/// variable are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepFixed {
    pub family: OverlapFamily,
    pub theta: f64,
    pub eta: Complex64,
    pub eta_phase: f64,
    pub s: f64,
    pub delta: f64,
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl Default for SweepFixed {
    fn default() -> Self {
        Self {
            family: OverlapFamily::Quabis { a: 0.0 },
            theta: PI / 2.0,
            eta: Complex64::ONE,
            eta_phase: 0.0,
            s: 1e-4,
            delta: 0.0,
            n_alpha: crate::quad::DEFAULT_N_ALPHA,
            n_beta: crate::quad::DEFAULT_N_BETA,
        }
    }
}

/// A one-variable parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub fixed: SweepFixed,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo >= self.hi {
            return Err(Error::domain(format!(
                "sweep range must satisfy lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.steps < 2 {
            return Err(Error::domain(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        match self.variable {
            SweepVariable::Theta => {
                if self.lo <= 0.0 || self.hi > PI + 1e-12 {
                    return Err(Error::domain(
                        "theta sweep must stay within (0, pi]".to_string(),
                    ));
                }
            }
            SweepVariable::Apodization | SweepVariable::Saturation => {
                if self.lo < 0.0 {
                    return Err(Error::domain(format!(
                        "{} sweep must start at >= 0",
                        self.variable
                    )));
                }
            }
            SweepVariable::AbsEta => {
                if self.lo < 0.0 {
                    return Err(Error::domain("|eta| sweep must start at >= 0".to_string()));
                }
            }
            SweepVariable::Delta => {}
        }
        Ok(())
    }

    fn grid_points(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Runs a sweep, emitting rows in grid order.
pub fn cmd_sweep(spec: &SweepSpec) -> Result<FigureTable> {
    spec.validate()?;
    let fixed = spec.fixed;
    let points = spec.grid_points();

    let (columns, kind): (Vec<String>, SweepVariable) = match spec.variable {
        SweepVariable::Theta => (
            vec!["theta".into(), "o_re".into(), "o_im".into(), "p".into()],
            spec.variable,
        ),
        SweepVariable::Apodization => (
            vec!["a".into(), "o_re".into(), "o_im".into(), "p".into()],
            spec.variable,
        ),
        SweepVariable::AbsEta => (
            vec!["abs_eta".into(), "flux_ratio".into(), "g2".into()],
            spec.variable,
        ),
        SweepVariable::Saturation => (
            vec!["s".into(), "flux_ratio".into(), "g2_0".into()],
            spec.variable,
        ),
        SweepVariable::Delta => (
            vec!["delta".into(), "flux_ratio".into(), "g2_0".into()],
            spec.variable,
        ),
    };

    let mut table = FigureTable::new(columns);
    table.push_meta("tool", format!("dipolewave {}", env!("CARGO_PKG_VERSION")));
    table.push_meta("command", "sweep");
    table.push_meta("variable", spec.variable.to_string());
    table.push_meta(
        "range",
        format!(
            "[{}, {}] in {} steps",
            format_number(spec.lo),
            format_number(spec.hi),
            spec.steps
        ),
    );
    table.push_meta("family", fixed.family.to_string());
    table.push_meta("theta", format_number(fixed.theta));
    table.push_meta(
        "eta",
        format!(
            "{}+{}i",
            format_number(fixed.eta.re),
            format_number(fixed.eta.im)
        ),
    );
    table.push_meta("eta-phase", format_number(fixed.eta_phase));
    table.push_meta("s", format_number(fixed.s));
    table.push_meta("delta", format_number(fixed.delta));
    table.push_meta("n-alpha", fixed.n_alpha.to_string());
    table.push_meta("n-beta", fixed.n_beta.to_string());
    table.seal_meta();

    match kind {
        SweepVariable::Theta => {
            for &theta in &points {
                let grid = QuadratureGrid::new(theta, fixed.n_alpha, fixed.n_beta)?;
                let spectrum = build_spectrum(fixed.family, theta, &grid)?;
                let result = family_overlap(fixed.family, &spectrum, None, &grid)?;
                table.push_row(vec![
                    Value::finite(theta)?,
                    Value::finite(result.overlap().re)?,
                    Value::finite(result.overlap().im)?,
                    Value::finite(result.content())?,
                ])?;
            }
        }
        SweepVariable::Apodization => {
            let grid = QuadratureGrid::new(fixed.theta, fixed.n_alpha, fixed.n_beta)?;
            for &a in &points {
                let spectrum = quabis_spectrum_with_grid(a, fixed.theta, &grid)?;
                let result = dipole_overlap_with_grid(&spectrum, 0, &grid)?;
                table.push_row(vec![
                    Value::finite(a)?,
                    Value::finite(result.overlap().re)?,
                    Value::finite(result.overlap().im)?,
                    Value::finite(result.content())?,
                ])?;
            }
        }
        SweepVariable::AbsEta => {
            for &abs_eta in &points {
                let eta = Complex64::from_polar(abs_eta, fixed.eta_phase);
                let flux = Value::finite((eta - 2.0).norm_sqr())?;
                let g2 = match weak_drive_g2(eta) {
                    Ok(v) => Value::finite(v)?,
                    Err(Error::Divergent(_)) => Value::Inf,
                    Err(other) => return Err(other),
                };
                table.push_row(vec![Value::finite(abs_eta)?, flux, g2])?;
            }
        }
        SweepVariable::Saturation | SweepVariable::Delta => {
            let channel = DetectionChannel::unit_dipole(1.0)?;
            for &x in &points {
                let (s, delta) = match kind {
                    SweepVariable::Saturation => (x, fixed.delta),
                    _ => (fixed.s, x),
                };
                let params = AtomParams::from_delta(1.0, delta)?;
                let drive = DriveAmplitude::from_saturation(s, &params)?;
                let beta = drive.beta();
                let (flux_cell, g2) = if beta.norm_sqr() > 0.0 {
                    let f0 = (channel.d_factor() * beta).norm_sqr();
                    let flux = flux_exact(&channel, fixed.eta, beta, &params)?;
                    let g2 = match g2_exact(&channel, fixed.eta, beta, &params, 0.0) {
                        Ok(v) => Value::finite(v)?,
                        Err(Error::Undefined(_)) => Value::Undefined,
                        Err(other) => return Err(other),
                    };
                    (Value::finite(flux / f0)?, g2)
                } else {
                    (Value::Undefined, Value::Undefined)
                };
                table.push_row(vec![Value::finite(x)?, flux_cell, g2])?;
            }
        }
    }
    Ok(table)
}
