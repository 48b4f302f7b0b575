//! Optical Bloch equations for a coherently driven two-level atom, in the
//! frame rotating at the drive frequency: closed-form steady state and
//! fixed-step time integration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Atomic rates: spontaneous emission rate `Γ > 0` and laser detuning
/// `Δ = ω_L − ω_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams {
    gamma: f64,
    detuning: f64,
}

impl AtomParams {
    pub fn new(gamma: f64, detuning: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::domain(format!(
                "spontaneous emission rate must be > 0, got {gamma}"
            )));
        }
        if !detuning.is_finite() {
            return Err(Error::domain("detuning must be finite"));
        }
        Ok(Self { gamma, detuning })
    }

    /// Resonant drive (`Δ = 0`).
    pub fn resonant(gamma: f64) -> Result<Self> {
        Self::new(gamma, 0.0)
    }

    /// Constructs from the dimensionless detuning `δ = 2Δ/Γ`.
    pub fn from_delta(gamma: f64, delta: f64) -> Result<Self> {
        Self::new(gamma, 0.5 * delta * gamma)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Dimensionless detuning `δ = 2Δ/Γ`, always derived.
    pub fn delta(&self) -> f64 {
        2.0 * self.detuning / self.gamma
    }
}

/// Coherent amplitude `β` of the dipole-channel input, in units where
/// `|β|²` is a photon flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveAmplitude {
    beta: Complex64,
}

impl DriveAmplitude {
    pub fn new(beta: Complex64) -> Result<Self> {
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::domain("drive amplitude must be finite"));
        }
        Ok(Self { beta })
    }

    /// Real drive with saturation parameter `s = 8|β|²/Γ`.
    pub fn from_saturation(s: f64, params: &AtomParams) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::domain(format!(
                "saturation parameter must be >= 0, got {s}"
            )));
        }
        Self::new(Complex64::new((s * params.gamma() / 8.0).sqrt(), 0.0))
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Saturation parameter `s = 8|β|²/Γ`, always derived.
    pub fn saturation(&self, params: &AtomParams) -> f64 {
        8.0 * self.beta.norm_sqr() / params.gamma()
    }
}

/// Bloch-ball slack accepted at construction.
const BALL_TOLERANCE: f64 = 1e-9;
/// Bloch-ball slack accepted along an integrated trajectory.
const BALL_TOLERANCE_EVOLVE: f64 = 1e-6;

/// Atomic expectation values `⟨σ⁻⟩` and `⟨σ_z⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    sm: Complex64,
    sz: f64,
}

impl BlochState {
    /// Validates the Bloch-ball bound `4|⟨σ⁻⟩|² + ⟨σ_z⟩² ≤ 1`.
    pub fn new(sm: Complex64, sz: f64) -> Result<Self> {
        if !sm.re.is_finite() || !sm.im.is_finite() || !sz.is_finite() {
            return Err(Error::domain("state components must be finite"));
        }
        let state = Self { sm, sz };
        if state.ball_radius_sq() > 1.0 + BALL_TOLERANCE {
            return Err(Error::domain(format!(
                "state lies outside the Bloch ball: 4|sm|^2 + sz^2 = {}",
                state.ball_radius_sq()
            )));
        }
        Ok(state)
    }

    pub fn ground() -> Self {
        Self {
            sm: Complex64::ZERO,
            sz: -1.0,
        }
    }

    pub fn excited() -> Self {
        Self {
            sm: Complex64::ZERO,
            sz: 1.0,
        }
    }

    /// `⟨σ⁻⟩`.
    pub fn sm(&self) -> Complex64 {
        self.sm
    }

    /// `⟨σ_z⟩`.
    pub fn sz(&self) -> f64 {
        self.sz
    }

    /// Excited-state population `⟨σ⁺σ⁻⟩ = (1 + ⟨σ_z⟩)/2`.
    pub fn population(&self) -> f64 {
        0.5 * (1.0 + self.sz)
    }

    /// `4|⟨σ⁻⟩|² + ⟨σ_z⟩²`, at most 1 for a physical state.
    pub fn ball_radius_sq(&self) -> f64 {
        4.0 * self.sm.norm_sqr() + self.sz * self.sz
    }
}

/// Right-hand side of the Bloch equations:
/// `d⟨σ⁻⟩/dt = (iΔ − Γ/2)⟨σ⁻⟩ + √Γ β ⟨σ_z⟩`,
/// `d⟨σ_z⟩/dt = −Γ(1 + ⟨σ_z⟩) − 4√Γ Re(β* ⟨σ⁻⟩)`.
pub fn bloch_rhs(
    state: &BlochState,
    params: &AtomParams,
    drive: &DriveAmplitude,
) -> (Complex64, f64) {
    let gamma = params.gamma();
    let sqrt_gamma = gamma.sqrt();
    let beta = drive.beta();
    let dsm = Complex64::new(-0.5 * gamma, params.detuning()) * state.sm()
        + sqrt_gamma * beta * state.sz();
    let dsz = -gamma * (1.0 + state.sz()) - 4.0 * sqrt_gamma * (beta.conj() * state.sm()).re;
    (dsm, dsz)
}

/// Closed-form steady state:
/// `√Γ⟨σ⁻⟩ = −2β(1 + iδ)/(1 + δ² + s)`,
/// `⟨σ_z⟩ = −(1 + δ²)/(1 + δ² + s)`.
pub fn steady_state(params: &AtomParams, drive: &DriveAmplitude) -> BlochState {
    let delta = params.delta();
    let s = drive.saturation(params);
    let denom = 1.0 + delta * delta + s;
    let sm = -2.0 * drive.beta() * Complex64::new(1.0, delta) / (denom * params.gamma().sqrt());
    let sz = -(1.0 + delta * delta) / denom;
    BlochState { sm, sz }
}

/// Input-output balance at a state:
/// `√Γ·2Re(β*⟨σ⁻⟩) + Γ⟨σ⁺σ⁻⟩`; zero exactly at the steady state.
pub fn flux_balance_residual(
    state: &BlochState,
    params: &AtomParams,
    drive: &DriveAmplitude,
) -> f64 {
    let gamma = params.gamma();
    2.0 * gamma.sqrt() * (drive.beta().conj() * state.sm()).re + gamma * state.population()
}

/// One point of an integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSample {
    pub time: f64,
    pub state: BlochState,
}

/// Default integration step, `0.01/Γ`.
pub fn default_time_step(params: &AtomParams) -> f64 {
    0.01 / params.gamma()
}

/// Integrates the Bloch equations with the classic fourth-order one-step
/// method from `state0` to `t = horizon`, sampling every accepted step.
///
/// The step must satisfy `dt ≤ 0.05/Γ`. A Bloch-ball violation beyond 1e-6
/// along the trajectory aborts with a numeric-instability error.
pub fn evolve(
    state0: &BlochState,
    params: &AtomParams,
    drive: &DriveAmplitude,
    dt: f64,
    horizon: f64,
) -> Result<Vec<BlochSample>> {
    if !dt.is_finite() || dt <= 0.0 || dt > 0.05 / params.gamma() {
        return Err(Error::domain(format!(
            "time step must lie in (0, 0.05/gamma], got {dt}"
        )));
    }
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::domain(format!(
            "horizon must be >= 0, got {horizon}"
        )));
    }
    let mut samples = vec![BlochSample {
        time: 0.0,
        state: *state0,
    }];
    let mut time = 0.0;
    let mut sm = state0.sm();
    let mut sz = state0.sz();
    while time < horizon - 1e-15 * horizon.max(1.0) {
        let step = dt.min(horizon - time);
        let (k1m, k1z) = rhs_raw(sm, sz, params, drive);
        let (k2m, k2z) = rhs_raw(sm + 0.5 * step * k1m, sz + 0.5 * step * k1z, params, drive);
        let (k3m, k3z) = rhs_raw(sm + 0.5 * step * k2m, sz + 0.5 * step * k2z, params, drive);
        let (k4m, k4z) = rhs_raw(sm + step * k3m, sz + step * k3z, params, drive);
        sm += step / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        sz += step / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        time += step;
        let radius = 4.0 * sm.norm_sqr() + sz * sz;
        if !radius.is_finite() || radius > 1.0 + BALL_TOLERANCE_EVOLVE {
            return Err(Error::numeric(format!(
                "Bloch-ball bound violated at t = {time}: 4|sm|^2 + sz^2 = {radius}"
            )));
        }
        samples.push(BlochSample {
            time,
            state: BlochState { sm, sz },
        });
    }
    Ok(samples)
}

fn rhs_raw(
    sm: Complex64,
    sz: f64,
    params: &AtomParams,
    drive: &DriveAmplitude,
) -> (Complex64, f64) {
    let state = BlochState { sm, sz };
    bloch_rhs(&state, params, drive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn resonant_drive(gamma: f64, s: f64) -> (AtomParams, DriveAmplitude) {
        let params = AtomParams::resonant(gamma).unwrap();
        let drive = DriveAmplitude::from_saturation(s, &params).unwrap();
        (params, drive)
    }

    #[test]
    fn undriven_steady_state_is_the_ground_state() {
        let (params, drive) = resonant_drive(1.0, 0.0);
        let ss = steady_state(&params, &drive);
        assert_eq!(ss.sm(), Complex64::ZERO);
        assert_abs_diff_eq!(ss.sz(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn resonant_unit_saturation_matches_closed_form() {
        for gamma in [1.0, 3.81e7] {
            let (params, drive) = resonant_drive(gamma, 1.0);
            let ss = steady_state(&params, &drive);
            let scaled = ss.sm() * gamma.sqrt();
            assert_relative_eq!(scaled.re, -drive.beta().re, epsilon = 1e-12);
            assert_abs_diff_eq!(scaled.im, 0.0, epsilon = 1e-15);
            assert_relative_eq!(ss.sz(), -0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn far_detuned_atom_stays_near_the_ground_state() {
        let params = AtomParams::from_delta(1.0, 1e6).unwrap();
        let drive = DriveAmplitude::new(Complex64::new(0.3, 0.1)).unwrap();
        let ss = steady_state(&params, &drive);
        assert!(ss.sm().norm() < 1e-5);
        assert!((ss.sz() + 1.0).abs() < 1e-6);
    }

    #[test]
    fn steady_state_is_a_fixed_point_of_the_equations() {
        for (delta, s) in [(0.0, 1.0), (1.5, 0.3), (-2.0, 40.0), (0.7, 1e-4)] {
            let params = AtomParams::from_delta(2.0, delta).unwrap();
            let drive = DriveAmplitude::from_saturation(s, &params).unwrap();
            let ss = steady_state(&params, &drive);
            let (dsm, dsz) = bloch_rhs(&ss, &params, &drive);
            let norm = (dsm.norm_sqr() + dsz * dsz).sqrt();
            assert!(norm <= 1e-12 * params.gamma(), "rhs norm {norm}");
        }
    }

    #[test]
    fn steady_state_satisfies_flux_balance() {
        let (params, drive) = resonant_drive(1.0, 1.0);
        let ss = steady_state(&params, &drive);
        assert!(flux_balance_residual(&ss, &params, &drive).abs() <= 1e-12);
    }

    #[test]
    fn flux_balance_examples() {
        let (params, drive) = resonant_drive(2.5, 0.0);
        assert_eq!(
            flux_balance_residual(&BlochState::ground(), &params, &drive),
            0.0
        );
        assert_relative_eq!(
            flux_balance_residual(&BlochState::excited(), &params, &drive),
            params.gamma(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn undriven_ground_state_is_stationary() {
        let (params, drive) = resonant_drive(1.0, 0.0);
        let trajectory = evolve(&BlochState::ground(), &params, &drive, 0.01, 5.0).unwrap();
        for sample in trajectory {
            assert!(sample.state.sm().norm() < 1e-15);
            assert_abs_diff_eq!(sample.state.sz(), -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn excited_state_decays_exponentially() {
        let (params, drive) = resonant_drive(1.0, 0.0);
        let trajectory = evolve(&BlochState::excited(), &params, &drive, 0.01, 1.0).unwrap();
        let last = trajectory.last().unwrap();
        assert_relative_eq!(last.time, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            last.state.sz(),
            -1.0 + 2.0 * (-1.0_f64).exp(),
            epsilon = 1e-8
        );
    }

    #[test]
    fn trajectory_converges_to_the_steady_state() {
        let (params, drive) = resonant_drive(1.0, 1.0);
        let trajectory = evolve(&BlochState::ground(), &params, &drive, 0.01, 30.0).unwrap();
        let last = trajectory.last().unwrap().state;
        let ss = steady_state(&params, &drive);
        let distance = ((last.sm() - ss.sm()).norm_sqr() + (last.sz() - ss.sz()).powi(2)).sqrt();
        assert!(distance <= 1e-6, "distance {distance}");
    }

    #[test]
    fn saturation_drives_population_to_one_half_monotonically() {
        let params = AtomParams::resonant(1.0).unwrap();
        let mut previous = -1.0;
        for exponent in -4..=6 {
            let s = 10f64.powi(exponent);
            let drive = DriveAmplitude::from_saturation(s, &params).unwrap();
            let sz = steady_state(&params, &drive).sz();
            assert!(sz > previous);
            assert!(sz < 0.0);
            previous = sz;
        }
        let drive = DriveAmplitude::from_saturation(1e8, &params).unwrap();
        assert_abs_diff_eq!(
            steady_state(&params, &drive).population(),
            0.5,
            epsilon = 1e-7
        );
    }

    #[test]
    fn weak_drive_response_is_linear() {
        let params = AtomParams::from_delta(1.0, 0.8).unwrap();
        let beta = Complex64::new(1e-3, 5e-4);
        let drive = DriveAmplitude::new(beta).unwrap();
        assert!(drive.saturation(&params) <= 1e-4);
        let ss = steady_state(&params, &drive);
        let linear =
            -2.0 * beta * Complex64::new(1.0, params.delta()) / (1.0 + params.delta().powi(2));
        let relative = (ss.sm() * params.gamma().sqrt() - linear).norm() / linear.norm();
        assert!(relative <= 2e-4, "relative deviation {relative}");
    }

    #[test]
    fn bloch_ball_holds_along_trajectories() {
        let params = AtomParams::from_delta(1.0, 1.0).unwrap();
        let drive = DriveAmplitude::from_saturation(50.0, &params).unwrap();
        let trajectory = evolve(&BlochState::ground(), &params, &drive, 0.005, 20.0).unwrap();
        for sample in trajectory {
            assert!(sample.state.ball_radius_sq() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn oversized_step_is_rejected() {
        let (params, drive) = resonant_drive(1.0, 1.0);
        assert!(matches!(
            evolve(&BlochState::ground(), &params, &drive, 0.06, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unstable_integration_reports_numeric_failure() {
        let (params, drive) = resonant_drive(1.0, 1e6);
        let result = evolve(&BlochState::ground(), &params, &drive, 0.05, 10.0);
        assert!(matches!(result, Err(Error::Numeric(_))));
    }

    #[test]
    fn constructors_validate_inputs() {
        assert!(AtomParams::new(0.0, 0.0).is_err());
        assert!(AtomParams::new(-1.0, 0.0).is_err());
        assert!(
            DriveAmplitude::from_saturation(-0.1, &AtomParams::resonant(1.0).unwrap()).is_err()
        );
        assert!(BlochState::new(Complex64::new(0.9, 0.0), 0.9).is_err());
        let params = AtomParams::from_delta(4.0, 1.25).unwrap();
        assert_relative_eq!(params.delta(), 1.25, epsilon = 1e-15);
    }
}
