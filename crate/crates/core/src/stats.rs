//! Detection geometry and the weak-driving closed forms for flux and
//! photon statistics.
//!
//! A detector at direction `R̂` analyzing polarization `ε̂` sees the dipole
//! channel through the geometric factor `𝒟` and everything else through the
//! aggregate factor `𝒫`. The single complex parameter
//! `η = (𝒫α + 𝒟β)/(𝒟β)` then fixes the weak-driving flux ratio
//! `F/F₀ = |η−2|²` and `g²(0) = |η|²|η−4|²/|η−2|⁴`.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::{bilinear_dot, complexify, CircularUnitVector};

/// A detection channel: detector direction `R̂`, analyzed polarization `ε̂`
/// (transverse to `R̂`), atomic dipole index `K`, and the aggregate
/// non-dipole geometric factor `𝒫 ≥ 0`.
///
/// `𝒟` is recomputed from `(K, R̂, ε̂)` on demand, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionChannel {
    k: i32,
    r_hat: Vector3<f64>,
    eps_hat: Vector3<Complex64>,
    p_factor: f64,
}

impl DetectionChannel {
    pub fn new(
        k: i32,
        r_hat: Vector3<f64>,
        eps_hat: Vector3<Complex64>,
        p_factor: f64,
    ) -> Result<Self> {
        CircularUnitVector::new(k)?;
        validate_geometry(&r_hat, &eps_hat)?;
        if !p_factor.is_finite() || p_factor < 0.0 {
            return Err(Error::domain(format!(
                "non-dipole geometric factor must be >= 0, got {p_factor}"
            )));
        }
        Ok(Self {
            k,
            r_hat,
            eps_hat,
            p_factor,
        })
    }

    /// Channel with `𝒟 = 1`: a `K = 0` dipole viewed from the side
    /// (`R̂ = x̂`) through a `ẑ` analyzer.
    pub fn unit_dipole(p_factor: f64) -> Result<Self> {
        Self::new(
            0,
            Vector3::x(),
            Vector3::new(Complex64::ZERO, Complex64::ZERO, Complex64::ONE),
            p_factor,
        )
    }

    pub fn dipole_index(&self) -> i32 {
        self.k
    }

    pub fn r_hat(&self) -> &Vector3<f64> {
        &self.r_hat
    }

    pub fn eps_hat(&self) -> &Vector3<Complex64> {
        &self.eps_hat
    }

    /// The aggregate non-dipole geometric factor `𝒫`.
    pub fn p_factor(&self) -> f64 {
        self.p_factor
    }

    /// The dipole geometric factor `𝒟`, recomputed from the stored
    /// geometry.
    pub fn d_factor(&self) -> Complex64 {
        projection_unchecked(self.k, &self.r_hat, &self.eps_hat)
    }
}

fn validate_geometry(r_hat: &Vector3<f64>, eps_hat: &Vector3<Complex64>) -> Result<()> {
    if (r_hat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::contract(format!(
            "detector direction must be a unit vector, |R| = {}",
            r_hat.norm()
        )));
    }
    if (eps_hat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::contract(format!(
            "analyzed polarization must be a unit vector, |eps| = {}",
            eps_hat.norm()
        )));
    }
    let r = complexify(r_hat);
    if bilinear_dot(eps_hat, &r).norm() > 1e-12 {
        return Err(Error::contract(
            "analyzed polarization must be transverse to the detector direction".to_string(),
        ));
    }
    Ok(())
}

fn projection_unchecked(k: i32, r_hat: &Vector3<f64>, eps_hat: &Vector3<Complex64>) -> Complex64 {
    let u = *CircularUnitVector::new(k)
        .expect("dipole index validated at construction")
        .components();
    let r = complexify(r_hat);
    bilinear_dot(&u, eps_hat) - bilinear_dot(&u, &r) * bilinear_dot(&r, eps_hat)
}

/// The dipole geometric factor
/// `𝒟 = û_K·ε̂ − (û_K·R̂)(R̂·ε̂)`: the transverse projection of the dipole
/// orientation onto the analyzed polarization at the detector direction.
pub fn dipole_projection(
    k: i32,
    r_hat: &Vector3<f64>,
    eps_hat: &Vector3<Complex64>,
) -> Result<Complex64> {
    CircularUnitVector::new(k)?;
    validate_geometry(r_hat, eps_hat)?;
    Ok(projection_unchecked(k, r_hat, eps_hat))
}

/// The complex ratio of the total free-field amplitude at the detector to
/// its dipole-channel part; `η = 1` means pure dipole illumination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaParameter {
    eta: Complex64,
}

impl EtaParameter {
    pub fn new(eta: Complex64) -> Result<Self> {
        if !eta.re.is_finite() || !eta.im.is_finite() {
            return Err(Error::domain("eta must be finite"));
        }
        Ok(Self { eta })
    }

    pub fn value(&self) -> Complex64 {
        self.eta
    }
}

/// `η` from the coherent amplitudes of the non-dipole (`α`) and dipole
/// (`β`) channels: `𝒟ηβ = 𝒫α + 𝒟β`.
pub fn eta_from_amplitudes(
    channel: &DetectionChannel,
    alpha_amp: Complex64,
    beta: Complex64,
) -> Result<EtaParameter> {
    let d = channel.d_factor();
    let denominator = d * beta;
    if denominator.norm() == 0.0 {
        return Err(Error::Undefined(
            "eta is undefined: the detector is blind to the dipole channel (D*beta = 0)".into(),
        ));
    }
    EtaParameter::new((channel.p_factor() * alpha_amp + denominator) / denominator)
}

/// Weak-driving on-resonance flux at the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakDriveFlux {
    /// `F = |𝒟|²|β|²|η−2|²`.
    pub flux: f64,
    /// `F/F₀ = |η−2|²` with `F₀ = |𝒟β|²`, the flux without the atom.
    pub ratio: f64,
}

/// Flux in the weak-driving on-resonance limit. The caller is responsible
/// for being in that regime (`s ≪ 1`); the formula itself is total.
pub fn weak_drive_flux(
    channel: &DetectionChannel,
    beta: Complex64,
    eta: Complex64,
) -> WeakDriveFlux {
    let base = (channel.d_factor() * beta).norm_sqr();
    let ratio = (eta - 2.0).norm_sqr();
    WeakDriveFlux {
        flux: base * ratio,
        ratio,
    }
}

/// Weak-driving on-resonance `g²(0) = |η|²|η−4|²/|η−2|⁴`.
///
/// Diverges at `η = 2`, where the detected flux vanishes and the bunching
/// is strongest.
pub fn weak_drive_g2(eta: Complex64) -> Result<f64> {
    let gap = (eta - 2.0).norm_sqr();
    if gap == 0.0 {
        return Err(Error::Divergent(
            "g2(0) diverges at eta = 2 (vanishing flux, strongest bunching)".into(),
        ));
    }
    Ok(eta.norm_sqr() * (eta - 4.0).norm_sqr() / (gap * gap))
}

/// Resonant flux for arbitrary drive strength, as a dimensionless ratio:
/// `((1 − 2/|η|)² + s)/(1 + s)`. Tends to `(1 − 2/|η|)²` for `s → 0` and
/// to 1 at saturation.
pub fn resonant_flux_ratio(abs_eta: f64, s: f64) -> Result<f64> {
    if !abs_eta.is_finite() || abs_eta <= 0.0 {
        return Err(Error::domain(format!("|eta| must be > 0, got {abs_eta}")));
    }
    if !s.is_finite() || s < 0.0 {
        return Err(Error::domain(format!(
            "saturation parameter must be >= 0, got {s}"
        )));
    }
    let base = 1.0 - 2.0 / abs_eta;
    Ok((base * base + s) / (1.0 + s))
}

/// The 1-D input-output parameters identified with `(η, β)`.
///
/// The identification maps `R ↔ |η||β|²` (total incident flux) and
/// `γ_S/γ ↔ 1/|η|` (fraction of the spontaneous emission subtended by the
/// incident beam). It is not a perfect correspondence: `η` is complex and
/// unbounded while `0 ≤ 2γ_S/γ ≤ 2`, so the map is faithful only for real
/// `|η| ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarmichaelParameters {
    /// Total incident flux `R`.
    pub incident_flux: f64,
    /// `γ_S/γ`.
    pub rate_fraction: f64,
}

pub fn carmichael_map(eta: Complex64, beta: Complex64) -> Result<CarmichaelParameters> {
    let abs_eta = eta.norm();
    if abs_eta == 0.0 {
        return Err(Error::domain(
            "the identification requires eta != 0".to_string(),
        ));
    }
    Ok(CarmichaelParameters {
        incident_flux: abs_eta * beta.norm_sqr(),
        rate_fraction: 1.0 / abs_eta,
    })
}
