//! Reciprocal-space angular spectra of dipole waves and focused beam
//! families.
//!
//! A monochromatic beam is represented by the transverse complex vector
//! amplitude it carries on the unit sphere of propagation directions,
//! restricted to a cap of half-angle `θ` (the numerical aperture is
//! `NA = sin θ`). Spectra are closed-form evaluators; sampling happens only
//! inside quadrature.

use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{cap_integrate, QuadratureGrid};

/// `√(3/8π)`, the amplitude of a unit-normalized dipole angular spectrum.
pub fn dipole_amplitude() -> f64 {
    (3.0 / (8.0 * PI)).sqrt()
}

/// A propagation direction on the unit sphere, in spherical coordinates
/// `(α, β)` with polar angle `α` measured from the beam axis `ẑ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    alpha: f64,
    beta: f64,
}

impl Direction {
    /// Validates `α ∈ [0, π]` and `β ∈ [0, 2π)`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..=PI).contains(&alpha) {
            return Err(Error::domain(format!(
                "polar angle must lie in [0, pi], got {alpha}"
            )));
        }
        if !beta.is_finite() || !(0.0..2.0 * PI).contains(&beta) {
            return Err(Error::domain(format!(
                "azimuthal angle must lie in [0, 2pi), got {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Construction from quadrature nodes, which are in range by build.
    pub(crate) fn new_unchecked(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The unit vector `κ̂ = (sin α cos β, sin α sin β, cos α)`.
    pub fn unit_vector(&self) -> Vector3<f64> {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        Vector3::new(sa * cb, sa * sb, ca)
    }
}

/// One of the standard circular unit vectors `û_M`, `M ∈ {−1, 0, +1}`:
/// `û_0 = ẑ`, `û_{±1} = (∓x̂ − iŷ)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularUnitVector {
    m: i32,
    components: Vector3<Complex64>,
}

impl CircularUnitVector {
    pub fn new(m: i32) -> Result<Self> {
        let components = match m {
            0 => Vector3::new(Complex64::ZERO, Complex64::ZERO, Complex64::ONE),
            1 | -1 => {
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                Vector3::new(
                    Complex64::new(-(m as f64) * inv_sqrt2, 0.0),
                    Complex64::new(0.0, -inv_sqrt2),
                    Complex64::ZERO,
                )
            }
            _ => {
                return Err(Error::domain(format!(
                    "dipole index must be -1, 0, or +1, got {m}"
                )))
            }
        };
        Ok(Self { m, components })
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn components(&self) -> &Vector3<Complex64> {
        &self.components
    }
}

/// Unconjugated dot product `Σ aᵢ bᵢ` (the projection convention used for
/// the transverse decomposition `û − (û·κ̂)κ̂`).
pub(crate) fn bilinear_dot(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> Complex64 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

pub(crate) fn complexify(v: &Vector3<f64>) -> Vector3<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Orthonormal tangent basis `(α̂, β̂)` at a direction. Transverse fields
/// are synthesized from this basis so their residual component along `κ̂`
/// stays at rounding level relative to the field itself, even where the
/// field nearly vanishes.
pub(crate) fn tangent_basis(d: &Direction) -> (Vector3<f64>, Vector3<f64>) {
    let (sa, ca) = d.alpha.sin_cos();
    let (sb, cb) = d.beta.sin_cos();
    (
        Vector3::new(ca * cb, ca * sb, -sa),
        Vector3::new(-sb, cb, 0.0),
    )
}

/// Unit polarization vector of the longitudinally polarized beam families:
/// the meridional-plane direction `−α̂` transverse to `κ̂` whose focal
/// superposition points along `+ẑ`,
/// `p̂(α, β) = (−cos α cos β, −cos α sin β, sin α)`.
pub fn longitudinal_pol_vector(d: Direction) -> Vector3<f64> {
    let (alpha_hat, _) = tangent_basis(&d);
    -alpha_hat
}

/// Polarization map of an aplanatic lens for an `x̂`-polarized input: the
/// incoming linear polarization rotated within each meridional plane,
/// `ε̂(α, β) = cos β · α̂ − sin β · β̂`
/// `= (cos α cos²β + sin²β, (cos α − 1) cos β sin β, −sin α cos β)`.
/// Unit length and transverse to `κ̂` by construction.
pub fn aplanatic_pol_vector(d: Direction) -> Vector3<f64> {
    let (alpha_hat, beta_hat) = tangent_basis(&d);
    let (sb, cb) = d.beta.sin_cos();
    alpha_hat * cb - beta_hat * sb
}

/// Which dipole orientation a truncated dipole wave carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipolePolarization {
    /// `û_0 = ẑ`: the focal field points along the beam axis.
    Longitudinal,
    /// `x̂`-polarized combination of `û_{+1}` and `û_{−1}`.
    Transverse,
}

impl fmt::Display for DipolePolarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DipolePolarization::Longitudinal => write!(f, "longitudinal"),
            DipolePolarization::Transverse => write!(f, "transverse"),
        }
    }
}

/// Beam family descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumFamily {
    /// Full-sphere electric dipole wave with index `M`.
    Dipole { m: i32 },
    /// Radially polarized aplanatic beam with Gaussian apodization,
    /// amplitude `A(α) = sin α √|cos α| exp(−a² sin²α)`; `a` is the ratio of
    /// focal length to input beam waist.
    Quabis { a: f64 },
    /// Uniformly illuminated aplanatic lens with `x̂`-polarized input,
    /// amplitude `√(cos α)`.
    Sine,
    /// Dipole wave restricted to the cap and renormalized.
    TruncatedDipole { polarization: DipolePolarization },
    /// User-supplied polar amplitude profile with the meridional
    /// polarization map.
    Tabulated,
}

impl fmt::Display for SpectrumFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumFamily::Dipole { m } => write!(f, "dipole(M={m})"),
            SpectrumFamily::Quabis { a } => write!(f, "quabis(a={a})"),
            SpectrumFamily::Sine => write!(f, "sine"),
            SpectrumFamily::TruncatedDipole { polarization } => {
                write!(f, "truncated-dipole({polarization})")
            }
            SpectrumFamily::Tabulated => write!(f, "tabulated"),
        }
    }
}

type Evaluator = Arc<dyn Fn(Direction) -> Vector3<Complex64> + Send + Sync>;
type PolarProfile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A transverse complex vector field on a spherical cap of half-angle
/// `θ`, unit-normalized over the cap.
///
/// Evaluation outside the cap returns the zero vector. Constructors and
/// evaluators are pure and stateless; a spectrum may be evaluated
/// concurrently from any number of threads.
#[derive(Clone)]
pub struct AngularSpectrum {
    theta_cap: f64,
    family: SpectrumFamily,
    norm_const: f64,
    evaluator: Evaluator,
    /// Set when the spectrum is `A(α)/√𝒩 · p̂(α, β)` with the meridional
    /// polarization map; enables the one-dimensional overlap shortcut.
    polar_profile: Option<PolarProfile>,
}

impl fmt::Debug for AngularSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngularSpectrum")
            .field("theta_cap", &self.theta_cap)
            .field("family", &self.family)
            .field("norm_const", &self.norm_const)
            .finish_non_exhaustive()
    }
}

impl AngularSpectrum {
    /// Half-angle of the support cap.
    pub fn theta_cap(&self) -> f64 {
        self.theta_cap
    }

    pub fn family(&self) -> SpectrumFamily {
        self.family
    }

    /// The normalization integral `𝒩` the raw amplitude was divided by
    /// (squared divisor), `1` for spectra that are normalized in closed
    /// form.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// Spectrum value at a direction; zero outside the cap.
    pub fn value(&self, d: Direction) -> Vector3<Complex64> {
        if d.alpha() > self.theta_cap {
            return Vector3::zeros();
        }
        (self.evaluator)(d)
    }

    /// Normalized polar amplitude for meridionally polarized spectra.
    pub(crate) fn polar_profile(&self) -> Option<&PolarProfile> {
        self.polar_profile.as_ref()
    }

    /// `|χ(κ̂)·κ̂| / |χ(κ̂)|`, the relative transversality defect (0 for an
    /// exactly transverse spectrum; 0 where the spectrum vanishes).
    pub fn transversality_defect(&self, d: Direction) -> f64 {
        let v = self.value(d);
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let k = complexify(&d.unit_vector());
        bilinear_dot(&v, &k).norm() / norm
    }

    /// Cap integral of `|χ|²` on the given grid (1 for a unit-normalized
    /// spectrum).
    pub fn squared_norm(&self, grid: &QuadratureGrid) -> Result<f64> {
        if let Some(profile) = &self.polar_profile {
            return Ok(grid.integrate_polar(|a| {
                let v = profile(a);
                v * v
            }));
        }
        let value = cap_integrate(
            |d| Complex64::new(self.value(d).norm_squared(), 0.0),
            grid.theta(),
            grid,
        )?;
        Ok(value.re)
    }
}

fn check_theta(theta: f64, max: f64, what: &str) -> Result<()> {
    if !theta.is_finite() || theta <= 0.0 || theta > max + 1e-15 {
        return Err(Error::domain(format!(
            "{what}: half-angle must lie in (0, {max:.6}], got {theta}"
        )));
    }
    Ok(())
}

/// Transverse projection `û − (û·κ̂)κ̂` synthesized in the tangent basis.
fn transverse_projection(u: &Vector3<Complex64>, d: &Direction) -> Vector3<Complex64> {
    let (alpha_hat, beta_hat) = tangent_basis(d);
    let alpha_hat = complexify(&alpha_hat);
    let beta_hat = complexify(&beta_hat);
    let along_alpha = bilinear_dot(u, &alpha_hat);
    let along_beta = bilinear_dot(u, &beta_hat);
    alpha_hat * along_alpha + beta_hat * along_beta
}

/// The full-sphere electric dipole spectrum
/// `Φ_M(κ̂) = √(3/8π) [û_M − (û_M·κ̂)κ̂]`, unit-normalized over the sphere.
pub fn dipole_spectrum(m: i32) -> Result<AngularSpectrum> {
    let unit = CircularUnitVector::new(m)?;
    let amp = dipole_amplitude();
    let u = *unit.components();
    let evaluator: Evaluator =
        Arc::new(move |d: Direction| transverse_projection(&u, &d) * Complex64::new(amp, 0.0));
    let polar_profile: Option<PolarProfile> = if m == 0 {
        Some(Arc::new(move |a: f64| amp * a.sin()))
    } else {
        None
    };
    Ok(AngularSpectrum {
        theta_cap: PI,
        family: SpectrumFamily::Dipole { m },
        norm_const: 1.0,
        evaluator,
        polar_profile,
    })
}

/// The `x̂`-polarized dipole spectrum `√(3/8π) [x̂ − (x̂·κ̂)κ̂]`, the
/// `(Φ_{−1} − Φ_{+1})/√2` combination, unit-normalized over the sphere.
pub fn transverse_dipole_spectrum() -> AngularSpectrum {
    let amp = dipole_amplitude();
    let x_hat = Vector3::new(Complex64::ONE, Complex64::ZERO, Complex64::ZERO);
    let evaluator: Evaluator =
        Arc::new(move |d: Direction| transverse_projection(&x_hat, &d) * Complex64::new(amp, 0.0));
    AngularSpectrum {
        theta_cap: PI,
        family: SpectrumFamily::TruncatedDipole {
            polarization: DipolePolarization::Transverse,
        },
        norm_const: 1.0,
        evaluator,
        polar_profile: None,
    }
}

fn meridional_spectrum(
    theta: f64,
    family: SpectrumFamily,
    amplitude: impl Fn(f64) -> f64 + Send + Sync + 'static,
    grid: &QuadratureGrid,
) -> Result<AngularSpectrum> {
    if (grid.theta() - theta).abs() > 1e-15 * theta.max(1.0) {
        return Err(Error::contract(format!(
            "normalization grid was built for theta = {}, spectrum has theta = {theta}",
            grid.theta()
        )));
    }
    let norm = grid.integrate_polar(|a| {
        let v = amplitude(a);
        v * v
    });
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::numeric(format!(
            "normalization integral is {norm} for {family}"
        )));
    }
    let inv = 1.0 / norm.sqrt();
    let profile: PolarProfile = Arc::new(move |a: f64| amplitude(a) * inv);
    let eval_profile = Arc::clone(&profile);
    let evaluator: Evaluator = Arc::new(move |d: Direction| {
        complexify(&longitudinal_pol_vector(d)) * Complex64::new(eval_profile(d.alpha()), 0.0)
    });
    Ok(AngularSpectrum {
        theta_cap: theta,
        family,
        norm_const: norm,
        evaluator,
        polar_profile: Some(profile),
    })
}

/// Radially polarized beam through an aplanatic lens with Gaussian
/// apodization `a = f/w₀ ≥ 0` (focal length over input waist):
/// `χ = A(α) p̂(α, β)/√𝒩` on the cap, `A(α) = sin α √|cos α| e^{−a² sin²α}`,
/// `𝒩 = 2π ∫₀^θ dα sin α |A|²`.
pub fn quabis_spectrum(a: f64, theta: f64) -> Result<AngularSpectrum> {
    check_theta(theta, PI, "quabis spectrum")?;
    let grid = QuadratureGrid::with_defaults(theta)?;
    quabis_spectrum_with_grid(a, theta, &grid)
}

/// [`quabis_spectrum`] normalized on a caller-supplied grid.
pub fn quabis_spectrum_with_grid(
    a: f64,
    theta: f64,
    grid: &QuadratureGrid,
) -> Result<AngularSpectrum> {
    check_theta(theta, PI, "quabis spectrum")?;
    if !a.is_finite() || a < 0.0 {
        return Err(Error::domain(format!(
            "apodization ratio a = f/w0 must be >= 0, got {a}"
        )));
    }
    let a2 = a * a;
    let amplitude = move |alpha: f64| {
        let s = alpha.sin();
        s * alpha.cos().abs().sqrt() * (-a2 * s * s).exp()
    };
    meridional_spectrum(theta, SpectrumFamily::Quabis { a }, amplitude, grid)
}

/// Uniform aplanatic illumination with `x̂`-polarized input: amplitude
/// `√(cos α)` with the meridional-rotation polarization map. Only defined
/// for `θ ≤ π/2`.
pub fn sine_spectrum(theta: f64) -> Result<AngularSpectrum> {
    if theta > PI / 2.0 {
        return Err(Error::domain(format!(
            "sine wave is only valid for half-angles up to pi/2, got {theta}"
        )));
    }
    check_theta(theta, PI / 2.0, "sine spectrum")?;
    let grid = QuadratureGrid::with_defaults(theta)?;
    sine_spectrum_with_grid(theta, &grid)
}

/// [`sine_spectrum`] normalized on a caller-supplied grid.
pub fn sine_spectrum_with_grid(theta: f64, grid: &QuadratureGrid) -> Result<AngularSpectrum> {
    if theta > PI / 2.0 {
        return Err(Error::domain(format!(
            "sine wave is only valid for half-angles up to pi/2, got {theta}"
        )));
    }
    check_theta(theta, PI / 2.0, "sine spectrum")?;
    if (grid.theta() - theta).abs() > 1e-15 * theta.max(1.0) {
        return Err(Error::contract(format!(
            "normalization grid was built for theta = {}, spectrum has theta = {theta}",
            grid.theta()
        )));
    }
    // |ε̂| = 1, so the norm integral reduces to the polar rule over cos α.
    let norm = grid.integrate_polar(|a| a.cos());
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::numeric(format!(
            "normalization integral is {norm} for sine spectrum"
        )));
    }
    let inv = 1.0 / norm.sqrt();
    let evaluator: Evaluator = Arc::new(move |d: Direction| {
        let amp = d.alpha().cos().max(0.0).sqrt() * inv;
        complexify(&aplanatic_pol_vector(d)) * Complex64::new(amp, 0.0)
    });
    Ok(AngularSpectrum {
        theta_cap: theta,
        family: SpectrumFamily::Sine,
        norm_const: norm,
        evaluator,
        polar_profile: None,
    })
}

/// The dipole wave of the requested polarization restricted to the cap of
/// half-angle `θ` and renormalized to unit cap energy.
pub fn truncated_dipole_spectrum(
    polarization: DipolePolarization,
    theta: f64,
) -> Result<AngularSpectrum> {
    check_theta(theta, PI, "truncated dipole")?;
    let grid = QuadratureGrid::with_defaults(theta)?;
    truncated_dipole_spectrum_with_grid(polarization, theta, &grid)
}

/// [`truncated_dipole_spectrum`] normalized on a caller-supplied grid.
pub fn truncated_dipole_spectrum_with_grid(
    polarization: DipolePolarization,
    theta: f64,
    grid: &QuadratureGrid,
) -> Result<AngularSpectrum> {
    check_theta(theta, PI, "truncated dipole")?;
    match polarization {
        DipolePolarization::Longitudinal => {
            let amp = dipole_amplitude();
            meridional_spectrum(
                theta,
                SpectrumFamily::TruncatedDipole { polarization },
                move |a: f64| amp * a.sin(),
                grid,
            )
        }
        DipolePolarization::Transverse => {
            if (grid.theta() - theta).abs() > 1e-15 * theta.max(1.0) {
                return Err(Error::contract(format!(
                    "normalization grid was built for theta = {}, spectrum has theta = {theta}",
                    grid.theta()
                )));
            }
            let base = transverse_dipole_spectrum();
            let energy = cap_integrate(
                |d| Complex64::new(base.value(d).norm_squared(), 0.0),
                theta,
                grid,
            )?
            .re;
            if !energy.is_finite() || energy <= 0.0 {
                return Err(Error::numeric(format!(
                    "cap energy is {energy} for truncated transverse dipole"
                )));
            }
            let inv = Complex64::new(1.0 / energy.sqrt(), 0.0);
            let evaluator: Evaluator = Arc::new(move |d: Direction| base.value(d) * inv);
            Ok(AngularSpectrum {
                theta_cap: theta,
                family: SpectrumFamily::TruncatedDipole { polarization },
                norm_const: energy,
                evaluator,
                polar_profile: None,
            })
        }
    }
}

/// Spectrum with a caller-supplied polar amplitude and the meridional
/// polarization map, renormalized on the grid.
pub fn spectrum_from_polar_profile(
    theta: f64,
    profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    grid: &QuadratureGrid,
) -> Result<AngularSpectrum> {
    check_theta(theta, PI, "tabulated spectrum")?;
    meridional_spectrum(theta, SpectrumFamily::Tabulated, profile, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_direction(rng: &mut impl Rng) -> Direction {
        // Uniform on the sphere.
        let c: f64 = rng.gen_range(-1.0..1.0);
        Direction::new(c.acos(), rng.gen_range(0.0..2.0 * PI)).unwrap()
    }

    #[test]
    fn circular_unit_vectors_match_convention() {
        let u0 = CircularUnitVector::new(0).unwrap();
        assert_eq!(u0.components().z, Complex64::ONE);
        let up = CircularUnitVector::new(1).unwrap();
        let um = CircularUnitVector::new(-1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(up.components().x.re, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(up.components().y.im, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(um.components().x.re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(um.components().y.im, -s, epsilon = 1e-15);
        for m in [-1, 0, 1] {
            let u = CircularUnitVector::new(m).unwrap();
            assert_relative_eq!(u.components().norm(), 1.0, epsilon = 1e-15);
        }
        assert!(CircularUnitVector::new(2).is_err());
    }

    #[test]
    fn dipole_spectrum_values_on_axes() {
        let phi0 = dipole_spectrum(0).unwrap();
        // û_0 ∥ κ̂ on axis: transverse projection vanishes.
        let on_axis = phi0.value(Direction::new(0.0, 0.0).unwrap());
        assert!(on_axis.norm() < 1e-15);
        // û_0 ⟂ κ̂ = x̂: projection is the identity.
        let equator = phi0.value(Direction::new(PI / 2.0, 0.0).unwrap());
        assert_relative_eq!(equator.z.re, dipole_amplitude(), epsilon = 1e-15);
        assert!(equator.x.norm() < 1e-15 && equator.y.norm() < 1e-15);
    }

    #[test]
    fn dipole_spectra_are_unit_normalized_on_the_sphere() {
        let grid = QuadratureGrid::with_defaults(PI).unwrap();
        for m in [-1, 0, 1] {
            let phi = dipole_spectrum(m).unwrap();
            assert_relative_eq!(phi.squared_norm(&grid).unwrap(), 1.0, epsilon = 1e-10);
        }
        let phix = transverse_dipole_spectrum();
        assert_relative_eq!(phix.squared_norm(&grid).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn dipole_spectrum_rejects_bad_index() {
        assert!(dipole_spectrum(3).is_err());
    }

    #[test]
    fn longitudinal_pol_vector_is_transverse_and_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let d = random_direction(&mut rng);
            let p = longitudinal_pol_vector(d);
            assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.dot(&d.unit_vector()), 0.0, epsilon = 1e-12);
        }
        // Purely longitudinal at the equator.
        let eq = longitudinal_pol_vector(Direction::new(PI / 2.0, 1.3).unwrap());
        assert_abs_diff_eq!(eq.z, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.x, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn aplanatic_map_is_identity_on_axis_and_transverse() {
        let on_axis = aplanatic_pol_vector(Direction::new(0.0, 0.7).unwrap());
        assert_abs_diff_eq!(on_axis.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(on_axis.y, 0.0, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let d = random_direction(&mut rng);
            let e = aplanatic_pol_vector(d);
            assert_abs_diff_eq!(e.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.dot(&d.unit_vector()), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectra_are_transverse_at_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let spectra = vec![
            dipole_spectrum(-1).unwrap(),
            dipole_spectrum(0).unwrap(),
            dipole_spectrum(1).unwrap(),
            quabis_spectrum(0.7, 2.0).unwrap(),
            sine_spectrum(1.2).unwrap(),
            truncated_dipole_spectrum(DipolePolarization::Transverse, 2.4).unwrap(),
        ];
        for spectrum in &spectra {
            for _ in 0..200 {
                let d = random_direction(&mut rng);
                assert!(
                    spectrum.transversality_defect(d) <= 1e-12,
                    "{:?} fails at {d:?}",
                    spectrum.family()
                );
            }
        }
    }

    #[test]
    fn constructed_spectra_are_unit_normalized() {
        for (spectrum, theta) in [
            (quabis_spectrum(0.0, PI / 2.0).unwrap(), PI / 2.0),
            (quabis_spectrum(2.0, 2.8).unwrap(), 2.8),
            (sine_spectrum(PI / 2.0).unwrap(), PI / 2.0),
            (
                truncated_dipole_spectrum(DipolePolarization::Longitudinal, 1.9).unwrap(),
                1.9,
            ),
            (
                truncated_dipole_spectrum(DipolePolarization::Transverse, 0.8).unwrap(),
                0.8,
            ),
        ] {
            let grid = QuadratureGrid::with_defaults(theta).unwrap();
            assert_relative_eq!(spectrum.squared_norm(&grid).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn quabis_amplitude_vanishes_at_the_equator() {
        // √|cos α| at the closest representable π/2 is ~8e-9, not 0.
        for a in [0.0, 0.5, 2.0] {
            let spectrum = quabis_spectrum(a, PI).unwrap();
            let v = spectrum.value(Direction::new(PI / 2.0, 0.4).unwrap());
            assert!(v.norm() < 1e-7);
        }
    }

    #[test]
    fn quabis_norm_matches_closed_form_at_a_zero() {
        // 𝒩 = 2π sin⁴θ / 4 for a = 0.
        let spectrum = quabis_spectrum(0.0, PI / 2.0).unwrap();
        assert_relative_eq!(spectrum.norm_const(), PI / 2.0, epsilon = 1e-12);
        // Two quadrature orders agree.
        let n1 = quabis_spectrum_with_grid(
            0.0,
            PI / 2.0,
            &QuadratureGrid::new(PI / 2.0, 128, 1).unwrap(),
        )
        .unwrap()
        .norm_const();
        let n2 = quabis_spectrum_with_grid(
            0.0,
            PI / 2.0,
            &QuadratureGrid::new(PI / 2.0, 256, 1).unwrap(),
        )
        .unwrap()
        .norm_const();
        assert!((n1 - n2).abs() <= 1e-10);
    }

    #[test]
    fn sine_spectrum_polarization_is_x_on_axis() {
        let spectrum = sine_spectrum(PI / 2.0).unwrap();
        let v = spectrum.value(Direction::new(0.0, 0.0).unwrap());
        assert!(v.y.norm() < 1e-15 && v.z.norm() < 1e-15);
        assert!(v.x.re > 0.0);
    }

    #[test]
    fn sine_spectrum_rejects_too_wide_caps() {
        let err = sine_spectrum(2.0).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("pi/2")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn value_is_zero_outside_the_cap() {
        let spectrum = quabis_spectrum(0.0, 1.0).unwrap();
        let v = spectrum.value(Direction::new(1.5, 0.0).unwrap());
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn spectra_evaluate_identically_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<AngularSpectrum>();
        let spectrum = quabis_spectrum(0.7, 2.0).unwrap();
        let d = Direction::new(1.0, 2.0).unwrap();
        let reference = spectrum.value(d);
        let values = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4).map(|_| scope.spawn(|| spectrum.value(d))).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap())
                .collect::<Vec<_>>()
        });
        for value in values {
            assert_eq!(value, reference);
        }
    }

    #[test]
    fn rejects_nonpositive_theta_and_negative_a() {
        assert!(quabis_spectrum(0.0, 0.0).is_err());
        assert!(quabis_spectrum(-1.0, 1.0).is_err());
        assert!(truncated_dipole_spectrum(DipolePolarization::Longitudinal, -0.2).is_err());
    }
}
