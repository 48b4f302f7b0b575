//! Dipole-overlap computation, closed-form maximum overlaps, and the
//! variational optimal profile.
//!
//! The overlap `𝒪_d = ∫_cap χ·Φ_M* dΩ` between a unit-normalized beam
//! spectrum and a unit-normalized dipole spectrum measures how much of the
//! beam couples to the dipole channel; the dipole content is `p = |𝒪_d|²`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{cap_integrate, QuadratureGrid};
use crate::spectra::{
    bilinear_dot, dipole_amplitude, dipole_spectrum, spectrum_from_polar_profile,
    transverse_dipole_spectrum, AngularSpectrum,
};

/// Tolerance on `∫|χ|² = 1` accepted before an overlap is computed.
const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Complex overlap with a dipole wave plus the dipole content `p = |𝒪_d|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapResult {
    overlap: Complex64,
    content: f64,
}

impl OverlapResult {
    fn from_overlap(overlap: Complex64) -> Result<Self> {
        let raw = overlap.norm_sqr();
        if !raw.is_finite() {
            return Err(Error::numeric("overlap integral is not finite"));
        }
        // Cauchy–Schwarz bounds p by 1 for unit-normalized spectra; only
        // rounding may push it over.
        let content = if raw > 1.0 && raw <= 1.0 + 1e-12 {
            1.0
        } else if raw > 1.0 {
            return Err(Error::contract(format!(
                "dipole content {raw} exceeds 1; spectra are not unit-normalized"
            )));
        } else {
            raw
        };
        Ok(Self { overlap, content })
    }

    /// The complex overlap `𝒪_d`.
    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }

    /// The dipole content `p = |𝒪_d|² ∈ [0, 1]`.
    pub fn content(&self) -> f64 {
        self.content
    }
}

fn check_grid(spectrum: &AngularSpectrum, grid: &QuadratureGrid) -> Result<()> {
    let theta = spectrum.theta_cap();
    if (grid.theta() - theta).abs() > 1e-15 * theta.max(1.0) {
        return Err(Error::contract(format!(
            "grid was built for theta = {}, spectrum has theta = {theta}",
            grid.theta()
        )));
    }
    Ok(())
}

fn check_normalized(spectrum: &AngularSpectrum, grid: &QuadratureGrid) -> Result<()> {
    let norm = spectrum.squared_norm(grid)?;
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::contract(format!(
            "spectrum is not unit-normalized: cap norm is {norm}"
        )));
    }
    Ok(())
}

/// Overlap of `spectrum` with the dipole wave `Φ_M` on the default grid.
pub fn dipole_overlap(spectrum: &AngularSpectrum, m: i32) -> Result<OverlapResult> {
    let grid = QuadratureGrid::with_defaults(spectrum.theta_cap())?;
    dipole_overlap_with_grid(spectrum, m, &grid)
}

/// Overlap of `spectrum` with the dipole wave `Φ_M`,
/// `𝒪_d = ∫_cap χ·Φ_M* dΩ`.
///
/// Azimuthally symmetric spectra built on the meridional polarization map
/// shortcut to the one-dimensional polar rule for `M = 0`; the
/// two-dimensional path agrees with it to 1e-12.
pub fn dipole_overlap_with_grid(
    spectrum: &AngularSpectrum,
    m: i32,
    grid: &QuadratureGrid,
) -> Result<OverlapResult> {
    let dipole = dipole_spectrum(m)?;
    check_grid(spectrum, grid)?;
    check_normalized(spectrum, grid)?;
    if m == 0 {
        if let Some(profile) = spectrum.polar_profile() {
            // χ·Φ_0* = A(α)/√𝒩 · √(3/8π) sin α (p̂·p̂ = 1).
            let amp = dipole_amplitude();
            let overlap = grid.integrate_polar(|a| profile(a) * amp * a.sin());
            return OverlapResult::from_overlap(Complex64::new(overlap, 0.0));
        }
    }
    overlap_2d(spectrum, &dipole, grid)
}

/// Overlap of `spectrum` with the `x̂`-polarized transverse dipole wave,
/// the `(Φ_{−1} − Φ_{+1})/√2` superposition.
pub fn transverse_dipole_overlap(spectrum: &AngularSpectrum) -> Result<OverlapResult> {
    let grid = QuadratureGrid::with_defaults(spectrum.theta_cap())?;
    transverse_dipole_overlap_with_grid(spectrum, &grid)
}

/// [`transverse_dipole_overlap`] on a caller-supplied grid.
pub fn transverse_dipole_overlap_with_grid(
    spectrum: &AngularSpectrum,
    grid: &QuadratureGrid,
) -> Result<OverlapResult> {
    check_grid(spectrum, grid)?;
    check_normalized(spectrum, grid)?;
    overlap_2d(spectrum, &transverse_dipole_spectrum(), grid)
}

fn overlap_2d(
    spectrum: &AngularSpectrum,
    target: &AngularSpectrum,
    grid: &QuadratureGrid,
) -> Result<OverlapResult> {
    let overlap = cap_integrate(
        |d| {
            let chi = spectrum.value(d);
            let phi = target.value(d).map(|c| c.conj());
            bilinear_dot(&chi, &phi)
        },
        spectrum.theta_cap(),
        grid,
    )?;
    OverlapResult::from_overlap(overlap)
}

/// Closed-form maximum dipole content achievable on a cap of half-angle
/// `θ` with longitudinal polarization:
/// `|𝒪_max|² = 1/2 + cos³θ/4 − 3 cos θ/4`.
pub fn max_overlap_longitudinal(theta: f64) -> Result<f64> {
    check_closed_form_theta(theta)?;
    let c = theta.cos();
    Ok(0.5 + 0.25 * c * c * c - 0.75 * c)
}

/// Closed-form maximum dipole content for transverse polarization: the cap
/// energy fraction of a transverse dipole wave,
/// `(3/8)(1 − cos θ) + (1/8)(1 − cos³θ)`.
pub fn max_overlap_transverse(theta: f64) -> Result<f64> {
    check_closed_form_theta(theta)?;
    let c = theta.cos();
    Ok(0.375 * (1.0 - c) + 0.125 * (1.0 - c * c * c))
}

fn check_closed_form_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!(
            "half-angle must lie in [0, pi], got {theta}"
        )));
    }
    Ok(())
}

/// The Cauchy–Schwarz-optimal polar amplitude `A*(α) ∝ sin α` sampled on
/// the quadrature nodes, normalized to unit cap energy, together with the
/// dipole content it achieves.
#[derive(Debug, Clone)]
pub struct OptimalProfile {
    /// Polar quadrature nodes the profile is sampled on.
    pub alpha: Vec<f64>,
    /// `A*(α_i)`, with `2π ∫ dα sin α A*² = 1`.
    pub amplitude: Vec<f64>,
    /// Achieved dipole content; equals the longitudinal closed form.
    pub content: f64,
}

/// Computes the optimal longitudinal profile for a cap of half-angle
/// `theta` on the default grid.
pub fn optimal_profile(theta: f64) -> Result<OptimalProfile> {
    let grid = QuadratureGrid::with_defaults(theta)?;
    optimal_profile_with_grid(theta, &grid)
}

/// [`optimal_profile`] on a caller-supplied grid.
pub fn optimal_profile_with_grid(theta: f64, grid: &QuadratureGrid) -> Result<OptimalProfile> {
    let spectrum = spectrum_from_polar_profile(theta, |a| a.sin(), grid)?;
    let result = dipole_overlap_with_grid(&spectrum, 0, grid)?;
    let profile = spectrum
        .polar_profile()
        .expect("profile spectra carry a polar profile");
    let alpha = grid.polar_nodes().to_vec();
    let amplitude = alpha.iter().map(|&a| profile(a)).collect();
    Ok(OptimalProfile {
        alpha,
        amplitude,
        content: result.content(),
    })
}

/// `|η − 1| = (𝒫/𝒟) √((1 − p)/p)`, the geometric gap between the total
/// free field and its dipole part implied by a dipole content `p`.
pub fn eta_gap_from_overlap(content: f64, p_over_d: f64) -> Result<f64> {
    if !content.is_finite() || !(0.0..=1.0).contains(&content) {
        return Err(Error::domain(format!(
            "dipole content must lie in [0, 1], got {content}"
        )));
    }
    if !p_over_d.is_finite() || p_over_d < 0.0 {
        return Err(Error::domain(format!(
            "geometric factor ratio must be >= 0, got {p_over_d}"
        )));
    }
    if content == 0.0 {
        return Err(Error::Divergent(
            "no dipole content: eta is unbounded".into(),
        ));
    }
    Ok(p_over_d * ((1.0 - content) / content).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{
        quabis_spectrum, quabis_spectrum_with_grid, sine_spectrum, truncated_dipole_spectrum,
        DipolePolarization,
    };
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn quabis_limit_content_is_64_over_147() {
        let spectrum = quabis_spectrum(0.0, PI / 2.0).unwrap();
        let result = dipole_overlap(&spectrum, 0).unwrap();
        assert_abs_diff_eq!(result.content(), 64.0 / 147.0, epsilon = 1e-10);
        // 𝒪_d = (8/21)√3 for this beam.
        assert_abs_diff_eq!(
            result.overlap().re,
            8.0 / 21.0 * 3.0_f64.sqrt(),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(result.overlap().im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn hemisphere_dipole_density_integrates_to_one_half() {
        // ∫_cap |Φ₀|² dΩ over the hemisphere is the longitudinal maximum 1/2.
        let grid = QuadratureGrid::with_defaults(PI / 2.0).unwrap();
        let phi0 = dipole_spectrum(0).unwrap();
        let integral = cap_integrate(
            |d| Complex64::new(phi0.value(d).norm_squared(), 0.0),
            PI / 2.0,
            &grid,
        )
        .unwrap()
        .re;
        assert_abs_diff_eq!(integral, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(
            integral,
            max_overlap_longitudinal(PI / 2.0).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn dipole_waves_are_orthonormal_on_the_sphere() {
        // ∫ Φ_M·Φ_M'* dΩ = δ_MM'; the off-diagonal cases exercise the
        // complex conjugation against the e^{±iβ} azimuthal orders.
        for m in [-1, 0, 1] {
            let spectrum = dipole_spectrum(m).unwrap();
            for target in [-1, 0, 1] {
                let overlap = dipole_overlap(&spectrum, target).unwrap();
                let expected = if m == target { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(overlap.content(), expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn truncated_longitudinal_matches_closed_form() {
        for k in 1..=20 {
            let theta = PI * k as f64 / 20.0;
            let spectrum =
                truncated_dipole_spectrum(DipolePolarization::Longitudinal, theta).unwrap();
            let p = dipole_overlap(&spectrum, 0).unwrap().content();
            let closed = max_overlap_longitudinal(theta).unwrap();
            assert_abs_diff_eq!(p, closed, epsilon = 1e-8);
        }
    }

    #[test]
    fn untruncated_dipole_has_unit_content() {
        let spectrum = truncated_dipole_spectrum(DipolePolarization::Longitudinal, PI).unwrap();
        let p = dipole_overlap(&spectrum, 0).unwrap().content();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn truncated_transverse_is_half_at_hemisphere() {
        let spectrum = truncated_dipole_spectrum(DipolePolarization::Transverse, PI / 2.0).unwrap();
        let p = transverse_dipole_overlap(&spectrum).unwrap().content();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn sine_wave_content_is_32_over_75() {
        let spectrum = sine_spectrum(PI / 2.0).unwrap();
        let p = transverse_dipole_overlap(&spectrum).unwrap().content();
        assert_abs_diff_eq!(p, 32.0 / 75.0, epsilon = 1e-10);
    }

    #[test]
    fn transverse_overlap_agrees_with_m_combination() {
        // Φ_x = (Φ_{−1} − Φ_{+1})/√2, so 𝒪_x = (𝒪_{−1} − 𝒪_{+1})/√2.
        let spectrum = sine_spectrum(1.1).unwrap();
        let direct = transverse_dipole_overlap(&spectrum).unwrap().overlap();
        let om = dipole_overlap(&spectrum, -1).unwrap().overlap();
        let op = dipole_overlap(&spectrum, 1).unwrap().overlap();
        let combined = (om - op) / Complex64::new(2.0_f64.sqrt(), 0.0);
        assert_abs_diff_eq!((direct - combined).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn longitudinal_beam_is_orthogonal_to_circular_dipoles() {
        let spectrum = quabis_spectrum(0.5, 2.0).unwrap();
        for m in [-1, 1] {
            let p = dipole_overlap(&spectrum, m).unwrap().content();
            assert!(p < 1e-20, "m = {m}: {p}");
        }
    }

    #[test]
    fn one_dimensional_shortcut_matches_two_dimensional_path() {
        let grid = QuadratureGrid::with_defaults(PI / 2.0).unwrap();
        let spectrum = quabis_spectrum_with_grid(0.0, PI / 2.0, &grid).unwrap();
        let shortcut = dipole_overlap_with_grid(&spectrum, 0, &grid)
            .unwrap()
            .overlap();
        let full = overlap_2d(&spectrum, &dipole_spectrum(0).unwrap(), &grid)
            .unwrap()
            .overlap();
        assert!((shortcut - full).norm() <= 1e-12 * shortcut.norm().max(1.0));
    }

    #[test]
    fn doubling_nodes_leaves_content_converged() {
        for &(a, theta) in &[(0.0, PI / 2.0), (1.0, 2.2), (2.0, PI)] {
            let g1 = QuadratureGrid::new(theta, 128, 256).unwrap();
            let g2 = QuadratureGrid::new(theta, 256, 256).unwrap();
            let p1 = dipole_overlap_with_grid(
                &quabis_spectrum_with_grid(a, theta, &g1).unwrap(),
                0,
                &g1,
            )
            .unwrap()
            .content();
            let p2 = dipole_overlap_with_grid(
                &quabis_spectrum_with_grid(a, theta, &g2).unwrap(),
                0,
                &g2,
            )
            .unwrap()
            .content();
            assert!(
                (p1 - p2).abs() < 1e-10,
                "a = {a}, theta = {theta}: {p1} vs {p2}"
            );
        }
    }

    #[test]
    fn closed_form_landmarks() {
        assert_abs_diff_eq!(
            max_overlap_longitudinal(PI / 2.0).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(max_overlap_longitudinal(PI).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(max_overlap_longitudinal(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            max_overlap_transverse(PI / 2.0).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(max_overlap_transverse(PI).unwrap(), 1.0, epsilon = 1e-15);
        assert!(max_overlap_longitudinal(-0.1).is_err());
        assert!(max_overlap_transverse(3.5).is_err());
    }

    #[test]
    fn transverse_closed_form_matches_quadrature_at_quarter_pi() {
        let theta = PI / 4.0;
        let spectrum = truncated_dipole_spectrum(DipolePolarization::Transverse, theta).unwrap();
        let p = transverse_dipole_overlap(&spectrum).unwrap().content();
        assert_abs_diff_eq!(p, max_overlap_transverse(theta).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn max_overlap_longitudinal_is_nondecreasing() {
        let mut previous = 0.0;
        for k in 0..=100 {
            let value = max_overlap_longitudinal(PI * k as f64 / 100.0).unwrap();
            assert!(value >= previous - 1e-15);
            previous = value;
        }
    }

    #[test]
    fn polarization_ordering_crosses_at_half_pi() {
        for k in 1..90 {
            let theta = PI * k as f64 / 180.0;
            assert!(
                max_overlap_transverse(theta).unwrap() > max_overlap_longitudinal(theta).unwrap()
            );
        }
        assert_abs_diff_eq!(
            max_overlap_transverse(PI / 2.0).unwrap(),
            max_overlap_longitudinal(PI / 2.0).unwrap(),
            epsilon = 1e-15
        );
        for k in 91..180 {
            let theta = PI * k as f64 / 180.0;
            assert!(
                max_overlap_transverse(theta).unwrap() < max_overlap_longitudinal(theta).unwrap()
            );
        }
    }

    #[test]
    fn optimal_profile_achieves_the_closed_form() {
        for &theta in &[0.6, PI / 2.0, 2.5, PI] {
            let profile = optimal_profile(theta).unwrap();
            assert_abs_diff_eq!(
                profile.content,
                max_overlap_longitudinal(theta).unwrap(),
                epsilon = 1e-8
            );
        }
        let half = optimal_profile(PI / 2.0).unwrap();
        assert_abs_diff_eq!(half.content, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn optimal_profile_dominates_the_quabis_family() {
        let theta = 2.0;
        let best = optimal_profile(theta).unwrap().content;
        for &a in &[0.0, 0.3, 1.0, 2.0, 5.0] {
            let p = dipole_overlap(&quabis_spectrum(a, theta).unwrap(), 0)
                .unwrap()
                .content();
            assert!(p <= best + 1e-12, "a = {a}: {p} > {best}");
        }
    }

    #[test]
    fn perturbed_profiles_never_beat_the_optimum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let theta = 1.8;
        let grid = QuadratureGrid::with_defaults(theta).unwrap();
        let best = optimal_profile_with_grid(theta, &grid).unwrap().content;
        for _ in 0..100 {
            // Smooth low-order perturbation of the optimal amplitude.
            let c1: f64 = rng.gen_range(-1.0..1.0);
            let c2: f64 = rng.gen_range(-1.0..1.0);
            let c3: f64 = rng.gen_range(-1.0..1.0);
            let eps: f64 = rng.gen_range(0.0..0.3);
            let perturbed = spectrum_from_polar_profile(
                theta,
                move |a: f64| a.sin() + eps * (c1 + c2 * a.cos() + c3 * (2.0 * a).cos()),
                &grid,
            )
            .unwrap();
            let p = dipole_overlap_with_grid(&perturbed, 0, &grid)
                .unwrap()
                .content();
            assert!(
                p <= best + 1e-10,
                "perturbation exceeded optimum: {p} > {best}"
            );
        }
    }

    #[test]
    fn quabis_content_is_continuous_in_parameters() {
        let base = dipole_overlap(&quabis_spectrum(1.0, 2.0).unwrap(), 0)
            .unwrap()
            .content();
        let da = dipole_overlap(&quabis_spectrum(1.0 + 1e-4, 2.0).unwrap(), 0)
            .unwrap()
            .content();
        let dt = dipole_overlap(&quabis_spectrum(1.0, 2.0 + 1e-4).unwrap(), 0)
            .unwrap()
            .content();
        assert!((da - base).abs() < 1e-3);
        assert!((dt - base).abs() < 1e-3);
    }

    #[test]
    fn eta_gap_examples() {
        assert_abs_diff_eq!(
            eta_gap_from_overlap(1.0, 3.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            eta_gap_from_overlap(0.5, 1.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            eta_gap_from_overlap(64.0 / 147.0, 1.0).unwrap(),
            (83.0_f64 / 64.0).sqrt(),
            epsilon = 1e-14
        );
        assert!(matches!(
            eta_gap_from_overlap(0.0, 1.0),
            Err(Error::Divergent(_))
        ));
        assert!(eta_gap_from_overlap(1.2, 1.0).is_err());
        assert!(eta_gap_from_overlap(0.5, -1.0).is_err());
    }
}
