//! Property suites over randomized parameters.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use dipolewave::bloch::{steady_state, AtomParams, DriveAmplitude};
use dipolewave::overlap::{dipole_overlap_with_grid, max_overlap_longitudinal};
use dipolewave::quad::{cap_integrate, QuadratureGrid};
use dipolewave::spectra::{
    quabis_spectrum_with_grid, sine_spectrum_with_grid, spectrum_from_polar_profile, Direction,
};
use dipolewave::stats::{eta_from_amplitudes, weak_drive_flux, weak_drive_g2, DetectionChannel};

fn direction() -> impl Strategy<Value = Direction> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(a, b)| Direction::new(a, b).unwrap())
}

fn complex(magnitude: f64) -> impl Strategy<Value = Complex64> {
    (-magnitude..magnitude, -magnitude..magnitude).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quabis_spectra_are_transverse_everywhere(
        a in 0.0..3.0f64,
        theta in 0.05..PI,
        d in direction(),
    ) {
        let grid = QuadratureGrid::new(theta, 32, 1).unwrap();
        let spectrum = quabis_spectrum_with_grid(a, theta, &grid).unwrap();
        prop_assert!(spectrum.transversality_defect(d) <= 1e-12);
    }

    #[test]
    fn sine_spectra_are_transverse_everywhere(
        theta in 0.05..PI / 2.0,
        d in direction(),
    ) {
        let grid = QuadratureGrid::new(theta, 32, 8).unwrap();
        let spectrum = sine_spectrum_with_grid(theta, &grid).unwrap();
        prop_assert!(spectrum.transversality_defect(d) <= 1e-12);
    }

    #[test]
    fn dipole_content_is_cauchy_schwarz_bounded(
        theta in 0.1..PI,
        c0 in -1.0..1.0f64,
        c1 in -1.0..1.0f64,
        c2 in -1.0..1.0f64,
    ) {
        // Random smooth polar profile; skip ones that nearly vanish.
        let profile = move |a: f64| a.sin() * (c0 + 1.0 + c1 * a.cos() + c2 * (2.0 * a).cos() + 2.5);
        let grid = QuadratureGrid::new(theta, 64, 1).unwrap();
        let spectrum = spectrum_from_polar_profile(theta, profile, &grid).unwrap();
        let result = dipole_overlap_with_grid(&spectrum, 0, &grid).unwrap();
        prop_assert!(result.content() <= 1.0);
        prop_assert!(result.content() >= 0.0);
        // The cap-restricted maximizer bounds every member.
        prop_assert!(result.content() <= max_overlap_longitudinal(theta).unwrap() + 1e-12);
    }

    #[test]
    fn cap_area_matches_closed_form(theta in 0.01..PI) {
        let grid = QuadratureGrid::new(theta, 48, 32).unwrap();
        let area = cap_integrate(|_| Complex64::ONE, theta, &grid).unwrap().re;
        let expected = 2.0 * PI * (1.0 - theta.cos());
        prop_assert!((area - expected).abs() <= 1e-10 * expected.max(1.0));
    }

    #[test]
    fn polar_shortcut_matches_full_quadrature(
        theta in 0.05..PI,
        p in 1u32..4,
    ) {
        let grid = QuadratureGrid::new(theta, 48, 16).unwrap();
        let f = move |a: f64| a.sin().powi(p as i32) + 0.3 * a.cos();
        let one_d = grid.integrate_polar(f);
        let two_d = cap_integrate(|d| Complex64::new(f(d.alpha()), 0.0), theta, &grid)
            .unwrap()
            .re;
        prop_assert!((one_d - two_d).abs() <= 1e-12 * one_d.abs().max(1.0));
    }

    #[test]
    fn steady_state_stays_in_the_bloch_ball(
        delta in -20.0..20.0f64,
        s in 0.0..1e4f64,
        phase in 0.0..2.0 * PI,
    ) {
        let params = AtomParams::from_delta(1.0, delta).unwrap();
        let amplitude = (s / 8.0).sqrt();
        let drive = DriveAmplitude::new(Complex64::from_polar(amplitude, phase)).unwrap();
        let ss = steady_state(&params, &drive);
        prop_assert!(ss.ball_radius_sq() <= 1.0 + 1e-12);
        let population = ss.population();
        prop_assert!((0.0..=1.0).contains(&population));
    }

    #[test]
    fn weak_drive_g2_is_nonnegative(eta in complex(12.0)) {
        prop_assume!((eta - 2.0).norm() > 1e-9);
        let g2 = weak_drive_g2(eta).unwrap();
        prop_assert!(g2 >= 0.0);
        // Zeros only at eta = 0 and eta = 4.
        if eta.norm() > 1e-3 && (eta - 4.0).norm() > 1e-3 {
            prop_assert!(g2 > 0.0);
        }
    }

    #[test]
    fn eta_and_statistics_are_global_phase_invariant(
        alpha_amp in complex(2.0),
        beta in complex(2.0),
        phase in 0.0..2.0 * PI,
        p_factor in 0.0..3.0f64,
    ) {
        prop_assume!(beta.norm() > 1e-6);
        let channel = DetectionChannel::unit_dipole(p_factor).unwrap();
        let rot = Complex64::from_polar(1.0, phase);
        let eta0 = eta_from_amplitudes(&channel, alpha_amp, beta).unwrap().value();
        let eta1 = eta_from_amplitudes(&channel, alpha_amp * rot, beta * rot)
            .unwrap()
            .value();
        prop_assert!((eta0 - eta1).norm() <= 1e-10 * eta0.norm().max(1.0));
        let ratio0 = weak_drive_flux(&channel, beta, eta0).ratio;
        let ratio1 = weak_drive_flux(&channel, beta * rot, eta1).ratio;
        prop_assert!((ratio0 - ratio1).abs() <= 1e-10 * ratio0.max(1.0));
        if (eta0 - 2.0).norm() > 1e-6 {
            let g0 = weak_drive_g2(eta0).unwrap();
            let g1 = weak_drive_g2(eta1).unwrap();
            prop_assert!((g0 - g1).abs() <= 1e-9 * g0.max(1.0));
        }
    }

    #[test]
    fn longitudinal_maximum_is_monotone(
        t1 in 0.0..PI,
        t2 in 0.0..PI,
    ) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(
            max_overlap_longitudinal(lo).unwrap() <= max_overlap_longitudinal(hi).unwrap() + 1e-15
        );
    }

    #[test]
    fn quabis_content_is_locally_continuous(
        a in 0.0..2.5f64,
        theta in 0.2..PI,
    ) {
        let grid = QuadratureGrid::new(theta, 64, 1).unwrap();
        let base = dipole_overlap_with_grid(
            &quabis_spectrum_with_grid(a, theta, &grid).unwrap(), 0, &grid,
        ).unwrap().content();
        let bumped = dipole_overlap_with_grid(
            &quabis_spectrum_with_grid(a + 1e-4, theta, &grid).unwrap(), 0, &grid,
        ).unwrap().content();
        prop_assert!((base - bumped).abs() < 1e-3);
    }

    #[test]
    fn directions_validate_their_ranges(alpha in -1.0..4.5f64, beta in -1.0..7.0f64) {
        let ok = (0.0..=PI).contains(&alpha) && (0.0..2.0 * PI).contains(&beta);
        prop_assert_eq!(Direction::new(alpha, beta).is_ok(), ok);
    }
}
