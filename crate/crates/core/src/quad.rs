//! High-accuracy quadrature over spherical caps.
//!
//! The polar integral uses Gauss–Legendre abscissae mapped onto `[0, θ]`
//! with the `sin α` Jacobian folded into the weights. The mapping is a
//! composite of panels: near `α = π/2` the panel integrates in the variable
//! `u = √|cos α|`, which absorbs the square-root behaviour that aplanatic
//! amplitude profiles (`∝ √|cos α|`) would otherwise place at or across a
//! node panel, keeping the rule spectrally accurate for every beam family
//! handled here. The azimuthal integral uses the equispaced periodic rule,
//! spectrally accurate for trigonometric integrands.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectra::Direction;

/// Default Gauss–Legendre node count per polar panel.
pub const DEFAULT_N_ALPHA: usize = 128;
/// Default azimuthal node count.
pub const DEFAULT_N_BETA: usize = 256;

/// Panel boundaries: plain panels on `[0, π/4]` and `[3π/4, π]`, substituted
/// panels between them on either side of `π/2`.
const SPLIT_LOW: f64 = PI / 4.0;
const SPLIT_HIGH: f64 = 3.0 * PI / 4.0;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-type initial guess, then Newton.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-15 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Precomputed nodes and weights for integrals over the spherical cap
/// `α ∈ [0, θ], β ∈ [0, 2π)`.
///
/// Immutable after construction; integration is a pure fold over the nodes
/// in a fixed order, so results are reproducible bit for bit.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    theta: f64,
    n_alpha: usize,
    alpha: Vec<f64>,
    /// Per-node weight with the `sin α` Jacobian included:
    /// `Σ_i w_i f(α_i) ≈ ∫₀^θ dα sin α f(α)`.
    polar_weights: Vec<f64>,
    n_beta: usize,
}

impl QuadratureGrid {
    /// Builds a grid for the cap of half-angle `theta` with `n_alpha`
    /// Gauss–Legendre nodes per polar panel and `n_beta` azimuthal nodes.
    pub fn new(theta: f64, n_alpha: usize, n_beta: usize) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 || theta > PI {
            return Err(Error::domain(format!(
                "cap half-angle must lie in (0, pi], got {theta}"
            )));
        }
        if n_alpha == 0 || n_beta == 0 {
            return Err(Error::domain("node counts must be positive"));
        }
        let (gl_nodes, gl_weights) = gauss_legendre(n_alpha);
        let mut alpha = Vec::new();
        let mut polar_weights = Vec::new();
        for panel in panels(theta) {
            panel.emit(&gl_nodes, &gl_weights, &mut alpha, &mut polar_weights);
        }
        Ok(Self {
            theta,
            n_alpha,
            alpha,
            polar_weights,
            n_beta,
        })
    }

    /// Grid with the default 128 × 256 node counts.
    pub fn with_defaults(theta: f64) -> Result<Self> {
        Self::new(theta, DEFAULT_N_ALPHA, DEFAULT_N_BETA)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Requested Gauss–Legendre node count per polar panel.
    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    /// Total polar node count over all panels.
    pub fn total_polar_nodes(&self) -> usize {
        self.alpha.len()
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    /// Polar nodes `α_i ∈ (0, θ)`, ascending.
    pub fn polar_nodes(&self) -> &[f64] {
        &self.alpha
    }

    /// Weights paired with [`polar_nodes`](Self::polar_nodes); the `sin α`
    /// Jacobian is folded in.
    pub fn polar_weights(&self) -> &[f64] {
        &self.polar_weights
    }

    /// Azimuthal nodes `β_j = 2π j / n_β`.
    pub fn azimuthal_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n_beta;
        (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
    }

    /// One-dimensional polar rule for azimuthally symmetric integrands:
    /// `2π ∫₀^θ dα sin α f(α)`.
    pub fn integrate_polar(&self, f: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self
            .alpha
            .iter()
            .zip(&self.polar_weights)
            .map(|(&a, &w)| w * f(a))
            .sum();
        2.0 * PI * sum
    }

    /// Complex-valued variant of [`integrate_polar`](Self::integrate_polar).
    pub fn integrate_polar_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let mut sum = Complex64::ZERO;
        for (&a, &w) in self.alpha.iter().zip(&self.polar_weights) {
            sum += w * f(a);
        }
        2.0 * PI * sum
    }
}

/// One polar panel of the composite rule.
enum Panel {
    /// Plain Gauss–Legendre in `α` on `[lo, hi]`; weight carries `sin α`.
    Plain { lo: f64, hi: f64 },
    /// Gauss–Legendre in `u = √(cos α)` (for `[lo, hi] ⊆ [0, π/2]`) or
    /// `u = √(−cos α)` (for `[lo, hi] ⊆ [π/2, π]`); the substitution turns
    /// `sin α dα` into `2u du` and makes `√|cos α|` a polynomial factor.
    Substituted { lo: f64, hi: f64, negative: bool },
}

fn panels(theta: f64) -> Vec<Panel> {
    let mut out = Vec::new();
    let mut push = |p: Panel| {
        let (lo, hi) = match p {
            Panel::Plain { lo, hi } | Panel::Substituted { lo, hi, .. } => (lo, hi),
        };
        if hi - lo > 1e-14 {
            out.push(p);
        }
    };
    push(Panel::Plain {
        lo: 0.0,
        hi: theta.min(SPLIT_LOW),
    });
    if theta > SPLIT_LOW {
        push(Panel::Substituted {
            lo: SPLIT_LOW,
            hi: theta.min(PI / 2.0),
            negative: false,
        });
    }
    if theta > PI / 2.0 {
        push(Panel::Substituted {
            lo: PI / 2.0,
            hi: theta.min(SPLIT_HIGH),
            negative: true,
        });
    }
    if theta > SPLIT_HIGH {
        push(Panel::Plain {
            lo: SPLIT_HIGH,
            hi: theta,
        });
    }
    out
}

impl Panel {
    fn emit(
        &self,
        gl_nodes: &[f64],
        gl_weights: &[f64],
        alpha: &mut Vec<f64>,
        weights: &mut Vec<f64>,
    ) {
        match *self {
            Panel::Plain { lo, hi } => {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                for (&x, &w) in gl_nodes.iter().zip(gl_weights) {
                    let a = mid + half * x;
                    alpha.push(a);
                    weights.push(w * half * a.sin());
                }
            }
            Panel::Substituted { lo, hi, negative } => {
                // sin α dα = 2u du under u = √(±cos α).
                let sign = if negative { -1.0 } else { 1.0 };
                let u_of = |a: f64| (sign * a.cos()).max(0.0).sqrt();
                let (u_lo, u_hi) = if negative {
                    (u_of(lo), u_of(hi))
                } else {
                    (u_of(hi), u_of(lo))
                };
                let mid = 0.5 * (u_lo + u_hi);
                let half = 0.5 * (u_hi - u_lo);
                let mut pairs: Vec<(f64, f64)> = gl_nodes
                    .iter()
                    .zip(gl_weights)
                    .map(|(&x, &w)| {
                        let u = mid + half * x;
                        let a = (sign * u * u).clamp(-1.0, 1.0).acos();
                        (a, w * half * 2.0 * u)
                    })
                    .collect();
                // Keep the global node list ascending in α.
                if !negative {
                    pairs.reverse();
                }
                for (a, w) in pairs {
                    alpha.push(a);
                    weights.push(w);
                }
            }
        }
    }
}

/// Integrates `∫₀^{2π} dβ ∫₀^θ dα sin α · integrand(α, β)` over the cap.
///
/// `theta` must match the half-angle the grid was built for. The fold order
/// is fixed (polar outer, azimuthal inner), so the result is deterministic
/// for a fixed grid. A non-finite integrand value aborts with the offending
/// node in the error.
pub fn cap_integrate(
    integrand: impl Fn(Direction) -> Complex64,
    theta: f64,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    if (theta - grid.theta()).abs() > 1e-15 * theta.abs().max(1.0) {
        return Err(Error::contract(format!(
            "grid was built for theta = {}, integration requested for theta = {theta}",
            grid.theta()
        )));
    }
    let beta_weight = 2.0 * PI / grid.n_beta as f64;
    let mut total = Complex64::ZERO;
    for (&alpha, &w_polar) in grid.alpha.iter().zip(&grid.polar_weights) {
        let mut ring = Complex64::ZERO;
        for beta in grid.azimuthal_nodes() {
            let value = integrand(Direction::new_unchecked(alpha, beta));
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::numeric(format!(
                    "integrand is not finite at alpha = {alpha}, beta = {beta}"
                )));
            }
            ring += value;
        }
        total += w_polar * ring;
    }
    Ok(beta_weight * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        // Degree-9 polynomial is exact for a 5-point rule.
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * (xi.powi(9) + 3.0 * xi.powi(4) - xi))
            .sum();
        assert_relative_eq!(integral, 6.0 / 5.0, epsilon = 1e-14);
    }

    #[test]
    fn weights_are_positive_and_sum_to_cap_area() {
        for &theta in &[0.3, PI / 4.0, 1.0, PI / 2.0, 2.0, 2.5, PI] {
            let grid = QuadratureGrid::new(theta, 64, 128).unwrap();
            assert!(grid.polar_weights().iter().all(|&w| w > 0.0));
            let area = cap_integrate(|_| Complex64::ONE, theta, &grid).unwrap();
            assert_relative_eq!(area.re, 2.0 * PI * (1.0 - theta.cos()), epsilon = 1e-10);
            assert_relative_eq!(area.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn full_sphere_and_hemisphere_areas() {
        let sphere = QuadratureGrid::with_defaults(PI).unwrap();
        let hemisphere = QuadratureGrid::with_defaults(PI / 2.0).unwrap();
        let a_sphere = cap_integrate(|_| Complex64::ONE, PI, &sphere).unwrap();
        let a_hemi = cap_integrate(|_| Complex64::ONE, PI / 2.0, &hemisphere).unwrap();
        assert_relative_eq!(a_sphere.re, 4.0 * PI, epsilon = 1e-10);
        assert_relative_eq!(a_hemi.re, 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn polar_nodes_stay_inside_cap_and_ascend() {
        for &theta in &[0.2, 1.0, PI / 2.0, 2.4, PI] {
            let grid = QuadratureGrid::new(theta, 32, 8).unwrap();
            let nodes = grid.polar_nodes();
            assert!(nodes.iter().all(|&a| a > 0.0 && a < theta));
            assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn polar_rule_matches_full_rule_for_symmetric_integrands() {
        let grid = QuadratureGrid::with_defaults(1.1).unwrap();
        let f = |a: f64| a.sin().powi(2) * (1.0 - a.cos());
        let one_d = grid.integrate_polar(f);
        let two_d = cap_integrate(|d| Complex64::new(f(d.alpha()), 0.0), 1.1, &grid)
            .unwrap()
            .re;
        assert_relative_eq!(one_d, two_d, epsilon = 1e-12 * one_d.abs().max(1.0));
    }

    #[test]
    fn doubling_polar_nodes_is_converged() {
        // Includes the √|cos α| factor typical of aplanatic profiles, with a
        // cap crossing π/2 where that factor has a kink.
        let f = |a: f64| a.sin().powi(2) * a.cos().abs().sqrt() * (-(a.sin().powi(2))).exp();
        for &theta in &[1.0, PI / 2.0, 2.3, PI] {
            let coarse = QuadratureGrid::new(theta, 128, 16)
                .unwrap()
                .integrate_polar(f);
            let fine = QuadratureGrid::new(theta, 256, 16)
                .unwrap()
                .integrate_polar(f);
            assert!(
                (coarse - fine).abs() <= 1e-10 * coarse.abs().max(1.0),
                "theta = {theta}: {coarse} vs {fine}"
            );
        }
    }

    #[test]
    fn mismatched_theta_is_a_contract_violation() {
        let grid = QuadratureGrid::with_defaults(1.0).unwrap();
        let err = cap_integrate(|_| Complex64::ONE, 1.5, &grid).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn non_finite_integrand_reports_offending_node() {
        let grid = QuadratureGrid::new(1.0, 8, 8).unwrap();
        let err = cap_integrate(
            |d| Complex64::new(1.0 / (d.beta() - d.beta()), 0.0),
            1.0,
            &grid,
        )
        .unwrap_err();
        match err {
            Error::Numeric(msg) => assert!(msg.contains("alpha")),
            other => panic!("expected numeric error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(QuadratureGrid::new(0.0, 8, 8).is_err());
        assert!(QuadratureGrid::new(4.0, 8, 8).is_err());
        assert!(QuadratureGrid::new(1.0, 0, 8).is_err());
    }
}
