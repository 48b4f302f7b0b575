//! Dipole-wave content of strongly focused light beams and the photon
//! statistics of resonance fluorescence from a coherently driven two-level
//! atom.
//!
//! The crate is organized around the reciprocal-space (Debye) picture of a
//! monochromatic focused beam: [`spectra`] builds angular spectra on a
//! spherical cap, [`quad`] integrates over the cap, and [`overlap`] projects
//! a spectrum onto the electric dipole wave, the only multipole that couples
//! to a point dipole. On the atom side, [`bloch`] carries the optical Bloch
//! equations, [`stats`] the detection geometry and weak-driving closed forms
//! for flux and `g²(0)`, and [`oracle`] an exact master-equation /
//! quantum-regression solver used to cross-check every closed form.
//! [`figures`] emits machine-readable sweep tables for the CLI.
//!
//! ```
//! use dipolewave::overlap::dipole_overlap;
//! use dipolewave::spectra::quabis_spectrum;
//! use dipolewave::stats::weak_drive_g2;
//! use num_complex::Complex64;
//! use std::f64::consts::PI;
//!
//! // Dipole content of the radially polarized beam at NA = 1 (a -> 0).
//! let beam = quabis_spectrum(0.0, PI / 2.0)?;
//! let content = dipole_overlap(&beam, 0)?.content();
//! assert!((content - 64.0 / 147.0).abs() < 1e-9);
//!
//! // Photon bunching of the scattered light under pure dipole illumination.
//! assert_eq!(weak_drive_g2(Complex64::ONE)?, 9.0);
//! # Ok::<(), dipolewave::Error>(())
//! ```

pub mod bloch;
pub mod error;
pub mod figures;
pub mod oracle;
pub mod overlap;
pub mod quad;
pub mod spectra;
pub mod stats;

pub use error::{Error, Result};
