//! C ABI for the dipolewave library.
//!
//! Every call returns a [`DwStatus`]; results come back through out
//! pointers. Beam spectra are opaque handles produced by the
//! `dw_spectrum_*` constructors and released with [`dw_spectrum_free`].
//! The generated header lives at `include/dipolewave.h`.

use num_complex::Complex64;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use dipolewave::bloch::{steady_state, AtomParams, DriveAmplitude};
use dipolewave::error::Error;
use dipolewave::oracle::{flux_exact, g2_exact};
use dipolewave::overlap::{
    dipole_overlap_with_grid, eta_gap_from_overlap, max_overlap_longitudinal,
    max_overlap_transverse, transverse_dipole_overlap_with_grid, OverlapResult,
};
use dipolewave::quad::QuadratureGrid;
use dipolewave::spectra::{
    quabis_spectrum, sine_spectrum, truncated_dipole_spectrum, AngularSpectrum, DipolePolarization,
    Direction,
};
use dipolewave::stats::{dipole_projection, resonant_flux_ratio, weak_drive_g2, DetectionChannel};

/// Status code returned by every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DwStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter was outside its domain or violated a contract.
    InvalidArgument = 2,
    /// A computation failed numerically.
    NumericFailure = 3,
    /// The requested quantity diverges at these parameters.
    Divergent = 4,
    /// The requested quantity is undefined at these parameters.
    Undefined = 5,
}

/// Opaque handle to a unit-normalized beam angular spectrum.
pub struct DwSpectrum {
    inner: AngularSpectrum,
}

fn status_of(err: &Error) -> DwStatus {
    match err {
        Error::Domain(_) | Error::Contract(_) => DwStatus::InvalidArgument,
        Error::Numeric(_) => DwStatus::NumericFailure,
        Error::Divergent(_) => DwStatus::Divergent,
        Error::Undefined(_) => DwStatus::Undefined,
    }
}

fn guarded(body: impl FnOnce() -> DwStatus) -> DwStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(DwStatus::NumericFailure)
}

/// Version of the underlying library as a static null-terminated string.
#[no_mangle]
pub extern "C" fn dw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn dw_status_message(status: DwStatus) -> *const c_char {
    let text: &'static str = match status {
        DwStatus::Ok => "ok\0",
        DwStatus::NullPointer => "null pointer argument\0",
        DwStatus::InvalidArgument => "parameter outside its domain\0",
        DwStatus::NumericFailure => "numeric failure\0",
        DwStatus::Divergent => "result diverges at these parameters\0",
        DwStatus::Undefined => "result undefined at these parameters\0",
    };
    text.as_ptr() as *const c_char
}

unsafe fn emit_spectrum(
    result: Result<AngularSpectrum, Error>,
    out: *mut *mut DwSpectrum,
) -> DwStatus {
    match result {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DwSpectrum { inner }));
            DwStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Full-sphere electric dipole spectrum with index `m` in {-1, 0, +1}.
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released
/// with [`dw_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_dipole(m: i32, out: *mut *mut DwSpectrum) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_spectrum(dipolewave::spectra::dipole_spectrum(m), out))
}

/// Radially polarized aplanatic beam with apodization `a = f/w0 >= 0` on a
/// cap of half-angle `theta` (radians).
///
/// # Safety
/// See [`dw_spectrum_dipole`].
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_quabis(
    a: f64,
    theta: f64,
    out: *mut *mut DwSpectrum,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_spectrum(quabis_spectrum(a, theta), out))
}

/// Uniformly illuminated aplanatic lens with x-polarized input; requires
/// `theta <= pi/2`.
///
/// # Safety
/// See [`dw_spectrum_dipole`].
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_sine(theta: f64, out: *mut *mut DwSpectrum) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_spectrum(sine_spectrum(theta), out))
}

/// Dipole wave truncated to the cap and renormalized; `longitudinal`
/// selects the z-oriented dipole, otherwise the x-polarized transverse one.
///
/// # Safety
/// See [`dw_spectrum_dipole`].
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_truncated_dipole(
    longitudinal: bool,
    theta: f64,
    out: *mut *mut DwSpectrum,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    let polarization = if longitudinal {
        DipolePolarization::Longitudinal
    } else {
        DipolePolarization::Transverse
    };
    guarded(|| emit_spectrum(truncated_dipole_spectrum(polarization, theta), out))
}

/// Releases a spectrum handle. A null handle is ignored.
///
/// # Safety
/// `spectrum` must have been returned by a `dw_spectrum_*` constructor and
/// not freed before.
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_free(spectrum: *mut DwSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Half-angle of the spectrum's support cap, in radians.
///
/// # Safety
/// `spectrum` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_theta_cap(
    spectrum: *const DwSpectrum,
    out: *mut f64,
) -> DwStatus {
    if spectrum.is_null() || out.is_null() {
        return DwStatus::NullPointer;
    }
    *out = (*spectrum).inner.theta_cap();
    DwStatus::Ok
}

/// Complex field of the spectrum at direction `(alpha, beta)`; writes three
/// Cartesian components into `out_re` and `out_im`.
///
/// # Safety
/// `spectrum` must be a live handle; `out_re` and `out_im` must point to
/// arrays of at least three doubles.
#[no_mangle]
pub unsafe extern "C" fn dw_spectrum_value(
    spectrum: *const DwSpectrum,
    alpha: f64,
    beta: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DwStatus {
    if spectrum.is_null() || out_re.is_null() || out_im.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let direction = match Direction::new(alpha, beta) {
            Ok(d) => d,
            Err(err) => return status_of(&err),
        };
        let value = (*spectrum).inner.value(direction);
        for i in 0..3 {
            *out_re.add(i) = value[i].re;
            *out_im.add(i) = value[i].im;
        }
        DwStatus::Ok
    })
}

unsafe fn emit_overlap(
    result: Result<OverlapResult, Error>,
    out_content: *mut f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DwStatus {
    match result {
        Ok(overlap) => {
            *out_content = overlap.content();
            *out_re = overlap.overlap().re;
            *out_im = overlap.overlap().im;
            DwStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Overlap of the spectrum with the dipole wave `Phi_M` and the dipole
/// content `p = |O_d|^2`. `n_alpha` Gauss-Legendre nodes per polar panel
/// (0 selects the default 128).
///
/// # Safety
/// `spectrum` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_dipole_content(
    spectrum: *const DwSpectrum,
    m: i32,
    n_alpha: usize,
    out_content: *mut f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DwStatus {
    if spectrum.is_null() || out_content.is_null() || out_re.is_null() || out_im.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let inner = &(*spectrum).inner;
        let nodes = if n_alpha == 0 {
            dipolewave::quad::DEFAULT_N_ALPHA
        } else {
            n_alpha
        };
        let grid = match QuadratureGrid::new(inner.theta_cap(), nodes, 2 * nodes) {
            Ok(g) => g,
            Err(err) => return status_of(&err),
        };
        emit_overlap(
            dipole_overlap_with_grid(inner, m, &grid),
            out_content,
            out_re,
            out_im,
        )
    })
}

/// Overlap of the spectrum with the x-polarized transverse dipole wave.
///
/// # Safety
/// See [`dw_dipole_content`].
#[no_mangle]
pub unsafe extern "C" fn dw_transverse_dipole_content(
    spectrum: *const DwSpectrum,
    n_alpha: usize,
    out_content: *mut f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DwStatus {
    if spectrum.is_null() || out_content.is_null() || out_re.is_null() || out_im.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let inner = &(*spectrum).inner;
        let nodes = if n_alpha == 0 {
            dipolewave::quad::DEFAULT_N_ALPHA
        } else {
            n_alpha
        };
        let grid = match QuadratureGrid::new(inner.theta_cap(), nodes, 2 * nodes) {
            Ok(g) => g,
            Err(err) => return status_of(&err),
        };
        emit_overlap(
            transverse_dipole_overlap_with_grid(inner, &grid),
            out_content,
            out_re,
            out_im,
        )
    })
}

unsafe fn emit_scalar(result: Result<f64, Error>, out: *mut f64) -> DwStatus {
    match result {
        Ok(value) => {
            *out = value;
            DwStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Closed-form maximum dipole content for longitudinal polarization.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_max_overlap_longitudinal(theta: f64, out: *mut f64) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_scalar(max_overlap_longitudinal(theta), out))
}

/// Closed-form maximum dipole content for transverse polarization.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_max_overlap_transverse(theta: f64, out: *mut f64) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_scalar(max_overlap_transverse(theta), out))
}

/// `|eta - 1| = (P/D) sqrt((1 - p)/p)` from a dipole content `p`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_eta_gap_from_overlap(
    content: f64,
    p_over_d: f64,
    out: *mut f64,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_scalar(eta_gap_from_overlap(content, p_over_d), out))
}

/// Geometric factor `D = u_K.eps - (u_K.R)(R.eps)` of a detection channel.
/// `r` is the detector direction (3 doubles), `eps_re`/`eps_im` the complex
/// analyzed polarization (3 doubles each).
///
/// # Safety
/// The array pointers must reference at least three doubles each; the out
/// pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_dipole_projection(
    k: i32,
    r: *const f64,
    eps_re: *const f64,
    eps_im: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DwStatus {
    if r.is_null() || eps_re.is_null() || eps_im.is_null() || out_re.is_null() || out_im.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let r_hat = nalgebra_vector(r);
        let eps = nalgebra_complex_vector(eps_re, eps_im);
        match dipole_projection(k, &r_hat, &eps) {
            Ok(d) => {
                *out_re = d.re;
                *out_im = d.im;
                DwStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

unsafe fn nalgebra_vector(ptr: *const f64) -> nalgebra::Vector3<f64> {
    nalgebra::Vector3::new(*ptr, *ptr.add(1), *ptr.add(2))
}

unsafe fn nalgebra_complex_vector(re: *const f64, im: *const f64) -> nalgebra::Vector3<Complex64> {
    nalgebra::Vector3::new(
        Complex64::new(*re, *im),
        Complex64::new(*re.add(1), *im.add(1)),
        Complex64::new(*re.add(2), *im.add(2)),
    )
}

/// Closed-form steady state of the optical Bloch equations; writes
/// `<sigma-> = (out_sm_re, out_sm_im)` and `<sigma_z> = out_sz`.
///
/// # Safety
/// The out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_bloch_steady_state(
    gamma: f64,
    detuning: f64,
    beta_re: f64,
    beta_im: f64,
    out_sm_re: *mut f64,
    out_sm_im: *mut f64,
    out_sz: *mut f64,
) -> DwStatus {
    if out_sm_re.is_null() || out_sm_im.is_null() || out_sz.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let params = match AtomParams::new(gamma, detuning) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let drive = match DriveAmplitude::new(Complex64::new(beta_re, beta_im)) {
            Ok(d) => d,
            Err(err) => return status_of(&err),
        };
        let ss = steady_state(&params, &drive);
        *out_sm_re = ss.sm().re;
        *out_sm_im = ss.sm().im;
        *out_sz = ss.sz();
        DwStatus::Ok
    })
}

/// Weak-driving on-resonance flux ratio `F/F0 = |eta - 2|^2`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_weak_drive_flux_ratio(
    eta_re: f64,
    eta_im: f64,
    out: *mut f64,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    *out = (Complex64::new(eta_re, eta_im) - 2.0).norm_sqr();
    DwStatus::Ok
}

/// Weak-driving on-resonance `g2(0) = |eta|^2 |eta - 4|^2 / |eta - 2|^4`;
/// returns `DW_STATUS_DIVERGENT` at `eta = 2`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_weak_drive_g2(eta_re: f64, eta_im: f64, out: *mut f64) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_scalar(weak_drive_g2(Complex64::new(eta_re, eta_im)), out))
}

/// Resonant flux ratio `((1 - 2/|eta|)^2 + s)/(1 + s)` for arbitrary drive
/// strength `s`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_resonant_flux_ratio(abs_eta: f64, s: f64, out: *mut f64) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| emit_scalar(resonant_flux_ratio(abs_eta, s), out))
}

/// Exact steady-state detected flux for a unit-`D` channel (master-equation
/// solve; no weak-driving approximation).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_flux_exact(
    gamma: f64,
    detuning: f64,
    eta_re: f64,
    eta_im: f64,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let params = match AtomParams::new(gamma, detuning) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let channel = DetectionChannel::unit_dipole(1.0).expect("unit channel is valid");
        emit_scalar(
            flux_exact(
                &channel,
                Complex64::new(eta_re, eta_im),
                Complex64::new(beta_re, beta_im),
                &params,
            ),
            out,
        )
    })
}

/// Exact `g2(tau)` for a unit-`D` channel via the quantum regression rule;
/// returns `DW_STATUS_UNDEFINED` when the detected flux vanishes.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dw_g2_exact(
    gamma: f64,
    detuning: f64,
    eta_re: f64,
    eta_im: f64,
    beta_re: f64,
    beta_im: f64,
    tau: f64,
    out: *mut f64,
) -> DwStatus {
    if out.is_null() {
        return DwStatus::NullPointer;
    }
    guarded(|| {
        let params = match AtomParams::new(gamma, detuning) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let channel = DetectionChannel::unit_dipole(1.0).expect("unit channel is valid");
        emit_scalar(
            g2_exact(
                &channel,
                Complex64::new(eta_re, eta_im),
                Complex64::new(beta_re, beta_im),
                &params,
                tau,
            ),
            out,
        )
    })
}
