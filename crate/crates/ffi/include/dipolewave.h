#ifndef DIPOLEWAVE_H
#define DIPOLEWAVE_H

/* Generated by cbindgen from dipolewave-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every call.
typedef enum DwStatus {
  // Success.
  DW_STATUS_OK = 0,
  // A required pointer argument was null.
  DW_STATUS_NULL_POINTER = 1,
  // A parameter was outside its domain or violated a contract.
  DW_STATUS_INVALID_ARGUMENT = 2,
  // A computation failed numerically.
  DW_STATUS_NUMERIC_FAILURE = 3,
  // The requested quantity diverges at these parameters.
  DW_STATUS_DIVERGENT = 4,
  // The requested quantity is undefined at these parameters.
  DW_STATUS_UNDEFINED = 5,
} DwStatus;

// Opaque handle to a unit-normalized beam angular spectrum.
typedef struct dw_spectrum_t dw_spectrum_t;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying library as a static null-terminated string.
const char *dw_version(void);

// Static description of a status code.
const char *dw_status_message(enum DwStatus status);

// Full-sphere electric dipole spectrum with index `m` in {-1, 0, +1}.
//
// # Safety
// `out` must be a valid pointer; the returned handle must be released
// with [`dw_spectrum_free`].
enum DwStatus dw_spectrum_dipole(int32_t m, struct dw_spectrum_t **out);

// Radially polarized aplanatic beam with apodization `a = f/w0 >= 0` on a
// cap of half-angle `theta` (radians).
//
// # Safety
// See [`dw_spectrum_dipole`].
enum DwStatus dw_spectrum_quabis(double a, double theta, struct dw_spectrum_t **out);

// Uniformly illuminated aplanatic lens with x-polarized input; requires
// `theta <= pi/2`.
//
// # Safety
// See [`dw_spectrum_dipole`].
enum DwStatus dw_spectrum_sine(double theta, struct dw_spectrum_t **out);

// Dipole wave truncated to the cap and renormalized; `longitudinal`
// selects the z-oriented dipole, otherwise the x-polarized transverse one.
//
// # Safety
// See [`dw_spectrum_dipole`].
enum DwStatus dw_spectrum_truncated_dipole(bool longitudinal,
                                           double theta,
                                           struct dw_spectrum_t **out);

// Releases a spectrum handle. A null handle is ignored.
//
// # Safety
// `spectrum` must have been returned by a `dw_spectrum_*` constructor and
// not freed before.
void dw_spectrum_free(struct dw_spectrum_t *spectrum);

// Half-angle of the spectrum's support cap, in radians.
//
// # Safety
// `spectrum` must be a live handle; `out` must be valid.
enum DwStatus dw_spectrum_theta_cap(const struct dw_spectrum_t *spectrum, double *out);

// Complex field of the spectrum at direction `(alpha, beta)`; writes three
// Cartesian components into `out_re` and `out_im`.
//
// # Safety
// `spectrum` must be a live handle; `out_re` and `out_im` must point to
// arrays of at least three doubles.
enum DwStatus dw_spectrum_value(const struct dw_spectrum_t *spectrum,
                                double alpha,
                                double beta,
                                double *out_re,
                                double *out_im);

// Overlap of the spectrum with the dipole wave `Phi_M` and the dipole
// content `p = |O_d|^2`. `n_alpha` Gauss-Legendre nodes per polar panel
// (0 selects the default 128).
//
// # Safety
// `spectrum` must be a live handle; the out pointers must be valid.
enum DwStatus dw_dipole_content(const struct dw_spectrum_t *spectrum,
                                int32_t m,
                                size_t n_alpha,
                                double *out_content,
                                double *out_re,
                                double *out_im);

// Overlap of the spectrum with the x-polarized transverse dipole wave.
//
// # Safety
// See [`dw_dipole_content`].
enum DwStatus dw_transverse_dipole_content(const struct dw_spectrum_t *spectrum,
                                           size_t n_alpha,
                                           double *out_content,
                                           double *out_re,
                                           double *out_im);

// Closed-form maximum dipole content for longitudinal polarization.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_max_overlap_longitudinal(double theta, double *out);

// Closed-form maximum dipole content for transverse polarization.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_max_overlap_transverse(double theta, double *out);

// `|eta - 1| = (P/D) sqrt((1 - p)/p)` from a dipole content `p`.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_eta_gap_from_overlap(double content, double p_over_d, double *out);

// Geometric factor `D = u_K.eps - (u_K.R)(R.eps)` of a detection channel.
// `r` is the detector direction (3 doubles), `eps_re`/`eps_im` the complex
// analyzed polarization (3 doubles each).
//
// # Safety
// The array pointers must reference at least three doubles each; the out
// pointers must be valid.
enum DwStatus dw_dipole_projection(int32_t k,
                                   const double *r,
                                   const double *eps_re,
                                   const double *eps_im,
                                   double *out_re,
                                   double *out_im);

// Closed-form steady state of the optical Bloch equations; writes
// `<sigma-> = (out_sm_re, out_sm_im)` and `<sigma_z> = out_sz`.
//
// # Safety
// The out pointers must be valid.
enum DwStatus dw_bloch_steady_state(double gamma,
                                    double detuning,
                                    double beta_re,
                                    double beta_im,
                                    double *out_sm_re,
                                    double *out_sm_im,
                                    double *out_sz);

// Weak-driving on-resonance flux ratio `F/F0 = |eta - 2|^2`.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_weak_drive_flux_ratio(double eta_re, double eta_im, double *out);

// Weak-driving on-resonance `g2(0) = |eta|^2 |eta - 4|^2 / |eta - 2|^4`;
// returns `DW_STATUS_DIVERGENT` at `eta = 2`.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_weak_drive_g2(double eta_re, double eta_im, double *out);

// Resonant flux ratio `((1 - 2/|eta|)^2 + s)/(1 + s)` for arbitrary drive
// strength `s`.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_resonant_flux_ratio(double abs_eta, double s, double *out);

// Exact steady-state detected flux for a unit-`D` channel (master-equation
// solve; no weak-driving approximation).
//
// # Safety
// `out` must be valid.
enum DwStatus dw_flux_exact(double gamma,
                            double detuning,
                            double eta_re,
                            double eta_im,
                            double beta_re,
                            double beta_im,
                            double *out);

// Exact `g2(tau)` for a unit-`D` channel via the quantum regression rule;
// returns `DW_STATUS_UNDEFINED` when the detected flux vanishes.
//
// # Safety
// `out` must be valid.
enum DwStatus dw_g2_exact(double gamma,
                          double detuning,
                          double eta_re,
                          double eta_im,
                          double beta_re,
                          double beta_im,
                          double tau,
                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIPOLEWAVE_H */
