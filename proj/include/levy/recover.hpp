#pragma once

#include <complex>
#include <vector>

#include "levy/measure.hpp"
#include "levy/verify.hpp"

namespace levy {

// Everything in this module is deterministic: no RNG anywhere.

struct RecoveryConfig {
  // s-grid for the quadratic-growth limit: geometric, s_max/2^{k} down from s_max
  double s_max = 100.0;
  std::size_t s_points = 8;
  // symmetric u-grid for the forward transform; 1/h_u must be an integer
  double u_max = 512.0;
  double h_u = 1.0 / 64.0;
  // symmetric x-grid for the inverted measure
  double x_max = 8.0;
  double h_x = 1.0 / 8.0;
  // taper exponent: 1 = triangular (Fejer) damping, 0 = none
  double damping_power = 1.0;
  // floor for the division by (1 - sin x / x)
  double delta_floor = 1e-6;
  // atoms with denominator below this are reported as ill-conditioned
  double ill_conditioned_denom = 1e-2;
  // peak acceptance thresholds on the window mass
  double peak_abs = 1e-4;
  double peak_rel = 0.02;
  // flag threshold for the drift cross-check gap
  double drift_gap_tol = 0.04;

  // throws std::invalid_argument; checks the Nyquist bound h_u * x_max <= pi
  void validate() const;
  double window_halfwidth() const { return std::max(2.0 * h_x, 0.25); }
};

struct DiffusionEstimate {
  double sigma2 = 0.0;
  double error = 0.0;      // |last - previous| of 2 psi(s)/s^2 on the s-grid
  bool converged = true;   // false when the error sequence stopped shrinking
};

// 2 Re psi(s_max) / s_max^2, clamped to >= 0.
DiffusionEstimate recover_diffusion_coefficient(const CharExponent& psi,
                                                const RecoveryConfig& cfg);

struct GTransform {
  std::vector<double> u;                // j * h_u, j = -J..J
  std::vector<std::complex<double>> g;  // Fourier transform of (1 - sinc x) nu(dx)
  double h_u = 0.0;
};

// g(u) = -[pt(u) - (1/2) int_{u-1}^{u+1} pt(v) dv], pt = psi - sigma2 u^2 / 2.
// The window integral uses composite Simpson on a shared fine grid with at
// least 64 panels per unit length.
GTransform forward_g_transform(const CharExponent& psi, double sigma2,
                               const RecoveryConfig& cfg);

struct RecoveredAtom {
  double x = 0.0;         // window center of mass after refinement
  double rho_mass = 0.0;  // window mass of the damped inversion
  double nu_mass = 0.0;   // rho_mass / max(1 - sinc x, delta_floor)
  double denom = 0.0;     // 1 - sinc x before flooring
  bool ill_conditioned = false;
};

struct MeasureEstimate {
  std::vector<double> x;    // grid
  std::vector<double> rho;  // inverted density
  std::vector<double> nu;   // rho / max(1 - sinc x, delta_floor)
  std::vector<RecoveredAtom> atoms;
  double negative_fraction = 0.0;  // negative rho mass / total |rho| mass
  bool inconsistent_input = false;  // negative_fraction > 5%
  bool floor_active = false;  // division entered the ill-conditioned zone
};

MeasureEstimate invert_to_levy_measure(const GTransform& g, const RecoveryConfig& cfg);

struct DriftEstimate {
  double a = 0.0;
  double cross_check_gap = 0.0;  // |estimate at u*=1 minus estimate at u*=2|
  bool flagged = false;
};

DriftEstimate recover_drift(const CharExponent& psi, double sigma2,
                            const std::vector<RecoveredAtom>& atoms,
                            const RecoveryConfig& cfg);

struct RecoveredTriplet {
  DiffusionEstimate diffusion;
  MeasureEstimate measure;
  DriftEstimate drift;
};

RecoveredTriplet recover_triplet(const CharExponent& psi, const RecoveryConfig& cfg);

// Full chain against a known 1-d triplet; items: sigma2 absolute error (1e-3),
// per-atom mass relative error (5%) and location error (h_x/2), drift absolute
// error (0.02), spurious unmatched mass (1e-3).
CheckReport roundtrip_report(const LevyTriplet& truth, const RecoveryConfig& cfg);

// (x, rho, nu) rows for plotting.
std::string measure_csv(const MeasureEstimate& m);

namespace detail {
double sinc(double x);  // sin(x)/x, 1 at 0
// mass of the damped inversion over [x0 - w, x0 + w], computed in u-space
std::complex<double> window_mass(const GTransform& g, const std::vector<double>& taper,
                                 double x0, double w);
}  // namespace detail

}  // namespace levy
