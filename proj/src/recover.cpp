#include "levy/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levy/io.hpp"

namespace levy {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

// 1 - sin(x)/x without cancellation near the origin
double one_minus_sinc(double x) {
  const double t = x * x;
  if (std::abs(x) < 0.1)
    return t / 6.0 - t * t / 120.0 + t * t * t / 5040.0;
  return 1.0 - std::sin(x) / x;
}

// integral of e^{-iuy} over [-w, w]
double window_kernel0(double u, double w) {
  const double t = u * w;
  if (std::abs(t) < 1e-8) return 2.0 * w * (1.0 - t * t / 6.0);
  return 2.0 * std::sin(t) / u;
}

// integral of y e^{-iuy} over [-w, w]; odd in u, purely imaginary
cd window_kernel1(double u, double w) {
  const double t = u * w;
  if (std::abs(t) < 1e-4) {
    // (2i/u^2)(t cos t - sin t) = 2i w^3 u (-1/3 + t^2/30 + ...)
    return cd(0.0, 2.0 * w * w * w * u * (-1.0 / 3.0 + t * t / 30.0));
  }
  return cd(0.0, 2.0 * (t * std::cos(t) - std::sin(t)) / (u * u));
}

std::vector<double> make_taper(std::size_t npts, double power) {
  const long j_max = static_cast<long>((npts - 1) / 2);
  std::vector<double> w(npts);
  for (long j = -j_max; j <= j_max; ++j) {
    const double tri = 1.0 - std::abs(static_cast<double>(j)) /
                                 static_cast<double>(j_max + 1);
    w[static_cast<std::size_t>(j + j_max)] = std::pow(tri, power);
  }
  return w;
}

}  // namespace

namespace detail {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

cd window_mass(const GTransform& g, const std::vector<double>& taper, double x0,
               double w) {
  const std::size_t n = g.u.size();
  cd acc(0.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = g.u[j];
    acc += taper[j] * g.g[j] * window_kernel0(u, w) *
           std::polar(1.0, -u * x0);
  }
  return acc * (g.h_u / (2.0 * kPi));
}

}  // namespace detail

void RecoveryConfig::validate() const {
  if (!(s_max > 0.0) || s_points < 2)
    throw std::invalid_argument("recovery config: need s_max > 0 and s_points >= 2");
  if (!(h_u > 0.0) || !(u_max > 0.0) || !near_integer(1.0 / h_u) ||
      !near_integer(u_max / h_u))
    throw std::invalid_argument(
        "recovery config: 1/h_u and u_max/h_u must be positive integers");
  if (!(h_x > 0.0) || !(x_max > 0.0) || !near_integer(x_max / h_x))
    throw std::invalid_argument(
        "recovery config: x_max/h_x must be a positive integer");
  if (h_u * x_max > kPi + 1e-12)
    throw std::invalid_argument("recovery config: Nyquist bound h_u*x_max <= pi violated");
  if (!(damping_power >= 0.0) || !(delta_floor > 0.0) || !(peak_abs > 0.0) ||
      !(peak_rel > 0.0) || !(ill_conditioned_denom > 0.0) || !(drift_gap_tol > 0.0))
    throw std::invalid_argument("recovery config: nonpositive tuning parameter");
}

DiffusionEstimate recover_diffusion_coefficient(const CharExponent& psi,
                                                const RecoveryConfig& cfg) {
  cfg.validate();
  if (psi.dim() != 1)
    throw std::invalid_argument("diffusion recovery is one-dimensional");
  std::vector<cd> vals(cfg.s_points);
  for (std::size_t k = 0; k < cfg.s_points; ++k) {
    const double s =
        cfg.s_max / std::pow(2.0, static_cast<double>(cfg.s_points - 1 - k));
    vals[k] = 2.0 * psi(s) / (s * s);
    if (!std::isfinite(vals[k].real()) || !std::isfinite(vals[k].imag()))
      throw std::domain_error("characteristic exponent not evaluable on the s-grid");
  }
  DiffusionEstimate est;
  est.sigma2 = std::max(0.0, vals.back().real());
  est.error = std::abs(vals[cfg.s_points - 1] - vals[cfg.s_points - 2]);
  const double prev = std::abs(vals[cfg.s_points - 2] - vals[cfg.s_points - 3]);
  est.converged = est.error <= prev + 1e-14;
  return est;
}

GTransform forward_g_transform(const CharExponent& psi, double sigma2,
                               const RecoveryConfig& cfg) {
  cfg.validate();
  if (psi.dim() != 1)
    throw std::invalid_argument("g-transform is one-dimensional");
  const long q = std::lround(1.0 / cfg.h_u);
  // 2*q*ksub master steps per window = q*ksub Simpson panels per unit length.
  // 64 panels is the accuracy floor; run at 128 for headroom.
  const long ksub = (256 + q - 1) / q;
  const double h_m = cfg.h_u / static_cast<double>(ksub);
  const long j_max = std::lround(cfg.u_max / cfg.h_u);
  const long half_window = q * ksub;  // master steps per unit length
  const long n_half = (j_max + q) * ksub;

  // psi - sigma2 u^2 / 2 cached on the fine grid so every window integral
  // reuses the same evaluations
  std::vector<cd> pt(static_cast<std::size_t>(2 * n_half + 1));
  for (long n = -n_half; n <= n_half; ++n) {
    const double u = static_cast<double>(n) * h_m;
    const cd v = psi(u) - cd(0.5 * sigma2 * u * u, 0.0);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error(
          "characteristic exponent not evaluable on the forward grid");
    pt[static_cast<std::size_t>(n + n_half)] = v;
  }

  GTransform out;
  out.h_u = cfg.h_u;
  out.u.reserve(static_cast<std::size_t>(2 * j_max + 1));
  out.g.reserve(static_cast<std::size_t>(2 * j_max + 1));
  for (long j = -j_max; j <= j_max; ++j) {
    const long c = n_half + j * ksub;
    cd simpson = pt[static_cast<std::size_t>(c - half_window)] +
                 pt[static_cast<std::size_t>(c + half_window)];
    for (long m = 1; m < 2 * half_window; ++m)
      simpson += ((m % 2 == 1) ? 4.0 : 2.0) *
                 pt[static_cast<std::size_t>(c - half_window + m)];
    simpson *= h_m / 3.0;
    out.u.push_back(static_cast<double>(j) * cfg.h_u);
    out.g.push_back(-(pt[static_cast<std::size_t>(c)] - 0.5 * simpson));
  }
  return out;
}

MeasureEstimate invert_to_levy_measure(const GTransform& g, const RecoveryConfig& cfg) {
  cfg.validate();
  if (g.u.size() < 3 || g.u.size() % 2 == 0 || g.g.size() != g.u.size())
    throw std::invalid_argument("invert_to_levy_measure: malformed u-grid");
  const std::vector<double> taper = make_taper(g.u.size(), cfg.damping_power);
  const long i_max = std::lround(cfg.x_max / cfg.h_x);
  const double w = cfg.window_halfwidth();

  MeasureEstimate est;
  const std::size_t npts = static_cast<std::size_t>(2 * i_max + 1);
  est.x.resize(npts);
  est.rho.resize(npts);
  est.nu.resize(npts);
  std::vector<double> wmass(npts);
  const double scale = g.h_u / (2.0 * kPi);
  for (long i = -i_max; i <= i_max; ++i) {
    const double x = static_cast<double>(i) * cfg.h_x;
    cd acc(0.0, 0.0);
    for (std::size_t j = 0; j < g.u.size(); ++j)
      acc += taper[j] * g.g[j] * std::polar(1.0, -g.u[j] * x);
    const std::size_t idx = static_cast<std::size_t>(i + i_max);
    est.x[idx] = x;
    est.rho[idx] = acc.real() * scale;
    const double denom = one_minus_sinc(x);
    est.nu[idx] = est.rho[idx] / std::max(denom, cfg.delta_floor);
    wmass[idx] = detail::window_mass(g, taper, x, w).real();
  }

  double neg = 0.0, tot = 0.0;
  for (double r : est.rho) {
    neg += std::max(0.0, -r) * cfg.h_x;
    tot += std::abs(r) * cfg.h_x;
  }
  est.negative_fraction = tot > 0.0 ? neg / tot : 0.0;
  // the ratio alone is meaningless for a near-zero transform, so the flag
  // also requires a detectable amount of negative mass
  est.inconsistent_input = est.negative_fraction > 0.05 && neg > cfg.peak_abs;

  // peak candidates on the window-mass profile (wider than the smoothing
  // kernel, so an atom between grid points still registers)
  std::vector<std::size_t> cand;
  for (std::size_t i = 1; i + 1 < npts; ++i)
    if (wmass[i] >= wmass[i - 1] && wmass[i] >= wmass[i + 1] &&
        wmass[i] >= cfg.peak_abs)
      cand.push_back(i);
  double max_mass = 0.0;
  for (std::size_t i : cand) max_mass = std::max(max_mass, wmass[i]);
  std::vector<std::size_t> strong;
  for (std::size_t i : cand)
    if (wmass[i] >= cfg.peak_rel * max_mass) strong.push_back(i);
  // non-maximum suppression: one winner per window
  std::stable_sort(strong.begin(), strong.end(), [&](std::size_t a, std::size_t b) {
    if (wmass[a] != wmass[b]) return wmass[a] > wmass[b];
    return a < b;
  });
  std::vector<double> centers;
  for (std::size_t i : strong) {
    const double x = est.x[i];
    bool taken = false;
    for (double c : centers) taken = taken || std::abs(x - c) < w;
    if (!taken) centers.push_back(x);
  }

  for (double c : centers) {
    double x_hat = c;
    cd mass = detail::window_mass(g, taper, x_hat, w);
    for (int it = 0; it < 3; ++it) {
      if (std::abs(mass) < cfg.peak_abs / 10.0) break;
      cd m1(0.0, 0.0);
      for (std::size_t j = 0; j < g.u.size(); ++j)
        m1 += taper[j] * g.g[j] * window_kernel1(g.u[j], w) *
              std::polar(1.0, -g.u[j] * x_hat);
      m1 *= g.h_u / (2.0 * kPi);
      double shift = (m1 / mass).real();
      shift = std::clamp(shift, -w, w);
      x_hat += shift;
      mass = detail::window_mass(g, taper, x_hat, w);
    }
    RecoveredAtom a;
    a.x = x_hat;
    a.rho_mass = mass.real();
    if (a.rho_mass < cfg.peak_abs) continue;
    a.denom = one_minus_sinc(x_hat);
    a.nu_mass = a.rho_mass / std::max(a.denom, cfg.delta_floor);
    a.ill_conditioned = a.denom < cfg.ill_conditioned_denom;
    est.atoms.push_back(a);
  }
  std::sort(est.atoms.begin(), est.atoms.end(),
            [](const RecoveredAtom& a, const RecoveredAtom& b) { return a.x < b.x; });

  for (const RecoveredAtom& a : est.atoms)
    est.floor_active = est.floor_active || a.ill_conditioned;
  for (std::size_t i = 0; i < npts; ++i)
    if (one_minus_sinc(est.x[i]) < cfg.delta_floor && std::abs(wmass[i]) >= cfg.peak_abs)
      est.floor_active = true;
  return est;
}

DriftEstimate recover_drift(const CharExponent& psi, double sigma2,
                            const std::vector<RecoveredAtom>& atoms,
                            const RecoveryConfig& cfg) {
  if (psi.dim() != 1)
    throw std::invalid_argument("drift recovery is one-dimensional");
  const auto estimate = [&](double u) {
    cd rec(0.5 * sigma2 * u * u, 0.0);
    for (const RecoveredAtom& a : atoms) {
      cd term = cd(1.0, 0.0) - std::polar(1.0, u * a.x);
      // compensated below radius 1; the slack keeps an atom recovered at
      // 1 - epsilon on the same side of the cut as a true atom at 1
      if (std::abs(a.x) < 1.0 - 1e-9) term += cd(0.0, u * a.x);
      rec += a.nu_mass * term;
    }
    return -(psi(u) - rec).imag() / u;
  };
  DriftEstimate d;
  d.a = estimate(1.0);
  d.cross_check_gap = std::abs(d.a - estimate(2.0));
  d.flagged = d.cross_check_gap > cfg.drift_gap_tol;
  return d;
}

RecoveredTriplet recover_triplet(const CharExponent& psi, const RecoveryConfig& cfg) {
  cfg.validate();
  RecoveredTriplet out;
  out.diffusion = recover_diffusion_coefficient(psi, cfg);
  const GTransform g = forward_g_transform(psi, out.diffusion.sigma2, cfg);
  out.measure = invert_to_levy_measure(g, cfg);
  out.drift = recover_drift(psi, out.diffusion.sigma2, out.measure.atoms, cfg);
  return out;
}

CheckReport roundtrip_report(const LevyTriplet& truth, const RecoveryConfig& cfg) {
  if (truth.dim() != 1)
    throw std::invalid_argument("roundtrip_report: one-dimensional triplets only");
  const CharExponent psi = CharExponent::from_triplet(truth);
  const RecoveredTriplet rec = recover_triplet(psi, cfg);

  CheckReport rep;
  rep.check = "recovery_roundtrip";
  const double s2_err = std::abs(rec.diffusion.sigma2 - truth.covariance(0, 0));
  rep.items.push_back({"sigma2_abs_error", s2_err, 0.0, 1e-3, s2_err <= 1e-3});

  if (!truth.measure.is_atomic()) {
    rep.note = "density truth: measure and drift comparison skipped";
    rep.status = rep.items[0].pass ? CheckStatus::pass : CheckStatus::fail;
    return rep;
  }

  const double w = cfg.window_halfwidth();
  std::vector<bool> claimed(rec.measure.atoms.size(), false);
  std::vector<Atom> truth_atoms = truth.measure.atoms();
  std::sort(truth_atoms.begin(), truth_atoms.end(),
            [](const Atom& a, const Atom& b) { return a.x[0] < b.x[0]; });
  for (std::size_t k = 0; k < truth_atoms.size(); ++k) {
    const double x = truth_atoms[k].x[0];
    const double m = truth_atoms[k].mass;
    std::size_t best = rec.measure.atoms.size();
    double best_d = w;
    for (std::size_t i = 0; i < rec.measure.atoms.size(); ++i) {
      const double d = std::abs(rec.measure.atoms[i].x - x);
      if (!claimed[i] && d < best_d) {
        best = i;
        best_d = d;
      }
    }
    const std::string tag = "atom" + std::to_string(k);
    if (best == rec.measure.atoms.size()) {
      rep.items.push_back({tag + "_mass_rel_error", 1.0, 0.0, 0.05, false});
      continue;
    }
    claimed[best] = true;
    const RecoveredAtom& a = rec.measure.atoms[best];
    const double mass_err = std::abs(a.nu_mass - m) / m;
    rep.items.push_back(
        {tag + "_mass_rel_error", mass_err, 0.0, 0.05, mass_err <= 0.05});
    rep.items.push_back(
        {tag + "_location_error", best_d, 0.0, cfg.h_x / 2.0, best_d <= cfg.h_x / 2.0});
  }
  double spurious = 0.0;
  for (std::size_t i = 0; i < rec.measure.atoms.size(); ++i)
    if (!claimed[i]) spurious += std::abs(rec.measure.atoms[i].nu_mass);
  rep.items.push_back({"spurious_mass", spurious, 0.0, 1e-3, spurious <= 1e-3});

  const double a_err = std::abs(rec.drift.a - truth.drift[0]);
  rep.items.push_back({"drift_abs_error", a_err, 0.0, 0.02, a_err <= 0.02});

  std::string note;
  if (!rec.diffusion.converged) note += "sigma2 estimate not converging; ";
  if (rec.measure.inconsistent_input) note += "inconsistent input (negative mass); ";
  if (rec.measure.floor_active) note += "denominator floor active; ";
  if (rec.drift.flagged) note += "drift cross-check gap above threshold; ";
  rep.note = note;

  rep.status = CheckStatus::pass;
  for (const CheckItem& it : rep.items)
    if (!it.pass) rep.status = CheckStatus::fail;
  return rep;
}

std::string measure_csv(const MeasureEstimate& m) {
  return table_csv({"x", "rho", "nu"}, {m.x, m.rho, m.nu});
}

}  // namespace levy
