#include "levy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levy/quadrature.hpp"

namespace levy {

namespace {
constexpr double kRelTol = 1e-8;
constexpr double kValidateRelTol = 1e-6;
}  // namespace

// ============================= PowerDensity ================================

double PowerDensity::operator()(double x) const {
  const double r = std::abs(x);
  if (r < lo || r > hi || r == 0.0) return 0.0;
  if (x > 0.0 && side == Side::negative) return 0.0;
  if (x < 0.0 && side == Side::positive) return 0.0;
  return coef * std::pow(r, -beta);
}

double PowerDensity::piece_mass(double l, double h) const {
  if (h <= l) return 0.0;
  if (beta == 1.0) return coef * std::log(h / l);
  return coef * (std::pow(h, 1.0 - beta) - std::pow(l, 1.0 - beta)) / (1.0 - beta);
}

double PowerDensity::piece_quantile(double l, double h, double m) const {
  double x;
  if (beta == 1.0) {
    x = l * std::exp(m / coef);
  } else {
    const double base = std::pow(l, 1.0 - beta) + m * (1.0 - beta) / coef;
    x = std::pow(base, 1.0 / (1.0 - beta));
  }
  return std::clamp(x, l, h);
}

// ============================== LevyMeasure ================================

LevyMeasure LevyMeasure::atomic(int dim, std::vector<Atom> atoms) {
  Vec::check_dim(dim);
  for (const Atom& a : atoms)
    if (a.x.dim() != dim)
      throw std::invalid_argument("LevyMeasure::atomic: atom dimension mismatch");
  LevyMeasure m;
  m.dim_ = dim;
  m.atoms_ = std::move(atoms);
  return m;
}

LevyMeasure LevyMeasure::density(PowerDensity d) {
  LevyMeasure m;
  m.dim_ = 1;
  m.density_ = d;
  return m;
}

const std::vector<Atom>& LevyMeasure::atoms() const {
  if (!is_atomic()) throw std::logic_error("LevyMeasure: not atomic");
  return atoms_;
}

const PowerDensity& LevyMeasure::power() const {
  if (is_atomic()) throw std::logic_error("LevyMeasure: not a density");
  return *density_;
}

LevyTriplet LevyTriplet::scalar(double a, double q, LevyMeasure m) {
  LevyTriplet t;
  t.drift = Vec(a);
  t.covariance = Mat::scalar(q);
  t.measure = std::move(m);
  return t;
}

std::string ValidationReport::str() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v;
  }
  return s.empty() ? "ok" : s;
}

// ============================== validation =================================

namespace {

void validate_structure(const LevyTriplet& t, ValidationReport& r) {
  const int n = t.drift.dim();
  if (!t.drift.finite()) r.violations.push_back("drift not finite");
  if (t.covariance.dim() != n) r.violations.push_back("covariance dimension mismatch");
  if (!t.covariance.finite()) {
    r.violations.push_back("covariance not finite");
  } else if (t.covariance.dim() == n) {
    if (t.covariance.max_asymmetry() > 1e-12)
      r.violations.push_back("covariance not symmetric");
    else if (!is_psd_within(t.covariance, 1e-12))
      r.violations.push_back("covariance not PSD");
  }
  if (t.measure.dim() != n) r.violations.push_back("measure dimension mismatch");
  if (t.measure.is_atomic()) {
    for (const Atom& a : t.measure.atoms()) {
      if (!a.x.finite())
        r.violations.push_back("atom location not finite");
      else if (a.x.norm() == 0.0)
        r.violations.push_back("atom at the origin");
      if (!(a.mass > 0.0) || !std::isfinite(a.mass))
        r.violations.push_back("atom mass not positive");
    }
  } else {
    const PowerDensity& d = t.measure.power();
    if (n != 1) r.violations.push_back("density measure requires dimension 1");
    if (!(d.coef >= 0.0) || !std::isfinite(d.coef))
      r.violations.push_back("density coefficient negative");
    if (!(d.beta >= 0.0) || !(d.beta < 3.0))
      r.violations.push_back("density singularity exponent out of range");
    if (!(d.lo >= 0.0) || !(d.hi > d.lo) || !std::isfinite(d.hi))
      r.violations.push_back("density support invalid");
  }
}

}  // namespace

ValidationReport validate_triplet(const LevyTriplet& t) {
  ValidationReport r;
  validate_structure(t, r);
  if (!r.ok()) return r;
  // integral of |x|^2 ^ 1 must be finite; exact for atoms, quadrature for densities
  if (t.measure.is_atomic()) {
    double s = 0.0;
    for (const Atom& a : t.measure.atoms()) s += a.mass * std::min(a.x.norm2(), 1.0);
    if (!std::isfinite(s)) r.violations.push_back("small-jump activity not integrable");
  } else {
    const ScalarFn f = [](const Vec& x) { return std::min(x[0] * x[0], 1.0); };
    try {
      const QuadValue q = nu_integral(t.measure, f, BorelRegion::abs_ge(0.0));
      if (!std::isfinite(q.value) ||
          (q.value != 0.0 && q.abs_error > kValidateRelTol * std::abs(q.value) * 10.0))
        r.violations.push_back("small-jump activity not integrable");
    } catch (const std::domain_error&) {
      r.violations.push_back("small-jump activity not integrable");
    }
  }
  return r;
}

void ensure_valid(const LevyTriplet& t) {
  ValidationReport r;
  validate_structure(t, r);
  if (!r.ok()) throw ValidationError(std::move(r));
}

// ============================== nu_integral ================================

namespace {

struct Piece {
  double l, h;  // 0 <= l < h, magnitudes
  int sign;     // side of the axis
};

std::vector<Piece> clip_pieces(const PowerDensity& d, const BorelRegion& b) {
  std::vector<Piece> out;
  for (const Interval& iv : b.parts()) {
    if (d.side != Side::negative) {
      const double l = std::max(iv.lo, d.lo);
      const double h = std::min(iv.hi, d.hi);
      if (h > l && h > 0.0) out.push_back({std::max(l, 0.0), h, +1});
    }
    if (d.side != Side::positive) {
      const double l = std::max(-iv.hi, d.lo);
      const double h = std::min(-iv.lo, d.hi);
      if (h > l && h > 0.0) out.push_back({std::max(l, 0.0), h, -1});
    }
  }
  return out;
}

// f must be O(x^2) at the origin for the weighted integral to exist there.
bool quadratic_domination_probe(const ScalarFn& f, int sign) {
  const double x3 = 1e-3, x9 = 1e-9;
  const double r3 = std::abs(f(Vec(sign * x3))) / (x3 * x3);
  const double r9 = std::abs(f(Vec(sign * x9))) / (x9 * x9);
  return r9 <= 16.0 * r3 + 1e-12;
}

QuadValue integrate_piece(const PowerDensity& d, const ScalarFn& f, const Piece& p) {
  const auto g = [&](double r) { return f(Vec(p.sign * r)) * d.coef * std::pow(r, -d.beta); };
  QuadResult q;
  if (p.l == 0.0 && d.beta > 1.0) {
    // substitution r = t^gamma turns the x^{2-beta} edge into ~t, preserving
    // integral identity: dr = gamma t^{gamma-1} dt
    const double gamma = 2.0 / (3.0 - d.beta);
    const auto sub = [&](double t) {
      return g(std::pow(t, gamma)) * gamma * std::pow(t, gamma - 1.0);
    };
    q = integrate(sub, 0.0, std::pow(p.h, 1.0 / gamma), kRelTol);
  } else {
    q = integrate(g, p.l, p.h, kRelTol);
  }
  return {q.value, q.abs_error};
}

}  // namespace

std::vector<DensityPiece> density_pieces(const PowerDensity& d, const BorelRegion& b) {
  if (b.dim() != 1) throw std::invalid_argument("density_pieces: region must be 1-d");
  std::vector<DensityPiece> out;
  for (const Piece& p : clip_pieces(d, b))
    out.push_back({p.l, p.h, p.sign, d.piece_mass(p.l, p.h)});
  return out;
}

QuadValue nu_integral(const LevyMeasure& m, const ScalarFn& f, const BorelRegion& b) {
  if (b.dim() != m.dim())
    throw std::invalid_argument("nu_integral: region/measure dimension mismatch");
  if (m.is_atomic()) {
    double s = 0.0;
    for (const Atom& a : m.atoms())
      if (b.contains(a.x)) s += a.mass * f(a.x);
    return {s, 0.0};
  }
  const PowerDensity& d = m.power();
  QuadValue total;
  for (const Piece& p : clip_pieces(d, b)) {
    if (p.l == 0.0 && !quadratic_domination_probe(f, p.sign))
      throw std::domain_error(
          "non-integrable: integrand not quadratically dominated near the origin");
    const QuadValue q = integrate_piece(d, f, p);
    total.value += q.value;
    total.abs_error += q.abs_error;
  }
  return total;
}

double nu_mass(const LevyMeasure& m, const BorelRegion& b) {
  return nu_integral(m, [](const Vec&) { return 1.0; }, b).value;
}

Vec nu_first_moment(const LevyMeasure& m, const BorelRegion& b) {
  Vec out = Vec::zero(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    out[i] = nu_integral(m, [i](const Vec& x) { return x[i]; }, b).value;
  return out;
}

// ================================== psi ====================================

cd psi(const LevyTriplet& t, const Vec& u) {
  ensure_valid(t);
  if (u.dim() != t.dim()) throw std::invalid_argument("psi: dimension mismatch");
  if (!u.finite()) throw std::invalid_argument("psi: u not finite");
  cd val(0.5 * t.covariance.quad_form(u), -dot(t.drift, u));
  if (t.measure.is_atomic()) {
    for (const Atom& a : t.measure.atoms()) {
      const double ux = dot(u, a.x);
      // |x| = 1 belongs to the uncompensated large-jump part
      if (a.x.norm() >= 1.0)
        val += a.mass * (1.0 - std::polar(1.0, ux));
      else
        val += a.mass * (1.0 - std::polar(1.0, ux) + cd(0.0, ux));
    }
    return val;
  }
  const double s = u[0];
  const BorelRegion large = BorelRegion::abs_ge(1.0);
  const BorelRegion small = BorelRegion::abs_in(0.0, 1.0, false, false);
  const ScalarFn re_part = [s](const Vec& x) { return 1.0 - std::cos(s * x[0]); };
  const ScalarFn im_large = [s](const Vec& x) { return -std::sin(s * x[0]); };
  const ScalarFn im_small = [s](const Vec& x) { return s * x[0] - std::sin(s * x[0]); };
  val += cd(nu_integral(t.measure, re_part, large).value,
            nu_integral(t.measure, im_large, large).value);
  val += cd(nu_integral(t.measure, re_part, small).value,
            nu_integral(t.measure, im_small, small).value);
  return val;
}

cd psi(const LevyTriplet& t, double u) {
  if (t.dim() != 1) throw std::invalid_argument("psi: scalar u needs a 1-d triplet");
  return psi(t, Vec(u));
}

cd char_fn(const LevyTriplet& t, const Vec& u, double time) {
  if (!(time >= 0.0) || !std::isfinite(time))
    throw std::invalid_argument("char_fn: time must be finite and >= 0");
  return std::exp(-time * psi(t, u));
}

cd char_fn(const LevyTriplet& t, double u, double time) {
  return char_fn(t, Vec(u), time);
}

// ============================== CharExponent ===============================

CharExponent CharExponent::analytic_fn(int dim, Fn f) {
  CharExponent h;
  h.dim_ = Vec::check_dim(dim);
  h.fn_ = std::move(f);
  h.prov_ = Provenance::analytic;
  if (std::abs(h.fn_(Vec::zero(dim))) > h.zero_tolerance()) {
    ValidationReport r;
    r.violations.push_back("characteristic exponent nonzero at the origin");
    throw ValidationError(std::move(r));
  }
  return h;
}

CharExponent CharExponent::from_triplet(const LevyTriplet& t) {
  ensure_valid(t);
  return analytic_fn(t.dim(), [t](const Vec& u) { return psi(t, u); });
}

CharExponent CharExponent::empirical_1d(std::span<const double> samples, double t) {
  if (samples.empty()) throw std::invalid_argument("empirical_1d: empty sample");
  if (!(t > 0.0)) throw std::invalid_argument("empirical_1d: time must be > 0");
  std::vector<double> xs(samples.begin(), samples.end());
  const double n = static_cast<double>(xs.size());
  CharExponent h;
  h.dim_ = 1;
  h.prov_ = Provenance::empirical;
  h.n_ = xs.size();
  h.fn_ = [xs = std::move(xs), n, t](const Vec& u) {
    cd acc(0.0, 0.0);
    for (double x : xs) acc += std::polar(1.0, u[0] * x);
    return -std::log(acc / n) / t;
  };
  if (std::abs(h.fn_(Vec(0.0))) > h.zero_tolerance()) {
    ValidationReport r;
    r.violations.push_back("characteristic exponent nonzero at the origin");
    throw ValidationError(std::move(r));
  }
  return h;
}

cd CharExponent::operator()(double u) const {
  if (dim_ != 1) throw std::invalid_argument("CharExponent: scalar call needs dim 1");
  return fn_(Vec(u));
}

double CharExponent::zero_tolerance() const {
  if (prov_ == Provenance::analytic) return 1e-10;
  return 4.0 / std::sqrt(static_cast<double>(n_ == 0 ? 1 : n_));
}

}  // namespace levy
