#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levy/common.hpp"
#include "levy/region.hpp"

namespace levy {

using cd = std::complex<double>;

struct Atom {
  Vec x;        // location, never the origin
  double mass;  // > 0
};

enum class Side { positive, negative, both };

// Radial power-law jump density d(x) = coef * |x|^(-beta) on the selected
// side(s) of [lo, hi], 0 <= lo < hi, beta in [0, 3). beta < 3 keeps
// integral(|x|^2 ^ 1) finite even when lo = 0.
struct PowerDensity {
  double coef = 1.0;
  double beta = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  Side side = Side::both;

  double operator()(double x) const;
  // mass of [l, h] on one side, 0 <= l <= h within [lo, hi]
  double piece_mass(double l, double h) const;
  // quantile of the normalized restriction to [l, h]: m in [0, piece_mass]
  double piece_quantile(double l, double h, double m) const;
};

// Jump intensity measure: finitely many atoms, or a 1-d power density.
class LevyMeasure {
 public:
  static LevyMeasure atomic(int dim, std::vector<Atom> atoms);
  static LevyMeasure none(int dim) { return atomic(dim, {}); }
  static LevyMeasure density(PowerDensity d);

  bool is_atomic() const { return !density_.has_value(); }
  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const;
  const PowerDensity& power() const;

 private:
  LevyMeasure() = default;
  int dim_ = 1;
  std::vector<Atom> atoms_;
  std::optional<PowerDensity> density_;
};

struct LevyTriplet {
  Vec drift = Vec(0.0);
  Mat covariance = Mat::scalar(0.0);
  LevyMeasure measure = LevyMeasure::none(1);

  int dim() const { return drift.dim(); }
  static LevyTriplet scalar(double a, double q, LevyMeasure m);
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport r)
      : std::runtime_error("invalid triplet: " + r.str()), report(std::move(r)) {}
  ValidationReport report;
};

// Full validation: shape/finiteness/PSD checks plus, for densities, a
// quadrature confirmation that integral(|x|^2 ^ 1) d nu is finite.
ValidationReport validate_triplet(const LevyTriplet& t);

// Cheap invariants only (no quadrature); throws ValidationError.
void ensure_valid(const LevyTriplet& t);

struct QuadValue {
  double value = 0.0;
  double abs_error = 0.0;
};

using ScalarFn = std::function<double(const Vec&)>;

// One-sided support pieces of a power density clipped to a 1-d region, with
// exact closed-form masses (infinite when a piece reaches 0 with beta >= 1).
struct DensityPiece {
  double lo, hi;  // magnitudes, 0 <= lo < hi
  int sign;       // +1 or -1
  double mass;
};
std::vector<DensityPiece> density_pieces(const PowerDensity& d, const BorelRegion& b);

// integral of f over B against nu. Atomic measures sum exactly (abs_error 0);
// densities integrate adaptively to relative tolerance 1e-8. If B touches the
// origin, f must vanish quadratically there (probed); otherwise throws
// std::domain_error("non-integrable").
QuadValue nu_integral(const LevyMeasure& m, const ScalarFn& f, const BorelRegion& b);
double nu_mass(const LevyMeasure& m, const BorelRegion& b);
Vec nu_first_moment(const LevyMeasure& m, const BorelRegion& b);

// Characteristic exponent of the triplet:
//   psi(u) = 1/2 u^T Q u - i<a,u> + integral over |x|>=1 of (1 - e^{i<u,x>})
//          + integral over |x|<1 of (1 - e^{i<u,x>} + i<u,x>)
cd psi(const LevyTriplet& t, const Vec& u);
cd psi(const LevyTriplet& t, double u);

// E[e^{i<u, X_time>}] = exp(-time * psi(u)), time >= 0.
cd char_fn(const LevyTriplet& t, const Vec& u, double time);
cd char_fn(const LevyTriplet& t, double u, double time);

// Evaluator handle for a characteristic exponent of known or sampled origin.
class CharExponent {
 public:
  enum class Provenance { analytic, empirical };
  using Fn = std::function<cd(const Vec&)>;

  static CharExponent analytic_fn(int dim, Fn f);
  static CharExponent from_triplet(const LevyTriplet& t);
  // psi_hat(u) = -log(ECF(u)) / t from 1-d terminal samples at time t.
  static CharExponent empirical_1d(std::span<const double> samples, double t);

  cd operator()(const Vec& u) const { return fn_(u); }
  cd operator()(double u) const;

  int dim() const { return dim_; }
  Provenance provenance() const { return prov_; }
  std::size_t sample_size() const { return n_; }
  // |psi(0)| must stay below this: exact-ish when analytic, CLT band when empirical.
  double zero_tolerance() const;

 private:
  CharExponent() = default;
  Fn fn_;
  int dim_ = 1;
  Provenance prov_ = Provenance::analytic;
  std::size_t n_ = 0;
};

}  // namespace levy
