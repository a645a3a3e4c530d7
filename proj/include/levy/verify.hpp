#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "levy/jumpmeasure.hpp"
#include "levy/measure.hpp"
#include "levy/simulate.hpp"

namespace levy {

enum class CheckStatus { pass, fail, inconclusive };

struct CheckItem {
  std::string name;  // sub-statistic, e.g. "sup_error"
  double statistic = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string check;
  CheckStatus status = CheckStatus::pass;
  std::vector<CheckItem> items;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string note;  // set when inconclusive, empty otherwise
  bool passed() const { return status == CheckStatus::pass; }
};

// 4-sigma band for a mean of N terms whose sd (or hard bound) is `bound`.
// Homogeneous in sqrt(N): clt_band(b, 4N) = clt_band(b, N)/2.
double clt_band(double bound, std::size_t n);

// Upper-tail probability of the chi-square distribution.
double chi2_tail(double stat, double dof);

struct PoissonGof {
  double stat = 0.0;
  double dof = 0.0;
  double p = 1.0;
  std::size_t bins = 0;
};
// Goodness of fit of integer counts against Poisson(lambda); consecutive
// count values are pooled until each bin expects at least 5 observations.
PoissonGof poisson_gof(const std::vector<std::uint64_t>& counts, double lambda);

// Value of the path at an exact grid time; throws if `time` is not on the grid.
const Vec& value_at(const PathSample& p, double time);

// Empirical characteristic function of the terminal values against
// exp(-time * psi(u)) on a u-grid; sup error within 4/sqrt(N).
CheckReport check_ecf(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                      std::size_t n, double time, const std::vector<Vec>& us);

// Counts are compared to Poisson(lambda) by mean, variance (4-sigma bands)
// and chi-square with p >= 1e-3.
CheckReport check_poisson_law(const std::vector<std::uint64_t>& counts, double lambda,
                              std::uint64_t seed);
// Convenience: counts of B-jumps at the horizon over n replicates.
CheckReport check_poisson_law(const LevyTriplet& t, const SimConfig& cfg,
                              std::uint64_t seed, std::size_t n, const BorelRegion& b);

// Mean of the jump integral vs t*integral(f) and variance of its compensated
// version vs t*integral(f^2).
CheckReport check_jump_moments(const LevyTriplet& t, const SimConfig& cfg,
                               std::uint64_t seed, std::size_t n, const ScalarFn& f,
                               const BorelRegion& b);

// Joint ECF of (X_t(B1), X_t(B2)) factorizes over a (u,v) grid within
// 8/sqrt(N). Overlapping regions are rejected.
CheckReport check_disjoint_independence(const LevyTriplet& t, const SimConfig& cfg,
                                        std::uint64_t seed, std::size_t n,
                                        const BorelRegion& b1, const BorelRegion& b2,
                                        const std::vector<double>& us,
                                        const std::vector<double>& vs);

// M_t = exp(i<u,X_t>)/phi_t(u): mean 1 and increment orthogonal to conj(M_s).
CheckReport check_martingale_normalization(const LevyTriplet& t, const SimConfig& cfg,
                                           std::uint64_t seed, std::size_t n, double u,
                                           double s, double time);

// E[M_t N_t] vs E[sum of M-jumps at N's jump times], both against the shared
// analytic value t*integral of x over (b_m intersect b_n).
CheckReport check_jump_covariance_identity(const LevyTriplet& t, const SimConfig& cfg,
                                           std::uint64_t seed, std::size_t n,
                                           const BorelRegion& b_m, const BorelRegion& b_n,
                                           double time);

// Path minus drift, compensator and jumps must be N(0, Q t): exact zero when
// Q = 0, else ECF + excess-kurtosis bands. One-dimensional triplets only.
CheckReport check_gaussian_residual(const LevyTriplet& t, const SimConfig& cfg,
                                    std::uint64_t seed, std::size_t n, double time,
                                    const std::vector<double>& us);

// Restart at the first grid time at or after the first B-jump; the increment
// over lag s must have the unconditional law exp(-s psi) and be uncorrelated
// with the pre-restart value. Fewer than 1000 retained paths => inconclusive.
CheckReport check_strong_markov(const LevyTriplet& t, const SimConfig& cfg,
                                std::uint64_t seed, std::size_t n, const BorelRegion& b,
                                double s, const std::vector<double>& us);

// Report serialization ("levy-report/1"): flattened items with stable names.
nlohmann::json report_to_json(const CheckReport& r);
nlohmann::json reports_to_json(const std::vector<CheckReport>& rs);

std::vector<double> linspace(double lo, double hi, std::size_t count);

namespace detail {
// Factorization statistic without the disjointness guard; exists so tests can
// demonstrate that overlapping regions genuinely break the identity.
double factorization_sup(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                         std::size_t n, const BorelRegion& b1, const BorelRegion& b2,
                         const std::vector<double>& us, const std::vector<double>& vs);
// Covariance-identity statistics with optional compensation of the M side;
// the uncompensated variant is the negative control.
struct CovIdentity {
  double lhs = 0.0, rhs = 0.0, expected = 0.0, lhs_band = 0.0, rhs_band = 0.0,
         diff_band = 0.0;
};
CovIdentity covariance_identity_stats(const LevyTriplet& t, const SimConfig& cfg,
                                      std::uint64_t seed, std::size_t n,
                                      const BorelRegion& b_m, const BorelRegion& b_n,
                                      double time, bool compensate);
}  // namespace detail

}  // namespace levy
