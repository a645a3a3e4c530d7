#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levy/measure.hpp"
#include "levy/region.hpp"
#include "levy/rng.hpp"

namespace levy {

enum class SmallJumpMode {
  shell_series,      // one compound-Poisson block per radial shell (1/(k+1), 1/k]
  rejection_direct,  // single block over the whole retained band
};

struct SimConfig {
  double horizon = 1.0;
  double dt = 0.01;
  double eps = 0.25;  // jumps with |x| <= eps are dropped, their L2 size reported
  int k_max = 1000;   // shell-depth cap; requires eps >= 1/(k_max+1)
  SmallJumpMode mode = SmallJumpMode::shell_series;
};

struct Jump {
  double time;
  Vec size;
};

// One cadlag trajectory. Values are defined at grid times; jumps are carried
// exactly (not snapped). skeleton = continuous + prefix-sum of jumps, with the
// identical floating-point evaluation order, so the identity is bit-checkable.
struct PathSample {
  double horizon = 0.0;
  std::vector<double> grid;     // 0 = t_0 < ... < t_m = horizon
  std::vector<Vec> skeleton;    // full process at grid times
  std::vector<Vec> continuous;  // drift (incl. compensator) + Brownian part
  std::vector<Jump> jumps;      // sorted by time, strictly inside (0, horizon]
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;         // path index; substreams are 4*stream + c
  Vec compensator_rate;             // -integral of x over the retained band, per unit time
  double omitted_variance_bound = 0.0;  // horizon * integral of |x|^2 below eps
  int dim() const { return compensator_rate.dim(); }
};

struct SmallJumpResult {
  std::vector<Jump> jumps;
  Vec compensator_rate;                 // per unit time
  double omitted_variance_bound = 0.0;  // horizon * integral of |x|^2 below eps
};

// Grid 0, dt, 2 dt, ..., horizon; the last step may be shorter. Interior times
// are computed as i*dt (not accumulated) so they are reproducible products.
std::vector<double> make_grid(double horizon, double dt);

// Event times of a homogeneous Poisson process: partial sums of Exp(rate)
// inter-arrivals, truncated at the horizon. rate 0 gives no events.
std::vector<double> sample_poisson_events(double rate, double horizon, RngStream& rng);
// Same arithmetic fed by an arbitrary uniform source; the RngStream overload
// delegates here. Used to pin the inverse-CDF arithmetic in tests.
std::vector<double> sample_poisson_events(double rate, double horizon,
                                          const std::function<double()>& uniform);

// Compound-Poisson jumps on a region with finite mass: times Poisson(nu(B)),
// sizes i.i.d. from the normalized restriction of the measure to B.
// Infinite mass (band touching 0 with exponent >= 1) throws
// std::runtime_error("use shell series").
std::vector<Jump> sample_compound_poisson_jumps(const LevyMeasure& m, const BorelRegion& b,
                                                double horizon, RngStream& rng);

// Values (not increments) of drift + Brownian motion at the grid times:
// value_i = a*t_i + L W_i with L L^T = Q. Q = 0 yields exactly a*t_i.
std::vector<Vec> sample_gaussian_skeleton(const Mat& q, const Vec& drift,
                                          const std::vector<double>& grid, RngStream& rng);

// Compensated small-jump component on {eps < |x| < 1}: per-shell compound
// Poisson blocks plus the exact compensator drift -integral of x, and the
// L2 bound on what was dropped below eps.
SmallJumpResult sample_compensated_small_jumps(const LevyMeasure& m, double eps,
                                               double horizon, RngStream& rng, int k_max,
                                               SmallJumpMode mode = SmallJumpMode::shell_series);

// Full path by superposing the four components, each on its own substream
// (4*index + 0 Gaussian, +1 large jumps, +2 small jumps, +3 reserved).
PathSample sample_levy_path(const LevyTriplet& t, const SimConfig& cfg, const RngStream& base);
PathSample sample_levy_path(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                            std::uint64_t path_index);

// Runs visit(r, path) for r = 0..n-1 on a small thread pool. Each path depends
// only on (seed, r), so results are reproducible under any scheduling; visit
// must tolerate concurrent calls for distinct r.
void sample_replicates(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                       std::size_t n,
                       const std::function<void(std::size_t, const PathSample&)>& visit);

// Largest eps in (0, 1] whose omitted-variance bound stays below the target;
// conservative bisection, returns upper_limit when even that is acceptable.
double truncation_for_target(const LevyMeasure& m, double horizon, double target_bound,
                             double upper_limit = 1.0);

}  // namespace levy
