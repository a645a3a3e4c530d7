#include "levy/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BorelRegion large_jump_region(int dim) {
  return BorelRegion::annulus(dim, 1.0, kInf, true, false);
}

// first moment of c*x^{-beta} over magnitudes [l, h] on one side
double piece_first_moment(const PowerDensity& d, double l, double h) {
  if (h <= l) return 0.0;
  if (d.beta == 2.0) return d.coef * std::log(h / l);
  return d.coef * (std::pow(h, 2.0 - d.beta) - std::pow(l, 2.0 - d.beta)) / (2.0 - d.beta);
}

struct AtomTable {
  std::vector<Vec> sizes;
  std::vector<double> cum;
  double total = 0.0;
};

AtomTable atom_table(const LevyMeasure& m, const BorelRegion& b) {
  AtomTable t;
  for (const Atom& a : m.atoms()) {
    if (!b.contains(a.x)) continue;
    t.total += a.mass;
    t.sizes.push_back(a.x);
    t.cum.push_back(t.total);
  }
  return t;
}

Vec categorical_size(const AtomTable& t, RngStream& rng) {
  const double target = rng.uniform01() * t.total;
  for (std::size_t i = 0; i < t.cum.size(); ++i)
    if (target <= t.cum[i]) return t.sizes[i];
  return t.sizes.back();
}

}  // namespace

std::vector<double> make_grid(double horizon, double dt) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("make_grid: horizon must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("make_grid: dt must be positive and finite");
  if (horizon / dt > 2e7) throw std::invalid_argument("make_grid: grid too fine");
  std::vector<double> g{0.0};
  for (std::size_t i = 1;; ++i) {
    const double t = static_cast<double>(i) * dt;  // product, not accumulation
    if (t >= horizon) break;
    g.push_back(t);
  }
  g.push_back(horizon);
  return g;
}

std::vector<double> sample_poisson_events(double rate, double horizon,
                                          const std::function<double()>& uniform) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("sample_poisson_events: rate must be finite and >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("sample_poisson_events: horizon must be positive");
  std::vector<double> times;
  if (rate == 0.0) return times;
  double t = 0.0;
  for (;;) {
    t += -std::log(uniform()) / rate;
    if (!(t <= horizon)) break;
    times.push_back(t);
  }
  return times;
}

std::vector<double> sample_poisson_events(double rate, double horizon, RngStream& rng) {
  return sample_poisson_events(rate, horizon, [&rng] { return rng.uniform01(); });
}

std::vector<Jump> sample_compound_poisson_jumps(const LevyMeasure& m, const BorelRegion& b,
                                                double horizon, RngStream& rng) {
  std::vector<Jump> out;
  if (m.is_atomic()) {
    const AtomTable table = atom_table(m, b);
    const auto times = sample_poisson_events(table.total, horizon, rng);
    out.reserve(times.size());
    for (double t : times) out.push_back({t, categorical_size(table, rng)});
    return out;
  }
  const auto pieces = density_pieces(m.power(), b);
  double rate = 0.0;
  for (const DensityPiece& p : pieces) rate += p.mass;
  if (!std::isfinite(rate)) throw std::runtime_error("use shell series");
  const auto times = sample_poisson_events(rate, horizon, rng);
  out.reserve(times.size());
  const PowerDensity& d = m.power();
  for (double t : times) {
    double target = rng.uniform01() * rate;
    Vec size(pieces.empty() ? 0.0 : pieces.back().sign * pieces.back().hi);
    for (const DensityPiece& p : pieces) {
      if (target <= p.mass) {
        size = Vec(p.sign * d.piece_quantile(p.lo, p.hi, target));
        break;
      }
      target -= p.mass;
    }
    out.push_back({t, size});
  }
  return out;
}

std::vector<Vec> sample_gaussian_skeleton(const Mat& q, const Vec& drift,
                                          const std::vector<double>& grid, RngStream& rng) {
  const int n = drift.dim();
  if (q.dim() != n)
    throw std::invalid_argument("sample_gaussian_skeleton: dimension mismatch");
  if (grid.empty() || grid.front() != 0.0)
    throw std::invalid_argument("sample_gaussian_skeleton: grid must start at 0");
  if (q.max_asymmetry() > 1e-12) {
    ValidationReport r;
    r.violations.push_back("covariance not symmetric");
    throw ValidationError(std::move(r));
  }
  const auto L = cholesky_with_jitter(q);
  if (!L) {
    ValidationReport r;
    r.violations.push_back("covariance not PSD");
    throw ValidationError(std::move(r));
  }
  std::vector<Vec> vals(grid.size());
  Vec w = Vec::zero(n);
  vals[0] = Vec::zero(n);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double sdt = std::sqrt(grid[i] - grid[i - 1]);
    Vec z = Vec::zero(n);
    for (int j = 0; j < n; ++j) z[j] = rng.gaussian();
    w += L->mul(z) * sdt;
    // drift enters as a product with absolute time, so Q = 0 gives exactly a*t
    vals[i] = drift * grid[i] + w;
  }
  return vals;
}

SmallJumpResult sample_compensated_small_jumps(const LevyMeasure& m, double eps,
                                               double horizon, RngStream& rng, int k_max,
                                               SmallJumpMode mode) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("small jumps: eps must lie in (0, 1]");
  const int deepest = static_cast<int>(std::ceil(1.0 / eps)) - 1;
  if (deepest > k_max)
    throw std::invalid_argument("small jumps: eps needs more shells than k_max allows");

  SmallJumpResult out;
  out.compensator_rate = Vec::zero(m.dim());

  // the retained band is {eps < |x| < 1}; |x| = 1 belongs to the large jumps
  const auto band_for_shell = [&](int k) {
    const double lo = std::max(eps, 1.0 / (k + 1.0));
    const double hi = 1.0 / k;
    return BorelRegion::annulus(m.dim(), lo, hi, false, k > 1);
  };

  const auto run_block = [&](const BorelRegion& region) {
    if (m.is_atomic()) {
      const AtomTable table = atom_table(m, region);
      const auto times = sample_poisson_events(table.total, horizon, rng);
      for (double t : times) out.jumps.push_back({t, categorical_size(table, rng)});
      for (std::size_t i = 0; i < table.sizes.size(); ++i) {
        const double mass = table.cum[i] - (i ? table.cum[i - 1] : 0.0);
        out.compensator_rate -= table.sizes[i] * mass;
      }
      return;
    }
    const PowerDensity& d = m.power();
    const auto pieces = density_pieces(d, region);
    double rate = 0.0;
    for (const DensityPiece& p : pieces) rate += p.mass;
    const auto times = sample_poisson_events(rate, horizon, rng);
    for (double t : times) {
      double target = rng.uniform01() * rate;
      Vec size(pieces.empty() ? 0.0 : pieces.back().sign * pieces.back().hi);
      for (const DensityPiece& p : pieces) {
        if (target <= p.mass) {
          size = Vec(p.sign * d.piece_quantile(p.lo, p.hi, target));
          break;
        }
        target -= p.mass;
      }
      out.jumps.push_back({t, size});
    }
    for (const DensityPiece& p : pieces)
      out.compensator_rate[0] -= p.sign * piece_first_moment(d, p.lo, p.hi);
  };

  if (mode == SmallJumpMode::shell_series) {
    for (int k = 1; k <= deepest; ++k) run_block(band_for_shell(k));
  } else if (eps < 1.0) {
    run_block(BorelRegion::annulus(m.dim(), eps, 1.0, false, false));
  }
  std::stable_sort(out.jumps.begin(), out.jumps.end(),
                   [](const Jump& a, const Jump& b) { return a.time < b.time; });

  // dropped region is (0, eps]; at eps = 1 the top is open because |x| = 1
  // already belongs to the simulated large jumps
  const auto below = BorelRegion::annulus(m.dim(), 0.0, eps, false, eps < 1.0);
  out.omitted_variance_bound =
      horizon * nu_integral(m, [](const Vec& x) { return x.norm2(); }, below).value;
  return out;
}

PathSample sample_levy_path(const LevyTriplet& t, const SimConfig& cfg,
                            const RngStream& base) {
  ensure_valid(t);
  if (!(cfg.dt > 0.0) || !(cfg.dt <= cfg.horizon))
    throw std::invalid_argument("sample_levy_path: need 0 < dt <= horizon");

  RngStream gauss(base.master_seed(), base.stream_index() * 4 + 0);
  RngStream large_rng(base.master_seed(), base.stream_index() * 4 + 1);
  RngStream small_rng(base.master_seed(), base.stream_index() * 4 + 2);

  PathSample p;
  p.grid = make_grid(cfg.horizon, cfg.dt);
  p.horizon = p.grid.back();
  p.eps = cfg.eps;
  p.seed = base.master_seed();
  p.stream = base.stream_index();

  auto large = sample_compound_poisson_jumps(t.measure, large_jump_region(t.dim()),
                                             cfg.horizon, large_rng);
  auto small = sample_compensated_small_jumps(t.measure, cfg.eps, cfg.horizon, small_rng,
                                              cfg.k_max, cfg.mode);
  p.compensator_rate = small.compensator_rate;
  p.omitted_variance_bound = small.omitted_variance_bound;

  const Vec drift_rate = t.drift + small.compensator_rate;
  p.continuous = sample_gaussian_skeleton(t.covariance, drift_rate, p.grid, gauss);

  p.jumps = std::move(large);
  p.jumps.insert(p.jumps.end(), small.jumps.begin(), small.jumps.end());
  std::stable_sort(p.jumps.begin(), p.jumps.end(),
                   [](const Jump& a, const Jump& b) { return a.time < b.time; });

  p.skeleton.resize(p.grid.size());
  Vec prefix = Vec::zero(t.dim());
  std::size_t j = 0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    while (j < p.jumps.size() && p.jumps[j].time <= p.grid[i]) prefix += p.jumps[j++].size;
    p.skeleton[i] = p.continuous[i] + prefix;
  }
  return p;
}

PathSample sample_levy_path(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                            std::uint64_t path_index) {
  return sample_levy_path(t, cfg, RngStream(seed, path_index));
}

void sample_replicates(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                       std::size_t n,
                       const std::function<void(std::size_t, const PathSample&)>& visit) {
  if (n == 0) return;
  ensure_valid(t);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n) return;
      try {
        const PathSample p = sample_levy_path(t, cfg, seed, r);
        visit(r, p);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double truncation_for_target(const LevyMeasure& m, double horizon, double target_bound,
                             double upper_limit) {
  if (!(target_bound > 0.0)) throw std::invalid_argument("truncation: target must be > 0");
  const auto bound = [&](double eps) {
    const auto below = BorelRegion::annulus(m.dim(), 0.0, eps, false, eps < 1.0);
    return horizon * nu_integral(m, [](const Vec& x) { return x.norm2(); }, below).value;
  };
  if (bound(upper_limit) <= target_bound) return upper_limit;
  double lo = 0.0, hi = upper_limit;
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= target_bound)
      lo = mid;
    else
      hi = mid;
  }
  if (lo == 0.0) throw std::runtime_error("truncation: no feasible eps found");
  return lo;
}

}  // namespace levy
