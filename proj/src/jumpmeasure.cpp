#include "levy/jumpmeasure.hpp"

#include <cmath>
#include <stdexcept>

namespace levy {

namespace {
void check_time(const PathSample& p, double t) {
  if (!(t >= 0.0) || !(t <= p.horizon))
    throw std::invalid_argument("jump query: t must lie in [0, horizon]");
}
}  // namespace

std::vector<double> jump_times_in(const PathSample& p, const BorelRegion& b) {
  std::vector<double> out;
  for (const Jump& j : p.jumps)
    if (b.contains(j.size)) out.push_back(j.time);
  return out;
}

std::size_t count_jumps(const PathSample& p, const BorelRegion& b, double t) {
  check_time(p, t);
  std::size_t n = 0;
  for (const Jump& j : p.jumps) {
    if (j.time > t) break;
    if (b.contains(j.size)) ++n;
  }
  return n;
}

double jump_integral(const PathSample& p, const ScalarFn& f, const BorelRegion& b,
                     double t) {
  check_time(p, t);
  double s = 0.0;
  for (const Jump& j : p.jumps) {
    if (j.time > t) break;
    if (b.contains(j.size)) s += f(j.size);
  }
  return s;
}

Vec jump_sum(const PathSample& p, const BorelRegion& b, double t) {
  check_time(p, t);
  Vec s = Vec::zero(p.dim());
  for (const Jump& j : p.jumps) {
    if (j.time > t) break;
    if (b.contains(j.size)) s += j.size;
  }
  return s;
}

Vec compensated_jump_process(const PathSample& p, const BorelRegion& b,
                             const LevyMeasure& m, double t) {
  return jump_sum(p, b, t) - nu_first_moment(m, b) * t;
}

std::vector<double> detect_jump_candidates(const PathSample& p, const Mat& q,
                                           double factor) {
  std::vector<double> out;
  for (std::size_t i = 1; i < p.grid.size(); ++i) {
    const double dt = p.grid[i] - p.grid[i - 1];
    bool flag = false;
    for (int j = 0; j < p.dim() && !flag; ++j) {
      const double inc = p.skeleton[i][j] - p.skeleton[i - 1][j];
      if (std::abs(inc) > factor * std::sqrt(q(j, j) * dt)) flag = true;
    }
    if (flag) out.push_back(p.grid[i]);
  }
  return out;
}

}  // namespace levy
