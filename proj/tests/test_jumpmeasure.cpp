#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "levy/jumpmeasure.hpp"

using namespace levy;

namespace {

PathSample fixture_path() {
  // three recorded jumps: +2 at 0.3, -1.5 at 0.7, +0.2 at 0.9
  PathSample p;
  p.horizon = 1.0;
  p.jumps = {{0.3, Vec(2.0)}, {0.7, Vec(-1.5)}, {0.9, Vec(0.2)}};
  p.compensator_rate = Vec::zero(1);
  return p;
}

}  // namespace

TEST_CASE("jump times filtered by region") {
  const auto p = fixture_path();
  const auto pos = jump_times_in(p, BorelRegion::ray_ge(1.0));
  REQUIRE(pos.size() == 1);
  CHECK(pos[0] == 0.3);

  const auto big = jump_times_in(p, BorelRegion::abs_ge(1.0));
  REQUIRE(big.size() == 2);
  CHECK(big[0] == 0.3);
  CHECK(big[1] == 0.7);

  CHECK(jump_times_in(p, BorelRegion::ray_ge(3.0)).empty());
}

TEST_CASE("counting process: boundaries and domain") {
  const auto p = fixture_path();
  const auto all = BorelRegion::abs_ge(1.0);
  CHECK(count_jumps(p, all, 0.0) == 0);
  CHECK(count_jumps(p, all, 0.5) == 1);
  CHECK(count_jumps(p, all, 0.7) == 2);  // jump at t counts at t
  CHECK(count_jumps(p, all, 1.0) == 2);
  CHECK_THROWS_AS(count_jumps(p, all, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(count_jumps(p, all, -0.1), std::invalid_argument);
}

TEST_CASE("jump integral of x^2 and of the indicator") {
  const auto p = fixture_path();
  const auto all = BorelRegion::abs_ge(1.0);
  CHECK(jump_integral(p, [](const Vec& x) { return x[0] * x[0]; }, all, 1.0) == 6.25);
  // f = 1 recovers the counting process at every time
  for (double t : {0.0, 0.3, 0.5, 0.8, 1.0})
    CHECK(jump_integral(p, [](const Vec&) { return 1.0; }, all, t) ==
          static_cast<double>(count_jumps(p, all, t)));
  CHECK(jump_integral(p, [](const Vec& x) { return x[0]; },
                      BorelRegion::ray_ge(1.0), 0.5) == 2.0);
}

TEST_CASE("jump integral is additive over disjoint regions and linear in f") {
  const auto p = fixture_path();
  const auto pos = BorelRegion::ray_ge(1.0);
  const auto neg = BorelRegion::ray_le(-1.0);
  const auto both = BorelRegion::abs_ge(1.0);
  const auto f = [](const Vec& x) { return x[0]; };
  CHECK(jump_integral(p, f, both, 1.0) ==
        jump_integral(p, f, pos, 1.0) + jump_integral(p, f, neg, 1.0));
  CHECK(count_jumps(p, both, 1.0) ==
        count_jumps(p, pos, 1.0) + count_jumps(p, neg, 1.0));

  const auto g = [](const Vec& x) { return x[0] * x[0]; };
  const auto fg = [](const Vec& x) { return x[0] + x[0] * x[0]; };
  CHECK(jump_integral(p, fg, both, 1.0) ==
        jump_integral(p, f, both, 1.0) + jump_integral(p, g, both, 1.0));
}

TEST_CASE("jump sum and the compensated process") {
  PathSample p;
  p.horizon = 1.0;
  p.jumps = {{0.4, Vec(2.0)}};
  p.compensator_rate = Vec::zero(1);
  const auto b = BorelRegion::ray_ge(1.0);
  CHECK(jump_sum(p, b, 1.0)[0] == 2.0);
  const auto m = LevyMeasure::atomic(1, {{Vec(2.0), 3.0}});
  // first moment over B is 6, so the compensated value at t=1 is 2 - 6
  CHECK(compensated_jump_process(p, b, m, 1.0)[0] == -4.0);
  CHECK(compensated_jump_process(p, b, m, 0.0)[0] == 0.0);
}

TEST_CASE("counting process is a nondecreasing step function of time") {
  const auto p = fixture_path();
  const auto all = BorelRegion::abs_ge(0.1);
  std::size_t last = 0;
  for (int i = 0; i <= 20; ++i) {
    const std::size_t c = count_jumps(p, all, 0.05 * i);
    CHECK(c >= last);
    last = c;
  }
  CHECK(last == 3);
}

TEST_CASE("jump candidate detection flags the staircase steps") {
  LevyTriplet t = LevyTriplet::scalar(0.0, 0.0, LevyMeasure::atomic(1, {{Vec(1.0), 3.0}}));
  SimConfig cfg;
  cfg.horizon = 2.0;
  cfg.dt = 0.1;
  const auto p = sample_levy_path(t, cfg, 808, 0);
  const auto flagged = detect_jump_candidates(p, t.covariance);
  CHECK(flagged.size() >= std::min<std::size_t>(p.jumps.size(), 1));
  // with zero diffusion every flagged step must contain a recorded jump
  for (double tf : flagged) {
    bool has = false;
    for (const Jump& j : p.jumps) has = has || (j.time <= tf && j.time > tf - 0.1 - 1e-12);
    CHECK(has);
  }
}
