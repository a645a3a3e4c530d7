#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "levy/quadrature.hpp"

using levy::integrate;
using levy::integrate_complex;

TEST_CASE("polynomials up to the Kronrod exactness degree integrate exactly") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  r = integrate([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
}

TEST_CASE("smooth integrands hit the requested relative tolerance") {
  auto r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) <= 1e-12);
  CHECK(std::abs(r.value - 2.0) <= std::max(r.abs_error, 1e-14));

  r = integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0);
  // erf(3) * sqrt(pi)
  CHECK(r.value == doctest::Approx(1.7724146965190425).epsilon(1e-10));
}

TEST_CASE("oscillatory integrand forces subdivision but still converges") {
  const double exact = std::sin(500.0) / 50.0;
  auto r = integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 10.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - exact) <= 1e-10);
  CHECK(r.evals > 15);  // one panel cannot resolve 80 periods
}

TEST_CASE("integrable endpoint singularity: nodes never touch the endpoint") {
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(std::abs(r.value - 2.0) <= 1e-6);

  r = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(std::abs(r.value - (-1.0)) <= 1e-8);
}

TEST_CASE("degenerate and reversed bounds") {
  auto r = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}

TEST_CASE("interval budget exhaustion is reported, not hidden") {
  auto r = integrate([](double x) { return std::cos(1000.0 * x); }, 0.0, 10.0, 1e-12, 0.0, 2);
  CHECK_FALSE(r.converged);
}

TEST_CASE("complex integration matches the closed-form antiderivative") {
  using cd = std::complex<double>;
  auto r = integrate_complex([](double x) { return std::exp(cd(0.0, x)); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
  CHECK(r.value.imag() == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("error estimate is a usable bound on several known integrals") {
  struct Case {
    std::function<double(double)> f;
    double a, b, exact;
  };
  const Case cases[] = {
      {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, M_PI / 4.0},
      {[](double x) { return std::exp(x); }, -1.0, 1.0, std::exp(1.0) - std::exp(-1.0)},
      {[](double x) { return x * std::sin(10.0 * x); }, 0.0, 2.0,
       (std::sin(20.0) - 20.0 * std::cos(20.0)) / 100.0},
  };
  for (const auto& c : cases) {
    auto r = integrate(c.f, c.a, c.b);
    CHECK(r.converged);
    CHECK(std::abs(r.value - c.exact) <= std::max(r.abs_error * 10.0, 1e-12));
  }
}
