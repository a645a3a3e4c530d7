#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace levy {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  std::size_t evals = 0;
};

// Adaptive Gauss-Kronrod 7/15 with bisection of the worst interval.
// Stops when the summed error estimate is below max(abs_tol, rel_tol*|value|).
// Nodes are interior, so integrable endpoint singularities are never evaluated.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-8, double abs_tol = 0.0,
                     int max_intervals = 4000);

struct QuadResultC {
  std::complex<double> value{0.0, 0.0};
  double abs_error = 0.0;
  bool converged = false;
};

QuadResultC integrate_complex(const std::function<std::complex<double>(double)>& f,
                              double a, double b, double rel_tol = 1e-8,
                              double abs_tol = 0.0, int max_intervals = 4000);

}  // namespace levy
