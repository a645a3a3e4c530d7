#pragma once

#include <optional>
#include <vector>

#include "levy/common.hpp"

namespace levy {

// One-dimensional interval with endpoint inclusion flags. Infinite endpoints
// are allowed and always open.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
};

// Jump region. Dimension 1: a finite union of intervals. Dimension 2..3: an
// annulus r1 <= |x| <= r2 (with inclusion flags), optionally cut by a box.
class BorelRegion {
 public:
  static BorelRegion intervals(std::vector<Interval> parts);
  static BorelRegion interval(double lo, double hi, bool lo_closed = true,
                              bool hi_closed = true);
  static BorelRegion point(double x) { return interval(x, x, true, true); }
  static BorelRegion ray_ge(double r);   // [r, +inf)
  static BorelRegion ray_le(double r);   // (-inf, r]
  static BorelRegion abs_ge(double r);   // {|x| >= r}, dimension 1
  static BorelRegion abs_in(double r1, double r2, bool lo_closed, bool hi_closed);
  static BorelRegion annulus(int dim, double r1, double r2, bool lo_closed,
                             bool hi_closed);
  BorelRegion with_box(const Vec& lo, const Vec& hi) const;

  int dim() const { return dim_; }
  bool contains(const Vec& x) const;
  bool contains1(double x) const;

  // Greatest lower bound of |x| over the region (0 when the region reaches
  // the origin's every neighborhood).
  double min_abs() const;
  bool bounded_away_from_zero() const { return min_abs() > 0.0; }

  bool intersects(const BorelRegion& other) const;
  // Exact for dimension 1; unsupported combinations throw.
  static BorelRegion intersection_1d(const BorelRegion& a, const BorelRegion& b);

  const std::vector<Interval>& parts() const { return parts_; }

 private:
  BorelRegion() = default;
  int dim_ = 1;
  std::vector<Interval> parts_;  // dim 1
  double r1_ = 0.0, r2_ = 0.0;   // dim >= 2
  bool r1_closed_ = true, r2_closed_ = true;
  std::optional<std::pair<Vec, Vec>> box_;
};

}  // namespace levy
