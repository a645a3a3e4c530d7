#include "levy/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace levy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BorelRegion BorelRegion::intervals(std::vector<Interval> parts) {
  BorelRegion r;
  r.dim_ = 1;
  for (Interval& iv : parts) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi))
      throw std::invalid_argument("BorelRegion: NaN endpoint");
    if (std::isinf(iv.lo)) iv.lo_closed = false;
    if (std::isinf(iv.hi)) iv.hi_closed = false;
    if (iv.empty()) continue;
    r.parts_.push_back(iv);
  }
  std::sort(r.parts_.begin(), r.parts_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return r;
}

BorelRegion BorelRegion::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  return intervals({Interval{lo, hi, lo_closed, hi_closed}});
}

BorelRegion BorelRegion::ray_ge(double r) { return interval(r, kInf, true, false); }
BorelRegion BorelRegion::ray_le(double r) { return interval(-kInf, r, false, true); }

BorelRegion BorelRegion::abs_ge(double r) {
  return intervals({Interval{-kInf, -r, false, true}, Interval{r, kInf, true, false}});
}

BorelRegion BorelRegion::abs_in(double r1, double r2, bool lo_closed, bool hi_closed) {
  return intervals({Interval{-r2, -r1, hi_closed, lo_closed},
                    Interval{r1, r2, lo_closed, hi_closed}});
}

BorelRegion BorelRegion::annulus(int dim, double r1, double r2, bool lo_closed,
                                 bool hi_closed) {
  if (r1 < 0 || r2 < r1) throw std::invalid_argument("annulus: need 0 <= r1 <= r2");
  if (dim == 1) return abs_in(r1, r2, lo_closed, hi_closed);
  Vec::check_dim(dim);
  BorelRegion r;
  r.dim_ = dim;
  r.r1_ = r1;
  r.r2_ = r2;
  r.r1_closed_ = lo_closed;
  r.r2_closed_ = hi_closed;
  return r;
}

BorelRegion BorelRegion::with_box(const Vec& lo, const Vec& hi) const {
  if (dim_ == 1) throw std::invalid_argument("with_box: use intervals in dimension 1");
  if (lo.dim() != dim_ || hi.dim() != dim_)
    throw std::invalid_argument("with_box: dimension mismatch");
  BorelRegion r = *this;
  r.box_ = std::make_pair(lo, hi);
  return r;
}

bool BorelRegion::contains1(double x) const {
  if (dim_ != 1) throw std::invalid_argument("contains1: region is not 1-d");
  for (const Interval& iv : parts_)
    if (iv.contains(x)) return true;
  return false;
}

bool BorelRegion::contains(const Vec& x) const {
  if (x.dim() != dim_) return false;
  if (dim_ == 1) return contains1(x[0]);
  const double r = x.norm();
  if (r < r1_ || (r == r1_ && !r1_closed_)) return false;
  if (r > r2_ || (r == r2_ && !r2_closed_)) return false;
  if (box_) {
    for (int i = 0; i < dim_; ++i)
      if (x[i] < box_->first[i] || x[i] > box_->second[i]) return false;
  }
  return true;
}

double BorelRegion::min_abs() const {
  if (dim_ != 1) {
    double d = r1_;
    if (box_) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double below = box_->first[i] > 0 ? box_->first[i] : 0.0;
        const double above = box_->second[i] < 0 ? -box_->second[i] : 0.0;
        const double gap = std::max(below, above);
        s += gap * gap;
      }
      d = std::max(d, std::sqrt(s));
    }
    return d;
  }
  double best = kInf;
  for (const Interval& iv : parts_) {
    double d;
    if (iv.lo <= 0.0 && iv.hi >= 0.0)
      d = 0.0;  // straddles or touches the origin
    else if (iv.lo > 0.0)
      d = iv.lo;
    else
      d = -iv.hi;
    best = std::min(best, d);
  }
  return parts_.empty() ? kInf : best;
}

bool BorelRegion::intersects(const BorelRegion& other) const {
  if (dim_ != other.dim_) return false;
  if (dim_ == 1) {
    for (const Interval& a : parts_)
      for (const Interval& b : other.parts_) {
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo < hi) return true;
        if (lo == hi) {
          const bool lc = (a.lo == lo ? a.lo_closed : true) && (b.lo == lo ? b.lo_closed : true);
          const bool hc = (a.hi == hi ? a.hi_closed : true) && (b.hi == hi ? b.hi_closed : true);
          if (lc && hc) return true;
        }
      }
    return false;
  }
  // conservative radial test for annuli
  return std::max(r1_, other.r1_) <= std::min(r2_, other.r2_);
}

BorelRegion BorelRegion::intersection_1d(const BorelRegion& a, const BorelRegion& b) {
  if (a.dim() != 1 || b.dim() != 1)
    throw std::invalid_argument("intersection_1d: requires 1-d regions");
  std::vector<Interval> out;
  for (const Interval& p : a.parts_)
    for (const Interval& q : b.parts_) {
      Interval r;
      if (p.lo > q.lo) {
        r.lo = p.lo;
        r.lo_closed = p.lo_closed;
      } else if (p.lo < q.lo) {
        r.lo = q.lo;
        r.lo_closed = q.lo_closed;
      } else {
        r.lo = p.lo;
        r.lo_closed = p.lo_closed && q.lo_closed;
      }
      if (p.hi < q.hi) {
        r.hi = p.hi;
        r.hi_closed = p.hi_closed;
      } else if (p.hi > q.hi) {
        r.hi = q.hi;
        r.hi_closed = q.hi_closed;
      } else {
        r.hi = p.hi;
        r.hi_closed = p.hi_closed && q.hi_closed;
      }
      if (!r.empty()) out.push_back(r);
    }
  return intervals(std::move(out));
}

}  // namespace levy
