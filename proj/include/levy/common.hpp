#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>

namespace levy {

inline constexpr int kMaxDim = 3;

// Dense vector in R^n, n in {1,2,3}. Fixed capacity, value semantics.
class Vec {
 public:
  Vec() : n_(1) { a_.fill(0.0); }
  explicit Vec(double x) : n_(1) { a_ = {x, 0.0, 0.0}; }
  Vec(std::initializer_list<double> xs) {
    if (xs.size() < 1 || xs.size() > kMaxDim)
      throw std::invalid_argument("Vec: dimension must be 1..3");
    n_ = static_cast<int>(xs.size());
    a_.fill(0.0);
    int i = 0;
    for (double x : xs) a_[i++] = x;
  }
  static Vec zero(int n) {
    Vec v;
    v.n_ = check_dim(n);
    return v;
  }

  int dim() const { return n_; }
  double operator[](int i) const { return a_[i]; }
  double& operator[](int i) { return a_[i]; }
  double x() const { return a_[0]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Vec& operator*=(double c) {
    for (int i = 0; i < n_; ++i) a_[i] *= c;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double c) { return a *= c; }
  friend Vec operator*(double c, Vec a) { return a *= c; }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i)
      if (a.a_[i] != b.a_[i]) return false;
    return true;
  }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += a_[i] * a_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
  bool finite() const {
    for (int i = 0; i < n_; ++i)
      if (!std::isfinite(a_[i])) return false;
    return true;
  }

  static int check_dim(int n) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("dimension must be 1..3");
    return n;
  }

 private:
  std::array<double, kMaxDim> a_;
  int n_;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

// Symmetric-use n x n matrix, n in {1,2,3}, row-major.
class Mat {
 public:
  Mat() : n_(1) { a_.fill(0.0); }
  static Mat zero(int n) {
    Mat m;
    m.n_ = Vec::check_dim(n);
    return m;
  }
  static Mat identity(int n) {
    Mat m = zero(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat scalar(double q) {
    Mat m = zero(1);
    m(0, 0) = q;
    return m;
  }
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Mat m = zero(static_cast<int>(rows.size()));
    int i = 0;
    for (auto& r : rows) {
      if (static_cast<int>(r.size()) != m.n_)
        throw std::invalid_argument("Mat: ragged rows");
      int j = 0;
      for (double v : r) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[i * kMaxDim + j]; }
  double& operator()(int i, int j) { return a_[i * kMaxDim + j]; }

  double quad_form(const Vec& u) const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += u[i] * (*this)(i, j) * u[j];
    return s;
  }
  Vec mul(const Vec& u) const {
    Vec r = Vec::zero(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * u[j];
    return r;
  }
  double max_abs() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s = std::max(s, std::abs((*this)(i, j)));
    return s;
  }
  double max_asymmetry() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) s = std::max(s, std::abs((*this)(i, j) - (*this)(j, i)));
    return s;
  }
  bool finite() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!std::isfinite((*this)(i, j))) return false;
    return true;
  }
  bool is_zero() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if ((*this)(i, j) != 0.0) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim * kMaxDim> a_;
  int n_;
};

// Lower-triangular L with L L^T = Q. Pivots in [-ztol, ztol] are treated as an
// exact zero column (rank-deficient PSD); a pivot below -ztol means not PSD.
inline std::optional<Mat> cholesky_psd(const Mat& q, double ztol) {
  const int n = q.dim();
  Mat L = Mat::zero(n);
  for (int i = 0; i < n; ++i) {
    double d = q(i, i);
    for (int k = 0; k < i; ++k) d -= L(i, k) * L(i, k);
    if (d > ztol) {
      L(i, i) = std::sqrt(d);
      for (int j = i + 1; j < n; ++j) {
        double r = q(j, i);
        for (int k = 0; k < i; ++k) r -= L(j, k) * L(i, k);
        L(j, i) = r / L(i, i);
      }
    } else if (d >= -ztol) {
      // zero pivot: the rest of the column must vanish too or Q is indefinite
      L(i, i) = 0.0;
      for (int j = i + 1; j < n; ++j) {
        double r = q(j, i);
        for (int k = 0; k < i; ++k) r -= L(j, k) * L(i, k);
        if (std::abs(r) > std::sqrt(std::max(ztol, 0.0)) * (1.0 + q.max_abs()))
          return std::nullopt;
        L(j, i) = 0.0;
      }
    } else {
      return std::nullopt;
    }
  }
  return L;
}

inline bool is_psd_within(const Mat& q, double slack) {
  Mat shifted = q;
  const double s = slack * std::max(1.0, q.max_abs());
  for (int i = 0; i < q.dim(); ++i) shifted(i, i) += s;
  return cholesky_psd(shifted, s).has_value();
}

// Cholesky for sampling: jitter ladder up to jitter_max on the diagonal.
// Returns the factor of Q + j*I for the smallest working j in {0, 1e-14..jitter_max}.
inline std::optional<Mat> cholesky_with_jitter(const Mat& q, double jitter_max = 1e-10) {
  const double scale = std::max(1.0, q.max_abs());
  for (double j = 0.0; j <= jitter_max; j = (j == 0.0 ? 1e-14 : j * 10.0)) {
    Mat shifted = q;
    for (int i = 0; i < q.dim(); ++i) shifted(i, i) += j * scale;
    if (auto L = cholesky_psd(shifted, 1e-307)) return L;
  }
  return std::nullopt;
}

}  // namespace levy
