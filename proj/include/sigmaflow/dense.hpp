#pragma once

// Small dense square matrices over double or Taylor entries.

#include <cmath>
#include <vector>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

template <class T>
class Square {
 public:
  Square() = default;
  Square(int n, const T& fill) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}

  int size() const { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<T> a_;
};

template <class T>
Square<T> operator*(const Square<T>& a, const Square<T>& b) {
  const int n = a.size();
  Square<T> c(n, a(0, 0) * 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      T s = a(i, 0) * b(0, j);
      for (int k = 1; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

template <class T>
T trace(const Square<T>& a) {
  T s = a(0, 0);
  for (int i = 1; i < a.size(); ++i) s += a(i, i);
  return s;
}

inline double scalar_value(double x) { return x; }

// Gauss-Jordan inverse without pivoting; intended for positive-definite
// matrices (metrics), where the leading minors never vanish.
template <class T>
Square<T> inverse_spd(Square<T> a) {
  const int n = a.size();
  Square<T> inv(n, a(0, 0) * 0.0);
  for (int i = 0; i < n; ++i) inv(i, i) = inv(i, i) + 1.0;
  for (int p = 0; p < n; ++p) {
    if (!(scalar_value(a(p, p)) > 0.0)) {
      throw GeometryError("metric is not positive definite (pivot " + std::to_string(p) + ")");
    }
    const T pivot_inv = 1.0 / a(p, p);
    for (int j = 0; j < n; ++j) {
      a(p, j) = a(p, j) * pivot_inv;
      inv(p, j) = inv(p, j) * pivot_inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == p) continue;
      const T f = a(i, p);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(p, j);
        inv(i, j) -= f * inv(p, j);
      }
    }
  }
  return inv;
}

// Lower-triangular Cholesky factor; throws GeometryError when not PD.
inline Square<double> cholesky(const Square<double>& a) {
  const int n = a.size();
  Square<double> l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw GeometryError("metric is not positive definite (Cholesky pivot " + std::to_string(j) + ")");
    }
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace sigmaflow
