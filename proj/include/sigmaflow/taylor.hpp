#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Taylor value over d active variables stores the coefficients
//   c_alpha = (d^alpha f)(x0) / alpha!
// for every multi-index alpha with |alpha| <= order. The mixed partial
// derivative is recovered as alpha! * c_alpha (see Taylor::derivative).
// Coefficients are laid out graded by total degree, so the leading
// size_upto(k) entries form the degree-k truncation.
//
// Every value carries the order to which its coefficients are valid.
// Differentiation lowers it by one; binary operations take the minimum.
// Storage order is fixed at kMaxOrder; callers never need more because
// fourth derivatives of the metric are the deepest data the curvature
// pipeline consumes.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sigmaflow {

inline constexpr int kMaxOrder = 4;
inline constexpr int kMaxTaylorDim = 8;

using MultiIndex = std::array<std::uint8_t, kMaxTaylorDim>;

class TaylorSpace {
 public:
  // Shared, immutable space for `dim` active variables (1..8).
  static std::shared_ptr<const TaylorSpace> of(int dim);

  int dim() const { return dim_; }
  int size() const { return size_upto_[kMaxOrder]; }
  int size_upto(int order) const { return size_upto_[order]; }
  const MultiIndex& index(int k) const { return indices_[k]; }
  int degree(int k) const { return degree_[k]; }
  // Position of alpha + e_var, or -1 when the degree would exceed kMaxOrder.
  int raised(int k, int var) const { return raise_[k * dim_ + var]; }
  // Position of a multi-index, or -1.
  int find(const MultiIndex& alpha) const;
  double factorial(int k) const { return factorial_[k]; }

  struct Product {
    int a, b, c;
  };
  // All (a, b, c) with alpha_a + alpha_b = alpha_c, grouped by degree of c.
  std::span<const Product> products_upto(int order) const {
    return {products_.data(), static_cast<std::size_t>(products_upto_[order])};
  }

  explicit TaylorSpace(int dim);

 private:
  int dim_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_;
  std::vector<int> raise_;
  std::vector<double> factorial_;
  std::vector<Product> products_;
  std::array<int, kMaxOrder + 1> size_upto_{};
  std::array<int, kMaxOrder + 1> products_upto_{};
};

using TaylorSpacePtr = std::shared_ptr<const TaylorSpace>;

class Taylor {
 public:
  Taylor() = default;
  Taylor(TaylorSpacePtr space, double constant, int order = kMaxOrder);

  // The coordinate function x_var expanded about `value`.
  static Taylor variable(TaylorSpacePtr space, int var, double value);

  const TaylorSpacePtr& space() const { return space_; }
  int order() const { return order_; }
  double value() const { return coeffs_[0]; }
  double coeff(int k) const { return coeffs_[k]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  // Mixed partial d^alpha f, alpha given as per-variable orders.
  double derivative(std::span<const int> alpha) const;
  // First partial d f / d x_var (value only).
  double d(int var) const;
  // Second partial (value only).
  double d2(int a, int b) const;

  // The derivative as a Taylor value one order lower.
  Taylor partial(int var) const;
  Taylor truncated(int order) const;
  bool is_finite() const;

  Taylor operator-() const;
  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator+=(double s);
  Taylor& operator-=(double s);
  Taylor& operator*=(double s);
  Taylor& operator/=(double s);

  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);

 private:
  TaylorSpacePtr space_;
  int order_ = 0;
  std::vector<double> coeffs_;
};

inline Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
inline Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
inline Taylor operator+(Taylor a, double s) { return a += s; }
inline Taylor operator+(double s, Taylor a) { return a += s; }
inline Taylor operator-(Taylor a, double s) { return a -= s; }
inline Taylor operator-(double s, const Taylor& a) { return -a + s; }
inline Taylor operator*(Taylor a, double s) { return a *= s; }
inline Taylor operator*(double s, Taylor a) { return a *= s; }
inline Taylor operator/(Taylor a, double s) { return a /= s; }
Taylor operator/(double s, const Taylor& a);

// Elementary functions. Each throws DomainError outside its smooth domain
// (log/sqrt of non-positive values, abs at zero, non-finite results).
Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor sinh(const Taylor& a);
Taylor cosh(const Taylor& a);
Taylor tanh(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor abs(const Taylor& a);
Taylor reciprocal(const Taylor& a);
// a^p for a real constant exponent; integer p allows non-positive bases.
Taylor pow(const Taylor& a, double p);
// General a^b, b non-constant: exp(b log a).
Taylor pow(const Taylor& a, const Taylor& b);

// Applies f given its derivatives f(a0), f'(a0), ..., f''''(a0).
Taylor compose(const Taylor& a, const std::array<double, kMaxOrder + 1>& derivs);

}  // namespace sigmaflow

namespace sigmaflow {
inline double scalar_value(const Taylor& t) { return t.value(); }
}  // namespace sigmaflow
