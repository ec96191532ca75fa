#include "sigmaflow/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

int total_degree(const MultiIndex& a, int dim) {
  int s = 0;
  for (int v = 0; v < dim; ++v) s += a[v];
  return s;
}

// Enumerates multi-indices of exactly `degree` over `dim` variables in
// lexicographically decreasing order (x1^k first).
void enumerate_degree(int dim, int degree, int var, MultiIndex& cur,
                      std::vector<MultiIndex>& out) {
  if (var == dim - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, degree - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

std::uint32_t encode(const MultiIndex& a) {
  std::uint32_t key = 0;
  for (int v = 0; v < kMaxTaylorDim; ++v) key = key * (kMaxOrder + 1) + a[v];
  return key;
}

}  // namespace

TaylorSpace::TaylorSpace(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxTaylorDim) {
    throw GeometryError("Taylor space dimension must be in 1..8, got " + std::to_string(dim));
  }
  MultiIndex cur{};
  for (int deg = 0; deg <= kMaxOrder; ++deg) {
    enumerate_degree(dim, deg, 0, cur, indices_);
    size_upto_[deg] = static_cast<int>(indices_.size());
  }
  const int n = static_cast<int>(indices_.size());
  std::map<std::uint32_t, int> lookup;
  degree_.resize(n);
  factorial_.resize(n);
  for (int k = 0; k < n; ++k) {
    lookup[encode(indices_[k])] = k;
    degree_[k] = total_degree(indices_[k], dim);
    double f = 1.0;
    for (int v = 0; v < dim; ++v) {
      for (int e = 2; e <= indices_[k][v]; ++e) f *= e;
    }
    factorial_[k] = f;
  }
  raise_.assign(static_cast<std::size_t>(n) * dim, -1);
  for (int k = 0; k < n; ++k) {
    if (degree_[k] == kMaxOrder) continue;
    for (int v = 0; v < dim; ++v) {
      MultiIndex up = indices_[k];
      ++up[v];
      raise_[k * dim + v] = lookup.at(encode(up));
    }
  }
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      if (degree_[a] > degree_[c]) break;
      MultiIndex rest{};
      bool ok = true;
      for (int v = 0; v < dim && ok; ++v) {
        if (indices_[a][v] > indices_[c][v]) ok = false;
        else rest[v] = static_cast<std::uint8_t>(indices_[c][v] - indices_[a][v]);
      }
      if (!ok) continue;
      products_.push_back({a, lookup.at(encode(rest)), c});
    }
    for (int deg = degree_[c]; deg <= kMaxOrder; ++deg) {
      products_upto_[deg] = static_cast<int>(products_.size());
    }
  }
}

int TaylorSpace::find(const MultiIndex& alpha) const {
  const int deg = total_degree(alpha, dim_);
  if (deg > kMaxOrder) return -1;
  const int lo = deg == 0 ? 0 : size_upto_[deg - 1];
  for (int k = lo; k < size_upto_[deg]; ++k) {
    if (indices_[k] == alpha) return k;
  }
  return -1;
}

std::shared_ptr<const TaylorSpace> TaylorSpace::of(int dim) {
  static std::array<std::shared_ptr<const TaylorSpace>, kMaxTaylorDim + 1> cache;
  static std::mutex mutex;
  if (dim < 1 || dim > kMaxTaylorDim) {
    throw GeometryError("Taylor space dimension must be in 1..8, got " + std::to_string(dim));
  }
  std::lock_guard lock(mutex);
  if (!cache[dim]) cache[dim] = std::make_shared<const TaylorSpace>(dim);
  return cache[dim];
}

Taylor::Taylor(TaylorSpacePtr space, double constant, int order)
    : space_(std::move(space)), order_(order), coeffs_(space_->size_upto(order), 0.0) {
  coeffs_[0] = constant;
}

Taylor Taylor::variable(TaylorSpacePtr space, int var, double value) {
  Taylor t(std::move(space), value);
  t.coeffs_[1 + var] = 1.0;
  return t;
}

double Taylor::derivative(std::span<const int> alpha) const {
  MultiIndex a{};
  for (std::size_t v = 0; v < alpha.size(); ++v) a[v] = static_cast<std::uint8_t>(alpha[v]);
  const int k = space_->find(a);
  if (k < 0 || space_->degree(k) > order_) {
    throw DomainError("requested derivative exceeds the valid Taylor order");
  }
  return space_->factorial(k) * coeffs_[k];
}

double Taylor::d(int var) const { return coeffs_[1 + var]; }

double Taylor::d2(int a, int b) const {
  const int k = space_->raised(1 + a, b);
  return (a == b ? 2.0 : 1.0) * coeffs_[k];
}

Taylor Taylor::partial(int var) const {
  if (order_ == 0) throw DomainError("cannot differentiate an order-0 Taylor value");
  Taylor out(space_, 0.0, order_ - 1);
  const int n = space_->size_upto(order_ - 1);
  for (int k = 0; k < n; ++k) {
    const int up = space_->raised(k, var);
    out.coeffs_[k] = (space_->index(k)[var] + 1) * coeffs_[up];
  }
  return out;
}

Taylor Taylor::truncated(int order) const {
  if (order >= order_) return *this;
  Taylor out = *this;
  out.order_ = order;
  out.coeffs_.resize(space_->size_upto(order));
  return out;
}

bool Taylor::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

Taylor Taylor::operator-() const {
  Taylor out = *this;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  if (o.order_ < order_) {
    order_ = o.order_;
    coeffs_.resize(o.coeffs_.size());
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  if (o.order_ < order_) {
    order_ = o.order_;
    coeffs_.resize(o.coeffs_.size());
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = *this * o; }

Taylor& Taylor::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Taylor& Taylor::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Taylor& Taylor::operator/=(double s) {
  if (s == 0.0) throw DomainError("division by zero");
  for (double& c : coeffs_) c /= s;
  return *this;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  const int order = std::min(a.order_, b.order_);
  Taylor out(a.space_, 0.0, order);
  const double* ac = a.coeffs_.data();
  const double* bc = b.coeffs_.data();
  double* oc = out.coeffs_.data();
  for (const auto& p : a.space_->products_upto(order)) oc[p.c] += ac[p.a] * bc[p.b];
  return out;
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }

Taylor operator/(double s, const Taylor& a) { return reciprocal(a) * s; }

Taylor compose(const Taylor& a, const std::array<double, kMaxOrder + 1>& derivs) {
  for (double v : derivs) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in function evaluation");
  }
  Taylor h = a;
  h.coeffs()[0] = 0.0;
  Taylor out(a.space(), derivs[0], a.order());
  Taylor power = h;
  double inv_factorial = 1.0;
  for (int j = 1; j <= a.order(); ++j) {
    inv_factorial /= j;
    if (derivs[j] != 0.0) out += power * (derivs[j] * inv_factorial);
    if (j < a.order()) power = power * h;
  }
  return out;
}

namespace {

void require_finite(const Taylor& t, const char* what) {
  if (!t.is_finite()) throw DomainError(std::string("non-finite result in ") + what);
}

}  // namespace

Taylor exp(const Taylor& a) {
  const double e = std::exp(a.value());
  return compose(a, {e, e, e, e, e});
}

Taylor log(const Taylor& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
  return compose(a, {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x), -6 / (x * x * x * x)});
}

Taylor sin(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {s, c, -s, -c, s});
}

Taylor cos(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, {c, -s, -c, s, c});
}

Taylor sinh(const Taylor& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(a, {s, c, s, c, s});
}

Taylor cosh(const Taylor& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return compose(a, {c, s, c, s, c});
}

Taylor tanh(const Taylor& a) {
  const double t = std::tanh(a.value());
  const double s = 1 - t * t;
  return compose(a, {t, s, -2 * t * s, s * (6 * t * t - 2), t * s * (16 - 24 * t * t)});
}

Taylor pow(const Taylor& a, double p) {
  const double x = a.value();
  const bool integral = std::floor(p) == p;
  if (!integral && !(x > 0.0)) {
    throw DomainError("non-integer power of non-positive value " + std::to_string(x));
  }
  std::array<double, kMaxOrder + 1> derivs{};
  double falling = 1.0;
  for (int j = 0; j <= kMaxOrder; ++j) {
    if (falling == 0.0) break;
    if (x == 0.0 && p - j < 0) throw DomainError("negative power of zero");
    derivs[j] = falling * std::pow(x, p - j);
    falling *= p - j;
  }
  Taylor out = compose(a, derivs);
  require_finite(out, "pow");
  return out;
}

Taylor sqrt(const Taylor& a) {
  if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(a.value()));
  return pow(a, 0.5);
}

Taylor reciprocal(const Taylor& a) {
  if (a.value() == 0.0) throw DomainError("division by zero");
  return pow(a, -1.0);
}

Taylor abs(const Taylor& a) {
  if (a.value() == 0.0) throw DomainError("abs is not differentiable at zero");
  return a.value() > 0.0 ? a : -a;
}

Taylor pow(const Taylor& a, const Taylor& b) {
  bool constant = true;
  for (int k = 1; k < static_cast<int>(b.coeffs().size()); ++k) {
    if (b.coeff(k) != 0.0) constant = false;
  }
  if (constant) {
    Taylor out = pow(a, b.value());
    return b.order() < out.order() ? out.truncated(b.order()) : out;
  }
  Taylor out = exp(b * log(a));
  require_finite(out, "pow");
  return out;
}

}  // namespace sigmaflow
