#include "sigmaflow/curvature.hpp"

#include <cmath>
#include <string>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/probes.hpp"

namespace sigmaflow {

namespace {

constexpr int kChartProbeCount = 48;

Taylor zero_like(const TaylorSpacePtr& space, int order) { return Taylor(space, 0.0, order); }

}  // namespace

MetricChart::MetricChart(int dim, std::vector<Expr> components, std::vector<Interval> domain)
    : dim_(dim), components_(std::move(components)), domain_(std::move(domain)) {
  if (dim < 2 || dim > kMaxTaylorDim) {
    throw GeometryError("chart dimension must be in 2..8, got " + std::to_string(dim));
  }
  if (static_cast<int>(components_.size()) != dim * dim) {
    throw InputError("metric needs " + std::to_string(dim * dim) + " components");
  }
  if (static_cast<int>(domain_.size()) != dim) throw InputError("domain needs one interval per axis");
  for (const auto& iv : domain_) {
    if (!(iv.lo < iv.hi)) throw InputError("domain interval must have lo < hi");
  }
  for (const auto& c : components_) {
    if (c.empty()) throw InputError("empty metric component");
    if (c.arity() > dim) throw InputError("metric component uses a variable beyond the chart dimension");
  }

  std::vector<std::vector<double>> probes = probe_points(domain_, kChartProbeCount);
  std::vector<double> center(dim);
  for (int d = 0; d < dim; ++d) center[d] = 0.5 * (domain_[d].lo + domain_[d].hi);
  probes.push_back(center);

  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (component(i, j) == component(j, i)) continue;
      for (const auto& p : probes) {
        const double a = evaluate(component(i, j), p);
        const double b = evaluate(component(j, i), p);
        if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a))) {
          throw GeometryError("metric is not symmetric: g" + std::to_string(i + 1) +
                              std::to_string(j + 1) + " != g" + std::to_string(j + 1) +
                              std::to_string(i + 1));
        }
      }
    }
  }
  for (const auto& p : probes) {
    try {
      cholesky(metric_at(p));
    } catch (const DomainError& e) {
      throw GeometryError(std::string("metric cannot be evaluated on its domain: ") + e.what());
    }
  }
}

bool MetricChart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  for (int d = 0; d < dim_; ++d) {
    if (!std::isfinite(x[d])) return false;
    if (domain_[d].periodic) continue;
    const double slack = 1e-12 * (domain_[d].hi - domain_[d].lo);
    if (x[d] < domain_[d].lo - slack || x[d] > domain_[d].hi + slack) return false;
  }
  return true;
}

Square<double> MetricChart::metric_at(std::span<const double> x) const {
  Square<double> m(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = evaluate(component(i, j), x);
  }
  return m;
}

LocalGeometry::LocalGeometry(const MetricChart& chart, std::span<const double> x)
    : n_(chart.dim()), x_(x.begin(), x.end()), space_(TaylorSpace::of(chart.dim())) {
  if (!chart.contains(x)) throw GeometryError("point outside the chart domain");
  const int n = n_;
  const Taylor zero4 = zero_like(space_, kMaxOrder);
  g_ = TaylorMatrix(n, zero4);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) g_(i, j) = g_(j, i) = eval_taylor(chart.component(i, j), x, space_);
  }
  Square<double> gv(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gv(i, j) = g_(i, j).value();
  cholesky(gv);
  ginv_ = inverse_spd(g_);

  // dg[(l*n + i)*n + j] = d_l g_ij, order 3
  std::vector<Taylor> dg(static_cast<std::size_t>(n) * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) dg[(l * n + i) * n + j] = dg[(l * n + j) * n + i] = g_(i, j).partial(l);
  auto dgv = [&](int l, int i, int j) -> const Taylor& { return dg[(l * n + i) * n + j]; };

  gamma_.assign(static_cast<std::size_t>(n) * n * n, zero_like(space_, 3));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Taylor s = zero_like(space_, 3);
        for (int l = 0; l < n; ++l) s += ginv_(k, l) * (dgv(i, j, l) + dgv(j, i, l) - dgv(l, i, j));
        s *= 0.5;
        gamma_[(k * n + i) * n + j] = s;
        gamma_[(k * n + j) * n + i] = s;
      }
    }
  }

  // R^l_ijk, antisymmetric in (i, j); products only needed at order 2.
  std::vector<Taylor> gamma2(gamma_.size());
  for (std::size_t q = 0; q < gamma_.size(); ++q) gamma2[q] = gamma_[q].truncated(2);
  auto G2 = [&](int k, int i, int j) -> const Taylor& { return gamma2[(k * n + i) * n + j]; };
  const Taylor zero2 = zero_like(space_, 2);
  std::vector<Taylor> rup(static_cast<std::size_t>(n) * n * n * n, zero2);
  auto R = [&](int l, int i, int j, int k) -> Taylor& { return rup[((l * n + i) * n + j) * n + k]; };
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          Taylor s = christoffel(l, j, k).partial(i) - christoffel(l, i, k).partial(j);
          for (int m = 0; m < n; ++m) s += G2(l, i, m) * G2(m, j, k) - G2(l, j, m) * G2(m, i, k);
          R(l, j, i, k) = -s;
          R(l, i, j, k) = std::move(s);
        }
      }
    }
  }

  riemann_.assign(static_cast<std::size_t>(n) * n * n * n, zero2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          Taylor s = zero2;
          for (int m = 0; m < n; ++m) s += g_(k, m).truncated(2) * R(m, i, j, l);
          riemann_[((j * n + i) * n + k) * n + l] = -s;
          riemann_[((i * n + j) * n + k) * n + l] = std::move(s);
        }
      }
    }
  }

  ricci_ = TaylorMatrix(n, zero2);
  for (int j = 0; j < n; ++j) {
    for (int l = j; l < n; ++l) {
      Taylor s = zero2;
      for (int i = 0; i < n; ++i) s += R(i, i, j, l) + R(i, i, l, j);
      s *= 0.5;
      ricci_(j, l) = s;
      ricci_(l, j) = s;
    }
  }
  scalar_ = zero2;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) scalar_ += ginv_(j, l) * ricci_(j, l);

  if (n >= 3) {
    TaylorMatrix a(n, zero2);
    const Taylor r_over = scalar_ * (1.0 / (2.0 * (n - 1)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = (ricci_(i, j) - r_over * g_(i, j)) * (1.0 / (n - 2));
    schouten_ = std::move(a);
  }
}

const TaylorMatrix& LocalGeometry::schouten_jet() const {
  if (!schouten_) throw GeometryError("Schouten tensor needs dimension >= 3");
  return *schouten_;
}

const Taylor& LocalGeometry::schouten(int i, int j) const { return schouten_jet()(i, j); }

Taylor LocalGeometry::field(const Expr& f) const { return eval_taylor(f, x_, space_); }

TaylorVector LocalGeometry::vector_field(std::span<const Expr> components) const {
  if (static_cast<int>(components.size()) != n_) {
    throw InputError("vector field needs " + std::to_string(n_) + " components");
  }
  TaylorVector out;
  out.reserve(n_);
  for (const auto& c : components) out.push_back(field(c));
  return out;
}

TaylorVector LocalGeometry::gradient(const Taylor& f) const {
  TaylorVector out(n_, zero_like(space_, f.order() - 1));
  for (int j = 0; j < n_; ++j) {
    const Taylor df = f.partial(j);
    for (int i = 0; i < n_; ++i) out[i] += ginv_(i, j) * df;
  }
  return out;
}

TaylorMatrix LocalGeometry::hessian(const Taylor& f) const {
  TaylorVector df(n_);
  for (int k = 0; k < n_; ++k) df[k] = f.partial(k);
  TaylorMatrix h(n_, zero_like(space_, std::min(f.order() - 2, 3)));
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      Taylor s = df[i].partial(j);
      for (int k = 0; k < n_; ++k) s -= christoffel(k, i, j) * df[k];
      h(i, j) = s;
      h(j, i) = s;
    }
  }
  return h;
}

Taylor LocalGeometry::laplacian(const Taylor& f) const {
  const TaylorMatrix h = hessian(f);
  Taylor s = zero_like(space_, h(0, 0).order());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += ginv_(i, j) * h(i, j);
  return s;
}

Taylor LocalGeometry::divergence(const TaylorVector& x) const {
  Taylor s = x[0].partial(0);
  for (int i = 1; i < n_; ++i) s += x[i].partial(i);
  for (int i = 0; i < n_; ++i)
    for (int m = 0; m < n_; ++m) s += christoffel(i, i, m) * x[m];
  return s;
}

TaylorMatrix LocalGeometry::lie_derivative(const TaylorVector& x) const {
  TaylorVector dx_flat(static_cast<std::size_t>(n_) * n_);
  for (int m = 0; m < n_; ++m)
    for (int i = 0; i < n_; ++i) dx_flat[m * n_ + i] = x[m].partial(i);  // d_i X^m
  int order = kMaxOrder;
  for (const auto& t : dx_flat) order = std::min(order, t.order());
  TaylorMatrix out(n_, zero_like(space_, std::min(order, 3)));
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      Taylor s = zero_like(space_, std::min(order, 3));
      for (int m = 0; m < n_; ++m) {
        s += x[m] * g_(i, j).partial(m);
        s += g_(m, j) * dx_flat[m * n_ + i];
        s += g_(i, m) * dx_flat[m * n_ + j];
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

std::vector<Taylor> LocalGeometry::covariant_derivative(const TaylorMatrix& t) const {
  const int n = n_;
  std::vector<Taylor> out(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Taylor s = t(j, k).partial(i);
        for (int m = 0; m < n; ++m) {
          s -= christoffel(m, i, j) * t(m, k);
          s -= christoffel(m, i, k) * t(j, m);
        }
        out[(i * n + j) * n + k] = std::move(s);
      }
    }
  }
  return out;
}

TaylorVector LocalGeometry::divergence_mixed(const TaylorMatrix& t) const {
  const int n = n_;
  TaylorVector out(n);
  for (int j = 0; j < n; ++j) {
    Taylor s = t(0, j).partial(0);
    for (int i = 1; i < n; ++i) s += t(i, j).partial(i);
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        s += christoffel(i, i, m) * t(m, j);
        s -= christoffel(m, i, j) * t(i, m);
      }
    }
    out[j] = std::move(s);
  }
  return out;
}

double LocalGeometry::norm_squared(const TaylorMatrix& s) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          acc += ginv_(i, a).value() * ginv_(j, b).value() * s(i, j).value() * s(a, b).value();
  return acc;
}

TensorValue to_tensor(const TaylorMatrix& m, Valence valence) {
  TensorValue t(m.size(), valence);
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) t(i, j) = m(i, j).value();
  return t;
}

TensorValue to_tensor(const TaylorVector& v, Valence valence) {
  TensorValue t(static_cast<int>(v.size()), valence);
  for (std::size_t i = 0; i < v.size(); ++i) t.data()[i] = v[i].value();
  return t;
}

TensorValue CurvaturePack::schouten_endomorphism() const {
  if (!schouten) throw GeometryError("Schouten tensor needs dimension >= 3");
  return raise(*schouten, 0, inverse_metric);
}

CurvaturePack curvature_pack(const LocalGeometry& geo) {
  const int n = geo.dim();
  CurvaturePack p;
  p.point.assign(geo.point().begin(), geo.point().end());
  p.metric = to_tensor(geo.metric_jet(), {0, 2});
  p.inverse_metric = to_tensor(geo.inverse_metric_jet(), {2, 0});
  p.christoffel = TensorValue(n, {1, 2});
  p.riemann = TensorValue(n, {0, 4});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p.christoffel.at({k, i, j}) = geo.christoffel(k, i, j).value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) p.riemann.at({i, j, k, l}) = geo.riemann(i, j, k, l).value();
  p.ricci = to_tensor(geo.ricci_jet(), {0, 2});
  p.scalar = geo.scalar().value();
  if (n >= 3) {
    p.schouten = to_tensor(geo.schouten_jet(), {0, 2});
    p.weyl = p.riemann - kulkarni_nomizu(*p.schouten, p.metric);
    const auto da = geo.covariant_derivative(geo.schouten_jet());
    TensorValue c(n, {0, 3});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c.at({i, j, k}) = da[(i * n + j) * n + k].value() - da[(j * n + i) * n + k].value();
    p.cotton = std::move(c);
  }
  return p;
}

CurvaturePack curvature_at(const MetricChart& chart, std::span<const double> x) {
  return curvature_pack(LocalGeometry(chart, x));
}

TensorValue cotton_from_ricci(const LocalGeometry& geo) {
  const int n = geo.dim();
  if (n < 3) throw GeometryError("Cotton tensor needs dimension >= 3");
  const auto dric = geo.covariant_derivative(geo.ricci_jet());
  std::vector<double> dr(n);
  for (int i = 0; i < n; ++i) dr[i] = geo.scalar().d(i);
  const double c = 1.0 / (2.0 * (n - 1));
  TensorValue out(n, {0, 3});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out.at({i, j, k}) = dric[(i * n + j) * n + k].value() - dric[(j * n + i) * n + k].value() -
                            c * (geo.g(j, k).value() * dr[i] - geo.g(i, k).value() * dr[j]);
  return out;
}

ScalarFieldOps covariant_ops(const MetricChart& chart, std::span<const double> x, const Expr& f) {
  const LocalGeometry geo(chart, x);
  const Taylor fj = geo.field(f);
  ScalarFieldOps out;
  out.gradient = to_tensor(geo.gradient(fj), {1, 0});
  const TaylorMatrix h = geo.hessian(fj);
  out.hessian = to_tensor(h, {0, 2});
  double lap = 0.0;
  for (int i = 0; i < geo.dim(); ++i)
    for (int j = 0; j < geo.dim(); ++j) lap += geo.ginv(i, j).value() * h(i, j).value();
  out.laplacian = lap;
  return out;
}

VectorFieldOps covariant_ops(const MetricChart& chart, std::span<const double> x,
                             std::span<const Expr> field) {
  const LocalGeometry geo(chart, x);
  const TaylorVector xj = geo.vector_field(field);
  VectorFieldOps out;
  out.lie_derivative = to_tensor(geo.lie_derivative(xj), {0, 2});
  out.divergence = geo.divergence(xj).value();
  return out;
}

}  // namespace sigmaflow
