#include "sigmaflow/sigma.hpp"

#include <cmath>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

void require_dim3(int n) {
  if (n < 3) throw GeometryError("sigma_k curvatures need dimension >= 3");
}

void require_index(int n, int k, const char* name) {
  if (k < 0 || k > n) {
    throw InputError(std::string("index ") + name + " = " + std::to_string(k) + " outside 0.." +
                     std::to_string(n));
  }
}

Taylor zero_jet(const LocalGeometry& geo, int order) { return Taylor(geo.space(), 0.0, order); }

struct ConformalParts {
  TaylorVector dw;     // covector, order >= 1
  TaylorMatrix hess;   // values only needed
  double grad_sq = 0;  // g^ij dw_i dw_j
  double lap = 0;
};

ConformalParts differentiate(const LocalGeometry& geo, const Taylor& w) {
  const int n = geo.dim();
  ConformalParts p;
  p.dw.resize(n);
  for (int i = 0; i < n; ++i) p.dw[i] = w.partial(i);
  p.hess = geo.hessian(w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double gij = geo.ginv(i, j).value();
      p.grad_sq += gij * p.dw[i].value() * p.dw[j].value();
      p.lap += gij * p.hess(i, j).value();
    }
  }
  return p;
}

Taylor positive_field(const LocalGeometry& geo, const Expr& phi) {
  Taylor f = geo.field(phi);
  if (!(f.value() > 0.0)) throw DomainError("conformal factor must be positive");
  return f;
}

}  // namespace

namespace {

SigmaProfile profile_from(const TensorValue& endomorphism, const TensorValue& metric) {
  SigmaProfile p;
  p.n = metric.dim();
  SymmetricSpectrum spec = sym_eigenvalues(endomorphism, metric);
  p.sigma = elementary_symmetric_all(spec.eigenvalues);
  p.sigma[0] = 1.0;
  p.eigenvalues = std::move(spec.eigenvalues);
  p.cone = true;
  return p;
}

void add_quotient(SigmaProfile& p, int k, int l) {
  require_index(p.n, k, "k");
  require_index(p.n, l, "l");
  p.k = k;
  p.l = l;
  const double sk = p.sigma[k];
  const double sl = p.sigma[l];
  p.cone = sk * sl > 0.0;
  if (!p.cone) {
    throw ConeViolation("cone condition fails: sigma_" + std::to_string(k) + " * sigma_" +
                            std::to_string(l) + " <= 0",
                        sk, sl);
  }
  p.log_quotient = (k == l) ? 0.0 : std::log(std::fabs(sk)) - std::log(std::fabs(sl));
}

}  // namespace

SigmaProfile sigma_profile(const CurvaturePack& pack) {
  require_dim3(pack.dim());
  return profile_from(pack.schouten_endomorphism(), pack.metric);
}

SigmaProfile sigma_profile(const LocalGeometry& geo, int k, int l) {
  require_dim3(geo.dim());
  const TensorValue metric = to_tensor(geo.metric_jet(), {0, 2});
  const TensorValue m = to_tensor(schouten_endomorphism_jet(geo), {1, 1});
  SigmaProfile p = profile_from(m, metric);
  add_quotient(p, k, l);
  return p;
}

SigmaProfile sigma_profile(const CurvaturePack& pack, int k, int l) {
  SigmaProfile p = sigma_profile(pack);
  add_quotient(p, k, l);
  return p;
}

TaylorMatrix schouten_endomorphism_jet(const LocalGeometry& geo) {
  const int n = geo.dim();
  const TaylorMatrix& a = geo.schouten_jet();
  TaylorMatrix m(n, zero_jet(geo, 2));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Taylor s = zero_jet(geo, 2);
      for (int q = 0; q < n; ++q) s += geo.ginv(i, q) * a(q, j);
      m(i, j) = std::move(s);
    }
  }
  return m;
}

std::vector<Taylor> sigma_jets(const LocalGeometry& geo) {
  require_dim3(geo.dim());
  const int n = geo.dim();
  const TaylorMatrix m = schouten_endomorphism_jet(geo);
  std::vector<Taylor> p(n + 1, zero_jet(geo, 2));
  TaylorMatrix power = m;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) power = power * m;
    p[j] = trace(power);
  }
  return sigma_from_power_sums(p, Taylor(geo.space(), 1.0, 2));
}

Taylor log_quotient_jet(const LocalGeometry& geo, int k, int l) {
  const int n = geo.dim();
  require_index(n, k, "k");
  require_index(n, l, "l");
  const std::vector<Taylor> s = sigma_jets(geo);
  if (!(s[k].value() * s[l].value() > 0.0)) {
    throw ConeViolation("cone condition fails: sigma_" + std::to_string(k) + " * sigma_" +
                            std::to_string(l) + " <= 0",
                        s[k].value(), s[l].value());
  }
  if (k == l) return zero_jet(geo, 2);
  const double sign = s[k].value() > 0.0 ? 1.0 : -1.0;
  return log(s[k] * sign) - log(s[l] * sign);
}

NewtonTensor newton_tensor(const CurvaturePack& pack, int k) {
  const int n = pack.dim();
  require_dim3(n);
  if (k < 0 || k > n - 1) throw InputError("Newton tensor index must satisfy 0 <= k <= n-1");
  const SigmaProfile p = sigma_profile(pack);
  const Square<double> m = pack.schouten_endomorphism().matrix();
  return {k, TensorValue::from_matrix(newton_polynomial(m, p.sigma, k), {1, 1})};
}

TensorValue divergence_newton(const LocalGeometry& geo, int k) {
  const int n = geo.dim();
  require_dim3(n);
  if (k < 0 || k > n - 1) throw InputError("Newton tensor index must satisfy 0 <= k <= n-1");
  const TaylorMatrix t = newton_polynomial(schouten_endomorphism_jet(geo), sigma_jets(geo), k);
  return to_tensor(geo.divergence_mixed(t), {0, 1});
}

TensorValue divergence_newton(const MetricChart& chart, std::span<const double> x, int k) {
  return divergence_newton(LocalGeometry(chart, x), k);
}

TensorValue conformal_schouten(const LocalGeometry& base, const Expr& phi) {
  const int n = base.dim();
  require_dim3(n);
  const ConformalParts w = differentiate(base, log(positive_field(base, phi)));
  TensorValue a(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = base.schouten(i, j).value() - w.hess(i, j).value() +
                w.dw[i].value() * w.dw[j].value() - 0.5 * w.grad_sq * base.g(i, j).value();
  return a;
}

TensorValue conformal_ricci(const LocalGeometry& base, const Expr& phi) {
  const int n = base.dim();
  const ConformalParts w = differentiate(base, log(positive_field(base, phi)));
  TensorValue r(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = base.ricci(i, j).value() -
                (n - 2) * (w.hess(i, j).value() - w.dw[i].value() * w.dw[j].value()) -
                (w.lap + (n - 2) * w.grad_sq) * base.g(i, j).value();
  return r;
}

TensorValue divided_schouten(const LocalGeometry& geo, const Expr& phi) {
  const int n = geo.dim();
  require_dim3(n);
  const Taylor f = positive_field(geo, phi);
  const ConformalParts d = differentiate(geo, f);
  const double v = f.value();
  TensorValue a(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = geo.schouten(i, j).value() + d.hess(i, j).value() / v -
                0.5 * d.grad_sq / (v * v) * geo.g(i, j).value();
  return a;
}

TensorValue divided_ricci(const LocalGeometry& geo, const Expr& phi) {
  const int n = geo.dim();
  const Taylor f = positive_field(geo, phi);
  const ConformalParts d = differentiate(geo, f);
  const double v = f.value();
  TensorValue r(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = geo.ricci(i, j).value() +
                ((n - 2) * v * d.hess(i, j).value() +
                 (v * d.lap - (n - 1) * d.grad_sq) * geo.g(i, j).value()) /
                    (v * v);
  return r;
}

TensorValue umbilic_hessian(const LocalGeometry& geo, const Expr& phi) {
  const int n = geo.dim();
  require_dim3(n);
  const Taylor f = positive_field(geo, phi);
  const ConformalParts d = differentiate(geo, f);
  const double v = f.value();
  double sigma1 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma1 += geo.ginv(i, j).value() * geo.schouten(i, j).value();
  TensorValue h(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = v * (-geo.schouten(i, j).value() + (sigma1 + d.lap / v) / n * geo.g(i, j).value());
  return h;
}

}  // namespace sigmaflow
