#include "sigmaflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

constexpr int kMinGrid = 32;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// e_t[m] = C(n-1, m) mu_t^m, then sigma_m = e_t[m] + mu_r e_t[m-1].
void sigma_of(const NodeSpectrum& s, int n, std::vector<double>& out) {
  out.assign(n + 1, 0.0);
  double power = 1.0;
  std::vector<double> et(n + 1, 0.0);
  for (int m = 0; m <= n - 1; ++m) {
    et[m] = binomial(n - 1, m) * power;
    power *= s.tangential;
  }
  out[0] = 1.0;
  for (int m = 1; m <= n; ++m) out[m] = et[m] + s.radial * et[m - 1];
}

const std::vector<double>& clenshaw_curtis_weights(int m) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> w(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double th = std::numbers::pi * j / m;
    double s = 1.0;
    for (int q = 1; 2 * q <= m; ++q) {
      const double b = (2 * q == m) ? 1.0 : 2.0;
      s -= b * std::cos(2.0 * q * th) / (4.0 * q * q - 1.0);
    }
    w[j] = ((j == 0 || j == m) ? 1.0 : 2.0) / m * s;
  }
  return cache.emplace(m, std::move(w)).first->second;
}

void check_indices(int n, int k, int l) {
  if (n < 3 || n > 64) throw InputError("flow needs sphere dimension n >= 3");
  if (k < 0 || k > n || l < 0 || l > n) throw InputError("quotient indices must lie in 0..n");
  if (k == l) throw InputError("flow needs k != l");
}

ConeViolation node_violation(const FlowState& s, int j, double sk, double sl) {
  return ConeViolation("cone condition fails at node " + std::to_string(j) + " (theta = " +
                           std::to_string(s.theta[j]) + "): sigma_" + std::to_string(s.k) + " = " +
                           std::to_string(sk) + ", sigma_" + std::to_string(s.l) + " = " +
                           std::to_string(sl),
                       sk, sl);
}

std::vector<double> log_quotients(const FlowState& s, const std::vector<std::vector<double>>& sigma) {
  std::vector<double> lq(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double sk = sigma[j][s.k];
    const double sl = sigma[j][s.l];
    if (!(sk * sl > 0.0) || !std::isfinite(sk) || !std::isfinite(sl)) {
      throw node_violation(s, static_cast<int>(j), sk, sl);
    }
    lq[j] = std::log(std::fabs(sk)) - std::log(std::fabs(sl));
  }
  return lq;
}

double weighted_mean(const FlowState& s, const std::vector<std::vector<double>>& sigma,
                     const std::vector<double>& lq) {
  std::vector<double> num(lq.size()), den(lq.size());
  for (std::size_t j = 0; j < lq.size(); ++j) {
    den[j] = sigma[j][s.l];
    num[j] = den[j] * lq[j];
  }
  const double d = quadrature(s, den);
  if (!(std::fabs(d) > 1e-300)) throw GeometryError("integral of sigma_l vanishes");
  return quadrature(s, num) / d;
}

FlowState with_u(const FlowState& s, std::vector<double> u, double t) {
  FlowState out;
  out.n = s.n;
  out.k = s.k;
  out.l = s.l;
  out.theta = s.theta;
  out.u = std::move(u);
  out.t = t;
  return out;
}

}  // namespace

double sphere_area(int dim) {
  const double h = 0.5 * (dim + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double FlowState::spacing() const { return std::numbers::pi / intervals(); }

FlowState FlowState::from_expr(int n, int k, int l, int grid, const Expr& u0) {
  check_indices(n, k, l);
  if (grid < kMinGrid) throw InputError("flow grid needs at least " + std::to_string(kMinGrid) + " intervals");
  if (u0.arity() > 1) throw InputError("initial data may depend on theta only");
  FlowState s;
  s.n = n;
  s.k = k;
  s.l = l;
  s.theta.resize(grid + 1);
  s.u.resize(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    s.theta[j] = std::numbers::pi * j / grid;
    s.u[j] = evaluate(u0, std::span<const double>(&s.theta[j], 1));
  }
  return s;
}

FlowState FlowState::round(int n, int k, int l, int grid) {
  return from_expr(n, k, l, grid, Expr::number(0.0));
}

NodalDerivatives derivatives(std::span<const double> v, double h) {
  const int m = static_cast<int>(v.size()) - 1;
  if (m < 4) throw InputError("derivative stencil needs at least 5 nodes");
  auto at = [&](int i) {
    if (i < 0) i = -i;
    if (i > m) i = 2 * m - i;
    return v[i];
  };
  NodalDerivatives d;
  d.d1.resize(m + 1);
  d.d2.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double a2 = at(j - 2), a1 = at(j - 1), b1 = at(j + 1), b2 = at(j + 2);
    d.d1[j] = (-b2 + 8.0 * b1 - 8.0 * a1 + a2) / (12.0 * h);
    d.d2[j] = (-b2 + 16.0 * b1 - 30.0 * v[j] + 16.0 * a1 - a2) / (12.0 * h * h);
  }
  d.d1[0] = 0.0;
  d.d1[m] = 0.0;
  return d;
}

std::vector<NodeSpectrum> node_spectra(const FlowState& s) {
  const int m = s.intervals();
  const NodalDerivatives d = derivatives(s.u, s.spacing());
  std::vector<NodeSpectrum> out(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double e = std::exp(2.0 * s.u[j]);
    const double up = d.d1[j];
    const double upp = d.d2[j];
    const double cot_term = (j == 0 || j == m) ? upp : up * std::cos(s.theta[j]) / std::sin(s.theta[j]);
    out[j].radial = e * (0.5 + upp + 0.5 * up * up);
    out[j].tangential = e * (0.5 + cot_term - 0.5 * up * up);
  }
  return out;
}

std::vector<std::vector<double>> nodal_sigma(const FlowState& s, Execution execution) {
  const std::vector<NodeSpectrum> spec = node_spectra(s);
  std::vector<std::vector<double>> out(spec.size());
  for_each_index(spec.size(), execution, [&](std::size_t j) { sigma_of(spec[j], s.n, out[j]); });
  return out;
}

double quadrature(const FlowState& s, std::span<const double> f) {
  const int m = s.intervals();
  if (static_cast<int>(f.size()) != m + 1) throw InputError("quadrature needs one value per node");
  const int n = s.n;
  double acc = 0.0;
  if (n % 2 == 1) {
    for (int j = 1; j < m; ++j) acc += f[j] * std::exp(-n * s.u[j]) * std::pow(std::sin(s.theta[j]), n - 1);
    acc *= s.spacing();
  } else {
    const std::vector<double>& w = clenshaw_curtis_weights(m);
    for (int j = 0; j <= m; ++j) {
      const double sn = (n == 2) ? 1.0 : std::pow(std::sin(s.theta[j]), n - 2);
      acc += w[j] * f[j] * std::exp(-n * s.u[j]) * sn;
    }
  }
  if (!std::isfinite(acc)) throw DomainError("non-finite quadrature");
  return sphere_area(n - 1) * acc;
}

FlowRhs flow_rhs(const FlowState& s, Execution execution) {
  const auto sigma = nodal_sigma(s, execution);
  FlowRhs r;
  r.log_quotient = log_quotients(s, sigma);
  r.log_r = weighted_mean(s, sigma, r.log_quotient);
  r.dudt.resize(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) r.dudt[j] = 0.5 * (r.log_quotient[j] - r.log_r);
  return r;
}

double stable_dt(const FlowState& s, double safety) {
  const int m = s.intervals();
  const int n = s.n;
  const std::vector<NodeSpectrum> spec = node_spectra(s);
  double sup = 0.0;
  std::vector<double> sigma;
  for (int j = 0; j <= m; ++j) {
    sigma_of(spec[j], n, sigma);
    const double e = std::exp(2.0 * s.u[j]);
    auto dsigma = [&](int q) {
      if (q == 0) return 0.0;
      if (j == 0 || j == m) return e * (n - q + 1) * sigma[q - 1];
      return e * binomial(n - 1, q - 1) * std::pow(spec[j].tangential, q - 1);
    };
    const double v = 0.5 * (dsigma(s.k) / sigma[s.k] - dsigma(s.l) / sigma[s.l]);
    if (std::isfinite(v)) sup = std::max(sup, std::fabs(v));
  }
  const double h = s.spacing();
  return safety * h * h / (1.0 + sup);
}

FlowState step(const FlowState& s, double dt, Execution execution) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  const std::size_t m = s.u.size();
  auto shifted = [&](const std::vector<double>& k, double c) {
    std::vector<double> u(m);
    for (std::size_t j = 0; j < m; ++j) u[j] = s.u[j] + c * k[j];
    return with_u(s, std::move(u), s.t);
  };
  const std::vector<double> k1 = flow_rhs(s, execution).dudt;
  const std::vector<double> k2 = flow_rhs(shifted(k1, 0.5 * dt), execution).dudt;
  const std::vector<double> k3 = flow_rhs(shifted(k2, 0.5 * dt), execution).dudt;
  const std::vector<double> k4 = flow_rhs(shifted(k3, dt), execution).dudt;
  std::vector<double> u(m);
  for (std::size_t j = 0; j < m; ++j) u[j] = s.u[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  return with_u(s, std::move(u), s.t + dt);
}

FlowSample sample(const FlowState& s, Execution execution) {
  const auto sigma = nodal_sigma(s, execution);
  FlowSample out;
  out.t = s.t;
  const std::vector<double> lq = log_quotients(s, sigma);
  out.log_r = weighted_mean(s, sigma, lq);
  for (double v : lq) out.sup_dev = std::max(out.sup_dev, std::fabs(v - out.log_r));
  out.e_all.resize(s.n + 1);
  std::vector<double> col(sigma.size());
  for (int q = 0; q <= s.n; ++q) {
    for (std::size_t j = 0; j < sigma.size(); ++j) col[j] = sigma[j][q];
    out.e_all[q] = quadrature(s, col);
  }
  out.volume = out.e_all[0];
  out.e_l = (2 * s.l == s.n) ? std::numeric_limits<double>::quiet_NaN() : out.e_all[s.l];
  return out;
}

FlowResult run(FlowState state, const RunOptions& options) {
  if (options.sample_every < 1) throw InputError("sample cadence must be at least 1");
  FlowResult res;
  res.e_l_omitted = 2 * state.l == state.n;
  res.last_good_t = state.t;
  const double duration = options.t_end - state.t;
  try {
    res.samples.push_back(sample(state, options.execution));
  } catch (const GeometryError& e) {
    res.aborted = true;
    res.abort_reason = e.what();
    res.final_state = std::move(state);
    return res;
  }
  if (duration <= 0.0) {
    res.final_state = std::move(state);
    return res;
  }
  const double dt0 = options.dt > 0.0 ? options.dt : stable_dt(state);
  const int steps = std::max(1, static_cast<int>(std::ceil(duration / dt0 - 1e-9)));
  res.dt = duration / steps;
  const double t0 = state.t;
  for (int i = 1; i <= steps; ++i) {
    try {
      FlowState next = step(state, res.dt, options.execution);
      next.t = (i == steps) ? options.t_end : t0 + i * res.dt;
      double sup = 0.0;
      for (double v : next.u) {
        if (!std::isfinite(v)) throw DomainError("non-finite conformal factor");
        sup = std::max(sup, std::fabs(v));
      }
      if (sup > options.blowup) {
        throw DomainError("blow-up: sup|u| = " + std::to_string(sup) + " exceeds " +
                          std::to_string(options.blowup));
      }
      if (i % options.sample_every == 0 || i == steps) res.samples.push_back(sample(next, options.execution));
      state = std::move(next);
      res.steps = i;
      res.last_good_t = state.t;
    } catch (const Error& e) {
      if (dynamic_cast<const InputError*>(&e)) throw;
      res.aborted = true;
      res.abort_reason = e.what();
      break;
    }
  }
  res.final_state = std::move(state);
  return res;
}

FieldIntegral conformal_field_integral(const FlowState& s, int k) {
  if (k < 0 || k > s.n) throw InputError("sigma index outside 0..n");
  const auto sigma = nodal_sigma(s, Execution::serial);
  std::vector<double> col(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) col[j] = sigma[j][k];
  const NodalDerivatives d = derivatives(col, s.spacing());
  std::vector<double> f(col.size()), a(col.size());
  for (std::size_t j = 0; j < col.size(); ++j) {
    f[j] = -std::sin(s.theta[j]) * d.d1[j];
    a[j] = std::fabs(f[j]);
  }
  return {quadrature(s, f), quadrature(s, a)};
}

}  // namespace sigmaflow
