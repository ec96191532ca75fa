#include "sigmaflow/models.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/sigma.hpp"

namespace sigmaflow {

namespace {

constexpr double kGoldenTolerance = 1e-8;

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return "(" + std::string(buf, r.ptr) + ")";
}

std::string var(int i) { return "x" + std::to_string(i + 1); }

// |x|^2 over variables offset..offset+n-1.
std::string norm_sq(int n, int offset = 0) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? "+" : "") + var(offset + i) + "^2";
  return "(" + s + ")";
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Interval> box(int n, double half) { return std::vector<Interval>(n, {-half, half, false}); }

std::vector<Expr> conformally_flat(int n, const std::string& factor) {
  std::vector<Expr> c(static_cast<std::size_t>(n) * n, Expr::number(0.0));
  const Expr f = parse(factor);
  for (int i = 0; i < n; ++i) c[i * n + i] = f;
  return c;
}

void require_dim(int n, int lo, const std::string& model) {
  if (n < lo || n > kMaxTaylorDim) {
    throw InputError(model + " needs dimension in " + std::to_string(lo) + ".." +
                     std::to_string(kMaxTaylorDim) + ", got " + std::to_string(n));
  }
}

void require_indices(int n, int k, int l) {
  if (k < 0 || k > n || l < 0 || l > n) throw InputError("quotient indices must lie in 0..n");
}

void add_sigma_golden(ModelManifold& m, double eigenvalue) {
  const int n = m.dim();
  for (int j = 1; j <= n; ++j) {
    m.golden.push_back({"sigma_" + std::to_string(j), binomial(n, j) * std::pow(eigenvalue, j),
                        kGoldenTolerance});
  }
}

// Chart-only constructors, used for fibers of any dimension >= 2.
MetricChart sphere_chart(int n, double scale) {
  return MetricChart(n, conformally_flat(n, num(4.0 * scale) + "/(1+" + norm_sq(n) + ")^2"), box(n, 1.0));
}

MetricChart hyperbolic_chart(int n) {
  return MetricChart(n, conformally_flat(n, "4/(1-" + norm_sq(n) + ")^2"), box(n, 0.9 / std::sqrt(n)));
}

MetricChart euclidean_chart(int n) { return MetricChart(n, conformally_flat(n, "1"), box(n, 1.0)); }

std::string sphere_height(int n) {
  const std::vector<double> v = sphere_axis(n);
  std::string s;
  for (int i = 0; i < n; ++i) s += "+2*" + num(v[i]) + "*" + var(i);
  s += "+" + num(v[n]) + "*(" + norm_sq(n) + "-1)";
  return "((" + s + ")/(1+" + norm_sq(n) + "))";
}

std::string hyperbolic_height(int n) {
  const std::vector<double> v = hyperbolic_axis(n);
  std::string s = "-" + num(v[0]) + "*(1+" + norm_sq(n) + ")";
  for (int i = 0; i < n; ++i) s += "+2*" + num(v[i + 1]) + "*" + var(i);
  return "((" + s + ")/(1-" + norm_sq(n) + "))";
}

ModelManifold bare(std::string name, MetricChart chart) {
  return ModelManifold{std::move(name), std::move(chart), {}, {}, {}, 0, 0, {}, {}};
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InputError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> sphere_axis(int n) {
  std::vector<double> v(n + 1, 1.0 / std::sqrt(n + 1.0));
  v[n] = -v[n];
  return v;
}

std::vector<double> hyperbolic_axis(int n) {
  std::vector<double> v(n + 1, 0.0);
  v[0] = std::cosh(0.5);
  v[1] = std::sinh(0.5);
  return v;
}

ModelManifold euclidean(int n) {
  require_dim(n, 2, "euclidean");
  ModelManifold m = bare("euclidean:" + std::to_string(n), euclidean_chart(n));
  m.golden.push_back({"scalar", 0.0, kGoldenTolerance});
  m.golden.push_back({"einstein", 0.0, kGoldenTolerance});
  return m;
}

ModelManifold sphere(int n, int k, int l, double scale) {
  require_dim(n, 3, "sphere");
  require_indices(n, k, l);
  if (!(scale > 0.0)) throw InputError("sphere scale must be positive");
  ModelManifold m = bare("sphere:" + std::to_string(n), sphere_chart(n, scale));
  const std::string h = sphere_height(n);
  const double eig = 0.5 / scale;
  const double lq = std::log(binomial(n, k) * std::pow(eig, k)) - std::log(binomial(n, l) * std::pow(eig, l));
  m.potential = parse(num(scale) + "*" + h);
  m.lambda = parse(h + "+" + num(lq));
  m.k = k;
  m.l = l;
  m.golden.push_back({"scalar", n * (n - 1.0) / scale, kGoldenTolerance});
  m.golden.push_back({"einstein", (n - 1.0) / scale, kGoldenTolerance});
  add_sigma_golden(m, eig);
  return m;
}

ModelManifold hyperbolic(int n, int k, int l) {
  require_dim(n, 3, "hyperbolic");
  require_indices(n, k, l);
  ModelManifold m = bare("hyperbolic:" + std::to_string(n), hyperbolic_chart(n));
  const std::string h = hyperbolic_height(n);
  const double lq = std::log(std::fabs(binomial(n, k) * std::pow(-0.5, k))) -
                    std::log(std::fabs(binomial(n, l) * std::pow(-0.5, l)));
  m.potential = parse(h);
  m.lambda = parse("-" + h + "+" + num(lq));
  m.k = k;
  m.l = l;
  m.golden.push_back({"scalar", -n * (n - 1.0), kGoldenTolerance});
  m.golden.push_back({"einstein", -(n - 1.0), kGoldenTolerance});
  add_sigma_golden(m, -0.5);
  return m;
}

ModelManifold product_line_sphere(int n) {
  require_dim(n, 2, "product_line_sphere");
  require_dim(n + 1, 3, "product_line_sphere");
  const int d = n + 1;
  std::vector<Expr> c(static_cast<std::size_t>(d) * d, Expr::number(0.0));
  c[0] = Expr::number(1.0);
  const Expr f = parse("4/(1+" + norm_sq(n, 1) + ")^2");
  for (int i = 1; i < d; ++i) c[i * d + i] = f;
  ModelManifold m = bare("product_line_sphere:" + std::to_string(n), MetricChart(d, c, box(d, 1.0)));
  m.potential = parse("0.5*x1+0.25");
  m.lambda = Expr::number(0.0);
  m.k = 1;
  m.l = 1;
  m.golden.push_back({"scalar", n * (n - 1.0), kGoldenTolerance});
  m.golden.push_back({"sigma_1", (n - 1.0) / 2.0, kGoldenTolerance});
  return m;
}

ModelManifold example4(int n, int k, int l) {
  require_dim(n, 4, "example4");
  require_indices(n, k, l);
  std::vector<Expr> c(static_cast<std::size_t>(n) * n, Expr::number(0.0));
  std::vector<Expr> x(n, Expr::number(0.0));
  for (int i = 0; i < n; ++i) {
    // 1-based index i + 1; tau(i + 1) = i + 2 mod n.
    if ((i + 1) % 2 == 0) {
      c[i * n + i] = parse("exp(2*log(cosh(" + var((i + 1) % n) + ")))");
      x[i] = Expr::number(1.0);
    } else {
      c[i * n + i] = Expr::number(1.0);
    }
  }
  ModelManifold m = bare("example4:" + std::to_string(n), MetricChart(n, c, box(n, 1.0)));
  const double eig = -1.0 / (2.0 * (n - 1));
  const double lq = std::log(std::fabs(binomial(n, k) * std::pow(eig, k))) -
                    std::log(std::fabs(binomial(n, l) * std::pow(eig, l)));
  m.vector_field = std::move(x);
  m.lambda = Expr::number(lq);
  m.k = k;
  m.l = l;
  m.golden.push_back({"einstein", -1.0, kGoldenTolerance});
  add_sigma_golden(m, eig);
  return m;
}

ModelManifold warped(const Expr& xi, std::shared_ptr<const ModelManifold> fiber, Interval t) {
  if (!fiber) throw InputError("warped product needs a fiber");
  if (xi.arity() > 1) throw InputError("warping function may depend on t only");
  const int nf = fiber->dim();
  const int n = nf + 1;
  require_dim(n, 3, "warped");
  std::vector<Expr> c(static_cast<std::size_t>(n) * n, Expr::number(0.0));
  c[0] = Expr::number(1.0);
  const Expr xi2 = Expr::binary(BinaryOp::mul, xi, xi);
  for (int a = 0; a < nf; ++a) {
    for (int b = 0; b < nf; ++b) {
      const Expr& gf = fiber->chart.component(a, b);
      c[(a + 1) * n + (b + 1)] = Expr::binary(BinaryOp::mul, xi2, shift_variables(gf, 1));
    }
  }
  std::vector<Interval> dom{t};
  for (const auto& iv : fiber->chart.domain()) dom.push_back(iv);
  ModelManifold m = bare("warped:" + xi.to_string() + ":" + fiber->name, MetricChart(n, c, dom));
  m.warping = WarpedProductSpec{std::move(fiber), xi, t};
  return m;
}

ModelManifold builtin(std::string_view name, std::optional<int> k, std::optional<int> l) {
  const auto colon = name.rfind(':');
  if (colon == std::string_view::npos) {
    throw InputError("builtin name needs a dimension, e.g. sphere:4 (got '" + std::string(name) + "')");
  }
  const std::string_view head = name.substr(0, colon);
  const int n = parse_int(name.substr(colon + 1), "dimension");

  if (head.starts_with("warped:")) {
    const std::string_view rest = head.substr(7);
    const auto c2 = rest.rfind(':');
    if (c2 == std::string_view::npos) throw InputError("warped needs warped:<xi>:<fiber>:<n>");
    const std::string_view fiber_name = rest.substr(c2 + 1);
    ParseOptions opts;
    opts.aliases.emplace("t", 0);
    const Expr xi = parse(rest.substr(0, c2), opts);
    require_dim(n, 3, "warped");
    MetricChart chart = [&] {
      if (fiber_name == "sphere") return sphere_chart(n - 1, 1.0);
      if (fiber_name == "hyperbolic") return hyperbolic_chart(n - 1);
      if (fiber_name == "euclidean") return euclidean_chart(n - 1);
      throw InputError("unknown warped fiber '" + std::string(fiber_name) + "'");
    }();
    auto fiber = std::make_shared<const ModelManifold>(
        bare(std::string(fiber_name) + ":" + std::to_string(n - 1), std::move(chart)));
    return warped(xi, std::move(fiber));
  }

  auto pick = [&](int dk, int dl) {
    return std::pair<int, int>{k.value_or(dk), l.value_or(dl)};
  };
  if (head == "euclidean") return euclidean(n);
  if (head == "sphere") {
    auto [kk, ll] = pick(2, 1);
    return sphere(n, kk, ll);
  }
  if (head == "hyperbolic") {
    auto [kk, ll] = pick(3, 1);
    return hyperbolic(n, kk, ll);
  }
  if (head == "product_line_sphere") return product_line_sphere(n);
  if (head == "example4") {
    auto [kk, ll] = pick(3, 1);
    return example4(n, kk, ll);
  }
  throw InputError("unknown builtin model '" + std::string(head) + "'");
}

double measure_golden(const ModelManifold& model, const GoldenEntry& entry, std::span<const double> x) {
  const CurvaturePack pack = curvature_at(model.chart, x);
  const int n = pack.dim();
  if (entry.quantity == "scalar") return pack.scalar;
  if (entry.quantity == "einstein") {
    // Worst entry of Ric - c g, reported as c plus that deviation.
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double d = pack.ricci(i, j) - entry.expected * pack.metric(i, j);
        if (std::fabs(d) > std::fabs(worst)) worst = d;
      }
    return entry.expected + worst;
  }
  if (entry.quantity.starts_with("sigma_")) {
    const int j = parse_int(std::string_view(entry.quantity).substr(6), "sigma index");
    const SigmaProfile p = sigma_profile(pack);
    if (j < 0 || j > n) throw InputError("sigma index out of range");
    return p.sigma[j];
  }
  throw InputError("unknown golden quantity '" + entry.quantity + "'");
}

TensorValue warped_ricci_formula(const WarpedProductSpec& spec, std::span<const double> x) {
  const int nf = spec.fiber->dim();
  const int n = nf + 1;
  if (static_cast<int>(x.size()) != n) throw InputError("point dimension mismatch");
  const double t = x[0];
  const Taylor xi = eval_taylor(spec.xi, std::span<const double>(&t, 1), TaylorSpace::of(1));
  const double v = xi.value();
  if (!(v > 0.0)) throw DomainError("warping function must be positive");
  const double d1 = xi.d(0);
  const std::array<int, 1> two{2};
  const double d2 = xi.derivative(two);
  const CurvaturePack fp = curvature_at(spec.fiber->chart, x.subspan(1));
  TensorValue ric(n, {0, 2});
  ric(0, 0) = -(n - 1) * d2 / v;
  const double c = (n - 2) * d1 * d1 + v * d2;
  for (int a = 0; a < nf; ++a)
    for (int b = 0; b < nf; ++b) ric(a + 1, b + 1) = fp.ricci(a, b) - c * fp.metric(a, b);
  return ric;
}

}  // namespace sigmaflow
