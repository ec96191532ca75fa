#include <doctest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "sigmaflow/curvature.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/models.hpp"
#include "sigmaflow/probes.hpp"

using namespace sigmaflow;

namespace {

MetricChart chart_from(int n, const std::vector<std::string>& upper, double half = 1.0) {
  std::vector<Expr> c(static_cast<std::size_t>(n) * n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) c[i * n + j] = c[j * n + i] = parse(upper[idx++]);
  return MetricChart(n, c, std::vector<Interval>(n, {-half, half, false}));
}

// A metric with no symmetry, dominant diagonal on [-1, 1]^3.
MetricChart generic3() {
  return chart_from(3, {"2+0.3*sin(x1)+0.1*x2^2", "0.2*x2*x3", "0.1*cos(x1+x3)",
                        "1.8+0.2*cosh(x3)*x1", "0.15*sin(x1*x2)", "2.1+0.25*tanh(x1+x2)"});
}

MetricChart generic4() {
  return chart_from(4, {"2+0.3*sin(x1)", "0.1*x2*x4", "0.1*cos(x3)", "0.05*x1",
                        "1.9+0.2*x3^2", "0.1*sin(x1*x4)", "0.0",
                        "2.2+0.2*cos(x2+x4)", "0.12*tanh(x1)",
                        "2+0.3*exp(0.5*x1*x3)-0.3"});
}

oracle::MetricFn metric_fn(const MetricChart& chart) {
  return [&chart](const oracle::Vec& x) {
    const Square<double> g = chart.metric_at(x);
    oracle::Mat m(g.size(), oracle::Vec(g.size()));
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) m[i][j] = g(i, j);
    return m;
  };
}

std::vector<std::vector<double>> random_in(const MetricChart& chart, int count, unsigned seed) {
  std::vector<std::pair<double, double>> box;
  for (const auto& iv : chart.domain()) box.emplace_back(iv.lo, iv.hi);
  return oracle::random_points(box, count, seed);
}

double sup_diff(const TensorValue& a, const TensorValue& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a.data()[i] - b.data()[i]));
  return s;
}

// (div Ric)_j - 1/2 d_j R and the size of dR.
std::pair<double, double> bianchi_defect(const LocalGeometry& geo) {
  const int n = geo.dim();
  TaylorMatrix mixed(n, geo.ricci(0, 0) * 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) mixed(i, j) += geo.ginv(i, a) * geo.ricci(a, j);
  const TaylorVector div = geo.divergence_mixed(mixed);
  double defect = 0.0, grad = 0.0;
  for (int j = 0; j < n; ++j) {
    defect = std::max(defect, std::fabs(div[j].value() - 0.5 * geo.scalar().d(j)));
    grad = std::max(grad, std::fabs(geo.scalar().d(j)));
  }
  return {defect, grad};
}

}  // namespace

TEST_CASE("flat metric has no curvature") {
  const MetricChart chart = euclidean(4).chart;
  for (const auto& x : random_in(chart, 5, 1)) {
    const CurvaturePack p = curvature_at(chart, x);
    CHECK(p.christoffel.sup_norm() == 0.0);
    CHECK(p.riemann.sup_norm() == 0.0);
    CHECK(p.ricci.sup_norm() == 0.0);
    CHECK(p.cotton->sup_norm() == 0.0);
    CHECK(p.weyl->sup_norm() == 0.0);
  }
}

TEST_CASE("round sphere curvature") {
  const ModelManifold s4 = sphere(4);
  for (const auto& x : random_in(s4.chart, 10, 2)) {
    const CurvaturePack p = curvature_at(s4.chart, x);
    CHECK(sup_diff(p.ricci, 3.0 * p.metric) < 1e-8);
    CHECK(sup_diff(*p.schouten, 0.5 * p.metric) < 1e-8);
    CHECK(p.weyl->sup_norm() < 1e-8);
    CHECK(p.scalar == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(sup_diff(p.riemann, 0.5 * kulkarni_nomizu(p.metric, p.metric)) < 1e-8);
  }
}

TEST_CASE("hyperbolic and three-dimensional space forms") {
  for (const ModelManifold& m : {sphere(3), hyperbolic(3), hyperbolic(4), hyperbolic(5)}) {
    const double c = m.name.rfind("sphere", 0) == 0 ? 1.0 : -1.0;
    for (const auto& x : random_in(m.chart, 5, 3)) {
      const CurvaturePack p = curvature_at(m.chart, x);
      CHECK(sup_diff(p.ricci, c * (m.dim() - 1.0) * p.metric) < 1e-8);
      CHECK(p.cotton->sup_norm() < 1e-7);
      CHECK(p.weyl->sup_norm() < 1e-8);
    }
  }
}

TEST_CASE("example four metric is Einstein with constant -1 in dimension four") {
  const ModelManifold m = example4(4);
  for (const auto& x : random_in(m.chart, 20, 4)) {
    const CurvaturePack p = curvature_at(m.chart, x);
    CHECK(sup_diff(p.ricci, -1.0 * p.metric) < 1e-8);
  }
}

TEST_CASE("Christoffel symbols and Ricci against finite differences") {
  for (const MetricChart& chart : {generic3(), generic4(), example4(5).chart, hyperbolic(3).chart}) {
    const auto fn = metric_fn(chart);
    for (const auto& x : random_in(chart, 3, 5)) {
      const CurvaturePack p = curvature_at(chart, x);
      const auto gamma = oracle::christoffel_fd(fn, x);
      const oracle::Mat ric = oracle::ricci_fd(fn, x);
      const int n = chart.dim();
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            CHECK(p.christoffel.at({k, i, j}) == doctest::Approx(gamma[k][i][j]).scale(1.0).epsilon(1e-7));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(p.ricci(i, j) == doctest::Approx(ric[i][j]).scale(1.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("curvature tensor symmetries on a generic metric") {
  const MetricChart chart = generic4();
  const CurvaturePack p = curvature_at(chart, std::vector<double>{0.2, -0.3, 0.5, 0.1});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double r = p.riemann.at({i, j, k, l});
          CHECK(r == doctest::Approx(-p.riemann.at({j, i, k, l})).scale(1.0).epsilon(1e-12));
          CHECK(r == doctest::Approx(p.riemann.at({k, l, i, j})).scale(1.0).epsilon(1e-12));
          CHECK(std::fabs(r + p.riemann.at({j, k, i, l}) + p.riemann.at({k, i, j, l})) < 1e-12);
        }
  // Weyl is totally trace free.
  const TensorValue w = *p.weyl;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double tr = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) tr += p.inverse_metric(i, k) * w.at({i, j, k, l});
      CHECK(std::fabs(tr) < 1e-12);
    }
}

TEST_CASE("contracted second Bianchi identity") {
  std::vector<MetricChart> charts{generic3(), generic4(), sphere(3).chart, hyperbolic(4).chart,
                                  example4(4).chart, example4(5).chart, product_line_sphere(3).chart};
  charts.push_back(warped(parse("sinh(x1)"), std::make_shared<ModelManifold>(sphere(3))).chart);
  for (const MetricChart& chart : charts) {
    for (const auto& x : random_in(chart, 20, 6)) {
      const LocalGeometry geo(chart, x);
      const auto [defect, grad] = bianchi_defect(geo);
      CHECK(defect < 1e-7 * (1.0 + grad));
    }
  }
}

TEST_CASE("Cotton tensor: antisymmetry, Ricci form, generic nonzero") {
  for (const MetricChart& chart : {generic3(), generic4()}) {
    const int n = chart.dim();
    for (const auto& x : random_in(chart, 4, 7)) {
      const LocalGeometry geo(chart, x);
      const CurvaturePack p = curvature_pack(geo);
      const TensorValue& c = *p.cotton;
      const TensorValue ricci_form = cotton_from_ricci(geo);
      CHECK(c.sup_norm() > 1e-3);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            CHECK(c.at({i, j, k}) == doctest::Approx(-c.at({j, i, k})).scale(1.0).epsilon(1e-12));
            CHECK(ricci_form.at({i, j, k}) ==
                  doctest::Approx((n - 2.0) * c.at({i, j, k})).scale(1.0).epsilon(1e-9));
          }
    }
  }
}

TEST_CASE("Cotton against differences of the Schouten tensor") {
  const MetricChart chart = generic3();
  const std::vector<double> x{0.1, 0.4, -0.2};
  const CurvaturePack p = curvature_at(chart, x);
  const double h = 1e-4;
  // nabla_i A_jk = d_i A_jk - Gamma^m_ij A_mk - Gamma^m_ik A_jm
  std::vector<TensorValue> da;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    da.push_back((1.0 / (2 * h)) * (*curvature_at(chart, xp).schouten - *curvature_at(chart, xm).schouten));
  }
  const TensorValue& a = *p.schouten;
  auto nabla = [&](int i, int j, int k) {
    double v = da[i](j, k);
    for (int m = 0; m < 3; ++m) v -= p.christoffel.at({m, i, j}) * a(m, k) + p.christoffel.at({m, i, k}) * a(j, m);
    return v;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        CHECK(p.cotton->at({i, j, k}) == doctest::Approx(nabla(i, j, k) - nabla(j, i, k)).scale(1.0).epsilon(1e-6));
}

TEST_CASE("height function Hessians") {
  for (int n : {3, 4, 5}) {
    for (const ModelManifold& m : {sphere(n), hyperbolic(n)}) {
      const double sign = m.name.rfind("sphere", 0) == 0 ? -1.0 : 1.0;
      for (const auto& x : random_in(m.chart, 10, 8)) {
        const ScalarFieldOps ops = covariant_ops(m.chart, x, *m.potential);
        const double h = evaluate(*m.potential, x);
        const Square<double> g = m.chart.metric_at(x);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) CHECK(std::fabs(ops.hessian(i, j) - sign * h * g(i, j)) < 1e-9);
        CHECK(ops.laplacian == doctest::Approx(sign * n * h).scale(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("Hessian and Laplacian against finite differences") {
  const MetricChart chart = generic3();
  const Expr f = parse("sin(x1)*exp(0.3*x2)+x3^2*x1");
  const std::vector<double> x{0.3, -0.2, 0.6};
  const ScalarFieldOps ops = covariant_ops(chart, x, f);
  const CurvaturePack p = curvature_at(chart, x);
  oracle::Fn fn = [&](const oracle::Vec& y) { return evaluate(f, y); };
  double lap = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double hess = oracle::d2(fn, x, i, j);
      for (int k = 0; k < 3; ++k) hess -= p.christoffel.at({k, i, j}) * oracle::d1(fn, x, k);
      CHECK(ops.hessian(i, j) == doctest::Approx(hess).scale(1.0).epsilon(1e-6));
      lap += p.inverse_metric(i, j) * hess;
    }
  CHECK(ops.laplacian == doctest::Approx(lap).scale(1.0).epsilon(1e-6));
}

TEST_CASE("linear potential on the product is parallel") {
  const ModelManifold m = product_line_sphere(3);
  for (const auto& x : random_in(m.chart, 10, 9)) {
    const ScalarFieldOps ops = covariant_ops(m.chart, x, *m.potential);
    CHECK(ops.hessian.sup_norm() < 1e-12);
  }
}

TEST_CASE("Lie derivative of a gradient is twice the Hessian") {
  const MetricChart chart = generic4();
  const Expr f = parse("cos(x1*x2)+0.5*x3^3-sinh(x4)*x2");
  for (const auto& x : random_in(chart, 5, 10)) {
    const LocalGeometry geo(chart, x);
    const Taylor fj = geo.field(f);
    const TaylorMatrix lie = geo.lie_derivative(geo.gradient(fj));
    const TaylorMatrix hess = geo.hessian(fj);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(std::fabs(lie(i, j).value() - 2 * hess(i, j).value()) < 1e-11);
  }
}

TEST_CASE("rotation of the stereographic chart is Killing") {
  const ModelManifold m = sphere(4);
  const std::vector<Expr> x{parse("-x2"), parse("x1"), parse("0"), parse("0")};
  for (const auto& p : random_in(m.chart, 10, 11)) {
    const VectorFieldOps ops = covariant_ops(m.chart, p, x);
    CHECK(ops.lie_derivative.sup_norm() < 1e-9);
    CHECK(std::fabs(ops.divergence) < 1e-9);
  }
  // a conformal but not Killing field: the dilation
  const std::vector<Expr> dil{parse("x1"), parse("x2"), parse("x3"), parse("x4")};
  CHECK(covariant_ops(m.chart, std::vector<double>{0.1, 0.2, 0.3, 0.4}, dil).lie_derivative.sup_norm() > 0.1);
}

TEST_CASE("divergence against finite differences of the density") {
  const MetricChart chart = generic3();
  const std::vector<Expr> v{parse("sin(x2)"), parse("x1*x3"), parse("exp(0.2*x1)")};
  const std::vector<double> x{0.2, 0.1, -0.4};
  const auto g = metric_fn(chart);
  auto vol = [&](const oracle::Vec& y) {
    const oracle::Mat m = g(y);
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double div = 0.0;
  for (int i = 0; i < 3; ++i) {
    oracle::Fn flux = [&](const oracle::Vec& y) { return std::sqrt(vol(y)) * evaluate(v[i], y); };
    div += oracle::d1(flux, x, i);
  }
  div /= std::sqrt(vol(x));
  CHECK(covariant_ops(chart, x, v).divergence == doctest::Approx(div).epsilon(1e-7));
}

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(chart_from(2, {"1", "2", "1"}), GeometryError);
  CHECK_THROWS_AS(chart_from(2, {"x1", "0", "1"}), GeometryError);
  std::vector<Expr> asym{parse("1"), parse("x1"), parse("0"), parse("1")};
  CHECK_THROWS_AS(MetricChart(2, asym, std::vector<Interval>(2, {-1, 1, false})), GeometryError);
  CHECK_THROWS_AS(chart_from(1, {"1"}), GeometryError);
  const MetricChart ok = sphere(3).chart;
  CHECK_THROWS_AS(curvature_at(ok, std::vector<double>{2.0, 0.0, 0.0}), GeometryError);
  CHECK_FALSE(ok.contains(std::vector<double>{0.0, 1.5, 0.0}));
  CHECK(ok.contains(std::vector<double>{0.0, 0.5, 0.0}));
}

TEST_CASE("probe points are deterministic and inside the box") {
  const auto domain = sphere(3).chart.domain();
  const auto a = probe_points(domain, 64);
  const auto b = probe_points(domain, 64);
  const auto c = probe_points(domain, 64, 99);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& p : a)
    for (double v : p) CHECK(std::fabs(v) <= 0.95);
}
