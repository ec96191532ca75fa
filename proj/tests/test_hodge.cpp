#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/hodge.hpp"

using namespace sigmaflow;

namespace {

std::vector<Expr> exprs(std::initializer_list<const char*> s) {
  std::vector<Expr> out;
  for (const char* e : s) out.push_back(parse(e));
  return out;
}

TorusField difference(const TorusField& a, const TorusField& b) {
  TorusField d = a;
  for (std::size_t c = 0; c < d.components.size(); ++c)
    for (std::size_t i = 0; i < d.components[c].size(); ++i) d.components[c][i] -= b.components[c][i];
  return d;
}

TorusField sum(const TorusField& a, const TorusField& b) {
  TorusField d = a;
  for (std::size_t c = 0; c < d.components.size(); ++c)
    for (std::size_t i = 0; i < d.components[c].size(); ++i) d.components[c][i] += b.components[c][i];
  return d;
}

// Random trigonometric polynomial with modes |k_i| <= 3.
std::string random_trig(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-3, 3);
  std::string s = "0";
  for (int t = 0; t < 6; ++t) {
    std::string arg;
    for (int i = 0; i < n; ++i) arg += "+(" + std::to_string(k(rng)) + ")*x" + std::to_string(i + 1);
    s += "+(" + std::to_string(c(rng)) + ")*" + (t % 2 ? "sin(" : "cos(") + arg + ")";
  }
  return s;
}

TorusField random_field(int n, int size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(parse(random_trig(n, rng)));
  return TorusField::sample(n, size, comps);
}

}  // namespace

TEST_CASE("transform against a direct sum") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {1, 2, 8, 32, 64}) {
    std::vector<std::complex<double>> a(n);
    for (auto& v : a) v = {u(rng), u(rng)};
    auto f = a;
    fft(f, false);
    for (int k = 0; k < n; ++k) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < n; ++j) s += a[j] * std::polar(1.0, -2 * std::numbers::pi * j * k / n);
      CHECK(std::abs(f[k] - s) < 1e-12 * n);
    }
    fft(f, true);
    for (int j = 0; j < n; ++j) CHECK(std::abs(f[j] - a[j]) < 1e-14 * n);
  }
  std::vector<std::complex<double>> bad(12);
  CHECK_THROWS_AS(fft(bad, false), InputError);
}

TEST_CASE("pure gradient") {
  const TorusField x = TorusField::sample(2, 32, exprs({"cos(x1)*cos(x2)", "-sin(x1)*sin(x2)"}));
  const HodgeDecomposition d = hodge_decompose(x);
  CHECK(sup_norm(d.remainder) < 1e-10);
  const TorusField ref = TorusField::sample(2, 32, exprs({"sin(x1)*cos(x2)", "0"}));
  double err = 0.0;
  for (std::size_t i = 0; i < d.potential.size(); ++i) err = std::max(err, std::fabs(d.potential[i] - ref.components[0][i]));
  CHECK(err < 1e-12);
}

TEST_CASE("constant field is harmonic") {
  const TorusField x = TorusField::sample(2, 16, exprs({"1", "0"}));
  const HodgeDecomposition d = hodge_decompose(x);
  CHECK(sup_norm(d.potential) < 1e-15);
  CHECK(sup_norm(difference(d.remainder, x)) < 1e-15);
}

TEST_CASE("mixed field splits into its parts") {
  const TorusField x = TorusField::sample(2, 64, exprs({"cos(x1)", "cos(x1)"}));
  const TorusField grad = TorusField::sample(2, 64, exprs({"cos(x1)", "0"}));
  const TorusField rot = TorusField::sample(2, 64, exprs({"0", "cos(x1)"}));
  const HodgeDecomposition d = hodge_decompose(x);
  CHECK(sup_norm(difference(d.gradient, grad)) < 1e-9);
  CHECK(sup_norm(difference(d.remainder, rot)) < 1e-9);
  const TorusField x3 = TorusField::sample(3, 16, exprs({"2*cos(2*x1)*sin(x3)+cos(x2)", "sin(x3)", "sin(2*x1)*cos(x3)"}));
  const HodgeDecomposition d3 = hodge_decompose(x3);
  const TorusField g3 = TorusField::sample(3, 16, exprs({"2*cos(2*x1)*sin(x3)", "0", "sin(2*x1)*cos(x3)"}));
  CHECK(sup_norm(difference(d3.gradient, g3)) < 1e-9);
}

TEST_CASE("decomposition invariants on random band-limited fields") {
  for (auto [n, size] : {std::pair{2, 64}, std::pair{3, 32}}) {
    for (unsigned seed : {1u, 2u, 3u}) {
      const TorusField x = random_field(n, size, seed);
      const HodgeDecomposition d = hodge_decompose(x);
      const double xx = inner_product(x, x);
      CHECK(sup_norm(difference(sum(d.gradient, d.remainder), x)) < 1e-9);
      CHECK(std::fabs(inner_product(d.gradient, d.remainder)) < 1e-9 * xx);
      CHECK(sup_norm(spectral_divergence(d.remainder)) < 1e-9);
      const HodgeDecomposition again = hodge_decompose(d.remainder);
      CHECK(sup_norm(again.potential) < 1e-9);
      CHECK(sup_norm(again.gradient) < 1e-9);
      CHECK(std::fabs(d.mean_divergence) < 1e-12);
      CHECK(sup_norm(d.gradient) > 0.1);
    }
  }
}

TEST_CASE("spectral derivatives are exact for band-limited data") {
  const TorusField x = TorusField::sample(3, 16, exprs({"sin(x1)*cos(2*x2)", "cos(x3)", "sin(3*x1+x3)"}));
  const Grid div = spectral_divergence(x);
  const TorusField ref = TorusField::sample(3, 16, exprs({"cos(x1)*cos(2*x2)+cos(3*x1+x3)", "0", "0"}));
  double err = 0.0;
  for (std::size_t i = 0; i < div.size(); ++i) err = std::max(err, std::fabs(div[i] - ref.components[0][i]));
  CHECK(err < 1e-12);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(TorusField::sample(2, 24, exprs({"1", "0"})), InputError);
  CHECK_THROWS_AS(TorusField::sample(2, 8, exprs({"1", "0"})), InputError);
  CHECK_THROWS_AS(TorusField::sample(4, 16, exprs({"1", "0", "0", "0"})), InputError);
  CHECK_THROWS_AS(TorusField::sample(2, 16, exprs({"1"})), InputError);
  TorusField bad = TorusField::zeros(2, 16);
  bad.components[0][3] = std::nan("");
  CHECK_THROWS_AS(hodge_decompose(bad), InputError);
}

TEST_CASE("serial and parallel transforms are bit-identical") {
  const TorusField x = random_field(3, 32, 9);
  std::vector<std::complex<double>> a(x.points()), b;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {x.components[0][i], x.components[1][i]};
  b = a;
  fft_grid(a, 3, 32, false, Execution::serial);
  fft_grid(b, 3, 32, false, Execution::parallel);
  CHECK(a == b);
  const HodgeDecomposition s = hodge_decompose(x, Execution::serial);
  const HodgeDecomposition p = hodge_decompose(x, Execution::parallel);
  CHECK(s.potential == p.potential);
  CHECK(s.remainder.components == p.remainder.components);
}
