#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/tensor.hpp"

using namespace sigmaflow;

namespace {

TensorValue diagonal(std::vector<double> d, Valence v) {
  const int n = static_cast<int>(d.size());
  TensorValue t(n, v);
  for (int i = 0; i < n; ++i) t(i, i) = d[i];
  return t;
}

// Random symmetric positive-definite matrix B B^T + n I.
TensorValue random_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(n * n);
  for (double& v : b) v = u(rng);
  TensorValue g(n, {0, 2});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = (i == j) ? n : 0.0;
      for (int k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
      g(i, j) = s;
    }
  return g;
}

oracle::Mat to_mat(const TensorValue& t) {
  oracle::Mat m(t.dim(), oracle::Vec(t.dim()));
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) m[i][j] = t(i, j);
  return m;
}

}  // namespace

TEST_CASE("trace of the identity") {
  CHECK(contract(TensorValue::identity(4), 0, 1).value() == 4.0);
}

TEST_CASE("metric against its inverse") {
  std::mt19937_64 rng(1);
  const TensorValue g = random_metric(4, rng);
  const oracle::Mat inv = oracle::inverse(to_mat(g));
  TensorValue ginv(4, {2, 0});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ginv(i, j) = inv[i][j];
  // slots: g^{ab} g_{cd}, contract b with c -> delta^a_d
  const TensorValue prod = tensor_product(ginv, g);
  CHECK(prod.valence() == Valence{2, 2});
  const TensorValue id = contract(prod, 1, 2);
  CHECK(id.valence() == Valence{1, 1});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-13));
}

TEST_CASE("round sphere scalar from a contraction") {
  for (int n : {3, 4, 5}) {
    const TensorValue g = diagonal(std::vector<double>(n, 2.5), {0, 2});
    const TensorValue ginv = diagonal(std::vector<double>(n, 1 / 2.5), {2, 0});
    const TensorValue ric = (n - 1.0) * g;
    CHECK(contract_with_metric(ric, 0, 1, ginv).value() == doctest::Approx(n * (n - 1.0)));
    const TensorValue mixed = raise(ric, 0, ginv);
    CHECK(contract(mixed, 0, 1).value() == doctest::Approx(n * (n - 1.0)));
  }
}

TEST_CASE("contraction argument checks") {
  const TensorValue g = TensorValue::identity(3);
  CHECK_THROWS_AS(contract(g, 0, 0), InputError);
  CHECK_THROWS_AS(contract(g, 0, 5), InputError);
  CHECK_THROWS_AS(contract(TensorValue(3, {0, 2}), 0, 1), InputError);
  CHECK_THROWS_AS(tensor_product(TensorValue(3, {0, 1}), TensorValue(4, {0, 1})), InputError);
}

TEST_CASE("lower then raise is the identity") {
  std::mt19937_64 rng(2);
  const TensorValue g = random_metric(3, rng);
  const oracle::Mat inv = oracle::inverse(to_mat(g));
  TensorValue ginv(3, {2, 0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ginv(i, j) = inv[i][j];
  TensorValue t(3, {1, 2});
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : t.data()) v = u(rng);
  const TensorValue back = raise(lower(t, 0, g), 0, ginv);
  CHECK(back.valence() == t.valence());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.data()[i] == doctest::Approx(t.data()[i]).epsilon(1e-12));
}

TEST_CASE("eigenvalues of simple endomorphisms") {
  const TensorValue id5 = TensorValue::identity(5);
  const auto half = sym_eigenvalues(0.5 * id5, diagonal(std::vector<double>(5, 1.0), {0, 2}));
  REQUIRE(half.eigenvalues.size() == 5);
  for (double v : half.eigenvalues) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  const auto two = sym_eigenvalues(diagonal({-1.0, 2.0}, {1, 1}), diagonal({1.0, 1.0}, {0, 2}));
  CHECK(two.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(two.eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("eigenvalues against characteristic polynomial roots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    TensorValue s(4, {0, 2});
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) s(i, j) = s(j, i) = u(rng);
    const auto mine = jacobi_eigenvalues(s.matrix());
    const auto roots = oracle::eigenvalues(to_mat(s));
    REQUIRE(roots.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(mine[i] == doctest::Approx(roots[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("metric self-adjoint spectrum against characteristic polynomial roots") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const TensorValue g = random_metric(n, rng);
    TensorValue s(n, {0, 2});
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s(i, j) = s(j, i) = u(rng);
    const oracle::Mat m = oracle::matmul(oracle::inverse(to_mat(g)), to_mat(s));
    TensorValue mixed(n, {1, 1});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mixed(i, j) = m[i][j];
    const auto mine = sym_eigenvalues(mixed, g).eigenvalues;
    const auto roots = oracle::eigenvalues(m);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(mine[i] == doctest::Approx(roots[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("elementary symmetric values") {
  SymmetricSpectrum s5{std::vector<double>(5, 0.5)};
  CHECK(elementary_symmetric(s5, 2) == doctest::Approx(2.5));
  CHECK(elementary_symmetric(s5, 0) == 1.0);
  SymmetricSpectrum h4{std::vector<double>(4, -0.5)};
  CHECK(elementary_symmetric(h4, 3) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(elementary_symmetric(h4, 5), InputError);
  CHECK_THROWS_AS(elementary_symmetric(h4, -1), InputError);
}

TEST_CASE("elementary symmetric against subsets and power sums") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    const auto all = elementary_symmetric_all(v);
    std::vector<double> p(n + 1, 0.0);
    for (int j = 1; j <= n; ++j)
      for (double x : v) p[j] += std::pow(x, j);
    const auto newton = sigma_from_power_sums(p, 1.0);
    for (int k = 0; k <= n; ++k) {
      const double brute = oracle::sigma_subsets(v, k);
      CHECK(all[k] == doctest::Approx(brute).scale(1.0).epsilon(1e-12));
      CHECK(newton[k] == doctest::Approx(all[k]).scale(1.0).epsilon(1e-10));
    }
    std::vector<double> shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::sort(v.begin(), v.end());
    std::sort(shuffled.begin(), shuffled.end());
    for (int k = 0; k <= n; ++k) CHECK(elementary_symmetric({shuffled}, k) == elementary_symmetric({v}, k));
  }
}

TEST_CASE("permutation invariance is exact") {
  const std::vector<double> v{0.3, -1.7, 2.2, 0.9, -0.4};
  SymmetricSpectrum a{v};
  std::vector<double> w{2.2, 0.3, -0.4, -1.7, 0.9};
  SymmetricSpectrum b{w};
  for (int k = 0; k <= 5; ++k) CHECK(elementary_symmetric(a, k) == elementary_symmetric(b, k));
}

TEST_CASE("Kulkarni-Nomizu product") {
  const TensorValue zero(3, {0, 2});
  const TensorValue kn0 = kulkarni_nomizu(zero, zero);
  for (double v : kn0.data()) CHECK(v == 0.0);
  const TensorValue delta = diagonal(std::vector<double>(4, 1.0), {0, 2});
  const TensorValue rm = 0.5 * kulkarni_nomizu(delta, delta);
  CHECK(rm.at({0, 1, 0, 1}) == 1.0);
  CHECK(rm.at({0, 1, 1, 0}) == -1.0);
  CHECK(rm.at({0, 0, 1, 1}) == 0.0);
  // symmetries of a curvature tensor on random inputs
  std::mt19937_64 rng(6);
  const TensorValue a = random_metric(4, rng), b = random_metric(4, rng);
  const TensorValue kn = kulkarni_nomizu(a, b);
  const TensorValue nk = kulkarni_nomizu(b, a);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double x = kn.at({i, j, k, l});
          CHECK(x == doctest::Approx(-kn.at({j, i, k, l})));
          CHECK(x == doctest::Approx(kn.at({k, l, i, j})));
          CHECK(x == doctest::Approx(nk.at({i, j, k, l})));
          const double bianchi = x + kn.at({j, k, i, l}) + kn.at({k, i, j, l});
          CHECK(std::fabs(bianchi) < 1e-12);
          const double direct = a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
          CHECK(x == doctest::Approx(direct));
        }
}

TEST_CASE("symmetrize") {
  TensorValue t(2, {0, 2});
  t(0, 1) = 2.0;
  const TensorValue s = symmetrize(t);
  CHECK(s(0, 1) == 1.0);
  CHECK(s(1, 0) == 1.0);
}
