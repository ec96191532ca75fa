#include "sigmaflow/probes.hpp"

#include <cmath>
#include <random>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<std::vector<double>> probe_points(std::span<const Interval> domain, int count,
                                              std::uint64_t seed, double margin) {
  const int dim = static_cast<int>(domain.size());
  if (dim > static_cast<int>(std::size(kPrimes))) throw InputError("too many probe dimensions");
  if (count < 0) throw InputError("negative probe count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dim);
  for (double& s : shift) s = unit(rng);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (int p = 0; p < count; ++p) {
    for (int d = 0; d < dim; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(p) + 1, kPrimes[d]) + shift[d];
      u -= std::floor(u);
      const double w = domain[d].hi - domain[d].lo;
      out[p][d] = domain[d].lo + w * (margin + (1.0 - 2.0 * margin) * u);
    }
  }
  return out;
}

}  // namespace sigmaflow
