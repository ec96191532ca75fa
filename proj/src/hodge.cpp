#include "sigmaflow/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

using Complex = std::complex<double>;

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check_shape(int n, int size) {
  if (n != 2 && n != 3) throw InputError("torus dimension must be 2 or 3");
  if (size < 16 || !power_of_two(size)) throw InputError("torus grid size must be a power of two >= 16");
}

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Wavenumber of index i on axis of length N, with the Nyquist mode zeroed.
double wavenumber(int i, int size) {
  if (2 * i == size) return 0.0;
  return (2 * i < size) ? i : i - size;
}

// Per-axis index of flat position p.
int axis_index(std::size_t p, int axis, int n, int size) {
  const std::size_t stride = ipow(size, n - 1 - axis);
  return static_cast<int>((p / stride) % size);
}

std::vector<Complex> to_complex(const Grid& g) {
  std::vector<Complex> c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) c[i] = g[i];
  return c;
}

Grid real_part(const std::vector<Complex>& c) {
  Grid g(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) g[i] = c[i].real();
  return g;
}

}  // namespace

std::size_t TorusField::points() const { return ipow(size, n); }

TorusField TorusField::zeros(int n, int size) {
  check_shape(n, size);
  TorusField f;
  f.n = n;
  f.size = size;
  f.components.assign(n, Grid(ipow(size, n), 0.0));
  return f;
}

TorusField TorusField::sample(int n, int size, std::span<const Expr> components) {
  check_shape(n, size);
  if (static_cast<int>(components.size()) != n) {
    throw InputError("torus field needs " + std::to_string(n) + " components");
  }
  for (const auto& c : components) {
    if (c.arity() > n) throw InputError("field component uses a variable beyond the torus dimension");
  }
  TorusField f = zeros(n, size);
  std::vector<double> x(n);
  for (std::size_t p = 0; p < f.points(); ++p) {
    for (int a = 0; a < n; ++a) x[a] = 2.0 * std::numbers::pi * axis_index(p, a, n, size) / size;
    for (int a = 0; a < n; ++a) f.components[a][p] = evaluate(components[a], x);
  }
  return f;
}

void fft(std::span<Complex> a, bool inverse) {
  const std::size_t m = a.size();
  if (!power_of_two(static_cast<int>(m))) throw InputError("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < m; i += len) {
      for (std::size_t q = 0; q < len / 2; ++q) {
        const Complex w = std::polar(1.0, ang * static_cast<double>(q));
        const Complex u = a[i + q];
        const Complex v = a[i + q + len / 2] * w;
        a[i + q] = u + v;
        a[i + q + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    for (auto& z : a) z /= static_cast<double>(m);
  }
}

void fft_grid(std::vector<Complex>& data, int n, int size, bool inverse, Execution execution) {
  check_shape(n, size);
  if (data.size() != ipow(size, n)) throw InputError("grid data has the wrong length");
  const std::size_t lines = ipow(size, n - 1);
  for (int axis = 0; axis < n; ++axis) {
    const std::size_t stride = ipow(size, n - 1 - axis);
    for_each_index(lines, execution, [&](std::size_t line) {
      // Split the line number into the part above and below this axis.
      const std::size_t low = line % stride;
      const std::size_t high = line / stride;
      const std::size_t base = high * stride * size + low;
      std::vector<Complex> buf(size);
      for (int i = 0; i < size; ++i) buf[i] = data[base + i * stride];
      fft(buf, inverse);
      for (int i = 0; i < size; ++i) data[base + i * stride] = buf[i];
    });
  }
}

Grid spectral_divergence(const TorusField& x, Execution execution) {
  check_shape(x.n, x.size);
  std::vector<Complex> acc(x.points(), Complex(0.0, 0.0));
  for (int a = 0; a < x.n; ++a) {
    std::vector<Complex> c = to_complex(x.components[a]);
    fft_grid(c, x.n, x.size, false, execution);
    for (std::size_t p = 0; p < c.size(); ++p) {
      acc[p] += Complex(0.0, wavenumber(axis_index(p, a, x.n, x.size), x.size)) * c[p];
    }
  }
  fft_grid(acc, x.n, x.size, true, execution);
  return real_part(acc);
}

TorusField spectral_gradient(const Grid& h, int n, int size, Execution execution) {
  TorusField g = TorusField::zeros(n, size);
  if (h.size() != g.points()) throw InputError("grid data has the wrong length");
  std::vector<Complex> hh = to_complex(h);
  fft_grid(hh, n, size, false, execution);
  for (int a = 0; a < n; ++a) {
    std::vector<Complex> c(hh.size());
    for (std::size_t p = 0; p < c.size(); ++p) {
      c[p] = Complex(0.0, wavenumber(axis_index(p, a, n, size), size)) * hh[p];
    }
    fft_grid(c, n, size, true, execution);
    g.components[a] = real_part(c);
  }
  return g;
}

HodgeDecomposition hodge_decompose(const TorusField& x, Execution execution) {
  check_shape(x.n, x.size);
  if (static_cast<int>(x.components.size()) != x.n) throw InputError("torus field has the wrong component count");
  for (const auto& c : x.components) {
    if (c.size() != x.points()) throw InputError("torus field component has the wrong length");
    for (double v : c) {
      if (!std::isfinite(v)) throw InputError("torus field has non-finite samples");
    }
  }
  const int n = x.n;
  const int size = x.size;
  std::vector<Complex> div(x.points(), Complex(0.0, 0.0));
  for (int a = 0; a < n; ++a) {
    std::vector<Complex> c = to_complex(x.components[a]);
    fft_grid(c, n, size, false, execution);
    for (std::size_t p = 0; p < c.size(); ++p) {
      div[p] += Complex(0.0, wavenumber(axis_index(p, a, n, size), size)) * c[p];
    }
  }
  HodgeDecomposition out;
  out.mean_divergence = std::abs(div[0]) / static_cast<double>(x.points());
  std::vector<Complex> hh(div.size());
  for (std::size_t p = 0; p < div.size(); ++p) {
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double k = wavenumber(axis_index(p, a, n, size), size);
      k2 += k * k;
    }
    hh[p] = (k2 > 0.0) ? -div[p] / k2 : Complex(0.0, 0.0);
  }
  std::vector<Complex> h = hh;
  fft_grid(h, n, size, true, execution);
  out.potential = real_part(h);
  out.gradient = spectral_gradient(out.potential, n, size, execution);
  out.remainder = TorusField::zeros(n, size);
  for (int a = 0; a < n; ++a)
    for (std::size_t p = 0; p < x.points(); ++p)
      out.remainder.components[a][p] = x.components[a][p] - out.gradient.components[a][p];
  return out;
}

double inner_product(const TorusField& a, const TorusField& b) {
  if (a.n != b.n || a.size != b.size) throw InputError("torus fields have different shapes");
  double acc = 0.0;
  for (int c = 0; c < a.n; ++c)
    for (std::size_t p = 0; p < a.points(); ++p) acc += a.components[c][p] * b.components[c][p];
  return acc * std::pow(2.0 * std::numbers::pi / a.size, a.n);
}

double sup_norm(const Grid& g) {
  double s = 0.0;
  for (double v : g) s = std::max(s, std::fabs(v));
  return s;
}

double sup_norm(const TorusField& x) {
  double s = 0.0;
  for (const auto& c : x.components) s = std::max(s, sup_norm(c));
  return s;
}

}  // namespace sigmaflow
