#pragma once

// Hodge decomposition X = grad h + Y, div Y = 0, on the flat torus
// (R / 2 pi Z)^n, n = 2 or 3, sampled on N^n points x_j = 2 pi j / N.

#include <complex>
#include <span>
#include <vector>

#include "sigmaflow/expr.hpp"
#include "sigmaflow/parallel.hpp"

namespace sigmaflow {

using Grid = std::vector<double>;  // N^n values, last axis fastest

struct TorusField {
  int n = 2;
  int size = 16;  // N, a power of two >= 16
  std::vector<Grid> components;

  std::size_t points() const;
  // Throws InputError for n outside {2, 3}, bad N or a component count
  // different from n.
  static TorusField sample(int n, int size, std::span<const Expr> components);
  static TorusField zeros(int n, int size);
};

// In-place radix-2 transform; `inverse` applies the 1/N factor.
void fft(std::span<std::complex<double>> a, bool inverse);

// Transform along every axis of an N^n grid.
void fft_grid(std::vector<std::complex<double>>& data, int n, int size, bool inverse,
              Execution execution = Execution::parallel);

// Spectral derivatives; the Nyquist mode of each odd derivative is dropped.
Grid spectral_divergence(const TorusField& x, Execution execution = Execution::parallel);
TorusField spectral_gradient(const Grid& h, int n, int size, Execution execution = Execution::parallel);

struct HodgeDecomposition {
  Grid potential;        // h, zero mean
  TorusField gradient;   // grad h
  TorusField remainder;  // Y = X - grad h
  double mean_divergence = 0.0;  // zero-frequency part of div X, removed
};

// Throws InputError for non-finite samples.
HodgeDecomposition hodge_decompose(const TorusField& x, Execution execution = Execution::parallel);

// Discrete L2 inner product sum_j <a_j, b_j> (2 pi / N)^n.
double inner_product(const TorusField& a, const TorusField& b);
double sup_norm(const TorusField& x);
double sup_norm(const Grid& g);

}  // namespace sigmaflow
