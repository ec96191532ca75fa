#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "sigmaflow/dense.hpp"

namespace sigmaflow {

struct Valence {
  int contravariant = 0;
  int covariant = 0;
  int rank() const { return contravariant + covariant; }
  friend bool operator==(const Valence&, const Valence&) = default;
};

// Dense pointwise tensor. Slots 0..p-1 are contravariant, p..p+q-1
// covariant; components are row-major in slot order.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, Valence valence);

  static TensorValue scalar(double v);
  static TensorValue identity(int dim);  // delta^i_j
  static TensorValue from_matrix(const Square<double>& m, Valence valence);

  int dim() const { return dim_; }
  const Valence& valence() const { return valence_; }
  int rank() const { return valence_.rank(); }
  std::size_t size() const { return data_.size(); }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& at(std::initializer_list<int> idx) { return data_[offset(idx)]; }
  double at(std::initializer_list<int> idx) const { return data_[offset(idx)]; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * dim_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * dim_ + j]; }

  Square<double> matrix() const;  // rank-2 only
  double value() const;           // rank-0 only
  double sup_norm() const;

  TensorValue& operator+=(const TensorValue& o);
  TensorValue& operator-=(const TensorValue& o);
  TensorValue& operator*=(double s);

 private:
  std::size_t offset(std::initializer_list<int> idx) const;

  int dim_ = 0;
  Valence valence_{};
  std::vector<double> data_;
};

inline TensorValue operator+(TensorValue a, const TensorValue& b) { return a += b; }
inline TensorValue operator-(TensorValue a, const TensorValue& b) { return a -= b; }
inline TensorValue operator*(TensorValue a, double s) { return a *= s; }
inline TensorValue operator*(double s, TensorValue a) { return a *= s; }

TensorValue tensor_product(const TensorValue& a, const TensorValue& b);

// Single contraction of a contravariant slot against a covariant slot.
// Throws InputError on a slot out of range or a variance mismatch.
TensorValue contract(const TensorValue& t, int slot_a, int slot_b);

// Contraction of two covariant slots through an inverse metric (2,0).
TensorValue contract_with_metric(const TensorValue& t, int slot_a, int slot_b,
                                 const TensorValue& inverse_metric);

// Index gymnastics on one slot. `metric` is (0,2), `inverse_metric` (2,0).
// The moved slot lands on the boundary between the contravariant and
// covariant groups; the other slots keep their relative order.
TensorValue lower(const TensorValue& t, int slot, const TensorValue& metric);
TensorValue raise(const TensorValue& t, int slot, const TensorValue& inverse_metric);

TensorValue symmetrize(const TensorValue& t);  // rank-2

struct SymmetricSpectrum {
  std::vector<double> eigenvalues;  // ascending
};

// Eigenvalues of a (1,1) tensor that is self-adjoint with respect to the
// positive-definite (0,2) `metric`. The endomorphism is carried to a
// metric-orthonormal frame (Cholesky factor), symmetrized there and
// diagonalized by cyclic Jacobi rotations.
SymmetricSpectrum sym_eigenvalues(const TensorValue& m, const TensorValue& metric);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
std::vector<double> jacobi_eigenvalues(Square<double> a, double off_tolerance = 1e-13);

// sigma_k of the spectrum; sigma_0 = 1. Throws InputError unless 0 <= k <= n.
double elementary_symmetric(const SymmetricSpectrum& spectrum, int k);
// sigma_0..sigma_n via the coefficients of prod(1 + lambda_i t).
std::vector<double> elementary_symmetric_all(std::span<const double> values);

// Newton's identities: sigma_0..sigma_n from power sums p_1..p_n
// (p[0] is ignored). Works over double and Taylor.
template <class T>
std::vector<T> sigma_from_power_sums(const std::vector<T>& p, const T& one) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<T> e(n + 1, one);
  for (int k = 1; k <= n; ++k) {
    T s = e[k - 1] * p[1];
    for (int i = 2; i <= k; ++i) {
      const double sign = (i % 2 == 0) ? -1.0 : 1.0;
      s += e[k - i] * p[i] * sign;
    }
    e[k] = s * (1.0 / k);
  }
  return e;
}

// Kulkarni-Nomizu product of symmetric (0,2) tensors:
//   (a ⊠ b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b);

}  // namespace sigmaflow
