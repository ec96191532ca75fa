#pragma once

// sigma_k-curvatures of g^{-1}A, Newton tensors and conformal change laws.

#include <vector>

#include "sigmaflow/curvature.hpp"

namespace sigmaflow {

struct SigmaProfile {
  int n = 0;
  std::vector<double> eigenvalues;  // of g^{-1}A, ascending
  std::vector<double> sigma;        // sigma_0..sigma_n
  int k = 0;
  int l = 0;
  bool cone = false;  // sigma_k * sigma_l > 0
  double log_quotient = 0.0;
};

// All sigma_j at the point; no quotient (k = l = 0, cone = true).
SigmaProfile sigma_profile(const CurvaturePack& pack);
// Adds log(sigma_k / sigma_l). Throws ConeViolation when sigma_k sigma_l <= 0
// and InputError for indices outside 0..n.
SigmaProfile sigma_profile(const CurvaturePack& pack, int k, int l);
// Same, read directly from the jets without assembling a full pack.
SigmaProfile sigma_profile(const LocalGeometry& geo, int k, int l);

// Jets of sigma_0..sigma_n (order 2) through Newton's identities on
// tr((g^{-1}A)^j).
std::vector<Taylor> sigma_jets(const LocalGeometry& geo);

// (1,1) jet of g^{-1}A: entry (i, j) = A^i_j.
TaylorMatrix schouten_endomorphism_jet(const LocalGeometry& geo);

// log sigma_k - log sigma_l as a jet, with the cone check at the point.
Taylor log_quotient_jet(const LocalGeometry& geo, int k, int l);

struct NewtonTensor {
  int k = 0;
  TensorValue value;  // (1,1)
};

// T_k = sum_j (-1)^j sigma_{k-j} (g^{-1}A)^j, 0 <= k <= n-1.
NewtonTensor newton_tensor(const CurvaturePack& pack, int k);
// Horner evaluation of the same polynomial over a matrix and sigma list.
template <class T>
Square<T> newton_polynomial(const Square<T>& m, const std::vector<T>& sigma, int k) {
  const int n = m.size();
  const T zero = m(0, 0) * 0.0;
  Square<T> t(n, zero);
  for (int i = 0; i < n; ++i) t(i, i) = zero + ((k % 2 == 0) ? 1.0 : -1.0) * sigma[0];
  for (int j = k - 1; j >= 0; --j) {
    t = t * m;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) t(i, i) += sign * sigma[k - j];
  }
  return t;
}

// (div T_k)_j = nabla_i (T_k)^i_j; a diagnostic, zero on locally
// conformally flat metrics.
TensorValue divergence_newton(const MetricChart& chart, std::span<const double> x, int k);
TensorValue divergence_newton(const LocalGeometry& geo, int k);

// Curvature of phi^2 g0 from the curvature of g0 and derivatives of
// w = log phi:
//   A   = A0 - hess w + dw (x) dw - 1/2 |dw|^2 g0
//   Ric = Ric0 - (n-2)(hess w - dw (x) dw) - (lap w + (n-2)|dw|^2) g0
// Throws DomainError unless phi > 0 at the point.
TensorValue conformal_schouten(const LocalGeometry& base, const Expr& phi);
TensorValue conformal_ricci(const LocalGeometry& base, const Expr& phi);

// Curvature of phi^{-2} g written through derivatives of phi in g:
//   A   = A_g + hess phi / phi - 1/2 |d phi|^2 / phi^2 g
//   Ric = Ric_g + phi^{-2} ((n-2) phi hess phi + (phi lap phi - (n-1)|d phi|^2) g)
TensorValue divided_schouten(const LocalGeometry& geo, const Expr& phi);
TensorValue divided_ricci(const LocalGeometry& geo, const Expr& phi);

// Right side of hess phi = phi (-A_g + (sigma_1(g) + lap phi / phi) g / n),
// which holds whenever phi^{-2} g is Einstein.
TensorValue umbilic_hessian(const LocalGeometry& geo, const Expr& phi);

}  // namespace sigmaflow
