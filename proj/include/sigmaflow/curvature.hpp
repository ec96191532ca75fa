#pragma once

// Pointwise curvature of a coordinate-chart metric.
//
// Conventions (fixed throughout the library):
//   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
//   R(X,Y)Z    = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   Rm_ijkl    = g(R(d_i, d_j) d_l, d_k), so the unit sphere has
//                Rm = g_ik g_jl - g_il g_jk = 1/2 (g ⊠ g)
//   Ric_jl     = g^ik Rm_ijkl,  R = g^jl Ric_jl
//   A          = (Ric - R / (2(n-1)) g) / (n-2)
//   W          = Rm - A ⊠ g
//   C_ijk      = nabla_i A_jk - nabla_j A_ik
//
// All derivative data comes from order-4 Taylor expansions of the metric
// components; derived quantities are carried as Taylor values with the
// order lowered at each differentiation (g: 4, Gamma: 3, Rm/Ric/A: 2,
// nabla A: 1), so their own derivatives are available without finite
// differences.

#include <optional>
#include <span>
#include <vector>

#include "sigmaflow/dense.hpp"
#include "sigmaflow/expr.hpp"
#include "sigmaflow/taylor.hpp"
#include "sigmaflow/tensor.hpp"

namespace sigmaflow {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;  // period hi - lo
};

class MetricChart {
 public:
  // Validates dimension (2..8), symmetry (textual or numeric at probes) and
  // positive-definiteness on a probe set of the domain.
  MetricChart(int dim, std::vector<Expr> components, std::vector<Interval> domain);

  int dim() const { return dim_; }
  const Expr& component(int i, int j) const { return components_[i * dim_ + j]; }
  const std::vector<Interval>& domain() const { return domain_; }

  bool contains(std::span<const double> x) const;
  Square<double> metric_at(std::span<const double> x) const;

 private:
  int dim_;
  std::vector<Expr> components_;
  std::vector<Interval> domain_;
};

using TaylorVector = std::vector<Taylor>;
using TaylorMatrix = Square<Taylor>;

// Taylor jets of the metric and its curvature at one point.
class LocalGeometry {
 public:
  LocalGeometry(const MetricChart& chart, std::span<const double> x);

  int dim() const { return n_; }
  const TaylorSpacePtr& space() const { return space_; }
  std::span<const double> point() const { return x_; }

  const Taylor& g(int i, int j) const { return g_(i, j); }
  const Taylor& ginv(int i, int j) const { return ginv_(i, j); }
  const Taylor& christoffel(int k, int i, int j) const { return gamma_[(k * n_ + i) * n_ + j]; }
  // Rm_ijkl as documented above.
  const Taylor& riemann(int i, int j, int k, int l) const {
    return riemann_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  const Taylor& ricci(int i, int j) const { return ricci_(i, j); }
  const Taylor& scalar() const { return scalar_; }
  // Requires dim >= 3.
  const Taylor& schouten(int i, int j) const;
  const TaylorMatrix& metric_jet() const { return g_; }
  const TaylorMatrix& inverse_metric_jet() const { return ginv_; }
  const TaylorMatrix& ricci_jet() const { return ricci_; }
  const TaylorMatrix& schouten_jet() const;

  // Scalar field as a jet in this geometry's Taylor space.
  Taylor field(const Expr& f) const;
  TaylorVector vector_field(std::span<const Expr> components) const;

  // Covariant calculus on jets.
  TaylorVector gradient(const Taylor& f) const;                 // g^ij d_j f
  TaylorMatrix hessian(const Taylor& f) const;                  // d_i d_j f - Gamma^k_ij d_k f
  Taylor laplacian(const Taylor& f) const;                      // g^ij hess_ij
  Taylor divergence(const TaylorVector& x) const;               // d_i X^i + Gamma^i_im X^m
  TaylorMatrix lie_derivative(const TaylorVector& x) const;     // (L_X g)_ij
  // nabla_i T_jk for a symmetric (0,2) jet: entry [(i*n + j)*n + k].
  std::vector<Taylor> covariant_derivative(const TaylorMatrix& t) const;
  // (div T)_j = nabla_i T^i_j for a (1,1) jet T(i,j) = T^i_j.
  TaylorVector divergence_mixed(const TaylorMatrix& t) const;
  // g^ia g^jb S_ij S_ab at the base point.
  double norm_squared(const TaylorMatrix& s) const;

 private:
  int n_;
  std::vector<double> x_;
  TaylorSpacePtr space_;
  TaylorMatrix g_, ginv_;
  std::vector<Taylor> gamma_;
  std::vector<Taylor> riemann_;
  TaylorMatrix ricci_;
  Taylor scalar_;
  std::optional<TaylorMatrix> schouten_;
};

struct CurvaturePack {
  std::vector<double> point;
  TensorValue metric;          // (0,2)
  TensorValue inverse_metric;  // (2,0)
  TensorValue christoffel;     // (1,2): Gamma^k_ij at {k, i, j}
  TensorValue riemann;         // (0,4)
  TensorValue ricci;           // (0,2)
  double scalar = 0.0;
  // Absent for n = 2.
  std::optional<TensorValue> schouten;  // (0,2)
  std::optional<TensorValue> weyl;      // (0,4)
  std::optional<TensorValue> cotton;    // (0,3)

  int dim() const { return metric.dim(); }
  // g^{-1} A as a (1,1) tensor; requires n >= 3.
  TensorValue schouten_endomorphism() const;
};

// Throws GeometryError when x is outside the domain or g(x) is not PD.
CurvaturePack curvature_at(const MetricChart& chart, std::span<const double> x);
CurvaturePack curvature_pack(const LocalGeometry& geo);

// Cotton tensor from Ricci data: the Schouten-based C_ijk times (n - 2),
//   nabla_i Ric_jk - nabla_j Ric_ik - (g_jk nabla_i R - g_ik nabla_j R) / (2(n-1)).
TensorValue cotton_from_ricci(const LocalGeometry& geo);

struct ScalarFieldOps {
  TensorValue gradient;  // (1,0)
  TensorValue hessian;   // (0,2)
  double laplacian = 0.0;
};

struct VectorFieldOps {
  TensorValue lie_derivative;  // (0,2), (L_X g)_ij
  double divergence = 0.0;
};

ScalarFieldOps covariant_ops(const MetricChart& chart, std::span<const double> x, const Expr& f);
VectorFieldOps covariant_ops(const MetricChart& chart, std::span<const double> x,
                             std::span<const Expr> field);

// Conversions from jets to plain tensors (order-0 values).
TensorValue to_tensor(const TaylorMatrix& m, Valence valence);
TensorValue to_tensor(const TaylorVector& v, Valence valence);

}  // namespace sigmaflow
