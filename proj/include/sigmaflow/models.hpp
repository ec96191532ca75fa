#pragma once

// Built-in model manifolds with soliton data and golden curvature values.
//
// Names accepted by builtin():
//   euclidean:n  sphere:n  hyperbolic:n  product_line_sphere:n  example4:n
//   warped:<xi(t)>:<sphere|hyperbolic|euclidean>:<n>
// The warped model has dimension n with an (n-1)-dimensional fiber; its
// first coordinate is t (spelled t or x1 in xi).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigmaflow/curvature.hpp"

namespace sigmaflow {

struct GoldenEntry {
  // "scalar", "einstein" (c with Ric = c g) or "sigma_<j>".
  std::string quantity;
  double expected = 0.0;
  double tolerance = 0.0;  // relative to max(1, |expected|)
};

struct ModelManifold;

struct WarpedProductSpec {
  std::shared_ptr<const ModelManifold> fiber;
  Expr xi;  // function of variable 0 (t)
  Interval t{0.25, 1.25, false};
};

struct ModelManifold {
  std::string name;
  MetricChart chart;
  std::optional<Expr> potential;
  std::optional<std::vector<Expr>> vector_field;
  std::optional<Expr> lambda;
  int k = 0;
  int l = 0;
  std::vector<GoldenEntry> golden;
  std::optional<WarpedProductSpec> warping;

  int dim() const { return chart.dim(); }
  bool has_soliton() const { return lambda.has_value() && (potential || vector_field); }
};

ModelManifold euclidean(int n);
// Stereographic chart of the round sphere scaled by `scale`, with
// f = scale * h_v and lambda = h_v + log(sigma_k / sigma_l).
ModelManifold sphere(int n, int k = 2, int l = 1, double scale = 1.0);
// Poincare ball, f = h_v, lambda = -h_v + log(sigma_k / sigma_l).
ModelManifold hyperbolic(int n, int k = 3, int l = 1);
// R x S^n (dimension n + 1), f = a t + b, k = l = 1, lambda = 0.
ModelManifold product_line_sphere(int n);
// Diagonal metric g_ii = exp(2 u_i) of dimension n >= 4 with the Killing
// field X = (0, 1, 0, 1, ...), lambda = log(sigma_k / sigma_l) as stated
// for the Einstein case Ric = -g.
ModelManifold example4(int n, int k = 3, int l = 1);
// dt^2 + xi(t)^2 g_F.
ModelManifold warped(const Expr& xi, std::shared_ptr<const ModelManifold> fiber,
                     Interval t = {0.25, 1.25, false});

// Throws InputError for unknown names or bad dimensions.
ModelManifold builtin(std::string_view name, std::optional<int> k = {}, std::optional<int> l = {});

// Unit vector defining the sphere height function (length n + 1).
std::vector<double> sphere_axis(int n);
// Point of H^n (Lorentz norm -1) defining the hyperbolic height function.
std::vector<double> hyperbolic_axis(int n);

// Value of a golden quantity measured through the curvature pipeline.
double measure_golden(const ModelManifold& model, const GoldenEntry& entry,
                      std::span<const double> x);

// Ricci tensor of a warped product assembled from the fiber Ricci and xi:
//   Ric_tt = -(n-1) xi''/xi,  Ric_ta = 0,
//   Ric_ab = Ric^F_ab - ((n-2) xi'^2 + xi xi'') g^F_ab.
// Throws DomainError when xi <= 0 at the point.
TensorValue warped_ricci_formula(const WarpedProductSpec& spec, std::span<const double> x);

}  // namespace sigmaflow
