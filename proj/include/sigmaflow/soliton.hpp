#pragma once

// Quotient almost Yamabe soliton checks:
//   1/2 L_X g = (log(sigma_k / sigma_l) - lambda) g,   X = grad f in the gradient case.

#include <optional>
#include <span>
#include <vector>

#include "sigmaflow/curvature.hpp"
#include "sigmaflow/models.hpp"
#include "sigmaflow/parallel.hpp"

namespace sigmaflow {

inline constexpr double kTrivialTolerance = 1e-7;

struct SolitonSpec {
  MetricChart chart;
  std::optional<Expr> potential;                 // gradient case
  std::optional<std::vector<Expr>> vector_field;  // general case
  Expr lambda;
  int k = 1;
  int l = 1;

  bool gradient() const { return potential.has_value(); }
  // Throws InputError when the model carries no soliton data.
  static SolitonSpec from_model(const ModelManifold& model);
};

enum class SolitonType { expanding, steady, shrinking, indefinite };
const char* to_string(SolitonType t);

struct PointResidual {
  double residual = 0.0;  // |1/2 L_X g - psi g|_g
  double lie_norm = 0.0;  // |L_X g|_g
  double psi = 0.0;       // log(sigma_k / sigma_l) - lambda
  double lambda = 0.0;
};

struct Classification {
  SolitonType type = SolitonType::steady;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct ResidualReport {
  int probes = 0;
  double residual_sup = 0.0;
  double residual_mean = 0.0;
  double lie_sup = 0.0;
  double psi_sup = 0.0;
  Classification classification;
  bool trivial = false;
};

struct SolitonOptions {
  double tolerance = kTrivialTolerance;
  Execution execution = Execution::parallel;
  // Evaluate a gradient spec as the vector field g^{-1} df through the Lie
  // derivative instead of the Hessian.
  bool gradient_as_vector = false;
};

// Per-probe values in probe order. Throws ConeViolation (with the point in
// the message) or DomainError from the first failing probe.
std::vector<PointResidual> residual_points(const SolitonSpec& spec,
                                           std::span<const std::vector<double>> probes,
                                           const SolitonOptions& options = {});

ResidualReport soliton_residual(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                                const SolitonOptions& options = {});

// Sign pattern of lambda; |lambda| <= tolerance everywhere counts as steady.
Classification classify(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                        double tolerance = kTrivialTolerance);

// Sup over probes of the structural identities of a gradient soliton:
//   (a) lap f - n psi
//   (b) |(n-1) d psi + Ric(grad f)|_g
//   (c) (n-1) lap psi + 1/2 <grad R, grad f> + psi R
struct LemmaResiduals {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
LemmaResiduals lemma_structural_check(const SolitonSpec& spec,
                                      std::span<const std::vector<double>> probes,
                                      Execution execution = Execution::parallel);

// hess psi + R / (n(n-1)) psi g, valid when R is constant.
struct ObataReport {
  bool constant_scalar = false;
  double scalar_spread = 0.0;  // sup |R - mean R|
  double residual = 0.0;       // sup |.|_g; 0 when the precondition fails
};
ObataReport obata_check(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                        double scalar_tolerance = 1e-6, Execution execution = Execution::parallel);

}  // namespace sigmaflow
