#pragma once

// Quotient sigma_k flow  dg/dt = -(log(sigma_k / sigma_l) - log r_kl) g  on
// the round sphere S^n, restricted to rotationally symmetric conformal
// factors g = exp(-2u(theta)) g_S. The scalar evolution is
//   du/dt = 1/2 (log(sigma_k / sigma_l) - log r_kl),
//   log r_kl = int sigma_l log(sigma_k / sigma_l) dv / int sigma_l dv,
// discretized on theta_j = j pi / M, j = 0..M.

#include <string>
#include <vector>

#include "sigmaflow/expr.hpp"
#include "sigmaflow/parallel.hpp"

namespace sigmaflow {

struct FlowState {
  int n = 4;
  int k = 2;
  int l = 1;
  std::vector<double> theta;  // M + 1 nodes
  std::vector<double> u;
  double t = 0.0;

  int intervals() const { return static_cast<int>(theta.size()) - 1; }
  double spacing() const;

  // u0 is an expression in theta (spelled theta, t or x1). Throws
  // InputError for n < 3, grid < 32, or indices outside 0..n with k != l.
  static FlowState from_expr(int n, int k, int l, int grid, const Expr& u0);
  static FlowState round(int n, int k, int l, int grid);
};

// d/dtheta and d^2/dtheta^2 with 4th-order central differences; values
// beyond the poles come from even reflection, so u'(0) = u'(pi) = 0.
struct NodalDerivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};
NodalDerivatives derivatives(std::span<const double> values, double spacing);

// Eigenvalues of g^{-1}A at node j: radial
//   exp(2u) (1/2 + u'' + u'^2 / 2)
// and tangential, with multiplicity n - 1,
//   exp(2u) (1/2 + u' cot(theta) - u'^2 / 2),   u' cot(theta) -> u'' at the poles.
struct NodeSpectrum {
  double radial = 0.0;
  double tangential = 0.0;
};
std::vector<NodeSpectrum> node_spectra(const FlowState& state);

// sigma_0..sigma_n at every node, [node][j].
std::vector<std::vector<double>> nodal_sigma(const FlowState& state,
                                             Execution execution = Execution::parallel);

// int f dv_g = omega_{n-1} int_0^pi f exp(-n u) sin^{n-1}(theta) dtheta.
// Odd n: trapezoid rule (spectral for this even periodic integrand).
// Even n: Clenshaw-Curtis in cos(theta) on the same nodes.
double quadrature(const FlowState& state, std::span<const double> f);

struct FlowRhs {
  std::vector<double> dudt;
  std::vector<double> log_quotient;  // per node
  double log_r = 0.0;
};
// Throws ConeViolation naming the first offending node.
FlowRhs flow_rhs(const FlowState& state, Execution execution = Execution::parallel);

// dt = safety (d theta)^2 / (1 + sup |d rhs / d u''|).
double stable_dt(const FlowState& state, double safety = 0.5);

// One classical RK4 step.
FlowState step(const FlowState& state, double dt, Execution execution = Execution::parallel);

struct FlowSample {
  double t = 0.0;
  double e_l = 0.0;  // NaN when l = n/2
  double log_r = 0.0;
  double sup_dev = 0.0;  // sup |log(sigma_k / sigma_l) - log r_kl|
  double volume = 0.0;
  std::vector<double> e_all;  // int sigma_j dv, j = 0..n
};

FlowSample sample(const FlowState& state, Execution execution = Execution::parallel);

struct RunOptions {
  double t_end = 1.0;
  double dt = 0.0;  // 0: stable_dt of the initial state
  int sample_every = 1;
  double blowup = 10.0;
  Execution execution = Execution::parallel;
};

struct FlowResult {
  FlowState final_state;
  std::vector<FlowSample> samples;
  int steps = 0;
  double dt = 0.0;
  bool aborted = false;
  std::string abort_reason;
  double last_good_t = 0.0;
  bool e_l_omitted = false;  // l = n/2
};

// Integrates to t_end with a fixed step (t_end / ceil(t_end / dt)).
// A cone violation or sup|u| > blowup stops the run; the result keeps the
// samples and state up to the last good step.
FlowResult run(FlowState state, const RunOptions& options);

// int <X, grad sigma_k> dv_g for X = -sin(theta) d/dtheta, the conformal
// field of the round sphere, together with int |X(sigma_k)| dv_g.
struct FieldIntegral {
  double value = 0.0;
  double scale = 0.0;
};
FieldIntegral conformal_field_integral(const FlowState& state, int k);

double sphere_area(int dim);  // volume of the unit S^dim

}  // namespace sigmaflow
