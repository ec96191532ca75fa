#include "sigmaflow/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sigmaflow/errors.hpp"
#include "sigmaflow/sigma.hpp"

namespace sigmaflow {

namespace {

std::string point_string(std::span<const double> x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void validate(const SolitonSpec& spec) {
  const int n = spec.chart.dim();
  if (spec.lambda.empty()) throw InputError("soliton spec needs lambda");
  if (spec.potential.has_value() == spec.vector_field.has_value()) {
    throw InputError("soliton spec needs exactly one of potential or vector_field");
  }
  if (spec.vector_field && static_cast<int>(spec.vector_field->size()) != n) {
    throw InputError("vector_field needs " + std::to_string(n) + " components");
  }
  if (spec.k < 0 || spec.k > n || spec.l < 0 || spec.l > n) {
    throw InputError("quotient indices must lie in 0..n");
  }
}

double metric_norm(const LocalGeometry& geo, const TaylorMatrix& s) {
  return std::sqrt(std::max(0.0, geo.norm_squared(s)));
}

double covector_norm(const LocalGeometry& geo, std::span<const double> b) {
  double acc = 0.0;
  for (int i = 0; i < geo.dim(); ++i)
    for (int j = 0; j < geo.dim(); ++j) acc += geo.ginv(i, j).value() * b[i] * b[j];
  return std::sqrt(std::max(0.0, acc));
}

// Runs f(geo, i) for every probe, annotating failures with the point.
template <class F>
void map_probes(const SolitonSpec& spec, std::span<const std::vector<double>> probes, Execution exec,
                F&& f) {
  for_each_index(probes.size(), exec, [&](std::size_t i) {
    const auto& x = probes[i];
    try {
      const LocalGeometry geo(spec.chart, x);
      f(geo, i);
    } catch (const ConeViolation& e) {
      throw ConeViolation(std::string(e.what()) + " at " + point_string(x), e.sigma_k(), e.sigma_l());
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at " + point_string(x));
    }
  });
}

SolitonType sign_pattern(const Classification& c, double tolerance) {
  if (std::max(std::fabs(c.lambda_min), std::fabs(c.lambda_max)) <= tolerance) return SolitonType::steady;
  if (c.lambda_max < 0.0) return SolitonType::expanding;
  if (c.lambda_min > 0.0) return SolitonType::shrinking;
  return SolitonType::indefinite;
}

}  // namespace

const char* to_string(SolitonType t) {
  switch (t) {
    case SolitonType::expanding:
      return "expanding";
    case SolitonType::steady:
      return "steady";
    case SolitonType::shrinking:
      return "shrinking";
    case SolitonType::indefinite:
      return "indefinite";
  }
  return "indefinite";
}

SolitonSpec SolitonSpec::from_model(const ModelManifold& model) {
  if (!model.has_soliton()) throw InputError("model '" + model.name + "' carries no soliton data");
  return SolitonSpec{model.chart, model.potential, model.vector_field, *model.lambda, model.k, model.l};
}

std::vector<PointResidual> residual_points(const SolitonSpec& spec,
                                           std::span<const std::vector<double>> probes,
                                           const SolitonOptions& options) {
  validate(spec);
  const int n = spec.chart.dim();
  std::vector<PointResidual> out(probes.size());
  map_probes(spec, probes, options.execution, [&](const LocalGeometry& geo, std::size_t i) {
    const SigmaProfile prof = sigma_profile(geo, spec.k, spec.l);
    PointResidual r;
    r.lambda = evaluate(spec.lambda, geo.point());
    r.psi = prof.log_quotient - r.lambda;

    TaylorMatrix half_lie;
    if (spec.gradient() && !options.gradient_as_vector) {
      half_lie = geo.hessian(geo.field(*spec.potential));
    } else {
      const TaylorVector x = spec.gradient() ? geo.gradient(geo.field(*spec.potential))
                                             : geo.vector_field(*spec.vector_field);
      half_lie = geo.lie_derivative(x);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) half_lie(a, b) *= 0.5;
    }
    r.lie_norm = 2.0 * metric_norm(geo, half_lie);
    TaylorMatrix e = half_lie;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) e(a, b) -= geo.g(a, b) * r.psi;
    r.residual = metric_norm(geo, e);
    out[i] = r;
  });
  return out;
}

ResidualReport soliton_residual(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                                const SolitonOptions& options) {
  if (probes.empty()) throw InputError("soliton residual needs at least one probe");
  const std::vector<PointResidual> pts = residual_points(spec, probes, options);
  ResidualReport rep;
  rep.probes = static_cast<int>(pts.size());
  double sum = 0.0;
  rep.classification.lambda_min = pts[0].lambda;
  rep.classification.lambda_max = pts[0].lambda;
  for (const auto& p : pts) {
    rep.residual_sup = std::max(rep.residual_sup, p.residual);
    rep.lie_sup = std::max(rep.lie_sup, p.lie_norm);
    rep.psi_sup = std::max(rep.psi_sup, std::fabs(p.psi));
    rep.classification.lambda_min = std::min(rep.classification.lambda_min, p.lambda);
    rep.classification.lambda_max = std::max(rep.classification.lambda_max, p.lambda);
    sum += p.residual;
  }
  rep.residual_mean = sum / pts.size();
  rep.classification.type = sign_pattern(rep.classification, options.tolerance);
  rep.trivial = rep.lie_sup < options.tolerance && rep.psi_sup < options.tolerance &&
                rep.residual_sup < options.tolerance;
  return rep;
}

Classification classify(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                        double tolerance) {
  if (probes.empty()) throw InputError("classification needs at least one probe");
  Classification c;
  c.lambda_min = c.lambda_max = evaluate(spec.lambda, probes[0]);
  for (const auto& x : probes) {
    const double v = evaluate(spec.lambda, x);
    c.lambda_min = std::min(c.lambda_min, v);
    c.lambda_max = std::max(c.lambda_max, v);
  }
  c.type = sign_pattern(c, tolerance);
  return c;
}

LemmaResiduals lemma_structural_check(const SolitonSpec& spec,
                                      std::span<const std::vector<double>> probes,
                                      Execution execution) {
  validate(spec);
  if (!spec.gradient()) throw InputError("structural identities need a gradient soliton");
  const int n = spec.chart.dim();
  std::vector<LemmaResiduals> pts(probes.size());
  map_probes(spec, probes, execution, [&](const LocalGeometry& geo, std::size_t i) {
    const Taylor f = geo.field(*spec.potential);
    const Taylor psi = log_quotient_jet(geo, spec.k, spec.l) - geo.field(spec.lambda);
    const TaylorVector grad_f = geo.gradient(f);
    LemmaResiduals r;
    r.a = std::fabs(geo.laplacian(f).value() - n * psi.value());

    std::vector<double> b(n);
    for (int a = 0; a < n; ++a) {
      double s = (n - 1) * psi.d(a);
      for (int q = 0; q < n; ++q) s += geo.ricci(a, q).value() * grad_f[q].value();
      b[a] = s;
    }
    r.b = covector_norm(geo, b);

    double dr_df = 0.0;
    for (int a = 0; a < n; ++a) dr_df += geo.scalar().d(a) * grad_f[a].value();
    r.c = std::fabs((n - 1) * geo.laplacian(psi).value() + 0.5 * dr_df +
                    psi.value() * geo.scalar().value());
    pts[i] = r;
  });
  LemmaResiduals out;
  for (const auto& r : pts) {
    out.a = std::max(out.a, r.a);
    out.b = std::max(out.b, r.b);
    out.c = std::max(out.c, r.c);
  }
  return out;
}

ObataReport obata_check(const SolitonSpec& spec, std::span<const std::vector<double>> probes,
                        double scalar_tolerance, Execution execution) {
  validate(spec);
  if (probes.empty()) throw InputError("Obata check needs at least one probe");
  const int n = spec.chart.dim();
  std::vector<double> scalar(probes.size());
  std::vector<double> residual(probes.size());
  map_probes(spec, probes, execution, [&](const LocalGeometry& geo, std::size_t i) {
    const Taylor psi = log_quotient_jet(geo, spec.k, spec.l) - geo.field(spec.lambda);
    const double r = geo.scalar().value();
    TaylorMatrix h = geo.hessian(psi);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) h(a, b) += geo.g(a, b) * (r / (n * (n - 1.0)) * psi.value());
    scalar[i] = r;
    residual[i] = metric_norm(geo, h);
  });
  double mean = 0.0;
  for (double r : scalar) mean += r;
  mean /= scalar.size();
  ObataReport rep;
  for (double r : scalar) rep.scalar_spread = std::max(rep.scalar_spread, std::fabs(r - mean));
  rep.constant_scalar = rep.scalar_spread < scalar_tolerance;
  if (rep.constant_scalar) {
    for (double r : residual) rep.residual = std::max(rep.residual, r);
  }
  return rep;
}

}  // namespace sigmaflow
