#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigmaflow/curvature.hpp"
#include "sigmaflow/errors.hpp"
#include "sigmaflow/flow.hpp"
#include "sigmaflow/hodge.hpp"
#include "sigmaflow/probes.hpp"
#include "sigmaflow/sigma.hpp"
#include "sigmaflow/soliton.hpp"

namespace sigmaflow::cli {

namespace {

using nlohmann::json;

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw InputError("bad coordinate '" + item + "' in --point");
    out.push_back(v);
  }
  return out;
}

Expr parse_field(const json& j, const std::string& where, const ParseOptions& opts = {}) {
  try {
    if (j.is_number()) return Expr::number(j.get<double>());
    if (j.is_string()) return parse(j.get<std::string>(), opts);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + " must be a string expression or a number");
}

int get_int(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

// Common model selection for curvature and verify.
struct ModelArgs {
  std::string builtin;
  std::string spec;
  std::optional<int> k;
  std::optional<int> l;
  std::string lambda;
};

ModelManifold load_model(const ModelArgs& a) {
  if (a.builtin.empty() == a.spec.empty()) throw InputError("give exactly one of --builtin or a spec file");
  ModelManifold m = a.builtin.empty() ? parse_metric_spec(read_file(a.spec), a.spec)
                                      : builtin(a.builtin, a.k, a.l);
  if (!a.spec.empty()) {
    if (a.k) m.k = *a.k;
    if (a.l) m.l = *a.l;
  }
  if (!a.lambda.empty()) m.lambda = parse(a.lambda);
  return m;
}

void add_model_options(CLI::App* app, ModelArgs& a) {
  app->add_option("spec,--spec", a.spec, "metric spec file (JSON)");
  app->add_option("--builtin", a.builtin, "builtin model, e.g. sphere:4");
  app->add_option("--k", a.k, "numerator index k");
  app->add_option("--l", a.l, "denominator index l");
  app->add_option("--lambda", a.lambda, "override lambda expression");
}

json matrix_json(const TensorValue& t) {
  json rows = json::array();
  for (int i = 0; i < t.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < t.dim(); ++j) row.push_back(t(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---- curvature ----

struct CurvatureArgs {
  ModelArgs model;
  std::string point;
  bool json = false;
};

int cmd_curvature(const CurvatureArgs& a, std::ostream& out, std::ostream& err) {
  const ModelManifold m = load_model(a.model);
  const int n = m.dim();
  std::vector<double> x;
  if (a.point.empty()) {
    for (const auto& iv : m.chart.domain()) x.push_back(0.5 * (iv.lo + iv.hi));
  } else {
    x = parse_point(a.point);
  }
  if (static_cast<int>(x.size()) != n) {
    throw InputError("--point needs " + std::to_string(n) + " coordinates");
  }
  const CurvaturePack pack = curvature_at(m.chart, x);

  double traceless = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      traceless = std::max(traceless, std::fabs(pack.ricci(i, j) - pack.scalar / n * pack.metric(i, j)));

  std::optional<SigmaProfile> prof;
  std::string cone_error;
  const bool quotient = m.k != 0 || m.l != 0;
  if (n >= 3) {
    prof = sigma_profile(pack);
    if (quotient) {
      try {
        prof = sigma_profile(pack, m.k, m.l);
      } catch (const ConeViolation& e) {
        cone_error = e.what();
      }
    }
  }

  if (a.json) {
    json j;
    j["model"] = m.name;
    j["dim"] = n;
    j["point"] = x;
    j["scalar"] = pack.scalar;
    j["metric"] = matrix_json(pack.metric);
    j["ricci"] = matrix_json(pack.ricci);
    j["ricci_minus_metric_sup"] = traceless;
    if (pack.schouten) {
      j["schouten"] = matrix_json(*pack.schouten);
      j["weyl_sup"] = pack.weyl->sup_norm();
      j["cotton_sup"] = pack.cotton->sup_norm();
    }
    if (prof) {
      j["eigenvalues"] = prof->eigenvalues;
      j["sigma"] = prof->sigma;
      if (quotient) {
        j["k"] = m.k;
        j["l"] = m.l;
        j["cone"] = cone_error.empty();
        if (cone_error.empty()) j["log_quotient"] = prof->log_quotient;
      }
    }
    out << j.dump(2) << "\n";
  } else {
    out << "model: " << m.name << "\n";
    out << "point:";
    for (double v : x) out << " " << fmt(v);
    out << "\n";
    out << "R = " << fmt(pack.scalar, "%.6f") << "\n";
    out << "ricci_minus_metric_sup = " << fmt(traceless, "%.3e") << "\n";
    if (pack.schouten) {
      out << "weyl_sup = " << fmt(pack.weyl->sup_norm(), "%.3e") << "\n";
      out << "cotton_sup = " << fmt(pack.cotton->sup_norm(), "%.3e") << "\n";
    }
    if (prof) {
      out << "eigenvalues(g^-1 A) =";
      for (double v : prof->eigenvalues) out << " " << fmt(v);
      out << "\n";
      for (int q = 1; q <= n; ++q) out << "sigma_" << q << " = " << fmt(prof->sigma[q]) << "\n";
      if (quotient && cone_error.empty()) {
        out << "log(sigma_" << m.k << "/sigma_" << m.l << ") = " << fmt(prof->log_quotient) << "\n";
      }
    }
  }
  if (!cone_error.empty()) {
    err << "error: " << cone_error << "\n";
    return kGeometryError;
  }
  return kPass;
}

// ---- verify ----

struct VerifyArgs {
  ModelArgs model;
  int probes = 64;
  double tolerance = kTrivialTolerance;
  std::uint64_t seed = kDefaultSeed;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  if (a.probes < 1) throw InputError("--probes must be at least 1");
  if (!(a.tolerance > 0.0)) throw InputError("--tolerance must be positive");
  const ModelManifold m = load_model(a.model);
  const SolitonSpec spec = SolitonSpec::from_model(m);
  const auto probes = probe_points(m.chart.domain(), a.probes, a.seed);
  SolitonOptions opts;
  opts.tolerance = a.tolerance;
  const ResidualReport rep = soliton_residual(spec, probes, opts);
  std::optional<LemmaResiduals> lemma;
  std::optional<ObataReport> obata;
  if (spec.gradient()) {
    lemma = lemma_structural_check(spec, probes);
    obata = obata_check(spec, probes);
  }
  const bool pass = rep.residual_sup < a.tolerance;

  if (a.json) {
    json j;
    j["model"] = m.name;
    j["k"] = spec.k;
    j["l"] = spec.l;
    j["probes"] = rep.probes;
    j["seed"] = a.seed;
    j["tolerance"] = a.tolerance;
    j["residual_sup"] = rep.residual_sup;
    j["residual_mean"] = rep.residual_mean;
    j["lie_sup"] = rep.lie_sup;
    j["psi_sup"] = rep.psi_sup;
    j["lambda_min"] = rep.classification.lambda_min;
    j["lambda_max"] = rep.classification.lambda_max;
    j["classification"] = to_string(rep.classification.type);
    j["trivial"] = rep.trivial;
    if (lemma) j["lemma"] = {{"a", lemma->a}, {"b", lemma->b}, {"c", lemma->c}};
    if (obata) {
      j["obata"] = {{"constant_scalar", obata->constant_scalar},
                    {"scalar_spread", obata->scalar_spread},
                    {"residual", obata->residual}};
    }
    j["pass"] = pass;
    out << j.dump(2) << "\n";
  } else {
    out << "model: " << m.name << "\n";
    out << "k = " << spec.k << ", l = " << spec.l << "\n";
    out << "probes: " << rep.probes << " (seed " << a.seed << ")\n";
    out << "residual_sup: " << fmt(rep.residual_sup, "%.3e") << "\n";
    out << "residual_mean: " << fmt(rep.residual_mean, "%.3e") << "\n";
    out << "lie_sup: " << fmt(rep.lie_sup, "%.3e") << "\n";
    out << "psi_sup: " << fmt(rep.psi_sup, "%.3e") << "\n";
    out << "lambda range: [" << fmt(rep.classification.lambda_min) << ", "
        << fmt(rep.classification.lambda_max) << "]\n";
    out << "classification: " << to_string(rep.classification.type) << "\n";
    out << "trivial: " << (rep.trivial ? "yes" : "no") << "\n";
    if (lemma) {
      out << "lemma (a): " << fmt(lemma->a, "%.3e") << "\n";
      out << "lemma (b): " << fmt(lemma->b, "%.3e") << "\n";
      out << "lemma (c): " << fmt(lemma->c, "%.3e") << "\n";
    }
    if (obata) {
      if (obata->constant_scalar) {
        out << "obata: " << fmt(obata->residual, "%.3e") << "\n";
      } else {
        out << "obata: skipped (scalar curvature varies by " << fmt(obata->scalar_spread, "%.3e") << ")\n";
      }
    }
    out << "result: " << (pass ? "PASS" : "FAIL") << " (tolerance " << fmt(a.tolerance, "%.1e") << ")\n";
  }
  return pass ? kPass : kVerifyFail;
}

// ---- flow ----

struct FlowArgs {
  int n = 4;
  int k = 2;
  int l = 1;
  int grid = 64;
  std::string u0 = "0";
  double t_end = 1.0;
  double dt = 0.0;
  int every = 1;
  std::string csv = "-";
  std::string state;
};

void write_csv(std::ostream& os, const std::vector<FlowSample>& samples) {
  os << "t,E_l,log_r_kl,sup_dev,volume\n";
  for (const auto& s : samples) {
    os << fmt(s.t, "%.17g") << "," << fmt(s.e_l, "%.17g") << "," << fmt(s.log_r, "%.17g") << ","
       << fmt(s.sup_dev, "%.17g") << "," << fmt(s.volume, "%.17g") << "\n";
  }
}

int cmd_flow(const FlowArgs& a, std::ostream& out, std::ostream& err) {
  ParseOptions opts;
  opts.aliases.emplace("theta", 0);
  opts.aliases.emplace("t", 0);
  FlowState s0 = FlowState::from_expr(a.n, a.k, a.l, a.grid, parse(a.u0, opts));
  RunOptions ro;
  ro.t_end = a.t_end;
  ro.dt = a.dt;
  ro.sample_every = a.every;
  if (a.t_end < 0.0) throw InputError("--t-end must be non-negative");
  if (a.dt < 0.0) throw InputError("--dt must be non-negative");
  const FlowResult r = run(std::move(s0), ro);
  if (r.e_l_omitted) err << "warning: E_{n/2} diagnostic omitted (l = n/2)\n";

  if (a.csv == "-") {
    write_csv(out, r.samples);
  } else {
    std::ofstream f(a.csv);
    if (!f) throw InputError("cannot write '" + a.csv + "'");
    write_csv(f, r.samples);
  }
  if (!a.state.empty()) {
    std::ofstream f(a.state);
    if (!f) throw InputError("cannot write '" + a.state + "'");
    json j;
    j["n"] = r.final_state.n;
    j["k"] = r.final_state.k;
    j["l"] = r.final_state.l;
    j["t"] = r.final_state.t;
    j["grid"] = r.final_state.theta;
    j["u"] = r.final_state.u;
    f << j.dump(2) << "\n";
  }
  if (a.csv != "-" && !r.samples.empty()) {
    const FlowSample& first = r.samples.front();
    const FlowSample& last = r.samples.back();
    out << "steps: " << r.steps << ", dt: " << fmt(r.dt, "%.6e") << ", t: " << fmt(r.final_state.t) << "\n";
    if (!r.e_l_omitted) {
      out << "E_" << a.l << " relative drift: "
          << fmt(std::fabs(last.e_l - first.e_l) / std::fabs(first.e_l), "%.3e") << "\n";
    }
    out << "sup_dev: " << fmt(first.sup_dev, "%.3e") << " -> " << fmt(last.sup_dev, "%.3e") << "\n";
  }
  if (r.aborted) {
    err << "error: flow aborted: " << r.abort_reason << "; last good t = " << fmt(r.last_good_t, "%.17g")
        << "\n";
    return kFlowAbort;
  }
  return kPass;
}

// ---- hodge ----

struct HodgeArgs {
  int n = 2;
  int grid = 64;
  std::vector<std::string> fields;
  bool json = false;
};

int cmd_hodge(const HodgeArgs& a, std::ostream& out, std::ostream&) {
  std::vector<Expr> comps;
  for (const auto& f : a.fields) {
    std::stringstream ss(f);
    std::string item;
    while (std::getline(ss, item, ',')) comps.push_back(parse(item));
  }
  const TorusField x = TorusField::sample(a.n, a.grid, comps);
  const HodgeDecomposition d = hodge_decompose(x);
  TorusField recon = d.gradient;
  for (int c = 0; c < x.n; ++c)
    for (std::size_t p = 0; p < x.points(); ++p)
      recon.components[c][p] += d.remainder.components[c][p] - x.components[c][p];
  const double xx = inner_product(x, x);
  const double ortho = std::fabs(inner_product(d.gradient, d.remainder)) / std::max(xx, 1e-300);
  const HodgeDecomposition again = hodge_decompose(d.remainder);

  const std::vector<std::pair<const char*, double>> rows{
      {"h_sup", sup_norm(d.potential)},
      {"grad_sup", sup_norm(d.gradient)},
      {"Y_sup", sup_norm(d.remainder)},
      {"div_Y_sup", sup_norm(spectral_divergence(d.remainder))},
      {"reconstruction", sup_norm(recon)},
      {"orthogonality", ortho},
      {"idempotence", sup_norm(again.potential)},
      {"mean_divergence", d.mean_divergence},
  };
  if (a.json) {
    json j;
    j["n"] = a.n;
    j["grid"] = a.grid;
    for (const auto& [k, v] : rows) j[k] = v;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [k, v] : rows) out << k << ": " << fmt(v, "%.3e") << "\n";
  }
  return kPass;
}

}  // namespace

ModelManifold parse_metric_spec(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON", e.byte);
  }
  if (!doc.is_object()) throw InputError("metric spec must be a JSON object");
  try {
    const int n = get_int(doc, "dim");
    if (n < 2 || n > kMaxTaylorDim) throw InputError("\"dim\" must be in 2..8");
    const json& g = doc.at("metric");
    if (!g.is_array() || static_cast<int>(g.size()) != n) throw InputError("\"metric\" must be an n x n array");
    std::vector<Expr> comps;
    for (int i = 0; i < n; ++i) {
      if (!g[i].is_array() || static_cast<int>(g[i].size()) != n) {
        throw InputError("\"metric\" must be an n x n array");
      }
      for (int j = 0; j < n; ++j) {
        comps.push_back(parse_field(g[i][j], "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
      }
    }
    const json& dom = doc.at("domain");
    if (!dom.is_array() || static_cast<int>(dom.size()) != n) throw InputError("\"domain\" needs n intervals");
    std::vector<bool> periodic(n, false);
    if (doc.contains("periodic")) {
      const json& p = doc["periodic"];
      if (!p.is_array() || static_cast<int>(p.size()) != n) throw InputError("\"periodic\" needs n flags");
      for (int i = 0; i < n; ++i) {
        if (!p[i].is_boolean()) throw InputError("\"periodic\" entries must be booleans");
        periodic[i] = p[i].get<bool>();
      }
    }
    std::vector<Interval> domain;
    for (int i = 0; i < n; ++i) {
      const json& iv = dom[i];
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
        throw InputError("\"domain\" entries must be [lo, hi]");
      }
      domain.push_back({iv[0].get<double>(), iv[1].get<double>(), periodic[i]});
    }
    ModelManifold m{name, MetricChart(n, std::move(comps), std::move(domain)), {}, {}, {}, 0, 0, {}, {}};
    if (doc.contains("potential")) m.potential = parse_field(doc["potential"], "potential");
    if (doc.contains("vector_field")) {
      const json& v = doc["vector_field"];
      if (!v.is_array() || static_cast<int>(v.size()) != n) throw InputError("\"vector_field\" needs n entries");
      std::vector<Expr> x;
      for (int i = 0; i < n; ++i) x.push_back(parse_field(v[i], "vector_field[" + std::to_string(i) + "]"));
      m.vector_field = std::move(x);
    }
    if (m.potential && m.vector_field) throw InputError("give either \"potential\" or \"vector_field\", not both");
    if (doc.contains("lambda")) m.lambda = parse_field(doc["lambda"], "lambda");
    if (doc.contains("k") || doc.contains("l")) {
      m.k = get_int(doc, "k");
      m.l = get_int(doc, "l");
      if (m.k < 0 || m.k > n || m.l < 0 || m.l > n) throw InputError("\"k\" and \"l\" must lie in 0..n");
      if (m.k == m.l) {
        const bool zero = m.lambda && m.lambda->arity() == 0 && evaluate(*m.lambda, {}) == 0.0;
        if (!zero) throw InputError("k = l is accepted only for a trivial quotient with lambda = 0");
      }
    } else if (m.lambda) {
      throw InputError("soliton data needs \"k\" and \"l\"");
    }
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("metric spec: ") + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigma_k curvature, quotient soliton and flow toolkit", "sigmaflow"};
  app.require_subcommand(1);

  CurvatureArgs ca;
  auto* curv = app.add_subcommand("curvature", "curvature and sigma_k report at a point");
  add_model_options(curv, ca.model);
  curv->add_option("--point", ca.point, "comma-separated coordinates (default: domain center)");
  curv->add_flag("--json", ca.json, "JSON output");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "soliton residual report over probe points");
  add_model_options(ver, va.model);
  ver->add_option("--probes", va.probes, "number of probe points");
  ver->add_option("--tolerance", va.tolerance, "pass threshold for the residual sup-norm");
  ver->add_option("--seed", va.seed, "probe sequence seed");
  ver->add_flag("--json", va.json, "JSON output");

  FlowArgs fa;
  auto* fl = app.add_subcommand("flow", "rotationally symmetric quotient flow on S^n");
  fl->add_option("--n", fa.n, "sphere dimension")->required();
  fl->add_option("--k", fa.k, "numerator index k");
  fl->add_option("--l", fa.l, "denominator index l");
  fl->add_option("--grid", fa.grid, "latitude intervals M");
  fl->add_option("--u0", fa.u0, "initial u(theta)");
  fl->add_option("--t-end", fa.t_end, "final time");
  fl->add_option("--dt", fa.dt, "time step (default: stability bound)");
  fl->add_option("--every", fa.every, "steps between CSV rows");
  fl->add_option("--csv", fa.csv, "CSV output path, - for stdout");
  fl->add_option("--state", fa.state, "final state JSON path");

  HodgeArgs ha;
  auto* ho = app.add_subcommand("hodge", "Hodge decomposition on the flat torus");
  ho->add_option("--n", ha.n, "torus dimension (2 or 3)");
  ho->add_option("--grid", ha.grid, "points per axis (power of two >= 16)");
  ho->add_option("--field", ha.fields, "components, comma separated or repeated")->required();
  ho->add_flag("--json", ha.json, "JSON output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kInputError;
  }

  try {
    if (curv->parsed()) return cmd_curvature(ca, out, err);
    if (ver->parsed()) return cmd_verify(va, out, err);
    if (fl->parsed()) return cmd_flow(fa, out, err);
    if (ho->parsed()) return cmd_hodge(ha, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kGeometryError;
  }
  return kInputError;
}

}  // namespace sigmaflow::cli
