// polydisc: batch workbench for truncated-series computations on the
// polydisc. Subcommands parse series/moments/operators, dispatch the
// library, and emit JSON or CSV reports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polydisc/builtins.hpp"
#include "polydisc/cyclicity.hpp"
#include "polydisc/entire_factor.hpp"
#include "polydisc/functionals.hpp"
#include "polydisc/operators.hpp"

using namespace polydisc;
using ordered_json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string builtin;
  std::string space = "h2:n=1";
  int cap = 16;
  int degree_max = 12;
  std::string radii;  // comma-separated override
  int nodes = 0;
  double tol_outer = 1e-3;
  double p = 2.0;
  double radius = 0.0;
  unsigned long seed = 0;
  std::string out;
  std::string format = "json";
  // factor-specific
  int growth_m = 2;
  double growth_A = 0.0;
  double growth_B = 0.0;
  bool input_is_exponent = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad radius literal: " + item);
    }
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty radius list");
  return out;
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  if (!cfg.input.empty()) j["input"] = cfg.input;
  if (!cfg.builtin.empty()) j["builtin"] = cfg.builtin;
  j["space"] = cfg.space;
  j["cap"] = cfg.cap;
  j["degree_max"] = cfg.degree_max;
  if (!cfg.radii.empty()) j["radii"] = cfg.radii;
  if (cfg.nodes > 0) j["nodes"] = cfg.nodes;
  j["seed"] = cfg.seed;
  return j;
}

ordered_json report_envelope(const RunConfig& cfg, ordered_json tolerances,
                             ordered_json result) {
  ordered_json j;
  j["tool"] = "polydisc";
  j["version"] = kToolVersion;
  j["config"] = config_echo(cfg);
  j["tolerances"] = std::move(tolerances);
  j["result"] = std::move(result);
  return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(cfg.out);
    if (!out) throw Error(ErrorCode::ParseError, "cannot open output: " + cfg.out);
    out << text;
  }
}

ordered_json complex_json(cplx v) {
  return ordered_json{{"re", v.real()}, {"im", v.imag()}};
}

TruncatedSeries load_series(const RunConfig& cfg) {
  if (cfg.input.empty())
    throw Error(ErrorCode::ParseError, "this command needs --input <series.json>");
  return series_from_json(read_file(cfg.input));
}

int cmd_norm(const RunConfig& cfg) {
  TruncatedSeries f = load_series(cfg);
  SpaceSpec spec = SpaceSpec::parse(cfg.space);
  ordered_json result;
  if (!cfg.radii.empty()) {
    int K = cfg.nodes > 0 ? cfg.nodes : default_points_per_circle(f.degree_cap());
    PMeanReport rep = p_mean_schedule(f, cfg.p, parse_radii(cfg.radii), K);
    result["p"] = rep.p;
    result["radii"] = rep.radii;
    result["values"] = rep.values;
    result["monotone"] = rep.monotone;
    result["nodes_per_circle"] = K;
    result["value"] = rep.sup_estimate;
  } else if (cfg.radius > 0.0) {
    int K = cfg.nodes > 0 ? cfg.nodes : default_points_per_circle(f.degree_cap());
    QuadratureRule rule(f.n(), K, cfg.radius);
    result["p"] = cfg.p;
    result["radius"] = cfg.radius;
    result["nodes_per_circle"] = K;
    result["value"] = p_mean(rule, f, cfg.p);
  } else {
    result["value"] = space_norm(spec, f);
  }
  emit(cfg, report_envelope(cfg, {{"coefficient_equality", 1e-12}}, result).dump(2));
  return 0;
}

int cmd_gram(const RunConfig& cfg) {
  SpaceSpec spec = SpaceSpec::parse(cfg.space);
  std::vector<TruncatedSeries> basis;
  std::vector<std::string> labels;
  if (!cfg.input.empty()) {
    // shifted basis {z^alpha f} of the approximant problem for the input f
    TruncatedSeries f = load_series(cfg);
    int N = cfg.degree_max;
    Truncation work(f.n(), f.degree_support() + N);
    Truncation poly(f.n(), N);
    TruncatedSeries fw = f.embedded(work.degree_cap());
    for (int j = 0; j < poly.basis_size(); ++j) {
      basis.push_back(
          series_mul(TruncatedSeries::monomial(work, poly.index(j)), fw));
      std::ostringstream lab;
      lab << "z^(";
      for (int i = 0; i < poly.index(j).n(); ++i)
        lab << (i ? " " : "") << poly.index(j)[i];
      lab << ")f";
      labels.push_back(lab.str());
    }
  } else {
    Truncation tr(spec.n(), cfg.cap);
    for (int r = 0; r < tr.basis_size(); ++r) {
      basis.push_back(TruncatedSeries::monomial(tr, tr.index(r)));
      std::ostringstream lab;
      lab << "z^(";
      for (int i = 0; i < tr.index(r).n(); ++i) lab << (i ? " " : "") << tr.index(r)[i];
      lab << ")";
      labels.push_back(lab.str());
    }
  }
  emit(cfg, gram_to_csv(gram(spec, basis, labels)));
  return 0;
}

int cmd_cyclicity(const RunConfig& cfg) {
  TruncatedSeries f = load_series(cfg);
  SpaceSpec spec = SpaceSpec::parse(cfg.space);
  ApproximantResult curve = cyclicity_curve(f, spec, cfg.degree_max);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# verdict=" << to_string(curve.verdict)
       << " decay_exponent=" << curve.decay_exponent << "\n"
       << curve_to_csv(curve);
    emit(cfg, os.str());
    return 0;
  }
  ordered_json result;
  result["verdict"] = to_string(curve.verdict);
  result["monotone"] = curve.monotone;
  result["decay_exponent"] = curve.decay_exponent;
  result["degrees"] = curve.degrees;
  result["distances"] = curve.distances;
  result["conditions"] = curve.conditions;
  emit(cfg,
       report_envelope(cfg, {{"plateau_tol", 1e-2}, {"decay_floor", 1e-6}}, result)
           .dump(2));
  return 0;
}

int cmd_outer(const RunConfig& cfg) {
  OuterOptions opts;
  opts.tol_outer = cfg.tol_outer;
  if (cfg.nodes > 0) opts.points_per_circle = cfg.nodes;
  if (!cfg.radii.empty()) opts.radii = parse_radii(cfg.radii);

  OuterReport rep;
  if (!cfg.builtin.empty()) {
    auto ev = named_evaluator(cfg.builtin);
    if (!ev)
      throw Error(ErrorCode::ParseError, "unknown builtin evaluator: " + cfg.builtin);
    rep = outer_test(*ev, opts);
  } else {
    rep = outer_test(load_series(cfg), opts);
  }

  ordered_json result;
  result["function"] = rep.function_name;
  result["lhs"] = rep.lhs;
  result["radii"] = rep.radii;
  result["rhs"] = rep.rhs;
  result["clip_fraction"] = rep.clip_fraction;
  result["chosen_radius_index"] = rep.chosen_radius;
  result["rhs_extrapolated"] = rep.rhs_extrapolated;
  result["defect"] = rep.defect;
  result["verdict"] = to_string(rep.verdict);
  result["quadrature_failure"] = rep.quadrature_failure;
  result["positive_defect_flag"] = rep.positive_defect_flag;
  result["clipped_drift"] = rep.clipped_drift;
  if (!rep.diagnostic.empty()) result["diagnostic"] = rep.diagnostic;
  emit(cfg, report_envelope(cfg,
                            {{"tol_outer", opts.tol_outer},
                             {"floor_abs", opts.floor_abs},
                             {"reliable_frac", opts.reliable_frac}},
                            result)
                .dump(2));
  return 0;
}

ordered_json classification_json(const ClassificationResult& res) {
  ordered_json j;
  switch (res.verdict) {
    case ClassifyVerdict::PointEvaluation: {
      j["verdict"] = "PointEvaluation";
      j["a"] = complex_json(res.a);
      auto arr = ordered_json::array();
      for (cplx bi : res.b) arr.push_back(complex_json(bi));
      j["b"] = arr;
      j["fit_residual"] = res.fit_residual;
      j["b_in_open_polydisc"] = res.b_in_open_polydisc;
      j["boundary_indices"] = res.boundary_indices;
      break;
    }
    case ClassifyVerdict::VanishingWitness: {
      j["verdict"] = "VanishingWitness";
      auto arr = ordered_json::array();
      for (cplx wi : res.witness_w) arr.push_back(complex_json(wi));
      j["w"] = arr;
      j["abs_F"] = res.witness_abs_F;
      break;
    }
    case ClassifyVerdict::Inconclusive: {
      j["verdict"] = "Inconclusive";
      j["min_abs_F"] = res.min_abs_F;
      auto arr = ordered_json::array();
      for (cplx wi : res.min_abs_w) arr.push_back(complex_json(wi));
      j["argmin_w"] = arr;
      break;
    }
  }
  return j;
}

int cmd_classify(const RunConfig& cfg) {
  MomentFunctional lam = [&] {
    if (!cfg.builtin.empty()) {
      auto m = named_moments(cfg.builtin, cfg.cap);
      if (!m)
        throw Error(ErrorCode::ParseError, "unknown builtin moments: " + cfg.builtin);
      return *m;
    }
    if (cfg.input.empty())
      throw Error(ErrorCode::ParseError,
                  "classify needs --input <moments.json> or --builtin <name>");
    return moments_from_json(read_file(cfg.input));
  }();

  ClassifyGrid grid;
  if (!cfg.radii.empty()) grid.radii = parse_radii(cfg.radii);
  if (cfg.nodes > 0) grid.points_per_circle = cfg.nodes;

  ordered_json result;
  result["classification"] = classification_json(classify(lam, grid));

  cplx lam0 = lam.moment(MultiIndex::zero(lam.n()));
  if (std::abs(lam0 - cplx(1.0)) <= 1e-8) {
    GkzReport gkz = gkz_equivalence_suite(lam, grid, cfg.seed);
    ordered_json g;
    g["nonvanishing_pass"] = gkz.nonvanishing_pass;
    g["point_eval_pass"] = gkz.point_eval_pass;
    g["m2_pass"] = gkz.m2_pass;
    g["m1_pass"] = gkz.m1_pass;
    g["m2_defect"] = gkz.m2_defect;
    g["m1_defect"] = gkz.m1_defect;
    g["consistent"] = gkz.consistent;
    if (gkz.point_eval_pass) {
      g["b_in_open_polydisc"] = gkz.envelope.inside;
      if (!gkz.envelope.inside) {
        g["violated_coordinate"] = gkz.envelope.violated_coordinate;
        g["violated_beta"] = complex_json(gkz.envelope.violated_beta);
      }
    }
    result["gkz_suite"] = g;
  } else {
    result["gkz_suite"] = nullptr;
    result["gkz_note"] = "skipped: Lambda(1) != 1 (suite requires normalization)";
  }
  emit(cfg,
       report_envelope(cfg, {{"fit_tol", 1e-10}, {"gkz_defect_tol", 1e-8}}, result)
           .dump(2));
  return 0;
}

OperatorMatrix load_operator(const RunConfig& cfg) {
  if (!cfg.builtin.empty()) {
    if (cfg.builtin.rfind("wco:", 0) == 0) {
      std::string rest = cfg.builtin.substr(4);
      auto sep = rest.find(':');
      if (sep == std::string::npos)
        throw Error(ErrorCode::ParseError, "expected wco:<a-file>:<b-file>");
      TruncatedSeries a = series_from_json(read_file(rest.substr(0, sep)));
      TruncatedSeries b = series_from_json(read_file(rest.substr(sep + 1)));
      WCOSpec spec;
      spec.a = a;
      spec.b = {b};
      OperatorScope dom{Truncation(1, a.degree_cap()), SpaceSpec::hardy_h2(1)};
      OperatorScope cod{a.trunc(), SpaceSpec::hardy_h2(a.n())};
      return wco_matrix(spec, dom, cod);
    }
    auto t = named_operator(cfg.builtin, cfg.cap);
    if (!t)
      throw Error(ErrorCode::ParseError, "unknown builtin operator: " + cfg.builtin);
    return *t;
  }
  if (cfg.input.empty())
    throw Error(ErrorCode::ParseError,
                "wco needs --input <operator.json> or --builtin <name>");
  return operator_from_json(read_file(cfg.input));
}

int cmd_wco(const RunConfig& cfg) {
  OperatorMatrix T = load_operator(cfg);
  ordered_json result;
  result["norm_estimate"] = T.norm_estimate();
  // boundedness is not provable at one truncation; report norm growth
  // across a cap ladder when the operator can be rebuilt per cap
  if (!cfg.builtin.empty() && cfg.builtin.rfind("wco:", 0) != 0) {
    ordered_json ladder = ordered_json::array();
    for (int cap : {4, 8, 12}) {
      auto tc = named_operator(cfg.builtin, cap);
      if (tc) ladder.push_back({{"cap", cap}, {"norm", tc->norm_estimate()}});
    }
    result["norm_ladder"] = ladder;
  }

  bool recovered = false;
  WCOSpec spec;
  try {
    spec = recover_wco(T);
    recovered = true;
  } catch (const Error& e) {
    result["recovery"] = {{"ok", false}, {"error", e.what()}};
  }
  if (recovered) {
    WcoVerification v = verify_wco(T, spec);
    result["recovery"] = {
        {"ok", true},
        {"a", ordered_json::parse(series_to_json(spec.a))},
        {"symbol_in_polydisc", spec.symbol_in_polydisc},
        {"max_defect", v.max_defect},
        {"worst_column", v.worst_column},
        {"wco_structure", v.max_defect <= 1e-10}};
  }

  // exponential probes at a deterministic default sample set
  std::vector<std::vector<cplx>> ws;
  const int n = T.domain().trunc.n();
  ws.emplace_back(n, cplx(0.0));
  std::vector<cplx> w1(n, cplx(0.0));
  w1[0] = cplx(1.0);
  ws.push_back(w1);
  std::vector<cplx> w2(n, cplx(0.0));
  w2[0] = cplx(0.0, 1.5);
  ws.push_back(w2);
  {
    auto arr = ordered_json::array();
    for (const auto& w : ws) {
      ordered_json p;
      auto wj = ordered_json::array();
      for (cplx wi : w) wj.push_back(complex_json(wi));
      p["w"] = wj;
      try {
        std::vector<std::vector<cplx>> one = {w};
        ExpProbeResult pr = exp_probe(T, one).front();
        p["min_abs"] = pr.min_abs;
        p["witness"] = pr.witness;
      } catch (const Error& e) {
        p["skipped"] = e.what();
      }
      arr.push_back(p);
    }
    result["exp_probe"] = arr;
  }

  PreservationReport rep = cyclicity_preservation_suite(T, cfg.degree_max);
  ordered_json suite;
  suite["wco_defect"] = rep.wco_defect;
  suite["wco_structure"] = rep.wco_structure;
  suite["weight_cyclic_consistent"] = rep.weight_cyclic_consistent;
  suite["codomain_hardy"] = rep.codomain_hardy;
  suite["violations"] = rep.violations;
  auto cases = ordered_json::array();
  for (const auto& c : rep.cases) {
    cases.push_back({{"input", c.input_name},
                     {"input_verdict", to_string(c.input_verdict)},
                     {"image_verdict", to_string(c.image_verdict)},
                     {"violation_candidate", c.violation_candidate}});
  }
  suite["cases"] = cases;
  result["preservation_suite"] = suite;

  emit(cfg, report_envelope(cfg, {{"wco_defect_tol", 1e-10}}, result).dump(2));
  return 0;
}

int cmd_factor(const RunConfig& cfg) {
  TruncatedSeries f = load_series(cfg);
  Evaluator F;
  if (cfg.input_is_exponent) {
    F.n = f.n();
    F.name = "exp(series)";
    F.value = [f](std::span<const cplx> z) { return std::exp(series_eval(f, z)); };
    F.log_abs = [f](std::span<const cplx> z) { return series_eval(f, z).real(); };
  } else {
    F = Evaluator::from_series(f);
  }

  RecoveryOptions opts;
  opts.seed = cfg.seed;
  ExponentRecovery rec = recover_exponent(F, f.n(), cfg.growth_m, opts);

  ordered_json result;
  result["exponent"] = ordered_json::parse(series_to_json(rec.p));
  result["residual"] = rec.residual;
  result["holdout_rel"] = rec.holdout_rel;
  result["homogeneous_tail"] = rec.homogeneous_tail;
  result["max_tail"] = rec.max_tail;
  result["certificate_consistent"] = rec.certificate_consistent;

  if (cfg.growth_A > 0.0) {
    std::vector<double> radii = cfg.radii.empty() ? std::vector<double>{1.0, 2.0, 4.0}
                                                  : parse_radii(cfg.radii);
    GrowthCertificate cert =
        check_growth(F, cfg.growth_A, cfg.growth_B, cfg.growth_m, radii);
    result["growth_certificate"] = {{"A", cert.A},
                                    {"B", cert.B},
                                    {"m", cert.m},
                                    {"radii", cert.radii},
                                    {"log_max_abs", cert.log_max_abs},
                                    {"pass", cert.pass}};
  }
  emit(cfg, report_envelope(cfg, {{"tail_tol", 1e-6}, {"residual_tol", 1e-6}}, result)
                .dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polydisc: norms, cyclicity curves, outer tests, functional "
               "classification, weighted-composition recovery, and entire-"
               "function factorization on truncated polydisc series"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "input file (JSON)");
    sub->add_option("--builtin", cfg.builtin, "named builtin input");
    sub->add_option("--space", cfg.space, "space spec, e.g. h2:n=2");
    sub->add_option("--cap", cfg.cap, "truncation degree cap");
    sub->add_option("--degree-max", cfg.degree_max, "largest approximant degree");
    sub->add_option("--radii", cfg.radii, "comma-separated radius schedule");
    sub->add_option("--nodes", cfg.nodes, "quadrature points per circle");
    sub->add_option("--tol-outer", cfg.tol_outer, "outer-test tolerance");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
  };

  CLI::App* norm = app.add_subcommand("norm", "coefficient norm or quadrature p-mean");
  add_common(norm);
  norm->add_option("-p", cfg.p, "exponent for the quadrature mean");
  norm->add_option("--radius", cfg.radius, "quadrature radius (enables p-mean)");

  CLI::App* gram_cmd =
      app.add_subcommand("gram", "Gram matrix CSV (monomials, or {z^a f} with --input)");
  add_common(gram_cmd);

  CLI::App* cyc = app.add_subcommand("cyclicity", "optimal-approximant distance curve");
  add_common(cyc);

  CLI::App* outer = app.add_subcommand("outer", "boundary log-mean outer test");
  add_common(outer);

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "moment functional classification + GKZ suite");
  add_common(classify_cmd);

  CLI::App* wco = app.add_subcommand("wco", "weighted-composition recovery and checks");
  add_common(wco);

  CLI::App* factor = app.add_subcommand("factor", "exponent recovery for e^p");
  add_common(factor);
  factor->add_option("-m", cfg.growth_m, "growth/degree bound m");
  factor->add_option("--growth-A", cfg.growth_A, "growth constant A");
  factor->add_option("--growth-B", cfg.growth_B, "growth constant B");
  factor->add_flag("--exp-input", cfg.input_is_exponent,
                   "input series is the exponent p; factor F = e^p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    ordered_json err;
    err["error"] = {{"code", "cli_parse"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    if (norm->parsed()) { cfg.command = "norm"; return cmd_norm(cfg); }
    if (gram_cmd->parsed()) { cfg.command = "gram"; return cmd_gram(cfg); }
    if (cyc->parsed()) { cfg.command = "cyclicity"; return cmd_cyclicity(cfg); }
    if (outer->parsed()) { cfg.command = "outer"; return cmd_outer(cfg); }
    if (classify_cmd->parsed()) { cfg.command = "classify"; return cmd_classify(cfg); }
    if (wco->parsed()) { cfg.command = "wco"; return cmd_wco(cfg); }
    if (factor->parsed()) { cfg.command = "factor"; return cmd_factor(cfg); }
  } catch (const Error& e) {
    ordered_json err;
    err["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::InvalidArgument:
      case ErrorCode::DimensionMismatch:
      case ErrorCode::DegreeOverflow:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = {{"code", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
  return 2;
}
