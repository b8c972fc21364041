#pragma once

// avt_cli: numeric content of the bound curves, optimal priors, Hölder
// constants and Monte Carlo checks as CSV or JSON.
//
// Exit codes: 0 ok, 1 usage or parameter error, 2 I/O error, 3 a verification
// check failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <ios>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "avt/avt.hpp"
#include "avt/io.hpp"

namespace avt::cli {

inline constexpr const char* kVersion = "0.1.0";

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kCheckFailed = 3 };

using json = nlohmann::ordered_json;

struct Globals {
  std::string out;  ///< empty or "-" means the output stream
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
};

/// Finite doubles as numbers, anything else as null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json run_record(const std::string& command, json params, json outputs, const Globals& g) {
  json r;
  r["command"] = command;
  r["version"] = kVersion;
  r["params"] = std::move(params);
  r["outputs"] = std::move(outputs);
  if (g.seed) r["seed"] = *g.seed;
  return r;
}

/// Writes `text` to the --out file or to `out`.
inline void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out.empty() || g.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open output file '" + g.out + "'");
  f << text;
  f.flush();
  if (!f) throw std::ios_base::failure("failed writing '" + g.out + "'");
}

inline std::string table_text(const Globals& g, const std::string& command, json params,
                              const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  if (g.format == "csv") {
    std::ostringstream os;
    write_csv(os, header, rows);
    return os.str();
  }
  json cols = json::object();
  for (std::size_t c = 0; c < header.size(); ++c) {
    json col = json::array();
    for (const auto& r : rows) col.push_back(num(r[c]));
    cols[header[c]] = std::move(col);
  }
  return run_record(command, std::move(params), std::move(cols), g).dump(2) + "\n";
}

inline std::string kv_text(const Globals& g, const std::string& command, json params, const json& outputs) {
  if (g.format == "json") return run_record(command, std::move(params), outputs, g).dump(2) + "\n";
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : outputs.items()) {
    os << k << ',';
    if (v.is_number()) {
      os << format_double(v.get<double>());
    } else if (v.is_boolean()) {
      os << (v.get<bool>() ? "true" : "false");
    } else if (v.is_null()) {
      os << "nan";
    } else {
      os << v.get<std::string>();
    }
    os << '\n';
  }
  return os.str();
}

inline Augmentation make_augmentation(const std::string& family, double param) {
  if (family == "cosine") return Augmentation::cosine();
  if (family == "power") return Augmentation::power(param);
  if (family == "tent") return Augmentation::tent(param);
  fail(ErrorCode::DomainError, "unknown augmentation family '" + family + "' (expected cosine, power or tent)");
}

// ------------------------------------------------------------------ commands

struct CurveArgs {
  double i_min = 0.0, i_max = 100.0;
  int steps = 101;
};

inline int cmd_curve(const CurveArgs& a, const Globals& g, std::ostream& out) {
  require(a.i_min >= 0.0 && a.i_max > a.i_min && std::isfinite(a.i_max), ErrorCode::DomainError,
          "need 0 <= i-min < i-max");
  require(a.steps >= 2, ErrorCode::DomainError, "steps must be >= 2");
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < a.steps; ++k) {
    const double fisher =
        k + 1 == a.steps ? a.i_max : a.i_min + (a.i_max - a.i_min) * static_cast<double>(k) / (a.steps - 1);
    const auto s = bound_suite(fisher);
    rows.push_back({fisher, s.classical_opt, s.avt1, s.avt2});
  }
  json params{{"i_min", a.i_min}, {"i_max", a.i_max}, {"steps", a.steps}};
  emit(g, table_text(g, "curve", params, {"I", "classical", "avt1", "avt2"}, rows), out);
  return kOk;
}

struct PriorArgs {
  std::string family = "cosine";
  std::optional<double> param;
  double fisher = 0.0;
  bool augmented = false;
  int nodes = 1025;
};

inline int cmd_prior(const PriorArgs& a, const Globals& g, std::ostream& out) {
  require(a.fisher >= 0.0 && std::isfinite(a.fisher), ErrorCode::DomainError, "fisher must be >= 0");
  require(a.nodes >= 2, ErrorCode::DomainError, "nodes must be >= 2");
  const Interval unit(-1.0, 1.0);
  const auto path = FisherPath::constant(unit, a.fisher);
  std::optional<PriorDensity> mu;
  json params{{"family", a.family}, {"fisher", a.fisher}, {"nodes", a.nodes}};
  if (a.family == "cosine" && !a.augmented) {
    mu = PriorDensity::cosine();
  } else if (a.family == "cosine") {
    mu = optimal_prior(path, Augmentation::cosine());
  } else if (a.family == "power" || a.family == "tent") {
    double param = 0.0;
    if (a.param) {
      param = *a.param;
    } else {
      require(a.family == "power", ErrorCode::DomainError, "tent needs --param");
      const auto b = avt2_bound(a.fisher);
      require(b.prior.has_value(), ErrorCode::DomainError, "the optimal power is at the search boundary");
      param = b.params.at("m");
    }
    params["param"] = param;
    mu = optimal_prior(path, make_augmentation(a.family, param));
  } else {
    fail(ErrorCode::DomainError, "unknown prior family '" + a.family + "'");
  }
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < a.nodes; ++k) {
    const double t = k + 1 == a.nodes ? 1.0 : -1.0 + 2.0 * static_cast<double>(k) / (a.nodes - 1);
    rows.push_back({t, (*mu)(t)});
  }
  emit(g, table_text(g, "prior", params, {"t", "mu"}, rows), out);
  return kOk;
}

struct HolderArgs {
  HolderProblem p{};
  double alpha_x = 1.0;
  double l_x = 1.0;
};

inline int cmd_holder(const HolderArgs& a, const Globals& g, std::ostream& out) {
  a.p.validate();
  const auto s = sharpness_A(a.p.a());
  const double upper = upper_bound_risk(a.p);
  json o;
  o["constant"] = minimax_constant(a.p.beta, a.p.d);
  o["A"] = s.A_value;
  o["A_lower"] = s.A_lower_value;
  o["lower_bound"] = s.A_value * upper;
  o["finite_lower_bound"] = finite_sample_lower_bound(a.p, a.alpha_x, a.l_x);
  o["upper_bound"] = upper;
  o["highdim_constant"] = highdim_constant(a.p.beta, a.p.d);
  o["bandwidth"] = optimal_bandwidth(a.p);
  o["c_nd"] = finite_sample_c(a.p, a.alpha_x, a.l_x);
  json params{{"beta", a.p.beta}, {"d", a.p.d},   {"L", a.p.L},           {"sigma2", a.p.sigma2},
              {"px0", a.p.px0},   {"n", a.p.n},   {"alpha_x", a.alpha_x}, {"L_X", a.l_x}};
  emit(g, kv_text(g, "holder", params, o), out);
  return kOk;
}

struct SimulateArgs {
  std::string config_path;
  std::optional<unsigned> threads;
};

inline int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  require(g.format == "json", ErrorCode::DomainError, "simulate writes JSON lines; use --format json");
  SimConfig c = load_sim_config(a.config_path);
  if (g.seed) c.seed = *g.seed;
  if (a.threads) c.threads = *a.threads;
  std::ostringstream os;
  std::function<void(const BayesRecord&)> sink;
  if (c.records) {
    sink = [&os](const BayesRecord& r) {
      os << json{{"rep", r.rep}, {"t", r.t}, {"estimate", num(r.estimate)}, {"sq_error", num(r.sq_error)}}.dump()
         << '\n';
    };
  }
  const auto ex = run_bayes_experiment(c, std::nullopt, sink);
  json summary{{"summary", true},
               {"bayes_risk", ex.result.risk},
               {"se", ex.result.se},
               {"bound", ex.bound},
               {"pass", ex.pass},
               {"fisher", ex.fisher},
               {"family_bandwidth", ex.family.h},
               {"estimator_bandwidth", ex.estimator_bandwidth},
               {"max_node_risk", ex.result.max_node_risk},
               {"reps", ex.result.reps},
               {"seed", c.seed},
               {"prior", c.prior},
               {"version", kVersion}};
  os << summary.dump() << '\n';
  emit(g, os.str(), out);
  return ex.pass ? kOk : kCheckFailed;
}

struct GvtArgs {
  double fisher = 1.0;
  std::string family = "cosine";
  double param = 1.0;
  int nodes = 257;
};

inline int cmd_gvt_check(const GvtArgs& a, const Globals& g, std::ostream& out) {
  require(a.nodes >= 3 && a.nodes % 2 == 1, ErrorCode::DomainError, "nodes must be odd and >= 3");
  GvtOptions opt;
  opt.nodes = static_cast<std::size_t>(a.nodes);
  const auto r = recover_scalar_check(a.fisher, make_augmentation(a.family, a.param), std::nullopt, opt);
  json o{{"gvt_value", r.gvt_value}, {"bounds_value", r.bounds_value}, {"abs_diff", r.abs_diff}, {"matches", r.matches}};
  json params{{"fisher", a.fisher}, {"family", a.family}, {"param", a.param}, {"nodes", a.nodes}};
  emit(g, kv_text(g, "gvt-check", params, o), out);
  return r.matches ? kOk : kCheckFailed;
}

struct LpArgs {
  double p = 2.0;
  double fisher = 1.0;
  std::string family = "power";
  double param = 1.0;
};

inline int cmd_lp_bound(const LpArgs& a, const Globals& g, std::ostream& out) {
  const auto model = ScoreMomentModel::gaussian(Interval(-1.0, 1.0), a.fisher);
  const auto r = lp_minimax_bound(model, a.p, make_augmentation(a.family, a.param));
  json o{{"value", r.value},
         {"q", r.params.at("q")},
         {"alpha_integral", r.params.at("alpha_integral")},
         {"moment_integral", r.params.at("moment_integral")}};
  json params{{"p", a.p}, {"fisher", a.fisher}, {"family", a.family}, {"param", a.param}};
  emit(g, kv_text(g, "lp-bound", params, o), out);
  return kOk;
}

// ------------------------------------------------------------------- driver

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Augmented van Trees bounds and Hölder minimax constants", "avt_cli"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--out,-o", g.out, "output file (default: standard output)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "master seed for randomized commands");

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("curve", "classical, AVT1 and AVT2 bounds over an information grid");
  c_curve->add_option("--i-min", curve.i_min);
  c_curve->add_option("--i-max", curve.i_max);
  c_curve->add_option("--steps", curve.steps);

  PriorArgs prior;
  auto* c_prior = app.add_subcommand("prior", "optimal prior density on [-1, 1]");
  c_prior->add_option("--family", prior.family, "cosine, power or tent");
  c_prior->add_option("--param,--m", prior.param, "power exponent or tent width (default: AVT2 optimum)");
  c_prior->add_option("--fisher", prior.fisher);
  c_prior->add_flag("--augmented", prior.augmented, "for cosine: the augmented optimum instead of cos²");
  c_prior->add_option("--nodes", prior.nodes);

  HolderArgs holder;
  auto* c_holder = app.add_subcommand("holder", "Hölder-class minimax constants and risks");
  c_holder->add_option("--beta", holder.p.beta);
  c_holder->add_option("--d", holder.p.d);
  c_holder->add_option("--L", holder.p.L);
  c_holder->add_option("--sigma2", holder.p.sigma2);
  c_holder->add_option("--px0", holder.p.px0);
  c_holder->add_option("--n", holder.p.n);
  c_holder->add_option("--alpha-x", holder.alpha_x, "Hölder exponent of the covariate density");
  c_holder->add_option("--lx", holder.l_x, "Hölder constant of the covariate density");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo Bayes risk against the van Trees bound");
  c_sim->add_option("--config,config", sim.config_path)->required();
  c_sim->add_option("--threads", sim.threads, "worker threads (results do not depend on it)");

  GvtArgs gvt;
  auto* c_gvt = app.add_subcommand("gvt-check", "scalar recovery check of the generalized bound");
  c_gvt->add_option("--fisher", gvt.fisher);
  c_gvt->add_option("--family", gvt.family);
  c_gvt->add_option("--param", gvt.param);
  c_gvt->add_option("--nodes", gvt.nodes);

  LpArgs lp;
  auto* c_lp = app.add_subcommand("lp-bound", "minimax bound under |error|^p loss, Gaussian score");
  c_lp->add_option("--p", lp.p);
  c_lp->add_option("--fisher", lp.fisher);
  c_lp->add_option("--family", lp.family);
  c_lp->add_option("--param", lp.param);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (seed_opt->count()) g.seed = seed;
  // simulate always writes JSON lines.
  if (c_sim->parsed() && app.get_option("--format")->count() == 0) g.format = "json";

  try {
    if (c_curve->parsed()) return cmd_curve(curve, g, out);
    if (c_prior->parsed()) return cmd_prior(prior, g, out);
    if (c_holder->parsed()) return cmd_holder(holder, g, out);
    if (c_sim->parsed()) return cmd_simulate(sim, g, out);
    if (c_gvt->parsed()) return cmd_gvt_check(gvt, g, out);
    if (c_lp->parsed()) return cmd_lp_bound(lp, g, out);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace avt::cli
