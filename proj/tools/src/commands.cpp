#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "lolog/error.hpp"
#include "lolog/oracle.hpp"
#include "lolog/sampler.hpp"
#include "lolog/statistics.hpp"

namespace lolog::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::optional<fs::path> graph;
  std::optional<fs::path> attrs;
  fs::path model;
  std::string method = "mom";
  std::optional<int> n_sims;
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<fs::path> out;
  std::optional<fs::path> fit;
  bool strict = false;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

Vector theta_from(const ModelConfig& cfg, const std::optional<fs::path>& fit_path, std::size_t terms) {
  std::vector<double> values;
  if (fit_path) {
    json fit;
    try {
      fit = json::parse(read_file(*fit_path));
    } catch (const json::exception& e) {
      throw InvalidArgument(fit_path->string() + ": " + e.what());
    }
    if (!fit.contains("theta") || !fit["theta"].is_array()) throw InvalidArgument(fit_path->string() + ": no 'theta' array");
    for (const auto& v : fit["theta"]) {
      if (!v.is_number()) throw InvalidArgument(fit_path->string() + ": non-numeric theta");
      values.push_back(v.get<double>());
    }
  } else if (cfg.theta) {
    values = *cfg.theta;
  } else {
    throw InvalidArgument("no parameters: add 'theta' to the model file or pass --fit");
  }
  if (values.size() != terms) throw InvalidArgument("parameter vector has the wrong length");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string format_p(double p) {
  if (!std::isfinite(p)) return "NA";
  if (p < 0.001) return "< 0.001";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << p;
  return s.str();
}

void print_table(std::ostream& out, const FitResult& fit, const Vector& se, const std::vector<std::optional<double>>& observed) {
  out << std::left << std::setw(28) << "term" << std::right << std::setw(14) << "observed" << std::setw(12) << "theta"
      << std::setw(11) << "se" << std::setw(10) << "p-value" << '\n';
  for (std::size_t j = 0; j < fit.labels.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const double z = fit.theta(i) / se(i);
    std::ostringstream obs;
    if (observed[j]) obs << std::setprecision(6) << *observed[j];
    out << std::left << std::setw(28) << fit.labels[j] << std::right << std::setw(14) << (observed[j] ? obs.str() : "-")
        << std::fixed << std::setprecision(4) << std::setw(12) << fit.theta(i) << std::setw(11) << se(i)
        << std::setw(10) << format_p(normal_two_sided_p(z)) << std::defaultfloat << '\n';
  }
}

int cmd_fit(const Options& opt, std::ostream& out, std::ostream& err) {
  if (!opt.graph) throw InvalidArgument("fit needs --graph");
  const ModelConfig cfg = load_config(opt.model);
  Dataset data = load_dataset(cfg, opt.graph, opt.attrs);
  FitConfig fc = cfg.fit;
  fc.master_seed = opt.seed;
  fc.threads = opt.threads;
  if (opt.n_sims) fc.r = *opt.n_sims;

  FitResult fit;
  if (opt.method == "variational") {
    fit = variational_fit(*data.graph, data.model, fc.variational_orders, derive_seed(opt.seed, 0));
  } else if (opt.method == "mom") {
    fit = mom_fit(*data.graph, data.model, fc);
  } else if (opt.method == "gmm") {
    if (cfg.moments.empty()) throw InvalidArgument("gmm needs a 'moments' list in the model file");
    fit = gmm_fit(*data.graph, data.model, cfg.moments, fc);
  } else {
    throw InvalidArgument("unknown method '" + opt.method + "'");
  }

  const Vector se = fit.standard_errors();
  // Observed g(y) where it does not depend on the ordering.
  std::vector<std::optional<double>> observed(data.model.size());
  for (std::size_t j = 0; j < data.model.size(); ++j) {
    const auto& t = data.model.terms[j];
    if (data.model.term_order_independent(t)) {
      observed[j] = observed_statistics(*data.graph, data.model, {t})(0);
    }
  }

  json terms = json::array();
  for (std::size_t j = 0; j < fit.labels.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const double z = fit.theta(i) / se(i);
    terms.push_back({{"label", fit.labels[j]},
                     {"observed", observed[j] ? number(*observed[j]) : json(nullptr)},
                     {"estimate", number(fit.theta(i))},
                     {"se", number(se(i))},
                     {"z", number(z)},
                     {"p_value", number(normal_two_sided_p(z))}});
  }
  json moments = json::array();
  for (std::size_t k = 0; k < fit.moment_labels.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    moments.push_back({{"label", fit.moment_labels[k]},
                       {"observed", fit.observed.size() ? number(fit.observed(i)) : json(nullptr)},
                       {"residual", number(fit.residuals(i))}});
  }
  json trace = json::array();
  for (const auto& r : fit.trace) {
    trace.push_back({{"iteration", r.iteration},
                     {"theta", to_json(r.theta)},
                     {"objective", number(r.objective)},
                     {"objective_prev_weight", number(r.objective_prev_weight)},
                     {"criterion", number(r.criterion)},
                     {"alpha", number(r.alpha)},
                     {"accepted", r.accepted}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"method", std::string(method_name(fit.method))},
              {"seed", opt.seed},
              {"converged", fit.converged},
              {"iterations", fit.iterations},
              {"criterion", number(fit.criterion)},
              {"vertices", data.model.n},
              {"edges", data.graph->edge_count()},
              {"terms", terms},
              {"theta", to_json(fit.theta)},
              {"covariance", to_json(fit.covariance)},
              {"moments", moments},
              {"trace", trace},
              {"objective_trace", fit.objective_trace},
              {"warnings", fit.warnings},
              {"settings",
               {{"r", fc.r},
                {"epsilon", fc.epsilon},
                {"max_iters", fc.max_iters},
                {"beta1", fc.beta1},
                {"beta2", fc.beta2},
                {"alpha0", fc.alpha0},
                {"variational_orders", fc.variational_orders}}},
              {"config_text", cfg.text}};
  write_file(opt.out.value_or("fit.json"), doc.dump(2) + "\n");

  out << method_name(fit.method) << " fit, " << data.model.n << " vertices, " << data.graph->edge_count() << " edges\n";
  print_table(out, fit, se, observed);
  out << (fit.converged ? "converged" : "NOT converged") << " after " << fit.iterations << " iterations\n";
  for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
  if (!fit.converged && opt.strict) return 2;
  return 0;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream&) {
  const ModelConfig cfg = load_config(opt.model);
  Dataset data = load_dataset(cfg, opt.graph, opt.attrs);
  const Vector theta = theta_from(cfg, opt.fit, data.model.size());
  const int sims = opt.n_sims.value_or(1);
  if (sims < 1) throw InvalidArgument("--n-sims must be positive");
  const fs::path base = opt.out.value_or("sim.tsv");
  SampleOptions so;
  so.record_order = false;
  so.accumulate_expectations = false;
  const auto draws = sample_batch(data.model, theta, sims, opt.seed, so, opt.threads);
  out << "sim\tedges\tmean_degree\ttriangles\n";
  for (int i = 0; i < sims; ++i) {
    const Graph& g = draws[static_cast<std::size_t>(i)].graph;
    fs::path path = base;
    if (sims > 1) path.replace_filename(base.stem().string() + "." + std::to_string(i) + base.extension().string());
    write_edge_list(path, g, data.vertices);
    const double mean_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
    out << i << '\t' << g.edge_count() << '\t' << mean_degree << '\t' << triangle_count(g) << '\n';
  }
  return 0;
}

int cmd_gof(const Options& opt, std::ostream& out, std::ostream&) {
  if (!opt.graph) throw InvalidArgument("gof needs --graph");
  const ModelConfig cfg = load_config(opt.model);
  Dataset data = load_dataset(cfg, opt.graph, opt.attrs);
  FitResult fit;
  fit.theta = theta_from(cfg, opt.fit, data.model.size());
  GofOptions go;
  go.r = opt.n_sims.value_or(cfg.gof.r);
  go.seed = opt.seed;
  go.stats = cfg.gof.stats;
  go.growth_checkpoints = cfg.gof.checkpoints;
  go.log_bins = cfg.gof.log_bins;
  go.threads = opt.threads;
  const auto reports = gof_run(fit, data.model, *data.graph, go);

  const fs::path dir = opt.out.value_or("gof");
  json doc = {{"schema_version", kSchemaVersion}, {"seed", opt.seed}, {"simulations", go.r}, {"theta", to_json(fit.theta)}};
  json list = json::array();
  out << "statistic\tcheckpoint\tbins\tobserved_outside_5_95\n";
  for (const auto& rep : reports) {
    const std::string stem = rep.statistic + (rep.checkpoint ? "_m" + std::to_string(rep.checkpoint) : "");
    std::ostringstream tsv;
    tsv << "bin\tobserved\tq05\tq50\tq95\n";
    int outside = 0;
    json summary = json::array();
    for (std::size_t b = 0; b < rep.bins.size(); ++b) {
      const auto& e = rep.summary[b];
      const bool have = !rep.observed.empty();
      tsv << rep.bins[b] << '\t';
      if (have) {
        tsv << rep.observed[b];
        if (rep.observed[b] < e.q05 || rep.observed[b] > e.q95) ++outside;
      } else {
        tsv << "NA";
      }
      tsv << '\t' << e.q05 << '\t' << e.q50 << '\t' << e.q95 << '\n';
      summary.push_back({{"bin", rep.bins[b]},
                         {"observed", have ? number(rep.observed[b]) : json(nullptr)},
                         {"min", e.min},
                         {"q05", e.q05},
                         {"q50", e.q50},
                         {"q95", e.q95},
                         {"max", e.max}});
    }
    write_file(dir / (stem + ".tsv"), tsv.str());
    list.push_back({{"statistic", rep.statistic},
                    {"checkpoint", rep.checkpoint},
                    {"observed", rep.observed},
                    {"simulated", rep.simulated},
                    {"summary", summary}});
    out << rep.statistic << '\t' << rep.checkpoint << '\t' << rep.bins.size() << '\t' << outside << '\n';
  }
  doc["reports"] = list;
  write_file(dir / "gof.json", doc.dump(2) + "\n");
  return 0;
}

int cmd_oracle(const Options& opt, std::ostream& out, std::ostream&) {
  const ModelConfig cfg = load_config(opt.model);
  Dataset data = load_dataset(cfg, opt.graph, opt.attrs);
  const Vector theta = theta_from(cfg, opt.fit, data.model.size());
  const ExactLaw law = exact_law(data.model, theta, cfg.moments);
  json graphs = json::array();
  for (std::size_t mask = 0; mask < law.graph_prob.size(); ++mask) {
    const Graph g = graph_from_mask(data.model.n, data.model.directed, mask);
    json edges = json::array();
    for (const Dyad& d : g.edges()) {
      edges.push_back({data.vertices.labels[static_cast<std::size_t>(d.tail)],
                       data.vertices.labels[static_cast<std::size_t>(d.head)]});
    }
    graphs.push_back({{"mask", mask}, {"edges", edges}, {"probability", law.graph_prob[mask]}});
  }
  json doc = {{"total", law.total},         {"orderings", law.order_count}, {"mean_g", to_json(law.mean_g)},
              {"mean_G", to_json(law.mean_G)}, {"mean_h", to_json(law.mean_h)}, {"graphs", graphs}};
  if (opt.out) {
    write_file(*opt.out, doc.dump(2) + "\n");
  } else {
    out << doc.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latent order logistic network models: fit, simulate, goodness of fit", "lolog"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool graph_required) {
    auto* g = sub->add_option("--graph", opt.graph, "edge list (whitespace separated labels)");
    if (graph_required) g->required();
    sub->add_option("--attrs", opt.attrs, "vertex attributes CSV (header row, labels in first column)");
    sub->add_option("--model", opt.model, "model file (TOML)")->required();
    sub->add_option("--seed", opt.seed, "master random seed")->capture_default_str();
    sub->add_option("--threads", opt.threads, "sampler threads (default: LOLOG_THREADS or all cores)");
    sub->add_option("--out", opt.out, "output path");
  };

  auto* fit = app.add_subcommand("fit", "estimate parameters");
  add_common(fit, true);
  fit->add_option("--method", opt.method, "variational, mom or gmm")
      ->check(CLI::IsMember({"variational", "mom", "gmm"}))
      ->capture_default_str();
  fit->add_option("--n-sims", opt.n_sims, "simulations per iteration (overrides fit.r)");
  fit->add_flag("--strict", opt.strict, "exit 2 when the fit does not converge");

  auto* sim = app.add_subcommand("simulate", "draw graphs from the model");
  add_common(sim, false);
  sim->add_option("--n-sims", opt.n_sims, "number of graphs");
  sim->add_option("--fit", opt.fit, "take parameters from a fit.json");

  auto* gof = app.add_subcommand("gof", "goodness-of-fit simulation envelopes");
  add_common(gof, true);
  gof->add_option("--n-sims", opt.n_sims, "number of simulations (overrides gof.r)");
  gof->add_option("--fit", opt.fit, "take parameters from a fit.json");

  auto* oracle = app.add_subcommand("oracle", "");  // exact enumeration for tiny graphs; undocumented
  add_common(oracle, false);
  oracle->add_option("--fit", opt.fit, "take parameters from a fit.json");
  oracle->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(opt, out, err);
    if (sim->parsed()) return cmd_simulate(opt, out, err);
    if (gof->parsed()) return cmd_gof(opt, out, err);
    if (oracle->parsed()) return cmd_oracle(opt, out, err);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace lolog::cli
