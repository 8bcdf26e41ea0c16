#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "suprec/diagnostics.hpp"
#include "suprec/error.hpp"
#include "suprec/experiments.hpp"
#include "suprec/serialization.hpp"
#include "suprec/tail_models.hpp"

namespace suprec {

namespace {

using nlohmann::json;

// Inline JSON if it looks like an object, otherwise a file path.
json json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON argument: ") + e.what());
    }
  }
  return read_json_file(text);
}

TailFamily family_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    return family_from_json(json_argument(text));
  }
  return parse_family(text);
}

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path);
    if (!file_) throw ConfigError("cannot write '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void close(const std::string& path) {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw std::runtime_error("error writing '" + path + "'");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct BoundaryArgs {
  double nu = 2.0;
  std::size_t points = 100;
  std::string out;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> p;
  unsigned parallelism = 0;
};

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string manifest;
  bool quiet = false;
};

struct QuantileArgs {
  std::string family = "gaussian";
  std::optional<double> q;
  std::optional<double> upper_p;
};

struct UddArgs {
  std::string model;
  std::string matrix;
  std::size_t p = 100;
  std::vector<double> deltas;
  bool packing = false;
};

struct StabilityArgs {
  std::string model = R"({"kind":"iid"})";
  std::string family = "gaussian";
  std::size_t p = 10000;
  std::optional<std::size_t> subset;
  std::size_t reps = 1000;
  std::string selection = "uniform_random";
  std::uint64_t seed = 1;
};

struct ParetoArgs {
  std::string config;
  std::optional<double> alpha;
  std::optional<double> f;
  std::optional<double> r;
  std::optional<std::size_t> frechet_samples;
};

void cmd_boundary(const BoundaryArgs& a, std::ostream& out) {
  OutputFile file(a.out, out);
  write_boundary_csv(file.get(), a.nu, a.points);
  file.close(a.out);
}

void cmd_simulate(const SimulateArgs& a, const Overrides& o, std::ostream& out,
                  std::ostream& err) {
  json config = read_json_file(a.config);
  // A manifest carries the resolved spec under "spec".
  if (config.is_object() && config.contains("spec") && config.contains("version")) {
    config = config["spec"];
  }
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (o.seed) config["seed"] = *o.seed;
  if (o.reps) config["reps"] = *o.reps;
  if (o.p) config["p"] = *o.p;
  const GridSpec spec = grid_spec_from_json(config);
  const json resolved = to_json(spec);

  const auto start = std::chrono::steady_clock::now();
  CellProgress progress;
  if (!a.quiet) {
    progress = [&err](std::size_t done, std::size_t total) {
      err << "cell " << done << "/" << total << '\n';
    };
  }
  const GridResult result = run_grid(spec, o.parallelism, progress);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  OutputFile csv(a.out, out);
  write_grid_csv(csv.get(), result);
  csv.close(a.out);

  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && !a.out.empty() && a.out != "-") {
    manifest_path = a.out + ".manifest.json";
  }
  if (!manifest_path.empty()) {
    const json manifest{{"version", kVersion},
                        {"spec_hash", spec_hash(resolved)},
                        {"seed", spec.seed},
                        {"wall_time_seconds", seconds},
                        {"cells", result.cells.size()},
                        {"spec", resolved}};
    OutputFile file(manifest_path, out);
    file.get() << manifest.dump(2) << '\n';
    file.close(manifest_path);
  }
}

void cmd_quantile(const QuantileArgs& a, std::ostream& out) {
  const TailFamily family = family_argument(a.family);
  if (a.q.has_value() == a.upper_p.has_value()) {
    throw ConfigError("quantile: give exactly one of --q and --upper-p");
  }
  out.precision(12);
  if (a.q) {
    if (!(*a.q > 0.0 && *a.q < 1.0)) throw ConfigError("quantile: q must lie in (0, 1)");
    out << "family " << family.name() << '\n'
        << "q " << *a.q << '\n'
        << "quantile " << family.quantile(*a.q) << '\n';
    return;
  }
  const double p = *a.upper_p;
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("quantile: --upper-p must exceed 1");
  out << "family " << family.name() << '\n'
      << "p " << p << '\n'
      << "exact " << family.upper_quantile(1.0 / p) << '\n';
  if (auto nu = family.agg_index(); nu && p >= 2.0) {
    out << "asymptotic " << asymptotic_quantile(*nu, p) << '\n';
  }
}

void cmd_check_udd(const UddArgs& a, std::ostream& out) {
  if (a.model.empty() == a.matrix.empty()) {
    throw ConfigError("check-udd: give exactly one of --model and --matrix");
  }
  if (a.deltas.empty()) throw ConfigError("check-udd: at least one --delta is required");
  Eigen::MatrixXd sigma;
  if (!a.matrix.empty()) {
    std::ifstream in(a.matrix);
    if (!in) throw ConfigError("cannot open '" + a.matrix + "'");
    sigma = read_matrix_csv(in);
  } else {
    if (a.p < 1 || a.p > kMaxDenseDimension) {
      throw ConfigError("check-udd: --p must lie in [1, 2000]");
    }
    sigma = covariance_of(noise_from_json(json_argument(a.model)), a.p);
  }
  for (double d : a.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("check-udd: delta must lie in (0, 1)");
  }
  const UddProfile profile = udd_profile(sigma, a.deltas);
  out << "dimension " << sigma.rows() << '\n' << "delta,n_p,n\n";
  for (std::size_t i = 0; i < profile.delta_grid.size(); ++i) {
    out << format_number(profile.delta_grid[i]) << ',' << profile.counts[i] << ','
        << profile.with_self(i) << '\n';
  }
  if (a.packing) {
    for (double d : a.deltas) {
      const auto packing = gamma_packing(sigma, d);
      out << "packing delta=" << format_number(d)
          << " radius=" << format_number(packing_radius(d))
          << " size=" << packing.size() << " indices=";
      for (std::size_t i = 0; i < packing.size(); ++i) {
        out << (i ? " " : "") << packing[i] + 1;
      }
      out << '\n';
    }
  }
}

void cmd_stability(const StabilityArgs& a, const Overrides& o, std::ostream& out) {
  const TailFamily family = family_argument(a.family);
  const std::size_t p = o.p.value_or(a.p);
  const std::size_t reps = o.reps.value_or(a.reps);
  const std::uint64_t seed = o.seed.value_or(a.seed);
  NoiseModel model = noise_from_json(json_argument(a.model), family);
  if (!std::holds_alternative<IidNoise>(model) && !family.is_gaussian()) {
    throw ConfigError("stability: dependent models have Gaussian marginals");
  }
  SubsetSelection selection;
  if (a.selection == "uniform_random") {
    selection = SubsetSelection::uniform_random;
  } else if (a.selection == "leading") {
    selection = SubsetSelection::leading;
  } else {
    throw ConfigError("stability: --selection is uniform_random or leading");
  }
  const std::size_t subset = a.subset.value_or(p);
  const auto summary =
      stability_ratio(model, family, p, subset, reps, seed, selection, o.parallelism);
  const double log_p = std::log(static_cast<double>(subset));
  const double cp = cp_sequence(family, static_cast<double>(subset));
  out << "p " << p << '\n'
      << "subset_size " << summary.subset_size << '\n'
      << "reps " << reps << '\n'
      << "normalizer " << format_number(summary.normalizer) << '\n'
      << "mean " << format_number(summary.mean) << '\n'
      << "median " << format_number(summary.median) << '\n'
      << "q05 " << format_number(summary.q05) << '\n'
      << "q95 " << format_number(summary.q95) << '\n'
      << "c_p " << format_number(cp) << '\n'
      << "exceed_1_plus_c_p " << format_number(summary.exceedance_fraction(1.0 + cp))
      << '\n'
      << "bound_1_over_log_p " << format_number(1.0 / log_p) << '\n';
}

void cmd_pareto(const ParetoArgs& a, const Overrides& o, std::ostream& out) {
  json config = a.config.empty() ? json::object() : json_argument(a.config);
  if (!config.is_object()) throw ConfigError("pareto: config must be a JSON object");
  if (a.alpha) config["alpha_tail"] = *a.alpha;
  if (a.f) config["f"] = *a.f;
  if (a.r) config["r"] = *a.r;
  if (a.frechet_samples) config["frechet_samples"] = *a.frechet_samples;
  if (o.seed) config["seed"] = *o.seed;
  if (o.reps) config["reps"] = *o.reps;
  if (o.p) config["p"] = *o.p;
  const ParetoSpec spec = pareto_spec_from_json(config);
  const ParetoResult result = pareto_experiment(spec, o.parallelism);
  out << "p " << spec.p << '\n'
      << "alpha_tail " << format_number(spec.alpha_tail) << '\n'
      << "s " << result.s << '\n'
      << "delta " << format_number(result.delta) << '\n'
      << "empirical " << format_number(result.empirical) << " +- "
      << format_number(result.empirical_stderr) << '\n'
      << "frechet_limit " << format_number(result.limit) << " +- "
      << format_number(result.limit_stderr) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Sparse support recovery: boundaries, simulation and diagnostics",
               "suprec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Overrides o;
  const auto add_overrides = [&o](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Base seed");
    sub->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber);
    sub->add_option("--p", o.p, "Dimension")->check(CLI::PositiveNumber);
    sub->add_option("--parallelism", o.parallelism, "Worker threads (0 = all)");
  };

  BoundaryArgs boundary;
  auto* b = app.add_subcommand("boundary", "Emit boundary curves as CSV");
  b->add_option("--nu", boundary.nu, "AGG index")->check(CLI::PositiveNumber);
  b->add_option("--grid-points,--points", boundary.points, "Number of beta values")
      ->check(CLI::PositiveNumber);
  b->add_option("--out", boundary.out, "Output CSV (default stdout)");

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run a (beta, r) grid");
  s->add_option("--config", simulate.config, "Grid spec or manifest JSON")->required();
  s->add_option("--out", simulate.out, "Output CSV (default stdout)");
  s->add_option("--manifest", simulate.manifest,
                "Manifest path (default <out>.manifest.json)");
  s->add_flag("--quiet", simulate.quiet, "No per-cell progress");
  add_overrides(s);

  QuantileArgs quantile;
  auto* q = app.add_subcommand("quantile", "Exact and asymptotic quantiles");
  q->add_option("family,--family", quantile.family,
                "gaussian, laplace, gg:NU, agg:NU, heavier:G[:C], lighter:NU, "
                "pareto:A, or JSON");
  q->add_option("--q", quantile.q, "Lower-tail probability");
  q->add_option("--upper-p", quantile.upper_p, "p for the 1 - 1/p quantile");

  UddArgs udd;
  auto* u = app.add_subcommand("check-udd", "UDD exceedance counts");
  u->add_option("--model", udd.model, "Noise model JSON (inline or file)");
  u->add_option("--matrix", udd.matrix, "Covariance matrix CSV");
  u->add_option("--p", udd.p, "Dimension for --model");
  u->add_option("--delta", udd.deltas, "Covariance threshold (repeatable)");
  u->add_flag("--packing", udd.packing, "Also print the greedy packing");

  StabilityArgs stability;
  auto* st = app.add_subcommand("stability", "Distribution of M_S / u_|S|");
  st->add_option("--model", stability.model, "Noise model JSON (inline or file)");
  st->add_option("--family", stability.family, "Marginal family");
  st->add_option("--subset", stability.subset, "Subset size (default p)");
  st->add_option("--selection", stability.selection, "uniform_random or leading");
  add_overrides(st);

  ParetoArgs pareto;
  auto* pa = app.add_subcommand("pareto", "Pareto recovery versus the Frechet limit");
  pa->add_option("--config", pareto.config, "Pareto spec JSON (inline or file)");
  pa->add_option("--alpha", pareto.alpha, "Tail index");
  pa->add_option("--f", pareto.f, "Signal fraction");
  pa->add_option("--r", pareto.r, "Magnitude coefficient");
  pa->add_option("--frechet-samples", pareto.frechet_samples, "Limit MC draws");
  add_overrides(pa);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (b->parsed()) cmd_boundary(boundary, out);
    if (s->parsed()) cmd_simulate(simulate, o, out, err);
    if (q->parsed()) cmd_quantile(quantile, out);
    if (u->parsed()) cmd_check_udd(udd, out);
    if (st->parsed()) cmd_stability(stability, o, out);
    if (pa->parsed()) cmd_pareto(pareto, o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace suprec
