#include "suprec/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "suprec/boundaries.hpp"
#include "suprec/detail/overloaded.hpp"
#include "suprec/error.hpp"

namespace suprec {

using nlohmann::json;

namespace {

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
}

void allow_keys(const json& j, const char* what,
                std::initializer_list<std::string_view> keys) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) {
      throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

std::string kind_of(const json& j, const char* what) {
  require_object(j, what);
  const auto it = j.find("kind");
  if (it == j.end() || !it->is_string()) {
    throw ConfigError(std::string(what) + ": missing string field 'kind'");
  }
  return it->get<std::string>();
}

double number(const json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ConfigError(std::string(what) + ": missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

double number_or(const json& j, const char* key, double fallback,
                 const char* what) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

std::uint64_t count(const json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  const bool ok = it != j.end() &&
                  (it->is_number_unsigned() ||
                   (it->is_number_integer() && it->get<std::int64_t>() >= 0));
  if (!ok) {
    throw ConfigError(std::string(what) + ": field '" + key +
                      "' must be a nonnegative integer");
  }
  return it->get<std::uint64_t>();
}

std::vector<double> number_list(const json& j, const char* key,
                                const char* what) {
  const auto& v = j.at(key);
  if (!v.is_array()) {
    throw ConfigError(std::string(what) + ": field '" + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      throw ConfigError(std::string(what) + ": '" + key + "' holds a non-number");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

// Construction-time DomainErrors in a config are configuration errors.
template <class F>
auto as_config(const char* what, F&& build) {
  try {
    return build();
  } catch (const DomainError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::vector<double> default_grid(double start, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    // Round to kill accumulation error so grids print cleanly.
    out.push_back(std::round((start + step * i) * 1e9) / 1e9);
  }
  return out;
}

}  // namespace

json to_json(const TailFamily& family) {
  return std::visit(
      detail::overloaded{
          [](Gaussian) { return json{{"kind", "gaussian"}}; },
          [](Laplace) { return json{{"kind", "laplace"}}; },
          [](const GeneralizedGaussian& g) {
            return json{{"kind", "generalized_gaussian"}, {"nu", g.nu}};
          },
          [](const AggAsymptotic& g) {
            return json{{"kind", "agg_asymptotic"}, {"nu", g.nu}};
          },
          [](const HeavierThanAgg& h) {
            return json{{"kind", "heavier_than_agg"}, {"gamma", h.gamma}, {"c", h.c}};
          },
          [](const LighterThanAgg& l) {
            return json{{"kind", "lighter_than_agg"}, {"nu", l.nu}};
          },
          [](const Pareto& p) {
            return json{{"kind", "pareto"}, {"tail_index", p.tail_index}};
          },
      },
      family.law());
}

TailFamily family_from_json(const json& j) {
  constexpr const char* what = "family";
  if (j.is_string()) return parse_family(j.get<std::string>());
  const std::string kind = kind_of(j, what);
  return as_config(what, [&]() -> TailFamily {
    if (kind == "gaussian") {
      allow_keys(j, what, {"kind"});
      return TailFamily::gaussian();
    }
    if (kind == "laplace") {
      allow_keys(j, what, {"kind"});
      return TailFamily::laplace();
    }
    if (kind == "generalized_gaussian") {
      allow_keys(j, what, {"kind", "nu"});
      return TailFamily::generalized_gaussian(number(j, "nu", what));
    }
    if (kind == "agg_asymptotic") {
      allow_keys(j, what, {"kind", "nu"});
      return TailFamily::agg_asymptotic(number(j, "nu", what));
    }
    if (kind == "heavier_than_agg") {
      allow_keys(j, what, {"kind", "gamma", "c"});
      return TailFamily::heavier_than_agg(number(j, "gamma", what),
                                          number_or(j, "c", 1.0, what));
    }
    if (kind == "lighter_than_agg") {
      allow_keys(j, what, {"kind", "nu"});
      return TailFamily::lighter_than_agg(number(j, "nu", what));
    }
    if (kind == "pareto") {
      allow_keys(j, what, {"kind", "tail_index"});
      return TailFamily::pareto(number(j, "tail_index", what));
    }
    throw ConfigError("family: unknown kind '" + kind + "'");
  });
}

TailFamily parse_family(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  parts.push_back(current);

  std::vector<double> args;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    double v = 0.0;
    const auto& s = parts[i];
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw ConfigError("family: bad parameter '" + s + "' in '" +
                        std::string(text) + "'");
    }
    args.push_back(v);
  }
  const std::string& name = parts[0];
  const auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ConfigError("family: wrong parameter count in '" + std::string(text) + "'");
    }
  };
  return as_config("family", [&]() -> TailFamily {
    if (name == "gaussian" || name == "normal") {
      want(0, 0);
      return TailFamily::gaussian();
    }
    if (name == "laplace") {
      want(0, 0);
      return TailFamily::laplace();
    }
    if (name == "gg" || name == "generalized_gaussian") {
      want(1, 1);
      return TailFamily::generalized_gaussian(args[0]);
    }
    if (name == "agg" || name == "agg_asymptotic") {
      want(1, 1);
      return TailFamily::agg_asymptotic(args[0]);
    }
    if (name == "heavier" || name == "heavier_than_agg") {
      want(1, 2);
      return TailFamily::heavier_than_agg(args[0], args.size() > 1 ? args[1] : 1.0);
    }
    if (name == "lighter" || name == "lighter_than_agg") {
      want(1, 1);
      return TailFamily::lighter_than_agg(args[0]);
    }
    if (name == "pareto") {
      want(1, 1);
      return TailFamily::pareto(args[0]);
    }
    throw ConfigError("family: unknown family '" + name + "'");
  });
}

json to_json(const NoiseModel& model) {
  return std::visit(
      detail::overloaded{
          [](const IidNoise& n) {
            return json{{"kind", "iid"}, {"family", to_json(n.family)}};
          },
          [](const Ar1Noise& n) { return json{{"kind", "ar1"}, {"rho", n.rho}}; },
          [](const FgnNoise& n) { return json{{"kind", "fgn"}, {"hurst", n.hurst}}; },
          [](const BlockNoise& n) { return json{{"kind", "block"}, {"beta", n.beta}}; },
          [](const ExplicitCovarianceNoise& n) {
            json rows = json::array();
            for (Eigen::Index i = 0; i < n.sigma.rows(); ++i) {
              json row = json::array();
              for (Eigen::Index k = 0; k < n.sigma.cols(); ++k) row.push_back(n.sigma(i, k));
              rows.push_back(row);
            }
            return json{{"kind", "explicit"}, {"matrix", rows}};
          },
      },
      model);
}

NoiseModel noise_from_json(const json& j, const TailFamily& family) {
  constexpr const char* what = "noise";
  const std::string kind = kind_of(j, what);
  return as_config(what, [&]() -> NoiseModel {
    NoiseModel model;
    if (kind == "iid") {
      allow_keys(j, what, {"kind", "family"});
      model = IidNoise{j.contains("family") ? family_from_json(j["family"]) : family};
    } else if (kind == "ar1") {
      allow_keys(j, what, {"kind", "rho"});
      model = Ar1Noise{number(j, "rho", what)};
    } else if (kind == "fgn") {
      allow_keys(j, what, {"kind", "hurst"});
      model = FgnNoise{number(j, "hurst", what)};
    } else if (kind == "block") {
      allow_keys(j, what, {"kind", "beta"});
      model = BlockNoise{number(j, "beta", what)};
    } else if (kind == "explicit") {
      allow_keys(j, what, {"kind", "matrix"});
      const auto& rows = j.at("matrix");
      if (!rows.is_array() || rows.empty()) {
        throw ConfigError("noise: matrix must be a nonempty array of rows");
      }
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd sigma(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
          throw ConfigError("noise: matrix must be square");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          sigma(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
      }
      model = ExplicitCovarianceNoise{std::move(sigma)};
    } else {
      throw ConfigError("noise: unknown kind '" + kind + "'");
    }
    validate(model);
    return model;
  });
}

json to_json(const ProcedureSpec& spec) {
  using K = ProcedureSpec::Kind;
  json j{{"kind", kind_name(spec.kind)}};
  switch (spec.kind) {
    case K::bonferroni:
    case K::sidak:
    case K::holm:
    case K::hochberg:
      j["alpha"] = spec.alpha;
      break;
    case K::fixed:
      j["threshold"] = spec.threshold;
      break;
    case K::calibrated:
      j["c"] = spec.c;
      break;
    default:
      break;
  }
  return j;
}

ProcedureSpec procedure_from_json(const json& j) {
  constexpr const char* what = "procedure";
  using K = ProcedureSpec::Kind;
  const std::string kind = kind_of(j, what);
  for (K k : {K::bonferroni, K::sidak, K::holm, K::hochberg}) {
    if (kind == kind_name(k)) {
      allow_keys(j, what, {"kind", "alpha"});
      ProcedureSpec spec{k, number_or(j, "alpha", 0.1, what)};
      if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
        throw ConfigError("procedure: alpha must lie in (0, 1)");
      }
      return spec;
    }
  }
  if (kind == "fixed") {
    allow_keys(j, what, {"kind", "threshold"});
    return ProcedureSpec::fixed(number(j, "threshold", what));
  }
  if (kind == "calibrated") {
    allow_keys(j, what, {"kind", "c"});
    const double c = number_or(j, "c", 1.0, what);
    if (!(c > 0.0)) throw ConfigError("procedure: c must be positive");
    return ProcedureSpec::calibrated(c);
  }
  if (kind == "sparsity_scaled") {
    allow_keys(j, what, {"kind"});
    return ProcedureSpec::sparsity_scaled();
  }
  if (kind == "oracle") {
    allow_keys(j, what, {"kind"});
    return ProcedureSpec::oracle();
  }
  if (kind == "likelihood") {
    allow_keys(j, what, {"kind"});
    return ProcedureSpec::likelihood();
  }
  throw ConfigError("procedure: unknown kind '" + kind + "'");
}

const char* placement_name(SignalPlacement placement) {
  return placement == SignalPlacement::fixed_prefix ? "fixed_prefix"
                                                    : "uniform_random";
}

SignalPlacement parse_placement(std::string_view text) {
  if (text == "uniform_random") return SignalPlacement::uniform_random;
  if (text == "fixed_prefix") return SignalPlacement::fixed_prefix;
  throw ConfigError("unknown signal_placement '" + std::string(text) + "'");
}

json to_json(const GridSpec& spec) {
  return json{{"p", spec.p},
              {"beta_grid", spec.beta_grid},
              {"r_grid", spec.r_grid},
              {"reps", spec.reps},
              {"family", to_json(spec.family)},
              {"noise", to_json(spec.noise)},
              {"procedure", to_json(spec.procedure)},
              {"seed", spec.seed},
              {"signal_placement", placement_name(spec.placement)}};
}

GridSpec grid_spec_from_json(const json& j) {
  constexpr const char* what = "grid spec";
  require_object(j, what);
  allow_keys(j, what,
             {"p", "beta_grid", "r_grid", "reps", "family", "noise", "procedure",
              "seed", "signal_placement"});
  return as_config(what, [&] {
    GridSpec spec;
    spec.p = j.contains("p") ? count(j, "p", what) : 100;
    spec.beta_grid = j.contains("beta_grid") ? number_list(j, "beta_grid", what)
                                             : default_grid(0.05, 0.05, 19);
    spec.r_grid = j.contains("r_grid") ? number_list(j, "r_grid", what)
                                       : default_grid(0.1, 0.2, 30);
    spec.reps = j.contains("reps") ? count(j, "reps", what) : 1000;
    spec.family = j.contains("family") ? family_from_json(j["family"])
                                       : TailFamily::gaussian();
    spec.noise = j.contains("noise") ? noise_from_json(j["noise"], spec.family)
                                     : NoiseModel{IidNoise{spec.family}};
    spec.procedure = j.contains("procedure") ? procedure_from_json(j["procedure"])
                                             : ProcedureSpec::calibrated();
    spec.seed = j.contains("seed") ? count(j, "seed", what) : 1;
    if (j.contains("signal_placement")) {
      if (!j["signal_placement"].is_string()) {
        throw ConfigError("grid spec: signal_placement must be a string");
      }
      spec.placement = parse_placement(j["signal_placement"].get<std::string>());
    }
    spec.validate();
    return spec;
  });
}

json to_json(const ParetoSpec& spec) {
  return json{{"p", spec.p},
              {"alpha_tail", spec.alpha_tail},
              {"f", spec.f},
              {"r", spec.r},
              {"reps", spec.reps},
              {"seed", spec.seed},
              {"frechet_samples", spec.frechet_samples}};
}

ParetoSpec pareto_spec_from_json(const json& j) {
  constexpr const char* what = "pareto spec";
  require_object(j, what);
  allow_keys(j, what,
             {"p", "alpha_tail", "f", "r", "reps", "seed", "frechet_samples"});
  return as_config(what, [&] {
    ParetoSpec spec;
    if (j.contains("p")) spec.p = count(j, "p", what);
    spec.alpha_tail = number_or(j, "alpha_tail", spec.alpha_tail, what);
    spec.f = number_or(j, "f", spec.f, what);
    spec.r = number_or(j, "r", spec.r, what);
    if (j.contains("reps")) spec.reps = count(j, "reps", what);
    if (j.contains("seed")) spec.seed = count(j, "seed", what);
    if (j.contains("frechet_samples")) {
      spec.frechet_samples = count(j, "frechet_samples", what);
    }
    spec.validate();
    return spec;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string spec_hash(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << kGridCsvHeader << '\n';
  for (const auto& c : result.cells) {
    out << format_number(c.beta) << ',' << format_number(c.r) << ','
        << format_number(c.prob_exact) << ',' << format_number(c.stderr_exact)
        << ',' << format_number(c.fwer) << ',' << format_number(c.mean_fdp) << ','
        << format_number(c.mean_fnp) << ',' << format_number(c.mean_hamming) << ','
        << c.reps << '\n';
  }
}

void write_boundary_csv(std::ostream& out, double nu, std::size_t grid_points) {
  if (!(nu > 0.0)) throw DomainError("boundary: nu must be positive");
  if (grid_points < 1) throw DomainError("boundary: need at least one grid point");
  out << "beta,g,h,f,nonudd\n";
  const double n = static_cast<double>(grid_points);
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double beta = static_cast<double>(i) / n;
    out << format_number(beta) << ',' << format_number(strong_boundary(beta, nu))
        << ',' << format_number(weak_boundary(beta)) << ',';
    if (nu == 2.0 && beta > 0.5) out << format_number(detection_boundary(beta));
    out << ',' << format_number(non_udd_boundary(beta)) << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) throw ConfigError("matrix CSV: empty cell");
      const std::string trimmed = cell.substr(first, last - first + 1);
      double v = 0.0;
      const auto res =
          std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (res.ec != std::errc{} || res.ptr != trimmed.data() + trimmed.size()) {
        throw ConfigError("matrix CSV: bad number '" + trimmed + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix CSV: no rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw ConfigError("matrix CSV: matrix must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return m;
}

}  // namespace suprec
