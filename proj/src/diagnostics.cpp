#include "suprec/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "suprec/clique.hpp"
#include "suprec/error.hpp"
#include "suprec/parallel.hpp"
#include "suprec/random.hpp"

namespace suprec {

namespace {

void require_delta(double delta, const char* op) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError(std::string(op) + ": delta must lie in (0, 1)");
  }
}

void require_square(const Eigen::MatrixXd& sigma, const char* op) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw DomainError(std::string(op) + ": matrix must be square and nonempty");
  }
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::size_t udd_count(const Eigen::MatrixXd& sigma, double delta) {
  require_delta(delta, "udd_count");
  require_square(sigma, "udd_count");
  std::size_t worst = 0;
  for (Eigen::Index j = 0; j < sigma.rows(); ++j) {
    std::size_t count = 0;
    for (Eigen::Index k = 0; k < sigma.cols(); ++k) {
      if (k != j && sigma(j, k) > delta) ++count;
    }
    worst = std::max(worst, count);
  }
  return worst;
}

UddProfile udd_profile(const Eigen::MatrixXd& sigma,
                       std::span<const double> deltas) {
  UddProfile profile;
  profile.delta_grid.assign(deltas.begin(), deltas.end());
  for (double d : deltas) profile.counts.push_back(udd_count(sigma, d));
  return profile;
}

double packing_radius(double delta) {
  require_delta(delta, "packing_radius");
  return std::sqrt(2.0 * (1.0 - delta));
}

std::vector<std::size_t> gamma_packing(const Eigen::MatrixXd& sigma,
                                       double delta) {
  require_delta(delta, "gamma_packing");
  require_square(sigma, "gamma_packing");
  const auto n = static_cast<std::size_t>(sigma.rows());
  std::vector<bool> remaining(n, true);
  std::vector<std::size_t> packing;
  for (std::size_t j = 0; j < n; ++j) {
    if (!remaining[j]) continue;
    packing.push_back(j);
    for (std::size_t i = j; i < n; ++i) {
      if (remaining[i] && (i == j || sigma(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j)) > delta)) {
        remaining[i] = false;
      }
    }
  }
  return packing;
}

std::optional<std::vector<std::size_t>> correlated_subset_search(
    const Eigen::MatrixXd& rho, double c, std::size_t k) {
  require_square(rho, "correlated_subset_search");
  if (!(c > 0.0 && c < 1.0)) {
    throw DomainError("correlated_subset_search: c must lie in (0, 1)");
  }
  const auto dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t j = 1; j < dim; ++j) {
    if (!(rho(0, static_cast<Eigen::Index>(j)) > c)) {
      throw PreconditionError(
          "correlated_subset_search: every rho(0, j) must exceed c");
    }
  }
  const std::size_t n = dim - 1;
  const double cut = c * c / 2.0;
  BitGraph graph(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rho(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j + 1)) >
          cut) {
        graph.connect(i, j);
      }
    }
  }
  auto found = find_clique(graph, k);
  if (!found) return std::nullopt;
  for (auto& v : *found) ++v;
  return found;
}

std::size_t ramsey_subset_size(std::uint64_t n) {
  if (n < 1) throw DomainError("ramsey_subset_size: n must be positive");
  // floor(log2(n) / 2) == floor(log2(sqrt(n))), computed on integers.
  return static_cast<std::size_t>(std::bit_width(n) - 1) / 2;
}

std::uint64_t ramsey_min_dimension(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw DomainError("ramsey_min_dimension: c must lie in (0, 1)");
  }
  const auto exponent = 2 * static_cast<std::uint64_t>(std::ceil(2.0 / (c * c))) + 4;
  if (exponent >= 64) throw DomainError("ramsey_min_dimension: overflow");
  return std::uint64_t{1} << exponent;
}

bool ramsey_binomial_bound(std::size_t k, std::uint64_t n) {
  if (k < 1) throw DomainError("ramsey_binomial_bound: k must be positive");
  // binom(2m, m) built incrementally; stop as soon as it exceeds n.
  const std::size_t m = k - 1;
  unsigned __int128 value = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    value = value * (m + i) / i;
    if (value > n) return false;
  }
  return value <= n;
}

double StabilitySummary::exceedance_fraction(double level) const {
  const auto above = ratios.end() - std::upper_bound(ratios.begin(), ratios.end(), level);
  return static_cast<double>(above) / static_cast<double>(ratios.size());
}

StabilitySummary stability_ratio(const NoiseModel& model,
                                 const TailFamily& family, std::size_t p,
                                 std::size_t subset_size, std::size_t reps,
                                 std::uint64_t seed, SubsetSelection selection,
                                 unsigned workers) {
  if (subset_size < 2 || subset_size > p) {
    throw DomainError("stability_ratio: subset size must lie in [2, p]");
  }
  if (reps < 1) throw DomainError("stability_ratio: reps must be positive");
  const NoiseGenerator generator(model, p);
  StabilitySummary summary;
  summary.subset_size = subset_size;
  summary.normalizer = family.upper_quantile(1.0 / static_cast<double>(subset_size));
  summary.ratios.resize(reps);

  parallel_for(reps, workers, [&](std::size_t rep) {
    auto rng = derive_stream(seed, 0, static_cast<std::uint32_t>(rep));
    std::vector<double> noise(p);
    generator.sample(rng, noise);
    double maximum = -std::numeric_limits<double>::infinity();
    if (selection == SubsetSelection::leading || subset_size == p) {
      for (std::size_t j = 0; j < subset_size; ++j) maximum = std::max(maximum, noise[j]);
    } else {
      std::vector<std::size_t> index(p);
      std::iota(index.begin(), index.end(), std::size_t{0});
      for (std::size_t j = 0; j < subset_size; ++j) {
        const std::size_t pick = j + rng.uniform_index(p - j);
        std::swap(index[j], index[pick]);
        maximum = std::max(maximum, noise[index[j]]);
      }
    }
    summary.ratios[rep] = maximum / summary.normalizer;
  });

  std::sort(summary.ratios.begin(), summary.ratios.end());
  summary.mean = std::accumulate(summary.ratios.begin(), summary.ratios.end(), 0.0) /
                 static_cast<double>(reps);
  summary.median = sorted_quantile(summary.ratios, 0.5);
  summary.q05 = sorted_quantile(summary.ratios, 0.05);
  summary.q95 = sorted_quantile(summary.ratios, 0.95);
  return summary;
}

double cp_sequence(const TailFamily& family, double p) {
  if (!(p > std::exp(1.0))) throw DomainError("cp_sequence: p must exceed e");
  const double upper = family.upper_quantile(1.0 / (p * std::log(p)));
  return upper / family.upper_quantile(1.0 / p) - 1.0;
}

double asymptotic_cp(double nu, double p) {
  if (!(p > std::exp(1.0))) throw DomainError("asymptotic_cp: p must exceed e");
  if (!(nu > 0.0)) throw DomainError("asymptotic_cp: nu must be positive");
  const double log_p = std::log(p);
  return std::pow((log_p + std::log(log_p)) / log_p, 1.0 / nu) - 1.0;
}

}  // namespace suprec
