#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "suprec/tail_models.hpp"

namespace suprec {

// Indices are zero-based throughout: coordinate j of a length-p vector is
// index j - 1 in the usual one-based notation.

/// Estimated support, sorted ascending.
struct SupportEstimate {
  std::vector<std::size_t> selected;
  std::optional<double> threshold;
};

struct RecoveryMetrics {
  bool exact = false;
  bool false_inclusion = false;  // the family-wise error event
  double fdp = 0.0;
  double fnp = 0.0;
  std::size_t hamming = 0;
};

using LogDensityFn = std::function<double(double)>;

struct Bonferroni {
  double alpha;
};
struct Sidak {
  double alpha;
};
struct Holm {
  double alpha;
};
struct Hochberg {
  double alpha;
};
struct FixedThreshold {
  double t;
};
struct OracleTopS {
  std::size_t s;
};
struct LikelihoodRatioTopS {
  std::size_t s;
  LogDensityFn null_log_density;
  LogDensityFn alt_log_density;
};

/*!
 * A support estimator plus the marginal law used for its quantiles and
 * p-values.
 */
struct Procedure {
  using Rule = std::variant<Bonferroni, Sidak, Holm, Hochberg, FixedThreshold,
                            OracleTopS, LikelihoodRatioTopS>;
  Rule rule;
  TailFamily family;
};

/// F^{-1}(1 - alpha / p).
double bonferroni_threshold(const TailFamily& family, std::size_t p,
                            double alpha);

/// F^{-1}((1 - alpha)^(1/p)). Never above the Bonferroni threshold.
double sidak_threshold(const TailFamily& family, std::size_t p, double alpha);

/// {j : x(j) > t}.
SupportEstimate threshold_select(std::span<const double> x, double t);

/// Step-down: largest k with survival(x_(i)) <= alpha / (p - i + 1) for every
/// i <= k, where x_(1) >= x_(2) >= ...; selects the top k.
SupportEstimate holm_select(std::span<const double> x, const TailFamily& family,
                            double alpha);

/// Step-up: largest i with survival(x_(i)) <= alpha / (p - i + 1); selects
/// the top i.
SupportEstimate hochberg_select(std::span<const double> x,
                                const TailFamily& family, double alpha);

/// {j : x(j) >= x_[s]}, x_[s] the s-th largest value. Ties at x_[s] are all
/// selected.
SupportEstimate oracle_top_s(std::span<const double> x, std::size_t s);

/// Top s coordinates by likelihood ratio f_alt(x) / f_null(x), ties included.
SupportEstimate likelihood_top_s(std::span<const double> x,
                                 const LogDensityFn& null_log_density,
                                 const LogDensityFn& alt_log_density,
                                 std::size_t s);

SupportEstimate apply(const Procedure& procedure, std::span<const double> x);

/// Compares an estimate with the true support (sorted, zero-based).
RecoveryMetrics metrics(const SupportEstimate& estimate,
                        std::span<const std::size_t> truth);

// Thresholds that make Bonferroni's FWER vanish slowly with p.

/// sqrt(2 log p).
double gaussian_calibrated_threshold(std::size_t p);
/// log p + (log log p) / 2.
double laplace_calibrated_threshold(std::size_t p);
/// (W_{-1}(-c / (e p log p)) + 1)^2 / 4 for the nu = 1/2 generalized
/// Gaussian. `c` is a free calibration constant, default 1.
double gg_half_calibrated_threshold(std::size_t p, double c = 1.0);

/// Dispatches on the family: Gaussian, Laplace or GeneralizedGaussian(1/2).
/// Throws DomainError for other families.
double calibrated_threshold(const TailFamily& family, std::size_t p,
                            double c = 1.0);
FixedThreshold calibrated_procedure(const TailFamily& family, std::size_t p,
                                    double c = 1.0);

}  // namespace suprec
