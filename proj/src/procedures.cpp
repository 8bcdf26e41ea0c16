#include "suprec/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "suprec/detail/overloaded.hpp"
#include "suprec/error.hpp"
#include "suprec/lambert_w.hpp"

namespace suprec {

using detail::overloaded;

namespace {

void require_level(double alpha, const char* op) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(op) + ": alpha must lie in (0, 1)");
  }
}

// Indices ordered by decreasing value; ties keep index order.
std::vector<std::size_t> descending_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  return order;
}

SupportEstimate top_k(std::span<const double> x,
                      const std::vector<std::size_t>& order, std::size_t k) {
  SupportEstimate est;
  if (k == 0) return est;
  est.selected.assign(order.begin(), order.begin() + static_cast<long>(k));
  std::sort(est.selected.begin(), est.selected.end());
  est.threshold = x[order[k - 1]];
  return est;
}

// {j : score(j) >= s-th largest score}.
SupportEstimate top_s_with_ties(std::span<const double> score, std::size_t s) {
  if (s < 1 || s > score.size()) {
    throw DomainError("top-s selection: s must lie in [1, p]");
  }
  std::vector<double> scratch(score.begin(), score.end());
  auto nth = scratch.begin() + static_cast<long>(s - 1);
  std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>());
  const double cut = *nth;
  SupportEstimate est;
  est.selected.reserve(s);
  for (std::size_t j = 0; j < score.size(); ++j) {
    if (score[j] >= cut) est.selected.push_back(j);
  }
  est.threshold = cut;
  return est;
}

}  // namespace

double bonferroni_threshold(const TailFamily& family, std::size_t p,
                            double alpha) {
  require_level(alpha, "bonferroni_threshold");
  if (p < 1) throw DomainError("bonferroni_threshold: p must be at least 1");
  return family.upper_quantile(alpha / static_cast<double>(p));
}

double sidak_threshold(const TailFamily& family, std::size_t p, double alpha) {
  require_level(alpha, "sidak_threshold");
  if (p < 1) throw DomainError("sidak_threshold: p must be at least 1");
  // 1 - (1 - alpha)^(1/p), without cancellation.
  const double tail = -std::expm1(std::log1p(-alpha) / static_cast<double>(p));
  return family.upper_quantile(tail);
}

SupportEstimate threshold_select(std::span<const double> x, double t) {
  SupportEstimate est;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] > t) est.selected.push_back(j);
  }
  est.threshold = t;
  return est;
}

SupportEstimate holm_select(std::span<const double> x, const TailFamily& family,
                            double alpha) {
  require_level(alpha, "holm_select");
  const std::size_t p = x.size();
  const auto order = descending_order(x);
  std::size_t k = 0;
  while (k < p) {
    const double bound = alpha / static_cast<double>(p - k);
    if (!(family.survival(x[order[k]]) <= bound)) break;
    ++k;
  }
  return top_k(x, order, k);
}

SupportEstimate hochberg_select(std::span<const double> x,
                                const TailFamily& family, double alpha) {
  require_level(alpha, "hochberg_select");
  const std::size_t p = x.size();
  const auto order = descending_order(x);
  std::size_t k = 0;
  for (std::size_t i = 0; i < p; ++i) {
    const double pvalue = family.survival(x[order[i]]);
    // Every bound is at most alpha and p-values only grow down the order.
    if (pvalue > alpha) break;
    if (pvalue <= alpha / static_cast<double>(p - i)) k = i + 1;
  }
  return top_k(x, order, k);
}

SupportEstimate oracle_top_s(std::span<const double> x, std::size_t s) {
  return top_s_with_ties(x, s);
}

SupportEstimate likelihood_top_s(std::span<const double> x,
                                 const LogDensityFn& null_log_density,
                                 const LogDensityFn& alt_log_density,
                                 std::size_t s) {
  std::vector<double> log_ratio(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double a = alt_log_density(x[j]);
    const double n = null_log_density(x[j]);
    log_ratio[j] = (a == n) ? 0.0 : a - n;
  }
  auto est = top_s_with_ties(log_ratio, s);
  est.threshold.reset();
  return est;
}

SupportEstimate apply(const Procedure& procedure, std::span<const double> x) {
  const std::size_t p = x.size();
  return std::visit(
      overloaded{
          [&](const Bonferroni& b) {
            return threshold_select(x, bonferroni_threshold(procedure.family, p,
                                                            b.alpha));
          },
          [&](const Sidak& s) {
            return threshold_select(
                x, sidak_threshold(procedure.family, p, s.alpha));
          },
          [&](const Holm& h) { return holm_select(x, procedure.family, h.alpha); },
          [&](const Hochberg& h) {
            return hochberg_select(x, procedure.family, h.alpha);
          },
          [&](const FixedThreshold& f) { return threshold_select(x, f.t); },
          [&](const OracleTopS& o) { return oracle_top_s(x, o.s); },
          [&](const LikelihoodRatioTopS& l) {
            return likelihood_top_s(x, l.null_log_density, l.alt_log_density,
                                    l.s);
          },
      },
      procedure.rule);
}

RecoveryMetrics metrics(const SupportEstimate& estimate,
                        std::span<const std::size_t> truth) {
  const auto& sel = estimate.selected;
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < sel.size() && j < truth.size();) {
    if (sel[i] == truth[j]) {
      ++common, ++i, ++j;
    } else if (sel[i] < truth[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t false_pos = sel.size() - common;
  const std::size_t false_neg = truth.size() - common;
  RecoveryMetrics m;
  m.false_inclusion = false_pos > 0;
  m.hamming = false_pos + false_neg;
  m.exact = m.hamming == 0;
  m.fdp = sel.empty() ? 0.0
                      : static_cast<double>(false_pos) /
                            static_cast<double>(sel.size());
  m.fnp = truth.empty() ? 0.0
                        : static_cast<double>(false_neg) /
                              static_cast<double>(truth.size());
  return m;
}

double gaussian_calibrated_threshold(std::size_t p) {
  if (p < 2) throw DomainError("calibrated threshold: p must be at least 2");
  return std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

double laplace_calibrated_threshold(std::size_t p) {
  if (p < 3) throw DomainError("calibrated threshold: p must be at least 3");
  const double log_p = std::log(static_cast<double>(p));
  return log_p + 0.5 * std::log(log_p);
}

double gg_half_calibrated_threshold(std::size_t p, double c) {
  if (p < 2) throw DomainError("calibrated threshold: p must be at least 2");
  if (!(c > 0.0)) throw DomainError("calibrated threshold: c must be positive");
  const double pd = static_cast<double>(p);
  const double arg = -c / (std::numbers::e * pd * std::log(pd));
  const double w = lambert_w(LambertBranch::minus_one, arg);
  return 0.25 * (w + 1.0) * (w + 1.0);
}

double calibrated_threshold(const TailFamily& family, std::size_t p, double c) {
  return std::visit(
      overloaded{
          [&](Gaussian) { return gaussian_calibrated_threshold(p); },
          [&](Laplace) { return laplace_calibrated_threshold(p); },
          [&](const GeneralizedGaussian& g) {
            if (g.nu == 2.0) return gaussian_calibrated_threshold(p);
            if (g.nu == 1.0) return laplace_calibrated_threshold(p);
            if (g.nu == 0.5) return gg_half_calibrated_threshold(p, c);
            throw DomainError(
                "calibrated_threshold: generalized Gaussian needs nu in "
                "{1/2, 1, 2}");
          },
          [](const auto&) -> double {
            throw DomainError(
                "calibrated_threshold: only defined for Gaussian, Laplace and "
                "generalized Gaussian(1/2)");
          },
      },
      family.law());
}

FixedThreshold calibrated_procedure(const TailFamily& family, std::size_t p,
                                    double c) {
  return FixedThreshold{calibrated_threshold(family, p, c)};
}

}  // namespace suprec
