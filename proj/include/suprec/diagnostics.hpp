#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "suprec/noise.hpp"
#include "suprec/tail_models.hpp"

namespace suprec {

/// Largest number of off-diagonal entries above delta in any row:
/// max_j |{k != j : sigma(j, k) > delta}|. delta in (0, 1).
std::size_t udd_count(const Eigen::MatrixXd& sigma, double delta);

struct UddProfile {
  std::vector<double> delta_grid;
  std::vector<std::size_t> counts;  // udd_count per delta, excluding the diagonal
  // The dependence bound N(delta) counts the coordinate itself.
  std::size_t with_self(std::size_t i) const { return counts[i] + 1; }
};
UddProfile udd_profile(const Eigen::MatrixXd& sigma,
                       std::span<const double> deltas);

/// Canonical-distance radius sqrt(2 (1 - delta)) matching covariance delta.
double packing_radius(double delta);

/*!
 * Greedy packing: repeatedly take the smallest remaining index j, keep it,
 * and discard every i with sigma(i, j) > delta. Members have pairwise
 * covariance <= delta (canonical distance >= packing_radius(delta)), and
 * there are at least n / (udd_count + 1) of them.
 */
std::vector<std::size_t> gamma_packing(const Eigen::MatrixXd& sigma,
                                       double delta);

/*!
 * Searches indices 1..n of an (n+1)x(n+1) correlation matrix whose first row
 * satisfies rho(0, j) > c for a k-subset with all pairwise correlations above
 * c^2 / 2. Exact: returns nothing only if no such subset exists.
 *
 * Throws PreconditionError if some rho(0, j) <= c.
 */
std::optional<std::vector<std::size_t>> correlated_subset_search(
    const Eigen::MatrixXd& rho, double c, std::size_t k);

/// floor(log2(sqrt(n))).
std::size_t ramsey_subset_size(std::uint64_t n);
/// 2^(2 ceil(2 / c^2) + 4): the dimension from which a subset of size
/// ramsey_subset_size(n) is guaranteed.
std::uint64_t ramsey_min_dimension(double c);
/// binom(2k - 2, k - 1) <= n, evaluated exactly.
bool ramsey_binomial_bound(std::size_t k, std::uint64_t n);

enum class SubsetSelection { uniform_random, leading };

struct StabilitySummary {
  std::size_t subset_size = 0;
  double normalizer = 0.0;      // u at subset_size
  std::vector<double> ratios;   // one per replication, sorted ascending
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;

  double exceedance_fraction(double level) const;
};

/*!
 * Monte Carlo distribution of max_{j in S} e(j) / u_{|S|}, where
 * u_m = F^{-1}(1 - 1/m) for the marginal `family` and S is drawn per
 * replication. Replication r uses derive_stream(seed, 0, r), so results do not
 * depend on `workers`.
 */
StabilitySummary stability_ratio(const NoiseModel& model,
                                 const TailFamily& family, std::size_t p,
                                 std::size_t subset_size, std::size_t reps,
                                 std::uint64_t seed,
                                 SubsetSelection selection =
                                     SubsetSelection::uniform_random,
                                 unsigned workers = 0);

/// u_{p log p} / u_p - 1 for the family's exact quantiles, p > e.
double cp_sequence(const TailFamily& family, double p);
/// The same ratio with the asymptotic AGG(nu) quantiles:
/// ((log p + log log p) / log p)^(1/nu) - 1.
double asymptotic_cp(double nu, double p);

}  // namespace suprec
