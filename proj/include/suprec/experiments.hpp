#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "suprec/noise.hpp"
#include "suprec/procedures.hpp"
#include "suprec/random.hpp"
#include "suprec/tail_models.hpp"

namespace suprec {

enum class SignalPlacement { uniform_random, fixed_prefix };

/*!
 * A procedure described independently of the cell it runs in. Thresholds
 * that depend on p, beta, s or the signal size are resolved per cell.
 */
struct ProcedureSpec {
  enum class Kind {
    bonferroni,
    sidak,
    holm,
    hochberg,
    fixed,            // x > threshold
    calibrated,       // calibrated_threshold(family, p, c)
    sparsity_scaled,  // sqrt(2 (1 - beta) log p), Gaussian only
    oracle,           // top s, s known
    likelihood,       // top s by f(x - delta) / f(x)
  };
  Kind kind = Kind::calibrated;
  double alpha = 0.1;
  double threshold = 0.0;
  double c = 1.0;

  static ProcedureSpec bonferroni(double a) { return {Kind::bonferroni, a}; }
  static ProcedureSpec sidak(double a) { return {Kind::sidak, a}; }
  static ProcedureSpec holm(double a) { return {Kind::holm, a}; }
  static ProcedureSpec hochberg(double a) { return {Kind::hochberg, a}; }
  static ProcedureSpec fixed(double t) { return {Kind::fixed, 0.0, t}; }
  static ProcedureSpec calibrated(double c = 1.0) {
    return {Kind::calibrated, 0.0, 0.0, c};
  }
  static ProcedureSpec sparsity_scaled() { return {Kind::sparsity_scaled}; }
  static ProcedureSpec oracle() { return {Kind::oracle}; }
  static ProcedureSpec likelihood() { return {Kind::likelihood}; }
};

const char* kind_name(ProcedureSpec::Kind kind);

/// Sparsity and common magnitude of the signal in one cell.
struct SignalLayout {
  std::size_t s;
  double delta;
};

/// AGG(nu) families: s = floor(p^(1 - beta)), delta = (nu r log p)^(1/nu).
/// Heavier/lighter-than-AGG families use their own parametrizations.
/// Pareto has no (beta, r) parametrization and is rejected.
SignalLayout signal_layout(const TailFamily& family, std::size_t p,
                           double beta, double r);

Procedure resolve_procedure(const ProcedureSpec& spec, const TailFamily& family,
                            std::size_t p, double beta,
                            const SignalLayout& layout);

/// Everything a trial needs, built once per cell and shared across trials.
struct TrialSetup {
  std::size_t p = 0;
  SignalLayout layout{};
  SignalPlacement placement = SignalPlacement::uniform_random;
  std::shared_ptr<const NoiseGenerator> noise;
  Procedure procedure;
};

/// IID noise always takes its marginal from `family`; other models must be
/// paired with a Gaussian family.
TrialSetup prepare_trial(std::size_t p, double beta, double r,
                         const TailFamily& family, const NoiseModel& noise,
                         const ProcedureSpec& procedure,
                         SignalPlacement placement);

/// Draws the support (from rng, first), then the noise, then applies the
/// procedure.
RecoveryMetrics run_trial(const TrialSetup& setup, RandomStream& rng);

RecoveryMetrics run_trial(std::size_t p, double beta, double r,
                          const TailFamily& family, const NoiseModel& noise,
                          const ProcedureSpec& procedure, RandomStream& rng,
                          SignalPlacement placement =
                              SignalPlacement::uniform_random);

/// First s indices of a uniformly random permutation of 0..p-1, sorted.
std::vector<std::size_t> random_support(std::size_t p, std::size_t s,
                                        RandomStream& rng);

struct GridSpec {
  std::size_t p = 100;
  std::vector<double> beta_grid;
  std::vector<double> r_grid;
  std::size_t reps = 200;
  TailFamily family;
  NoiseModel noise = IidNoise{TailFamily::gaussian()};
  ProcedureSpec procedure;
  std::uint64_t seed = 1;
  SignalPlacement placement = SignalPlacement::uniform_random;

  // Throws DomainError on empty grids, reps == 0, beta outside (0, 1],
  // r <= 0, s == 0 in some cell, or non-IID noise with a non-Gaussian family.
  void validate() const;
  std::size_t cell_count() const { return beta_grid.size() * r_grid.size(); }
};

struct CellResult {
  double beta = 0.0;
  double r = 0.0;
  std::size_t exact = 0;
  std::size_t false_inclusions = 0;
  double prob_exact = 0.0;
  double stderr_exact = 0.0;  // sqrt(p(1 - p) / reps)
  double fwer = 0.0;
  double mean_fdp = 0.0;
  double mean_fnp = 0.0;
  double mean_hamming = 0.0;
  std::size_t reps = 0;
};

/// Cells in beta-major order: index = i_beta * |r_grid| + i_r.
struct GridResult {
  std::vector<CellResult> cells;
};

using CellProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Trial (cell, rep) uses derive_stream(seed, cell, rep); the result is
/// bit-identical for every worker count.
GridResult run_grid(const GridSpec& spec, unsigned workers = 0,
                    const CellProgress& progress = {});

struct ParetoSpec {
  std::size_t p = 10000;
  double alpha_tail = 2.0;
  double f = 0.5;
  double r = 1.0;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::size_t frechet_samples = 1000000;

  void validate() const;
  std::size_t sparsity() const;  // round(f p)
  double delta() const;          // r p^(1/alpha)
};

struct ParetoResult {
  double empirical = 0.0;  // oracle top-s exact recovery frequency
  double empirical_stderr = 0.0;
  double limit = 0.0;      // P[(1-f)^(1/a) Y1 + f^(1/a) Y2 < r], by Monte Carlo
  double limit_stderr = 0.0;
  std::size_t s = 0;
  double delta = 0.0;
};

ParetoResult pareto_experiment(const ParetoSpec& spec, unsigned workers = 0);

/// Monte Carlo estimate of P[(1-f)^(1/a) Y1 + f^(1/a) Y2 < r] for iid
/// a-Frechet Y1, Y2 sampled as (-log U)^(-1/a).
double frechet_limit(double alpha_tail, double f, double r,
                     std::size_t samples, RandomStream& rng);

/// p * survival(calibrated threshold): the Bonferroni level the calibrated
/// threshold corresponds to.
double bonferroni_alpha_schedule(const TailFamily& family, std::size_t p,
                                 double c = 1.0);

}  // namespace suprec
