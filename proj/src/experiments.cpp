#include "suprec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "suprec/boundaries.hpp"
#include "suprec/detail/overloaded.hpp"
#include "suprec/error.hpp"
#include "suprec/parallel.hpp"

namespace suprec {

const char* kind_name(ProcedureSpec::Kind kind) {
  using K = ProcedureSpec::Kind;
  switch (kind) {
    case K::bonferroni: return "bonferroni";
    case K::sidak: return "sidak";
    case K::holm: return "holm";
    case K::hochberg: return "hochberg";
    case K::fixed: return "fixed";
    case K::calibrated: return "calibrated";
    case K::sparsity_scaled: return "sparsity_scaled";
    case K::oracle: return "oracle";
    case K::likelihood: return "likelihood";
  }
  throw InternalError("kind_name: unknown kind");
}

SignalLayout signal_layout(const TailFamily& family, std::size_t p,
                           double beta, double r) {
  if (auto nu = family.agg_index()) {
    SignalConfig config{p, beta, r, r, *nu};
    config.validate();
    return {config.sparsity(), config.delta_low()};
  }
  return std::visit(
      detail::overloaded{
          [&](const HeavierThanAgg& h) -> SignalLayout {
            const auto alt = heavier_than_agg_params(p, beta, h.gamma, r);
            return {alt.s, alt.delta};
          },
          [&](const LighterThanAgg& l) -> SignalLayout {
            const auto alt = lighter_than_agg_params(p, beta, l.nu, r);
            return {alt.s, alt.delta};
          },
          [&](const auto&) -> SignalLayout {
            throw DomainError("signal_layout: " + family.name() +
                              " has no (beta, r) parametrization");
          },
      },
      family.law());
}

Procedure resolve_procedure(const ProcedureSpec& spec, const TailFamily& family,
                            std::size_t p, double beta,
                            const SignalLayout& layout) {
  using K = ProcedureSpec::Kind;
  const auto require_alpha = [&] {
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
      throw DomainError("procedure: alpha must lie in (0, 1)");
    }
  };
  switch (spec.kind) {
    case K::bonferroni:
      require_alpha();
      return {Bonferroni{spec.alpha}, family};
    case K::sidak:
      require_alpha();
      return {Sidak{spec.alpha}, family};
    case K::holm:
      require_alpha();
      return {Holm{spec.alpha}, family};
    case K::hochberg:
      require_alpha();
      return {Hochberg{spec.alpha}, family};
    case K::fixed:
      if (!std::isfinite(spec.threshold)) {
        throw DomainError("procedure: threshold must be finite");
      }
      return {FixedThreshold{spec.threshold}, family};
    case K::calibrated:
      return {calibrated_procedure(family, p, spec.c), family};
    case K::sparsity_scaled:
      if (!family.is_gaussian()) {
        throw DomainError("procedure: sparsity_scaled needs a Gaussian family");
      }
      return {FixedThreshold{std::sqrt(2.0 * (1.0 - beta) *
                                       std::log(static_cast<double>(p)))},
              family};
    case K::oracle:
      return {OracleTopS{layout.s}, family};
    case K::likelihood: {
      const double delta = layout.delta;
      LogDensityFn null = [family](double x) { return family.log_density(x); };
      LogDensityFn alt = [family, delta](double x) {
        return family.log_density(x - delta);
      };
      return {LikelihoodRatioTopS{layout.s, std::move(null), std::move(alt)},
              family};
    }
  }
  throw InternalError("resolve_procedure: unknown kind");
}

namespace {

bool is_iid(const NoiseModel& noise) {
  return std::holds_alternative<IidNoise>(noise);
}

}  // namespace

TrialSetup prepare_trial(std::size_t p, double beta, double r,
                         const TailFamily& family, const NoiseModel& noise,
                         const ProcedureSpec& procedure,
                         SignalPlacement placement) {
  if (!is_iid(noise) && !family.is_gaussian()) {
    throw DomainError("dependent noise models have Gaussian marginals; family "
                      "must be gaussian");
  }
  TrialSetup setup;
  setup.p = p;
  setup.layout = signal_layout(family, p, beta, r);
  if (setup.layout.s == 0) throw DomainError("trial: sparsity s is zero");
  if (setup.layout.s > p) throw DomainError("trial: sparsity exceeds p");
  setup.placement = placement;
  const NoiseModel model = is_iid(noise) ? NoiseModel{IidNoise{family}} : noise;
  setup.noise = std::make_shared<const NoiseGenerator>(model, p);
  setup.procedure = resolve_procedure(procedure, family, p, beta, setup.layout);
  return setup;
}

std::vector<std::size_t> random_support(std::size_t p, std::size_t s,
                                        RandomStream& rng) {
  if (s > p) throw DomainError("random_support: s exceeds p");
  std::vector<std::size_t> index(p);
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t j = 0; j < s; ++j) {
    std::swap(index[j], index[j + rng.uniform_index(p - j)]);
  }
  index.resize(s);
  std::sort(index.begin(), index.end());
  return index;
}

RecoveryMetrics run_trial(const TrialSetup& setup, RandomStream& rng) {
  std::vector<std::size_t> support;
  if (setup.placement == SignalPlacement::fixed_prefix) {
    support.resize(setup.layout.s);
    std::iota(support.begin(), support.end(), std::size_t{0});
  } else {
    support = random_support(setup.p, setup.layout.s, rng);
  }
  std::vector<double> x(setup.p);
  setup.noise->sample(rng, x);
  for (std::size_t j : support) x[j] += setup.layout.delta;
  return metrics(suprec::apply(setup.procedure, x), support);
}

RecoveryMetrics run_trial(std::size_t p, double beta, double r,
                          const TailFamily& family, const NoiseModel& noise,
                          const ProcedureSpec& procedure, RandomStream& rng,
                          SignalPlacement placement) {
  return run_trial(prepare_trial(p, beta, r, family, noise, procedure, placement),
                   rng);
}

void GridSpec::validate() const {
  if (p < 2) throw DomainError("grid: p must be at least 2");
  if (beta_grid.empty() || r_grid.empty()) {
    throw DomainError("grid: beta and r grids must be nonempty");
  }
  if (reps < 1) throw DomainError("grid: reps must be positive");
  for (double b : beta_grid) {
    if (!(b > 0.0 && b <= 1.0)) {
      throw DomainError("grid: beta " + std::to_string(b) + " outside (0, 1]");
    }
  }
  for (double r : r_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DomainError("grid: r must be positive");
    }
  }
  if (!is_iid(noise) && !family.is_gaussian()) {
    throw DomainError("grid: dependent noise requires the gaussian family");
  }
  suprec::validate(noise);
  for (double b : beta_grid) {
    for (double r : r_grid) {
      if (signal_layout(family, p, b, r).s == 0) {
        throw DomainError("grid: sparsity is zero at beta " + std::to_string(b));
      }
    }
  }
}

GridResult run_grid(const GridSpec& spec, unsigned workers,
                    const CellProgress& progress) {
  spec.validate();
  const std::size_t n_r = spec.r_grid.size();
  const std::size_t cells = spec.cell_count();
  GridResult result;
  result.cells.reserve(cells);

  // Noise state depends only on (model, p); build it once.
  const NoiseModel model =
      is_iid(spec.noise) ? NoiseModel{IidNoise{spec.family}} : spec.noise;
  const auto noise = std::make_shared<const NoiseGenerator>(model, spec.p);

  std::vector<RecoveryMetrics> trials(spec.reps);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const double beta = spec.beta_grid[cell / n_r];
    const double r = spec.r_grid[cell % n_r];
    TrialSetup setup;
    setup.p = spec.p;
    setup.layout = signal_layout(spec.family, spec.p, beta, r);
    setup.placement = spec.placement;
    setup.noise = noise;
    setup.procedure =
        resolve_procedure(spec.procedure, spec.family, spec.p, beta, setup.layout);

    parallel_for(spec.reps, workers, [&](std::size_t rep) {
      auto rng = derive_stream(spec.seed, static_cast<std::uint32_t>(cell),
                               static_cast<std::uint32_t>(rep));
      trials[rep] = run_trial(setup, rng);
    });

    CellResult out;
    out.beta = beta;
    out.r = r;
    out.reps = spec.reps;
    double fdp = 0.0, fnp = 0.0, hamming = 0.0;
    for (const auto& t : trials) {
      out.exact += t.exact ? 1 : 0;
      out.false_inclusions += t.false_inclusion ? 1 : 0;
      fdp += t.fdp;
      fnp += t.fnp;
      hamming += static_cast<double>(t.hamming);
    }
    const double n = static_cast<double>(spec.reps);
    out.prob_exact = static_cast<double>(out.exact) / n;
    out.stderr_exact = std::sqrt(out.prob_exact * (1.0 - out.prob_exact) / n);
    out.fwer = static_cast<double>(out.false_inclusions) / n;
    out.mean_fdp = fdp / n;
    out.mean_fnp = fnp / n;
    out.mean_hamming = hamming / n;
    result.cells.push_back(out);
    if (progress) progress(cell + 1, cells);
  }
  return result;
}

void ParetoSpec::validate() const {
  if (p < 2) throw DomainError("pareto: p must be at least 2");
  if (!(alpha_tail > 0.0)) throw DomainError("pareto: alpha_tail must be positive");
  if (!(f > 0.0 && f < 1.0)) throw DomainError("pareto: f must lie in (0, 1)");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("pareto: r must be positive");
  if (reps < 1) throw DomainError("pareto: reps must be positive");
  if (frechet_samples < 1) throw DomainError("pareto: frechet_samples must be positive");
  const std::size_t s = sparsity();
  if (s < 1 || s >= p) throw DomainError("pareto: round(f p) must lie in [1, p)");
}

std::size_t ParetoSpec::sparsity() const {
  return static_cast<std::size_t>(std::llround(f * static_cast<double>(p)));
}

double ParetoSpec::delta() const {
  return r * std::pow(static_cast<double>(p), 1.0 / alpha_tail);
}

double frechet_limit(double alpha_tail, double f, double r,
                     std::size_t samples, RandomStream& rng) {
  if (samples == 0) throw DomainError("frechet_limit: samples must be positive");
  const double inv = -1.0 / alpha_tail;
  const double w1 = std::pow(1.0 - f, 1.0 / alpha_tail);
  const double w2 = std::pow(f, 1.0 / alpha_tail);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double y1 = std::pow(-std::log(rng.uniform_open()), inv);
    const double y2 = std::pow(-std::log(rng.uniform_open()), inv);
    if (w1 * y1 + w2 * y2 < r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

ParetoResult pareto_experiment(const ParetoSpec& spec, unsigned workers) {
  spec.validate();
  const auto family = TailFamily::pareto(spec.alpha_tail);
  ParetoResult out;
  out.s = spec.sparsity();
  out.delta = spec.delta();

  TrialSetup setup;
  setup.p = spec.p;
  setup.layout = {out.s, out.delta};
  setup.noise = std::make_shared<const NoiseGenerator>(IidNoise{family}, spec.p);
  setup.procedure = {OracleTopS{out.s}, family};

  std::vector<char> exact(spec.reps, 0);
  parallel_for(spec.reps, workers, [&](std::size_t rep) {
    auto rng = derive_stream(spec.seed, 0, static_cast<std::uint32_t>(rep));
    exact[rep] = run_trial(setup, rng).exact ? 1 : 0;
  });
  const double n = static_cast<double>(spec.reps);
  out.empirical =
      static_cast<double>(std::count(exact.begin(), exact.end(), 1)) / n;
  out.empirical_stderr = std::sqrt(out.empirical * (1.0 - out.empirical) / n);

  // Separate cell id so the limit draws never overlap the trial streams.
  auto rng = derive_stream(spec.seed, 0xFFFFFFFFu, 0);
  out.limit = frechet_limit(spec.alpha_tail, spec.f, spec.r,
                            spec.frechet_samples, rng);
  const double m = static_cast<double>(spec.frechet_samples);
  out.limit_stderr = std::sqrt(out.limit * (1.0 - out.limit) / m);
  return out;
}

double bonferroni_alpha_schedule(const TailFamily& family, std::size_t p,
                                 double c) {
  return static_cast<double>(p) *
         family.survival(calibrated_threshold(family, p, c));
}

}  // namespace suprec
