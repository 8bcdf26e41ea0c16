#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "suprec/error.hpp"
#include "suprec/experiments.hpp"

using namespace suprec;

namespace {

GridSpec small_grid() {
  GridSpec spec;
  spec.p = 200;
  spec.beta_grid = {0.3, 0.6};
  spec.r_grid = {1.0, 3.0, 6.0};
  spec.reps = 40;
  spec.family = TailFamily::gaussian();
  spec.noise = IidNoise{spec.family};
  spec.procedure = ProcedureSpec::bonferroni(0.1);
  spec.seed = 17;
  return spec;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("signal layout") {
  auto l = signal_layout(TailFamily::gaussian(), 10000, 0.5, 2.25);
  CHECK(l.s == 100);
  CHECK(l.delta == doctest::Approx(6.43789807886804).epsilon(1e-13));
  l = signal_layout(TailFamily::heavier_than_agg(2.0, 1.0), 10000, 0.5, 1.0);
  CHECK(l.s == 240);
  l = signal_layout(TailFamily::lighter_than_agg(1.0), 10000, 0.5, 1.0);
  CHECK(l.s == 20);
  CHECK_THROWS_AS(signal_layout(TailFamily::pareto(2.0), 100, 0.5, 1.0), DomainError);
}

TEST_CASE("random support is a sorted uniform subset") {
  Philox4x32 rng(3);
  std::vector<int> hits(10, 0);
  for (int t = 0; t < 20000; ++t) {
    const auto s = random_support(10, 3, rng);
    REQUIRE(s.size() == 3);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    for (auto j : s) ++hits[j];
  }
  for (int h : hits) CHECK(std::fabs(h - 6000) < 5 * std::sqrt(6000 * 0.7));
}

TEST_CASE("huge signals are always found") {
  const auto g = TailFamily::gaussian();
  const auto setup = prepare_trial(1000, 0.5, 100.0, g, IidNoise{g},
                                   ProcedureSpec::bonferroni(0.1),
                                   SignalPlacement::uniform_random);
  int exact = 0, missed = 0, false_incl = 0;
  for (std::uint32_t r = 0; r < 200; ++r) {
    auto rng = derive_stream(1, 0, r);
    const auto m = run_trial(setup, rng);
    exact += m.exact;
    missed += m.fnp > 0;
    false_incl += m.false_inclusion;
  }
  // Nothing is ever missed; what remains is Bonferroni's own FWER.
  CHECK(missed == 0);
  CHECK(exact + false_incl == 200);
  CHECK(false_incl <= 0.1 * 200 + 3 * std::sqrt(0.09 * 200));

  const auto oracle_setup = prepare_trial(1000, 0.5, 100.0, g, IidNoise{g},
                                          ProcedureSpec::oracle(),
                                          SignalPlacement::uniform_random);
  int oracle_exact = 0;
  for (std::uint32_t r = 0; r < 200; ++r) {
    auto rng = derive_stream(2, 0, r);
    oracle_exact += run_trial(oracle_setup, rng).exact;
  }
  CHECK(oracle_exact >= 198);
}

TEST_CASE("far below the boundary recovery fails") {
  const auto g = TailFamily::gaussian();
  const auto setup = prepare_trial(10000, 0.5, 0.5, g, IidNoise{g},
                                   ProcedureSpec::calibrated(),
                                   SignalPlacement::uniform_random);
  int exact = 0;
  for (std::uint32_t r = 0; r < 200; ++r) {
    auto rng = derive_stream(3, 0, r);
    exact += run_trial(setup, rng).exact;
  }
  CHECK(exact <= 4);
}

TEST_CASE("s = p: exact iff nothing is missed") {
  const auto g = TailFamily::gaussian();
  TrialSetup setup = prepare_trial(50, 0.5, 1.0, g, IidNoise{g}, ProcedureSpec::fixed(0.0),
                                   SignalPlacement::fixed_prefix);
  setup.layout.s = 50;
  setup.layout.delta = 2.0;
  for (std::uint32_t r = 0; r < 50; ++r) {
    auto rng = derive_stream(4, 0, r);
    const auto m = run_trial(setup, rng);
    CHECK_FALSE(m.false_inclusion);
    CHECK(m.fdp == 0.0);
    CHECK(m.exact == (m.fnp == 0.0));
    CHECK(m.hamming == static_cast<std::size_t>(std::lround(m.fnp * 50)));
  }
}

TEST_CASE("one-cell one-rep grid reproduces run_trial") {
  GridSpec spec = small_grid();
  spec.beta_grid = {0.6};
  spec.r_grid = {2.0};
  spec.reps = 1;
  const auto grid = run_grid(spec, 1);
  auto rng = derive_stream(spec.seed, 0, 0);
  const auto m = run_trial(spec.p, 0.6, 2.0, spec.family, spec.noise, spec.procedure, rng);
  REQUIRE(grid.cells.size() == 1);
  CHECK(grid.cells[0].exact == (m.exact ? 1u : 0u));
  CHECK(grid.cells[0].mean_fdp == m.fdp);
  CHECK(grid.cells[0].mean_hamming == double(m.hamming));
}

TEST_CASE("property: grid results do not depend on the worker count") {
  for (const NoiseModel& noise :
       {NoiseModel{IidNoise{TailFamily::gaussian()}}, NoiseModel{Ar1Noise{0.9}},
        NoiseModel{FgnNoise{0.8}}, NoiseModel{BlockNoise{0.5}}}) {
    GridSpec spec = small_grid();
    spec.noise = noise;
    const auto a = run_grid(spec, 1);
    const auto b = run_grid(spec, 8);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(a.cells[i].exact == b.cells[i].exact);
      CHECK(a.cells[i].mean_fdp == b.cells[i].mean_fdp);
      CHECK(a.cells[i].mean_fnp == b.cells[i].mean_fnp);
      CHECK(a.cells[i].mean_hamming == b.cells[i].mean_hamming);
      CHECK(a.cells[i].fwer == b.cells[i].fwer);
    }
  }
}

TEST_CASE("cell bookkeeping") {
  GridSpec spec = small_grid();
  std::vector<std::size_t> seen;
  const auto res = run_grid(spec, 2, [&](std::size_t done, std::size_t total) {
    CHECK(total == 6);
    seen.push_back(done);
  });
  CHECK(seen == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
  REQUIRE(res.cells.size() == 6);
  CHECK(res.cells[1].beta == 0.3);
  CHECK(res.cells[1].r == 3.0);
  CHECK(res.cells[3].beta == 0.6);
  for (const auto& c : res.cells) {
    CHECK(c.prob_exact * c.reps == doctest::Approx(double(c.exact)));
    CHECK(c.stderr_exact == doctest::Approx(std::sqrt(c.prob_exact * (1 - c.prob_exact) / c.reps)));
  }
}

TEST_CASE("property: Bonferroni FWER within its level on every cell") {
  GridSpec spec = small_grid();
  spec.reps = 400;
  for (const auto& c : run_grid(spec).cells) {
    CHECK(c.fwer <= 0.1 + 3 * std::sqrt(0.1 * 0.9 / c.reps));
  }
}

TEST_CASE("property: recovery increases with r") {
  GridSpec spec;
  spec.p = 100;
  spec.beta_grid = {0.5};
  // Grid across the transition band; beyond it the curve is flat and ranks are noise.
  for (int i = 1; i <= 8; ++i) spec.r_grid.push_back(0.5 * i);
  spec.reps = 500;
  spec.procedure = ProcedureSpec::calibrated();
  spec.seed = 23;
  const auto res = run_grid(spec);
  std::vector<double> prob;
  for (const auto& c : res.cells) prob.push_back(c.prob_exact);
  CHECK(spearman(spec.r_grid, prob) >= 0.9);
}

TEST_CASE("grid validation") {
  GridSpec spec = small_grid();
  spec.beta_grid = {1.2};
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = small_grid();
  spec.r_grid = {};
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = small_grid();
  spec.reps = 0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = small_grid();
  spec.family = TailFamily::laplace();
  spec.noise = Ar1Noise{0.5};
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = small_grid();
  spec.procedure = ProcedureSpec::sparsity_scaled();
  spec.family = TailFamily::laplace();
  spec.noise = IidNoise{spec.family};
  CHECK_THROWS_AS(run_grid(spec), DomainError);
}

TEST_CASE("alpha schedule") {
  const double p = 1e4;
  const double t = std::sqrt(2 * std::log(p));
  CHECK(bonferroni_alpha_schedule(TailFamily::gaussian(), 10000) ==
        doctest::Approx(p * oracle::normal_survival(t)).epsilon(1e-12));
  CHECK(bonferroni_alpha_schedule(TailFamily::gaussian(), 10000) ==
        doctest::Approx(0.0885625776).epsilon(1e-9));
  CHECK(bonferroni_alpha_schedule(TailFamily::laplace(), 10000) ==
        doctest::Approx(0.5 / std::sqrt(std::log(p))).epsilon(1e-13));
  CHECK(bonferroni_alpha_schedule(TailFamily::generalized_gaussian(0.5), 10000) ==
        doctest::Approx(0.05428681023790648).epsilon(1e-10));
  for (const auto& f : {TailFamily::gaussian(), TailFamily::laplace(),
                        TailFamily::generalized_gaussian(0.5)}) {
    double prev = 1.0;
    for (std::size_t q = 100; q <= 1000000; q *= 10) {
      const double a = bonferroni_alpha_schedule(f, q);
      CHECK(a < prev);
      prev = a;
    }
  }
}

TEST_CASE("Pareto extremes") {
  ParetoSpec spec;
  spec.p = 1000;
  spec.reps = 200;
  spec.frechet_samples = 20000;
  spec.r = 200.0;
  auto res = pareto_experiment(spec);
  CHECK(res.s == 500);
  CHECK(res.empirical >= 0.97);
  CHECK(res.limit >= 0.97);
  spec.r = 0.01;
  res = pareto_experiment(spec);
  CHECK(res.empirical <= 0.03);
  CHECK(res.limit <= 0.03);
  spec.f = 0.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("Frechet sampler tail") {
  // P[Y <= y] = exp(-y^-a); with f -> 0 the limit is P[Y1 < r].
  Philox4x32 rng(5);
  const double got = frechet_limit(2.0, 1e-12, 1.5, 200000, rng);
  CHECK(got == doctest::Approx(std::exp(-1 / 2.25)).epsilon(0.01));
}
