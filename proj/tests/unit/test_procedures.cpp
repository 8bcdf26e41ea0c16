#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "suprec/error.hpp"
#include "suprec/procedures.hpp"
#include "suprec/random.hpp"

using namespace suprec;

namespace {

bool subset_of(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("frozen Bonferroni and Sidak thresholds") {
  const auto g = TailFamily::gaussian();
  CHECK(bonferroni_threshold(g, 100, 0.05) == doctest::Approx(3.2905267314918945).epsilon(1e-13));
  CHECK(sidak_threshold(g, 100, 0.05) == doctest::Approx(3.2834075352739049).epsilon(1e-13));
  CHECK(bonferroni_threshold(g, 10000, 0.05) == doctest::Approx(4.417173413469022).epsilon(1e-13));
  CHECK(sidak_threshold(g, 10000, 0.05) == doctest::Approx(4.411648990442671).epsilon(1e-13));
  CHECK(bonferroni_threshold(g, 10, 0.05) == doctest::Approx(2.5758293035489004).epsilon(1e-13));
  const double gap = bonferroni_threshold(g, 100, 1e-8) - sidak_threshold(g, 100, 1e-8);
  CHECK(gap > 0.0);
  CHECK(gap == doctest::Approx(7.6e-10).epsilon(0.05));
}

TEST_CASE("calibrated thresholds") {
  CHECK(gaussian_calibrated_threshold(10000) == doctest::Approx(4.291932052578694).epsilon(1e-15));
  const double lp = std::log(1e4);
  CHECK(laplace_calibrated_threshold(10000) == doctest::Approx(lp + 0.5 * std::log(lp)).epsilon(1e-15));
  CHECK(gg_half_calibrated_threshold(10000) == doctest::Approx(50.04553338062838).epsilon(1e-12));
  CHECK(calibrated_threshold(TailFamily::generalized_gaussian(0.5), 10000) ==
        doctest::Approx(50.04553338062838).epsilon(1e-12));
  CHECK(calibrated_threshold(TailFamily::generalized_gaussian(2.0), 10000) ==
        doctest::Approx(4.291932052578694).epsilon(1e-15));
  CHECK_THROWS_AS(calibrated_threshold(TailFamily::pareto(2.0), 100), DomainError);
}

TEST_CASE("small hand cases") {
  const std::vector<double> x{0.5, 5.0, -1.0, 3.0, 3.0};
  CHECK(threshold_select(x, 3.0).selected == std::vector<std::size_t>{1});
  // Ties at the s-th value are all kept.
  CHECK(oracle_top_s(x, 2).selected == std::vector<std::size_t>{1, 3, 4});
  CHECK(oracle_top_s(x, 1).selected == std::vector<std::size_t>{1});
  const auto g = TailFamily::gaussian();
  const auto t = bonferroni_threshold(g, 10, 0.05);
  std::vector<double> y(10, 0.0);
  y[3] = t + 1e-9;
  y[7] = t - 1e-9;
  auto est = apply({Bonferroni{0.05}, g}, y);
  CHECK(est.selected == std::vector<std::size_t>{3});
  REQUIRE(est.threshold.has_value());
  CHECK(*est.threshold == t);
}

TEST_CASE("metrics") {
  const std::vector<std::size_t> truth{1, 4, 7};
  auto m = metrics({{1, 4, 7}, std::nullopt}, truth);
  CHECK(m.exact);
  CHECK_FALSE(m.false_inclusion);
  CHECK(m.hamming == 0);
  m = metrics({{1, 2, 4}, std::nullopt}, truth);
  CHECK_FALSE(m.exact);
  CHECK(m.false_inclusion);
  CHECK(m.fdp == doctest::Approx(1.0 / 3));
  CHECK(m.fnp == doctest::Approx(1.0 / 3));
  CHECK(m.hamming == 2);
  m = metrics({{}, std::nullopt}, truth);
  CHECK(m.fdp == 0.0);  // 0/0 is 0
  CHECK(m.fnp == 1.0);
  CHECK(m.hamming == 3);
  m = metrics({{}, std::nullopt}, std::vector<std::size_t>{});
  CHECK(m.exact);
}

TEST_CASE("property: Bonferroni within Holm within Hochberg, Bonferroni within Sidak") {
  const auto g = TailFamily::gaussian();
  Philox4x32 rng(606);
  int violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t p = 2 + rng.uniform_index(60);
    const double alpha = 0.01 + 0.3 * rng.uniform();
    std::vector<double> x(p);
    for (auto& v : x) v = g.quantile(rng.uniform_open());
    // Plant a few strong values so the step procedures have work to do.
    for (std::size_t j = 0; j < p; j += 3) x[j] += 4.0 * rng.uniform();
    const auto bonf = apply({Bonferroni{alpha}, g}, x).selected;
    const auto sid = apply({Sidak{alpha}, g}, x).selected;
    const auto holm = apply({Holm{alpha}, g}, x).selected;
    const auto hoch = apply({Hochberg{alpha}, g}, x).selected;
    violations += !subset_of(bonf, holm) + !subset_of(holm, hoch) + !subset_of(bonf, sid);
  }
  CHECK(violations == 0);
}

TEST_CASE("property: thresholding output is an upper level set") {
  const auto g = TailFamily::gaussian();
  Philox4x32 rng(607);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = 1 + rng.uniform_index(40);
    std::vector<double> x(p);
    for (auto& v : x) v = std::round(4 * g.quantile(rng.uniform_open())) / 2 + 1.0;
    for (const Procedure::Rule& rule :
         {Procedure::Rule{Holm{0.2}}, Procedure::Rule{Hochberg{0.2}},
          Procedure::Rule{OracleTopS{1 + rng.uniform_index(p)}}}) {
      const auto sel = apply({rule, g}, x).selected;
      std::vector<bool> in(p, false);
      for (auto j : sel) in[j] = true;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
          if (in[a] && !in[b]) CHECK(x[a] > x[b]);
    }
  }
}

TEST_CASE("property: top-s is the posterior mode for a Gaussian shift") {
  Philox4x32 rng(608);
  const auto g = TailFamily::gaussian();
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t p = 2 + rng.uniform_index(5);
    const std::size_t s = 1 + rng.uniform_index(p - 1);
    const double delta = 0.5 + 2 * rng.uniform();
    std::vector<double> x(p);
    for (auto& v : x) v = g.quantile(rng.uniform_open());
    const auto modes = oracle::posterior_modes(x, s, delta, [](double t) { return -0.5 * t * t; });
    REQUIRE(modes.size() == 1);
    CHECK(oracle_top_s(x, s).selected == modes[0]);
    const auto lr = likelihood_top_s(
        x, [&](double t) { return g.log_density(t); },
        [&](double t) { return g.log_density(t - delta); }, s);
    CHECK(lr.selected == modes[0]);
  }
}

TEST_CASE("Holm and Hochberg by hand") {
  const auto g = TailFamily::gaussian();
  // Survival values 0.001, 0.02, 0.04 at p = 3, alpha = 0.05:
  // Holm thresholds 0.0167, 0.025, 0.05 -> all three pass.
  const std::vector<double> x{g.upper_quantile(0.001), g.upper_quantile(0.02), g.upper_quantile(0.04)};
  CHECK(holm_select(x, g, 0.05).selected.size() == 3);
  // 0.001, 0.03, 0.04: Holm stops at the second, Hochberg takes all.
  const std::vector<double> y{g.upper_quantile(0.001), g.upper_quantile(0.03), g.upper_quantile(0.04)};
  CHECK(holm_select(y, g, 0.05).selected == std::vector<std::size_t>{0});
  CHECK(hochberg_select(y, g, 0.05).selected.size() == 3);
}
