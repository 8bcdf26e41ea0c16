#include <doctest.h>

#include <sstream>

#include "suprec/error.hpp"
#include "suprec/serialization.hpp"

using namespace suprec;
using nlohmann::json;

TEST_CASE("family round trips") {
  for (const auto& f :
       {TailFamily::gaussian(), TailFamily::laplace(), TailFamily::generalized_gaussian(0.5),
        TailFamily::agg_asymptotic(1.5), TailFamily::heavier_than_agg(2.0, 0.7),
        TailFamily::lighter_than_agg(1.0), TailFamily::pareto(3.0)}) {
    const auto j = to_json(f);
    CHECK(to_json(family_from_json(j)) == j);
  }
  CHECK(to_json(parse_family("gg:0.5")) == json{{"kind", "generalized_gaussian"}, {"nu", 0.5}});
  CHECK(to_json(parse_family("heavier:2")) ==
        json{{"kind", "heavier_than_agg"}, {"gamma", 2.0}, {"c", 1.0}});
  CHECK_THROWS_AS(parse_family("gg"), ConfigError);
  CHECK_THROWS_AS(parse_family("gg:abc"), ConfigError);
  CHECK_THROWS_AS(parse_family("gg:-1"), ConfigError);
  CHECK_THROWS_AS(parse_family("cauchy"), ConfigError);
  CHECK_THROWS_AS(family_from_json(json{{"kind", "gaussian"}, {"nu", 2}}), ConfigError);
  CHECK_THROWS_AS(family_from_json(json::array()), ConfigError);
}

TEST_CASE("noise and procedure round trips") {
  for (const NoiseModel& m : {NoiseModel{Ar1Noise{0.9}}, NoiseModel{FgnNoise{0.7}},
                              NoiseModel{BlockNoise{0.5}},
                              NoiseModel{IidNoise{TailFamily::laplace()}}}) {
    const auto j = to_json(m);
    CHECK(to_json(noise_from_json(j)) == j);
  }
  const auto m = noise_from_json(json::parse(R"({"kind":"explicit","matrix":[[1,0.5],[0.5,1]]})"));
  CHECK(std::get<ExplicitCovarianceNoise>(m).sigma(0, 1) == 0.5);
  CHECK(std::get<IidNoise>(noise_from_json(json{{"kind", "iid"}}, TailFamily::laplace()))
            .family.name() == TailFamily::laplace().name());
  CHECK_THROWS_AS(noise_from_json(json{{"kind", "ar1"}, {"rho", 1.0}}), ConfigError);
  CHECK_THROWS_AS(noise_from_json(json{{"kind", "ar1"}}), ConfigError);
  CHECK_THROWS_AS(noise_from_json(json{{"kind", "ar2"}}), ConfigError);
  CHECK_THROWS_AS(noise_from_json(json::parse(R"({"kind":"explicit","matrix":[[1,0.5]]})")),
                  ConfigError);

  for (const auto& p : {ProcedureSpec::bonferroni(0.05), ProcedureSpec::sidak(0.1),
                        ProcedureSpec::holm(0.2), ProcedureSpec::hochberg(0.01),
                        ProcedureSpec::fixed(3.5), ProcedureSpec::calibrated(2.0),
                        ProcedureSpec::sparsity_scaled(), ProcedureSpec::oracle(),
                        ProcedureSpec::likelihood()}) {
    const auto j = to_json(p);
    CHECK(to_json(procedure_from_json(j)) == j);
  }
  CHECK_THROWS_AS(procedure_from_json(json{{"kind", "bonferroni"}, {"alpha", 1.5}}), ConfigError);
  CHECK_THROWS_AS(procedure_from_json(json{{"kind", "bh"}}), ConfigError);
}

TEST_CASE("grid spec") {
  const auto j = json::parse(R"({
    "p": 500, "beta_grid": [0.4, 0.8], "r_grid": [1, 2, 3], "reps": 20,
    "family": {"kind": "laplace"}, "procedure": {"kind": "calibrated"},
    "seed": 18446744073709551615, "signal_placement": "fixed_prefix"})");
  const auto spec = grid_spec_from_json(j);
  CHECK(spec.p == 500);
  CHECK(spec.seed == 18446744073709551615ull);
  CHECK(spec.placement == SignalPlacement::fixed_prefix);
  CHECK(std::get<IidNoise>(spec.noise).family.name() == TailFamily::laplace().name());
  CHECK(grid_spec_from_json(to_json(spec)).r_grid == spec.r_grid);
  CHECK(spec_hash(to_json(spec)) == spec_hash(to_json(grid_spec_from_json(to_json(spec)))));
  CHECK(spec_hash(to_json(spec)).size() == 16);

  const auto defaults = grid_spec_from_json(json::object());
  CHECK(defaults.beta_grid.size() == 19);
  CHECK(defaults.beta_grid.front() == 0.05);
  CHECK(defaults.beta_grid.back() == 0.95);
  CHECK(defaults.r_grid.size() == 30);
  CHECK(defaults.r_grid.back() == 5.9);
  CHECK(defaults.reps == 1000);

  CHECK_THROWS_AS(grid_spec_from_json(json::parse(R"({"beta_grid":[1.5]})")), ConfigError);
  CHECK_THROWS_AS(grid_spec_from_json(json{{"reps", 0}}), ConfigError);
  CHECK_THROWS_AS(grid_spec_from_json(json{{"reps", -3}}), ConfigError);
  CHECK_THROWS_AS(grid_spec_from_json(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(grid_spec_from_json(json{{"p", "many"}}), ConfigError);
  CHECK_THROWS_AS(grid_spec_from_json(json::parse(
                      R"({"noise":{"kind":"ar1","rho":0.5},"family":{"kind":"laplace"}})")),
                  ConfigError);
}

TEST_CASE("pareto spec") {
  const auto spec = pareto_spec_from_json(json{{"p", 1000}, {"r", 2.0}});
  CHECK(spec.p == 1000);
  CHECK(spec.alpha_tail == 2.0);
  CHECK(pareto_spec_from_json(to_json(spec)).r == 2.0);
  CHECK_THROWS_AS(pareto_spec_from_json(json{{"f", 1.0}}), ConfigError);
}

TEST_CASE("grid CSV") {
  GridResult r;
  CellResult c;
  c.beta = 0.5;
  c.r = 1.0 / 3.0;
  c.exact = 1;
  c.prob_exact = 0.25;
  c.stderr_exact = std::sqrt(0.25 * 0.75 / 4);
  c.fwer = 0.5;
  c.mean_fdp = 0.125;
  c.mean_fnp = 0.0;
  c.mean_hamming = 1.75;
  c.reps = 4;
  r.cells.push_back(c);
  std::ostringstream out;
  write_grid_csv(out, r);
  CHECK(out.str() ==
        "beta,r,prob_exact,stderr,fwer,mean_fdp,mean_fnp,mean_hamming,reps\n"
        "0.5,0.333333,0.25,0.216506,0.5,0.125,0,1.75,4\n");
}

TEST_CASE("boundary CSV") {
  std::ostringstream out;
  write_boundary_csv(out, 2.0, 4);
  CHECK(out.str() ==
        "beta,g,h,f,nonudd\n"
        "0.25,3.48205,0.25,,3\n"
        "0.5,2.91421,0.5,,2\n"
        "0.75,2.25,0.75,0.25,1\n"
        "1,1,1,1,0\n");
  std::ostringstream one;
  write_boundary_csv(one, 1.0, 2);
  CHECK(one.str() == "beta,g,h,f,nonudd\n0.5,1.5,0.5,,2\n1,1,1,,0\n");
}

TEST_CASE("matrix CSV") {
  std::istringstream in("1, 0.5\n0.5,1\n\n");
  const auto m = read_matrix_csv(in);
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 0.5);
  std::istringstream ragged("1,0.5\n0.5\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), ConfigError);
  std::istringstream junk("1,x\n0,1\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), ConfigError);
}
