#include "sxt/model_io.hpp"

#include <doctest.h>

#include <string>

using namespace sxt;

namespace {

const char* kModel = R"(multipoles:
  - {ell: 0, c0: 6.283185307179586, beta: 0.3}
  - {ell: 1, c0: 2.0943951023931957, beta: 0.8}
)";

}  // namespace

TEST_CASE("model documents") {
  const CovarianceModel m = parse_model(kModel);
  REQUIRE(m.multipoles().size() == 2);
  CHECK(m.multipole(1).beta == 0.8);
  CHECK(!m.multipole(0).alpha);

  const CovarianceModel a = parse_model("autonormalize: true\nmultipoles:\n  - {ell: 0, c0: 1, beta: 1, alpha: 3}\n");
  CHECK(a.multipole(0).c0 == doctest::Approx(12.566370614359172));
  CHECK(*a.multipole(0).alpha == 3.0);

  CHECK(load_model("data/first_chaos.yaml").multipoles().size() == 2);
  CHECK_THROWS_AS(load_model("data/does_not_exist.yaml"), ConfigError);
}

TEST_CASE("strict parsing reports positions") {
  try {
    parse_model("multipoles:\n  - {ell: 0, c0: 12.566370614359172, beta: 0.5, gamma: 2}\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
  try {
    parse_model("multipoles:\n  - {ell: 1, c0: 4.1887902047863905, beta: 0.5}\n");
    FAIL("model without l = 0 accepted");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_model("multipoles: [ {ell: 0, c0: x} ]"), ConfigError);
  CHECK_THROWS_AS(parse_model("multipoles:\n  - {ell: 0, c0: [1, 2]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_model("multipoles: {ell: 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_model("extra: 1\nmultipoles: []\n"), ConfigError);
}

TEST_CASE("experiment documents") {
  const ExperimentConfig c = load_experiment("data/smoke.yaml");
  CHECK(c.T_ladder == std::vector<double>{8, 16});
  CHECK(c.replications == 10);
  CHECK(c.master_seed == 7u);
  CHECK(c.n_colatitude == 8);
  CHECK(!c.ell_star);

  const std::string inline_doc = std::string("model:\n") +
                                 "  multipoles:\n"
                                 "    - {ell: 0, c0: 12.566370614359172, beta: 0.5}\n"
                                 "levels: [0, 1]\n"
                                 "T_ladder: [4, 8, 16, 32]\n"
                                 "replications: 3\n";
  const ExperimentConfig d = parse_experiment(inline_doc);
  CHECK(d.levels.size() == 2);
  CHECK(d.dt == 0.25);

  CHECK_THROWS_AS(parse_experiment(inline_doc + "T_ladder_typo: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment("levels: [1]\n"), ConfigError);
  const std::string decreasing = std::string("model:\n  multipoles:\n    - {ell: 0, c0: 12.566370614359172, beta: 0.5}\n") +
                                 "T_ladder: [8, 4]\n";
  CHECK_THROWS_AS(parse_experiment(decreasing), ConfigError);
  const std::string off_grid = std::string("model:\n  multipoles:\n    - {ell: 0, c0: 12.566370614359172, beta: 0.5}\n") +
                               "T_ladder: [1.1]\n";
  CHECK_THROWS_AS(parse_experiment(off_grid), ConfigError);
}
