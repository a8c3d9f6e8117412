#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stonespec/verify.hpp"

using namespace stonespec;

TEST_CASE("every suite passes at a small scale") {
  SuiteConfig config;
  config.shape = {3, 3};
  config.seed = 17;
  config.trials = 25;
  for (const std::string& name : suite_names()) {
    const SuiteReport report = run_suite(name, config);
    CHECK(report.suite == name);
    INFO("suite ", name);
    for (const PropertyResult& p : report.properties) {
      INFO("property ", p.name, " counterexamples ",
           Json(p.counterexamples).dump());
      CHECK(p.fail == 0);
      CHECK(p.pass > 0);
    }
    CHECK(report.ok());
  }
}

TEST_CASE("the ks suite covers both sides of the dichotomy") {
  SuiteConfig abelian;
  abelian.shape = {3, 1};
  abelian.trials = 50;
  const SuiteReport flat = run_suite("ks", abelian);
  REQUIRE(flat.properties.size() == 1);
  CHECK(flat.properties[0].name == "abelian ideals are prime");
  CHECK(flat.ok());

  SuiteConfig quantum;
  quantum.shape = {2, 3};
  quantum.trials = 30;
  const SuiteReport deep = run_suite("ks", quantum);
  REQUIRE(deep.properties.size() == 2);
  CHECK(deep.ok());
}

TEST_CASE("reports are deterministic and structured") {
  SuiteConfig config;
  config.shape = {2, 2};
  config.seed = 5;
  config.trials = 10;

  const SuiteReport once = run_suite("stone", config);
  const SuiteReport again = run_suite("stone", config);
  const Json first = report_json({once}, config);
  CHECK(first == report_json({again}, config));
  CHECK(first.at("ok").get<bool>());
  CHECK(first.at("config").at("seed").get<std::uint64_t>() == 5);
  CHECK(first.at("suites").size() == 1);
  CHECK(first.at("suites")[0].at("fail").get<int>() == 0);
  CHECK(first.at("suites")[0].at("pass").get<int>() ==
        once.passes());

  // A different seed changes the sampled data but not the verdict.
  SuiteConfig other = config;
  other.seed = 6;
  CHECK(run_suite("stone", other).ok());

  CHECK_THROWS_AS(run_suite("no-such-suite", config), BadInput);
  SuiteConfig no_trials = config;
  no_trials.trials = 0;
  CHECK_THROWS_AS(run_suite("stone", no_trials), BadInput);
}

TEST_CASE("parallel mode matches serial results") {
  SuiteConfig serial;
  serial.shape = {2, 2};
  serial.seed = 11;
  serial.trials = 8;
  SuiteConfig parallel = serial;
  parallel.mode = ExecMode::parallel;
  const Json left = report_json({run_suite("lattice-oracle", serial)}, serial);
  const Json right =
      report_json({run_suite("lattice-oracle", parallel)}, parallel);
  CHECK(left == right);
}
