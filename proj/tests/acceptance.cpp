// Acceptance gate. Runs every criterion at its stated scale and tolerance,
// prints one PASS/FAIL line per criterion on stdout, and exits nonzero when
// anything fails. Failure details go to stderr. Criterion 9 drives the CLI
// binary named by STONESPEC_CLI_BIN as a subprocess.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "stonespec/json_io.hpp"
#include "stonespec/observable.hpp"
#include "stonespec/verify.hpp"

namespace {

using namespace stonespec;
namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 1729;
constexpr double kSuiteBudgetSeconds = 10.0;

struct TimedSuite {
  SuiteReport report;
  double seconds = 0.0;
};

TimedSuite timed_run(const std::string& name, const SuiteConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  TimedSuite result{run_suite(name, config), 0.0};
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

SuiteConfig config_at(int m, int n, int trials) {
  SuiteConfig config;
  config.shape = AlgebraShape{m, n};
  config.seed = kSeed;
  config.trials = trials;
  return config;
}

bool within_budget(const TimedSuite& run, std::string& detail) {
  if (run.seconds <= kSuiteBudgetSeconds) return true;
  char buffer[128];
  std::snprintf(buffer, sizeof buffer,
                "suite '%s' took %.1f s, over the 10 s budget; ",
                run.report.suite.c_str(), run.seconds);
  detail += buffer;
  return false;
}

void describe_failure(const PropertyResult& p, std::string& detail) {
  detail += p.name + " failed " + std::to_string(p.fail) + "/" +
            std::to_string(p.fail + p.pass);
  if (!p.counterexamples.empty()) {
    detail += " e.g. " + p.counterexamples.front().dump();
  }
  detail += "; ";
}

/// The named properties are green. Unknown names count as failures so a
/// renamed property cannot silently drop a criterion's evidence.
bool props_green(const TimedSuite& run,
                 std::initializer_list<const char*> names,
                 std::string& detail) {
  bool green = true;
  for (const char* name : names) {
    const PropertyResult* found = nullptr;
    for (const PropertyResult& p : run.report.properties) {
      if (p.name == name) found = &p;
    }
    if (found == nullptr) {
      detail += std::string("property missing: ") + name + "; ";
      green = false;
    } else if (!found->ok()) {
      describe_failure(*found, detail);
      green = false;
    }
  }
  return green;
}

/// Every property green and the run inside its time budget.
bool suite_green(const TimedSuite& run, std::string& detail) {
  bool green = within_budget(run, detail);
  for (const PropertyResult& p : run.report.properties) {
    if (!p.ok()) {
      describe_failure(p, detail);
      green = false;
    }
  }
  return green;
}

struct CriterionOutcome {
  bool pass = false;
  std::string what;
  std::string detail;
};

/// Exact Gelfand agreement for every m up to 6 in the abelian case, checked
/// directly so the sweep over m is exhaustive rather than sampled.
bool gelfand_every_m(std::string& detail) {
  Rng rng = Rng(kSeed).split("acceptance-gelfand");
  for (int m = 1; m <= 6; ++m) {
    const AlgebraShape shape{m, 1};
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<Cmat> cells;
      for (int k = 0; k < m; ++k) {
        Cmat c(1, 1);
        c(0, 0) = 3.0 * rng.gaussian();
        cells.push_back(c);
      }
      const BlockOperator a(shape, cells);
      for (int k = 0; k < m; ++k) {
        const Quasipoint qp(shape, k, Cvec::Ones(1));
        const double value = observable_value(a, qp);
        const Complex character = tau_beta(a, CenterAtom{shape, k});
        if (std::abs(character - Complex(value, 0.0)) > 1e-9) {
          detail = "gelfand mismatch at m=" + std::to_string(m) +
                   " atom=" + std::to_string(k);
          return false;
        }
      }
    }
  }
  return true;
}

int cli_exit(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool expect_exit(const std::string& command, int want, std::string& detail) {
  const int got = cli_exit(command + " >/dev/null 2>/dev/null");
  if (got != want) {
    detail += "`" + command + "` exited " + std::to_string(got) +
              ", expected " + std::to_string(want) + "; ";
    return false;
  }
  return true;
}

bool cli_contract(std::string& detail) {
  const char* bin_env = std::getenv("STONESPEC_CLI_BIN");
  if (bin_env == nullptr || *bin_env == '\0') {
    detail = "STONESPEC_CLI_BIN not set; run through ctest";
    return false;
  }
  const std::string bin(bin_env);
  const fs::path dir = fs::temp_directory_path() / "stonespec_acceptance";
  fs::create_directories(dir);

  // Fixtures: a Hermitian operator, a truncated file, a skew block, a ragged
  // order table, and a valid four-element lattice for the cap test.
  Rng rng = Rng(kSeed).split("acceptance-cli");
  const BlockOperator x = random_block_operator(AlgebraShape{2, 2}, rng);
  const BlockOperator h = 0.5 * (x + x.adjoint());
  std::ofstream(dir / "op.json") << json_of(h).dump() << "\n";
  std::ofstream(dir / "truncated.json") << "{\"shape\": {\"m\": 2,";
  std::ofstream(dir / "skew.json")
      << "{\"shape\":{\"m\":1,\"n\":2},"
         "\"blocks\":[[[[0,0],[1,0]],[[-1,0],[0,0]]]]}";
  std::ofstream(dir / "ragged.json")
      << "{\"elements\":[\"0\",\"1\"],\"leq\":[[true],[false,true]]}";
  std::ofstream(dir / "square.json") << json_of(boolean_lattice(2)).dump()
                                     << "\n";

  bool green = true;

  // Byte-identical reports and CSVs for a repeated seed.
  const std::string verify_args = " verify --m 2 --n 2 --trials 15 --seed 11";
  green = expect_exit(bin + verify_args + " --out " + (dir / "r1.json").string(),
                      0, detail) &&
          green;
  green = expect_exit(bin + verify_args + " --out " + (dir / "r2.json").string(),
                      0, detail) &&
          green;
  if (slurp(dir / "r1.json") != slurp(dir / "r2.json")) {
    detail += "verify reports differ between runs with the same seed; ";
    green = false;
  } else if (slurp(dir / "r1.json").empty()) {
    detail += "verify report is empty; ";
    green = false;
  }

  const std::string table_args = " observable --operator " +
                                 (dir / "op.json").string() +
                                 " --samples 40 --seed 9 --format csv";
  green = expect_exit(bin + table_args + " --out " + (dir / "c1.csv").string(),
                      0, detail) &&
          green;
  green = expect_exit(bin + table_args + " --out " + (dir / "c2.csv").string(),
                      0, detail) &&
          green;
  if (slurp(dir / "c1.csv") != slurp(dir / "c2.csv")) {
    detail += "observable CSVs differ between runs with the same seed; ";
    green = false;
  }

  // Exit-code contract on malformed and out-of-contract inputs.
  green = expect_exit(bin + " observable --operator " +
                          (dir / "truncated.json").string() + " --samples 5",
                      2, detail) &&
          green;
  green = expect_exit(bin + " observable --operator " +
                          (dir / "skew.json").string() + " --samples 5",
                      2, detail) &&
          green;
  green = expect_exit(
              bin + " lattice --in " + (dir / "ragged.json").string(), 2,
              detail) &&
          green;
  green = expect_exit(bin + " witness --m 2 --n 1", 2, detail) && green;
  green = expect_exit(bin + " verify --suite no-such-suite", 2, detail) && green;

  // Resource cap: exit 3, and the env override opens the gate back up.
  green = expect_exit("STONESPEC_CAP=4 " + bin + " verify --m 3 --n 3 --trials 5",
                      3, detail) &&
          green;
  green = expect_exit("STONESPEC_CAP=3 " + bin + " lattice --in " +
                          (dir / "square.json").string(),
                      3, detail) &&
          green;
  green = expect_exit("STONESPEC_CAP=128 " + bin +
                          " spectrum --m 9 --n 9 --trials 1",
                      0, detail) &&
          green;
  return green;
}

}  // namespace

int main() {
  // Filled criterion by criterion; runs are shared, so they land out of
  // numeric order and are printed together at the end.
  std::array<CriterionOutcome, 10> outcomes;
  const auto record = [&outcomes](int index, bool pass, std::string what,
                                  std::string detail) {
    outcomes[static_cast<std::size_t>(index)] =
        CriterionOutcome{pass, std::move(what), std::move(detail)};
  };

  // 1. Exact lattice oracle: booleans to 2^6, chains to length 8, seeded
  //    commuting closures; both enumeration routes, base identities.
  {
    std::string detail;
    const TimedSuite run = timed_run("lattice-oracle", config_at(3, 3, 200));
    const bool ok = suite_green(run, detail);
    record(1, ok,
                   "lattice oracle, booleans 2^1..2^6, chains 2..8, 200 "
                   "commuting closures, exact",
                   detail);
  }

  // 2 and 5 share one rank-suite run at the stated scale.
  {
    const TimedSuite run = timed_run("rank", config_at(5, 5, 200));
    std::string detail2;
    const bool ok2 = suite_green(run, detail2);
    record(2, ok2,
                   "rank laws, m,n <= 5, 200 trials per property, rank "
                   "tolerances 1e-6 and 1e-8",
                   detail2);

    std::string detail5;
    const bool ok5 = props_green(
        run,
        {"seminorm equals the character modulus on the center",
         "star identity of the seminorm"},
        detail5);
    record(5, ok5,
                   "seminorm equals character modulus to 1e-9, star identity "
                   "to 1e-7 relative, 200 trials",
                   detail5);
  }

  // 3 and 4 share one stone-suite run.
  {
    const TimedSuite run = timed_run("stone", config_at(5, 5, 200));
    std::string detail3;
    bool ok3 = within_budget(run, detail3);
    ok3 = props_green(run, {"filter bases extend to quasipoints"}, detail3) &&
          ok3;
    record(3, ok3,
                   "200 filter bases of 2..5 projections extend, generators "
                   "and an abelian member contained, full support reached",
                   detail3);

    std::string detail4;
    const bool ok4 = props_green(
        run,
        {"sections invert the projection to the base",
         "basic opens project to central supports",
         "fibres are single unitary orbits", "isotropy conditions agree"},
        detail4);
    record(4, ok4,
                   "sections invert, basic-open laws, transitive fibres with "
                   "cross-fibre rejection, isotropy agreement, 200 trials",
                   detail4);
  }

  // 6. Observable function: sampled laws at (5,5) plus the exhaustive
  //    abelian sweep over m <= 6.
  {
    const TimedSuite run = timed_run("observable", config_at(5, 5, 200));
    std::string detail;
    bool ok = suite_green(run, detail);
    std::string sweep_detail;
    if (!gelfand_every_m(sweep_detail)) {
      detail += sweep_detail + "; ";
      ok = false;
    }
    record(6, ok,
                   "observable laws at (m,n) <= 5 x200 and exact abelian "
                   "agreement for every m <= 6",
                   detail);
  }

  // 7. The dichotomy: primeness at n = 1 on 500 pairs, then verified
  //    violations and the uniform-vector contradiction for n = 2, 3, 4.
  {
    std::string detail;
    bool ok = true;
    {
      const TimedSuite abelian = timed_run("ks", config_at(3, 1, 500));
      ok = suite_green(abelian, detail) && ok;
    }
    for (int n = 2; n <= 4; ++n) {
      const TimedSuite run = timed_run("ks", config_at(3, n, 200));
      std::string one;
      if (!suite_green(run, one)) {
        detail += "n=" + std::to_string(n) + ": " + one;
        ok = false;
      }
    }
    record(7, ok,
                   "prime at n=1 on 500 pairs; verified violations for 200 "
                   "points and the uniform-vector contradiction at every "
                   "atom for n=2,3,4",
                   detail);
  }

  // 8. Subalgebra traces at the stated scale.
  {
    std::string detail;
    const TimedSuite run = timed_run("masa", config_at(5, 5, 200));
    const bool ok = suite_green(run, detail);
    record(8, ok,
                   "admissible subalgebra per point, per-masa failure "
                   "witness, m*n column grid with 200 negatives, detector "
                   "separation, 200 trials",
                   detail);
  }

  // 9. CLI determinism and exit codes through the real binary.
  {
    std::string detail;
    const bool ok = cli_contract(detail);
    record(9, ok,
                   "byte-identical reports and CSVs for a repeated seed; "
                   "exits 2 on malformed input and 3 over the cap",
                   detail);
  }

  int passed = 0;
  for (int index = 1; index <= 9; ++index) {
    const CriterionOutcome& c = outcomes[static_cast<std::size_t>(index)];
    if (c.pass) ++passed;
    std::printf("criterion %d: %s  %s\n", index, c.pass ? "PASS" : "FAIL",
                c.what.c_str());
    if (!c.pass && !c.detail.empty()) {
      std::fprintf(stderr, "criterion %d detail: %s\n", index,
                   c.detail.c_str());
    }
  }
  std::printf("acceptance: %d/9 criteria passed\n", passed);
  return passed == 9 ? 0 : 1;
}
