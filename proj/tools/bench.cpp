// Compares the serial reference path against the OpenMP path for the kernels
// that fan out: observable tables and exhaustive lattice enumeration. Each
// row reports best-of-N wall clock and whether the two paths produced
// identical results; any disagreement makes the run exit nonzero.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <vector>

#include "CLI11.hpp"
#include "stonespec/lattice.hpp"
#include "stonespec/observable.hpp"

namespace {

using namespace stonespec;

template <typename Fn>
double best_of(int reps, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

bool rows_equal(const std::vector<ObservableRow>& a,
                const std::vector<ObservableRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].block != b[i].block || a[i].value != b[i].value) return false;
    if (a[i].ray.size() != b[i].ray.size()) return false;
    if (!(a[i].ray.array() == b[i].ray.array()).all()) return false;
  }
  return true;
}

void print_row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-40s %10.2f ms %10.2f ms %7.2fx   %s\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel, agree ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial reference vs OpenMP kernel comparison"};
  int m = 4;
  int n = 4;
  int points_per_fibre = 2000;
  int boolean_m = 6;
  int reps = 3;
  std::uint64_t seed = 0;
  app.add_option("--m", m)->check(CLI::PositiveNumber);
  app.add_option("--n", n)->check(CLI::PositiveNumber);
  app.add_option("--points", points_per_fibre, "samples per fibre")
      ->check(CLI::PositiveNumber);
  app.add_option("--boolean-m", boolean_m, "exponent of the Boolean lattice")
      ->check(CLI::Range(1, 6));
  app.add_option("--reps", reps, "repetitions, best is kept")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  const AlgebraShape shape{m, n};
  Rng rng = Rng(seed).split("bench");
  const BlockOperator x = random_block_operator(shape, rng);
  const BlockOperator h = Complex(0.5) * (x + x.adjoint());

  std::vector<Quasipoint> points;
  points.reserve(static_cast<std::size_t>(m * points_per_fibre));
  for (int k = 0; k < m; ++k) {
    const auto fibre = fibre_sample(CenterAtom{shape, k}, points_per_fibre, seed);
    points.insert(points.end(), fibre.begin(), fibre.end());
  }

  std::printf("%-40s %13s %13s %8s   %s\n", "kernel", "serial", "parallel",
              "speedup", "agree");

  std::vector<ObservableRow> table_serial;
  std::vector<ObservableRow> table_parallel;
  const double t_obs_serial = best_of(reps, [&] {
    table_serial = observable_table(h, points, ExecMode::serial);
  });
  const double t_obs_parallel = best_of(reps, [&] {
    table_parallel = observable_table(h, points, ExecMode::parallel);
  });
  const bool obs_agree = rows_equal(table_serial, table_parallel);
  char label[96];
  std::snprintf(label, sizeof label, "observable_table m=%d n=%d N=%d", m, n,
                m * points_per_fibre);
  print_row(label, t_obs_serial, t_obs_parallel, obs_agree);

  const FiniteLattice lat = boolean_lattice(boolean_m);
  IdealEnumeration enum_serial;
  IdealEnumeration enum_parallel;
  const double t_enum_serial = best_of(reps, [&] {
    enum_serial = enumerate_ideals_both_routes(lat, lat.size(), ExecMode::serial);
  });
  const double t_enum_parallel = best_of(reps, [&] {
    enum_parallel =
        enumerate_ideals_both_routes(lat, lat.size(), ExecMode::parallel);
  });
  const bool enum_agree = enum_serial.direct == enum_parallel.direct &&
                          enum_serial.from_atoms == enum_parallel.from_atoms;
  std::snprintf(label, sizeof label, "enumerate_ideals 2^%d", boolean_m);
  print_row(label, t_enum_serial, t_enum_parallel, enum_agree);

  StoneBaseReport base_serial;
  StoneBaseReport base_parallel;
  const double t_base_serial = best_of(reps, [&] {
    base_serial = stone_base_check(lat, lat.size(), ExecMode::serial);
  });
  const double t_base_parallel = best_of(reps, [&] {
    base_parallel = stone_base_check(lat, lat.size(), ExecMode::parallel);
  });
  const bool base_agree = base_serial.passed == base_parallel.passed &&
                          base_serial.failures == base_parallel.failures;
  std::snprintf(label, sizeof label, "stone_base_check 2^%d", boolean_m);
  print_row(label, t_base_serial, t_base_parallel, base_agree);

  return obs_agree && enum_agree && base_agree ? 0 : 1;
}
