// stonespec: command-line surface over the block-algebra library.
//
// Exit codes: 0 success, 1 property failure, 2 input error, 3 resource cap.
// Reports and CSVs are byte-identical across runs with the same config; the
// wall-clock line goes to stderr so it never lands in a serialized report.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stonespec/json_io.hpp"
#include "stonespec/masa.hpp"
#include "stonespec/observable.hpp"
#include "stonespec/verify.hpp"

namespace {

using namespace stonespec;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

constexpr int kDefaultCap = 64;

// The m*n cap; STONESPEC_CAP overrides. For lattice files the same number
// bounds the element count.
int resolved_cap() {
  const char* env = std::getenv("STONESPEC_CAP");
  if (env == nullptr || *env == '\0') return kDefaultCap;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 1 ||
      value > std::numeric_limits<int>::max()) {
    throw BadInput("STONESPEC_CAP must be a positive integer, got \"" +
                   std::string(env) + "\"");
  }
  return static_cast<int>(value);
}

void require_within_cap(const AlgebraShape& shape) {
  const int cap = resolved_cap();
  if (shape.num_blocks * shape.block_dim > cap) {
    throw TooLarge("m*n = " + std::to_string(shape.num_blocks * shape.block_dim) +
                   " exceeds the cap of " + std::to_string(cap) +
                   " (set STONESPEC_CAP to raise it)");
  }
}

ExecMode exec_mode(const std::string& name) {
  return name == "parallel" ? ExecMode::parallel : ExecMode::serial;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadInput("cannot open output file: " + path);
  out << text;
  if (!out) throw BadInput("short write: " + path);
}

struct Options {
  int m = 3;
  int n = 3;
  std::uint64_t seed = 0;
  int trials = 200;
  double tol = kTol;
  std::string mode = "serial";
  std::string witness_mode = "random";
  std::string out;
  std::string format = "json";
  std::vector<std::string> suites;
  std::string operator_file;
  std::string points_file;
  int samples = 0;
  std::string lattice_file;
};

int run_verify(const Options& o) {
  SuiteConfig config;
  config.shape = AlgebraShape{o.m, o.n};
  validate_shape(config.shape);
  require_within_cap(config.shape);
  config.seed = o.seed;
  config.trials = o.trials;
  config.tol = o.tol;
  config.mode = exec_mode(o.mode);

  // Deduplicate and sort so the merged report is independent of flag order.
  std::vector<std::string> chosen = o.suites.empty() ? suite_names() : o.suites;
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

  const auto start = std::chrono::steady_clock::now();
  std::vector<SuiteReport> reports;
  reports.reserve(chosen.size());
  for (const auto& name : chosen) reports.push_back(run_suite(name, config));
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  write_text(o.out, report_json(reports, config).dump(2) + "\n");
  std::fprintf(stderr, "%zu suite(s) in %.3f s\n", chosen.size(),
               elapsed.count());

  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const SuiteReport& r) { return r.ok(); });
  return ok ? kExitOk : kExitPropertyFailure;
}

int run_observable(const Options& o) {
  const BlockOperator a = block_operator_from_json(parse_json_file(o.operator_file));
  require_within_cap(a.shape());

  std::vector<Quasipoint> points;
  if (!o.points_file.empty()) {
    const Json parsed = parse_json_file(o.points_file);
    if (!parsed.is_array() || parsed.empty()) {
      throw BadInput("quasipoint file must hold a nonempty array");
    }
    points.reserve(parsed.size());
    for (const auto& item : parsed) {
      points.push_back(quasipoint_from_json(item, a.shape()));
    }
  } else {
    if (o.samples < 1) {
      throw BadInput("need --points FILE or --samples N with N >= 1");
    }
    const Rng base = Rng(o.seed).split("observable-samples");
    points.reserve(static_cast<std::size_t>(o.samples));
    for (int i = 0; i < o.samples; ++i) {
      Rng row = base.split(static_cast<std::uint64_t>(i));
      const int block = static_cast<int>(
          row.below(static_cast<std::uint64_t>(a.shape().num_blocks)));
      points.emplace_back(a.shape(), block,
                          random_unit_vector(a.shape().block_dim, row));
    }
  }

  const std::vector<ObservableRow> rows =
      observable_table(a, points, exec_mode(o.mode));
  if (o.format == "csv") {
    std::ostringstream csv;
    write_observable_csv(csv, rows);
    write_text(o.out, csv.str());
  } else {
    Json out = Json::array();
    for (const auto& row : rows) {
      out.push_back(Json{{"block", row.block},
                         {"ray", json_of(row.ray)},
                         {"value", row.value}});
    }
    write_text(o.out, out.dump(2) + "\n");
  }
  return kExitOk;
}

int run_witness(const Options& o) {
  const AlgebraShape shape{o.m, o.n};
  validate_shape(shape);
  require_within_cap(shape);
  if (shape.block_dim < 2) {
    throw BadInput("witness requires n >= 2: with n = 1 every ideal is prime "
                   "and no violation exists");
  }

  Json out;
  bool certified = false;
  if (o.witness_mode == "e-vector") {
    const EVectorReport report = e_vector_experiment(shape);
    certified = report.all_certified();
    out = Json{{"mode", "e-vector"},
               {"shape", json_of(shape)},
               {"e", json_of(report.e)},
               {"sum_is_identity", report.sum_is_identity},
               {"column_in_ideal", report.column_in_ideal},
               {"phase_comparable", report.phase_comparable},
               {"certified", certified}};
  } else {
    Rng rng = Rng(o.seed).split("witness");
    const int block = static_cast<int>(
        rng.below(static_cast<std::uint64_t>(shape.num_blocks)));
    const Quasipoint qp(shape, block,
                        random_unit_vector(shape.block_dim, rng));
    const auto witness = join_prime_violation(qp);
    if (!witness.has_value()) {
      std::fprintf(stderr, "no violation found at n = %d\n", shape.block_dim);
      return kExitPropertyFailure;
    }

    // Re-run the membership tests on the data that gets serialized, so a
    // reader can trust the booleans without trusting the construction.
    const bool join_in = qp_contains(qp, witness->join, 1e-7);
    bool parts_outside = true;
    Json parts = Json::array();
    for (const auto& part : witness->parts) {
      parts_outside = parts_outside && !qp_contains(qp, part, 1e-7);
      parts.push_back(json_of(part));
    }
    bool stored_match = witness->join_in_ideal == join_in;
    for (std::size_t k = 0; k < witness->parts.size(); ++k) {
      stored_match = stored_match &&
                     witness->part_in_ideal[k] ==
                         qp_contains(qp, witness->parts[k], 1e-7);
    }
    certified = join_in && parts_outside && stored_match;
    out = Json{{"mode", "random"},
               {"shape", json_of(shape)},
               {"point", json_of(qp)},
               {"parts", parts},
               {"join", json_of(witness->join)},
               {"checks", Json{{"join_in_ideal", join_in},
                               {"parts_outside_ideal", parts_outside},
                               {"stored_flags_match", stored_match}}},
               {"certified", certified}};
  }

  write_text(o.out, out.dump(2) + "\n");
  return certified ? kExitOk : kExitPropertyFailure;
}

int run_lattice(const Options& o) {
  const FiniteLattice lat = lattice_from_json(parse_json_file(o.lattice_file));
  const int cap = resolved_cap();
  if (lat.size() > cap) {
    throw TooLarge("lattice has " + std::to_string(lat.size()) +
                   " elements; cap is " + std::to_string(cap) +
                   " (set STONESPEC_CAP to raise it)");
  }

  const ExecMode mode = exec_mode(o.mode);
  const IdealEnumeration both = enumerate_ideals_both_routes(lat, cap, mode);
  const StoneBaseReport base = stone_base_check(lat, cap, mode);

  bool every_ideal_principal = true;
  Json ideals = Json::array();
  for (const auto& ideal : both.direct) {
    int generator = -1;
    for (int a : lat.atoms()) {
      if (principal_filter(lat, a) == ideal) {
        generator = a;
        break;
      }
    }
    every_ideal_principal = every_ideal_principal && generator >= 0;
    Json members = Json::array();
    for (int e : ideal.members) members.push_back(lat.label(e));
    ideals.push_back(Json{
        {"atom", generator >= 0 ? Json(lat.label(generator)) : Json()},
        {"elements", members}});
  }

  Json atoms = Json::array();
  for (int a : lat.atoms()) atoms.push_back(lat.label(a));

  const bool ok = both.agree() && base.passed && every_ideal_principal;
  Json out{{"size", lat.size()},
           {"atoms", atoms},
           {"ideals", ideals},
           {"routes_agree", both.agree()},
           {"stone_base", Json{{"passed", base.passed},
                               {"failures", base.failures}}}};
  write_text(o.out, out.dump(2) + "\n");
  return ok ? kExitOk : kExitPropertyFailure;
}

int run_spectrum(const Options& o) {
  const AlgebraShape shape{o.m, o.n};
  validate_shape(shape);
  require_within_cap(shape);
  if (o.trials < 1) throw BadInput("trials must be >= 1");

  // One independent stream per fibre; fibre_sample itself is keyed only by
  // its seed.
  const Rng base = Rng(o.seed).split("spectrum");
  std::vector<Quasipoint> points;
  points.reserve(static_cast<std::size_t>(shape.num_blocks * o.trials));
  for (int k = 0; k < shape.num_blocks; ++k) {
    Rng stream = base.split(static_cast<std::uint64_t>(k));
    const auto fibre =
        fibre_sample(CenterAtom{shape, k}, o.trials, stream.next_u64());
    points.insert(points.end(), fibre.begin(), fibre.end());
  }

  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "block,ray\n";
    for (const auto& qp : points) {
      csv << qp.block() << ",\"" << json_of(qp.ray()).dump() << "\"\n";
    }
    write_text(o.out, csv.str());
  } else {
    Json samples = Json::array();
    for (const auto& qp : points) samples.push_back(json_of(qp));
    Json out{{"shape", json_of(shape)}, {"samples", samples}};
    write_text(o.out, out.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stone spectrum toolkit for finite type I_n block algebras"};
  app.require_subcommand(1);

  Options o;
  int rc = kExitOk;

  // Count flags are ints; Range keeps the rejection message in integers.
  const CLI::Range positive_int(1, std::numeric_limits<int>::max());

  const auto add_shape = [&](CLI::App* cmd) {
    cmd->add_option("--m", o.m, "number of center atoms")->check(positive_int);
    cmd->add_option("--n", o.n, "block dimension")->check(positive_int);
  };
  const auto add_mode = [&o](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "execution mode")
        ->check(CLI::IsMember({"serial", "parallel"}));
  };

  CLI::App* verify = app.add_subcommand(
      "verify", "run property suites and emit a JSON report");
  add_shape(verify);
  add_mode(verify);
  verify->add_option("--seed", o.seed, "root seed for all suite streams");
  verify->add_option("--trials", o.trials, "trials per property")
      ->check(positive_int);
  verify->add_option("--tol", o.tol, "comparison tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--suite", o.suites, "suite selection (repeatable)")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--out", o.out, "report path (default stdout)");
  verify->callback([&] { rc = run_verify(o); });

  CLI::App* observable = app.add_subcommand(
      "observable", "evaluate an operator's observable function");
  observable
      ->add_option("--operator", o.operator_file, "block operator JSON file")
      ->required();
  auto* points_opt = observable->add_option("--points", o.points_file,
                                            "JSON array of quasipoints");
  observable
      ->add_option("--samples", o.samples,
                   "seeded sample count when no points file is given")
      ->excludes(points_opt);
  observable->add_option("--seed", o.seed, "seed for --samples");
  add_mode(observable);
  observable->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  observable->add_option("--out", o.out, "output path (default stdout)");
  observable->callback([&] {
    o.format = observable->count("--format") ? o.format : "csv";
    rc = run_observable(o);
  });

  CLI::App* witness = app.add_subcommand(
      "witness", "produce a join-primeness violation with re-checked booleans");
  add_shape(witness);
  witness->add_option("--seed", o.seed, "seed for the sampled quasipoint");
  witness
      ->add_option("--mode", o.witness_mode,
                   "e-vector: uniform-vector obstruction at every atom; "
                   "random: violation at a sampled quasipoint")
      ->check(CLI::IsMember({"e-vector", "random"}));
  witness->add_option("--out", o.out, "output path (default stdout)");
  witness->callback([&] { rc = run_witness(o); });

  CLI::App* lattice = app.add_subcommand(
      "lattice", "enumerate maximal dual ideals of a lattice file");
  lattice->add_option("--in", o.lattice_file, "lattice JSON file")->required();
  add_mode(lattice);
  lattice->add_option("--out", o.out, "output path (default stdout)");
  lattice->callback([&] { rc = run_lattice(o); });

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "sample quasipoints from every fibre");
  add_shape(spectrum);
  spectrum->add_option("--seed", o.seed, "sampling seed");
  spectrum->add_option("--trials", o.trials, "samples per fibre")
      ->check(positive_int);
  spectrum->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_option("--out", o.out, "output path (default stdout)");
  spectrum->callback([&] { rc = run_spectrum(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const TooLarge& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitResourceCap;
  } catch (const ClosureCapExceeded& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return kExitResourceCap;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return rc;
}
