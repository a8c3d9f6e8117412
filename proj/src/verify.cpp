#include "stonespec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "stonespec/errors.hpp"
#include "stonespec/lattice.hpp"
#include "stonespec/masa.hpp"
#include "stonespec/observable.hpp"

namespace stonespec {

namespace {

class Suite {
 public:
  Suite(const std::string& name, const SuiteConfig& config)
      : config_(config), root_(Rng(config.seed).split(name)) {
    report_.suite = name;
  }

  /// fn(trial_rng, trial) returns a counterexample, or absent on success.
  template <typename Fn>
  void property(const std::string& name, int trials, Fn&& fn) {
    PropertyResult result;
    result.name = name;
    const Rng prop = root_.split(name);
    for (int t = 0; t < trials; ++t) {
      std::optional<Json> counterexample;
      try {
        counterexample = fn(prop.split(static_cast<std::uint64_t>(t)), t);
      } catch (const Error& err) {
        counterexample = Json{{"error", err.what()}};
      }
      if (counterexample) {
        ++result.fail;
        if (result.counterexamples.size() < 3) {
          (*counterexample)["trial"] = t;
          result.counterexamples.push_back(std::move(*counterexample));
        }
      } else {
        ++result.pass;
      }
    }
    report_.properties.push_back(std::move(result));
  }

  const SuiteConfig& config() const { return config_; }
  SuiteReport take() { return std::move(report_); }

 private:
  SuiteConfig config_;
  Rng root_;
  SuiteReport report_;
};

int sample_in(int lo, int hi, Rng& rng) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

AlgebraShape sample_shape(const SuiteConfig& config, Rng& rng, int min_n = 1) {
  return AlgebraShape{sample_in(1, config.shape.num_blocks, rng),
                      sample_in(min_n, config.shape.block_dim, rng)};
}

/// Random projection whose block at `atom` has rank in [min_rank, max_rank].
BlockProjection random_projection_over(const AlgebraShape& shape, int atom,
                                       int min_rank, int max_rank, Rng& rng) {
  std::vector<Projection> blocks;
  for (int k = 0; k < shape.num_blocks; ++k) {
    const int rank = k == atom
                         ? sample_in(min_rank, max_rank, rng)
                         : sample_in(0, shape.block_dim, rng);
    blocks.push_back(random_projection(shape.block_dim, rank, rng));
  }
  return BlockProjection(shape, std::move(blocks));
}

BlockOperator random_block_unitary(const AlgebraShape& shape, Rng& rng) {
  std::vector<Cmat> blocks;
  for (int k = 0; k < shape.num_blocks; ++k) {
    blocks.push_back(random_unitary(shape.block_dim, rng));
  }
  return BlockOperator(shape, std::move(blocks));
}

BlockOperator random_hermitian(const AlgebraShape& shape, Rng& rng) {
  const BlockOperator x = random_block_operator(shape, rng);
  return 0.5 * (x + x.adjoint());
}

Quasipoint random_quasipoint(const AlgebraShape& shape, Rng& rng) {
  const int atom = sample_in(0, shape.num_blocks - 1, rng);
  return Quasipoint(shape, atom, random_unit_vector(shape.block_dim, rng));
}

std::vector<DualIdeal> atom_filters(const FiniteLattice& lat) {
  std::vector<DualIdeal> filters;
  for (int a : lat.atoms()) filters.push_back(principal_filter(lat, a));
  std::sort(filters.begin(), filters.end(),
            [](const DualIdeal& x, const DualIdeal& y) {
              return x.members < y.members;
            });
  return filters;
}

std::optional<Json> check_oracle_lattice(const FiniteLattice& lat,
                                         const char* what,
                                         const SuiteConfig& config) {
  const IdealEnumeration routes =
      enumerate_ideals_both_routes(lat, kEnumerationCap, config.mode);
  if (!routes.agree()) {
    return Json{{"lattice", what}, {"reason", "enumeration routes disagree"}};
  }
  if (routes.direct != atom_filters(lat)) {
    return Json{{"lattice", what},
                {"reason", "ideals are not the atom principal filters"}};
  }
  const StoneBaseReport base = stone_base_check(lat, kEnumerationCap, config.mode);
  if (!base.passed) {
    return Json{{"lattice", what},
                {"reason", "base identities failed"},
                {"failures", base.failures}};
  }
  return std::nullopt;
}

SuiteReport lattice_oracle_suite(const SuiteConfig& config) {
  Suite suite("lattice-oracle", config);

  suite.property(
      "boolean ideals are the atom filters", 6,
      [&](Rng, int t) -> std::optional<Json> {
        return check_oracle_lattice(boolean_lattice(t + 1), "boolean", config);
      });

  suite.property(
      "chains have a single ideal", 7,
      [&](Rng, int t) -> std::optional<Json> {
        const int length = t + 2;
        const FiniteLattice lat = chain_lattice(length);
        const auto ideals =
            enumerate_maximal_dual_ideals(lat, kEnumerationCap, config.mode);
        if (ideals.size() != 1 ||
            static_cast<int>(ideals.front().members.size()) != length - 1) {
          return Json{{"length", length},
                      {"reason", "expected exactly the set of nonzero elements"}};
        }
        return check_oracle_lattice(lat, "chain", config);
      });

  suite.property(
      "commuting closures obey the oracle", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        // A shared eigenframe per block keeps the family commuting; the
        // closure of three generators stays well under the element cap.
        std::vector<Cmat> frames;
        for (int k = 0; k < shape.num_blocks; ++k) {
          frames.push_back(random_unitary(shape.block_dim, rng));
        }
        const int generators = sample_in(2, 3, rng);
        std::vector<BlockProjection> gens;
        for (int g = 0; g < generators; ++g) {
          std::vector<Projection> blocks;
          for (int k = 0; k < shape.num_blocks; ++k) {
            Cmat picked(shape.block_dim, 0);
            for (int c = 0; c < shape.block_dim; ++c) {
              if (rng.below(2) == 1) {
                picked.conservativeResize(Eigen::NoChange, picked.cols() + 1);
                picked.col(picked.cols() - 1) =
                    frames[static_cast<std::size_t>(k)].col(c);
              }
            }
            blocks.push_back(picked.cols() == 0
                                 ? Projection::zero(shape.block_dim)
                                 : Projection::onto_span(picked));
          }
          gens.emplace_back(shape, std::move(blocks));
        }
        const ProjectionSublattice sub = commuting_projection_sublattice(gens);
        if (sub.lattice.size() > kEnumerationCap) return std::nullopt;
        auto bad = check_oracle_lattice(sub.lattice, "commuting family", config);
        if (bad) (*bad)["generators"] = json_of(gens.front());
        return bad;
      });

  return suite.take();
}

SuiteReport rank_suite(const SuiteConfig& config) {
  Suite suite("rank", config);
  const int n_cap = config.shape.block_dim;

  suite.property(
      "rank cells partition the central support", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection p = random_block_projection(shape, rng);
        const CentralProjection support = central_support(p);
        if (support.empty()) return std::nullopt;
        const RankDecomposition cells = rank_decomposition(p);
        CentralProjection seen(shape);
        for (int j = 1; j <= cells.max_rank(); ++j) {
          for (int k : cells.at(j).support()) {
            if (seen.contains(k)) {
              return Json{{"projection", json_of(p)},
                          {"reason", "cells overlap"}};
            }
            seen.insert(k);
            if (rank_of(p.block(k)) != j) {
              return Json{{"projection", json_of(p)},
                          {"block", k},
                          {"reason", "cell rank mismatch"}};
            }
          }
        }
        if (!(seen == support)) {
          return Json{{"projection", json_of(p)},
                      {"reason", "cells do not cover the support"}};
        }
        return std::nullopt;
      });

  suite.property(
      "central cuts preserve rank over an atom", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const int atom = sample_in(0, shape.num_blocks - 1, rng);
        const BlockProjection p =
            random_projection_over(shape, atom, 1, shape.block_dim, rng);
        CentralProjection cut(shape);
        for (int k = 0; k < shape.num_blocks; ++k) {
          if (rng.below(2) == 1) cut.insert(k);
        }
        cut.insert(atom);
        std::vector<Projection> masked;
        for (int k = 0; k < shape.num_blocks; ++k) {
          masked.push_back(cut.contains(k) ? p.block(k)
                                           : Projection::zero(shape.block_dim));
        }
        const BlockProjection cut_p(shape, std::move(masked));
        const CenterAtom beta{shape, atom};
        if (rank_over_beta(cut_p, beta) != rank_over_beta(p, beta)) {
          return Json{{"projection", json_of(p)},
                      {"cut", json_of(cut)},
                      {"atom", atom}};
        }
        return std::nullopt;
      });

  suite.property(
      "domination compares ranks over an atom", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const int atom = sample_in(0, shape.num_blocks - 1, rng);
        const BlockProjection q =
            random_projection_over(shape, atom, 1, shape.block_dim, rng);
        std::vector<Projection> sub;
        for (int k = 0; k < shape.num_blocks; ++k) {
          const int parent_rank = rank_of(q.block(k));
          const int lo = k == atom ? 1 : 0;
          sub.push_back(random_subprojection(
              q.block(k), sample_in(lo, parent_rank, rng), rng));
        }
        const BlockProjection p(shape, std::move(sub));
        const CenterAtom beta{shape, atom};
        if (!block_leq(p, q, 1e-7) ||
            rank_over_beta(p, beta) > rank_over_beta(q, beta)) {
          return Json{{"smaller", json_of(p)},
                      {"larger", json_of(q)},
                      {"atom", atom}};
        }
        return std::nullopt;
      });

  suite.property(
      "rank is constant on decomposition cells", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection p = random_block_projection(shape, rng);
        if (central_support(p).empty()) return std::nullopt;
        const RankDecomposition cells = rank_decomposition(p);
        for (int j = 1; j <= cells.max_rank(); ++j) {
          for (int k : cells.at(j).support()) {
            if (rank_over_beta(p, CenterAtom{shape, k}) != j) {
              return Json{{"projection", json_of(p)}, {"block", k}};
            }
          }
        }
        return std::nullopt;
      });

  suite.property(
      "equal rank plus domination forces equality over the atom",
      config.trials, [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const int atom = sample_in(0, shape.num_blocks - 1, rng);
        const CenterAtom beta{shape, atom};
        const BlockProjection q =
            random_projection_over(shape, atom, 1, shape.block_dim, rng);

        // Constructed case: a full-rank subprojection of the atom block.
        std::vector<Projection> sub;
        for (int k = 0; k < shape.num_blocks; ++k) {
          sub.push_back(k == atom
                            ? random_subprojection(
                                  q.block(k), rank_of(q.block(k)), rng)
                            : random_projection(
                                  shape.block_dim,
                                  sample_in(0, shape.block_dim, rng), rng));
        }
        const BlockProjection p(shape, std::move(sub));
        if (rank_over_beta(p, beta) == rank_over_beta(q, beta) &&
            beta_class_leq(p, q, beta, 1e-7) &&
            !beta_equivalent(p.op(), q.op(), beta, 1e-6)) {
          return Json{{"smaller", json_of(p)}, {"larger", json_of(q)}};
        }

        // Independent case: the implication must hold vacuously or not.
        const BlockProjection r =
            random_projection_over(shape, atom, 1, shape.block_dim, rng);
        if (rank_over_beta(r, beta) == rank_over_beta(q, beta) &&
            beta_class_leq(r, q, beta, 1e-7) &&
            !beta_equivalent(r.op(), q.op(), beta, 1e-6)) {
          return Json{{"smaller", json_of(r)}, {"larger", json_of(q)}};
        }
        return std::nullopt;
      });

  if (n_cap >= 2) {
    suite.property(
        "complement ranks over an atom", config.trials,
        [&](Rng rng, int) -> std::optional<Json> {
          const AlgebraShape shape = sample_shape(config, rng, 2);
          const int atom = sample_in(0, shape.num_blocks - 1, rng);
          const CenterAtom beta{shape, atom};
          const BlockProjection p = random_projection_over(
              shape, atom, 1, shape.block_dim - 1, rng);
          const BlockProjection complement = p.complement();
          if (!is_projection_over_beta(complement, beta) ||
              rank_over_beta(complement, beta) !=
                  shape.block_dim - rank_over_beta(p, beta)) {
            return Json{{"projection", json_of(p)}, {"atom", atom}};
          }
          return std::nullopt;
        });
  }

  suite.property(
      "rank decisions are stable across tolerances", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection p = random_block_projection(shape, rng);
        for (int k = 0; k < shape.num_blocks; ++k) {
          const CenterAtom beta{shape, k};
          if (is_projection_over_beta(p, beta) !=
              is_projection_over_beta(p, beta, 1e-6)) {
            return Json{{"projection", json_of(p)}, {"block", k}};
          }
          if (is_projection_over_beta(p, beta) &&
              rank_over_beta(p, beta, 1e-6) != rank_over_beta(p, beta, 1e-8)) {
            return Json{{"projection", json_of(p)}, {"block", k}};
          }
        }
        return std::nullopt;
      });

  suite.property(
      "seminorm equals the character modulus on the center", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator c = random_central_operator(shape, rng);
        for (int k = 0; k < shape.num_blocks; ++k) {
          const CenterAtom beta{shape, k};
          const double lhs = beta_seminorm(c, beta);
          const double rhs = std::abs(tau_beta(c, beta));
          if (std::abs(lhs - rhs) > 1e-9) {
            return Json{{"central", json_of(c)},
                        {"atom", k},
                        {"seminorm", lhs},
                        {"character", rhs}};
          }
        }
        return std::nullopt;
      });

  suite.property(
      "star identity of the seminorm", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator a = random_block_operator(shape, rng);
        const BlockOperator square = a.adjoint() * a;
        for (int k = 0; k < shape.num_blocks; ++k) {
          const CenterAtom beta{shape, k};
          const double norm = beta_seminorm(a, beta);
          const double lhs = beta_seminorm(square, beta);
          if (std::abs(lhs - norm * norm) >
              1e-7 * std::max(1.0, norm * norm)) {
            return Json{{"operator", json_of(a)}, {"atom", k}};
          }
        }
        return std::nullopt;
      });

  suite.property(
      "phase recovery round trip", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection e = random_abelian_projection(shape, rng);
        const ModuleVector a = abelian_vector_of(e);
        std::vector<Cvec> rotated;
        std::vector<Complex> phases;
        for (int k = 0; k < shape.num_blocks; ++k) {
          phases.push_back(std::polar(1.0, 6.283185307 * rng.uniform()));
          rotated.push_back(phases.back() * a.block(k));
        }
        const auto recovered =
            abelian_equality_phase(a, ModuleVector(shape, rotated));
        if (!recovered) {
          return Json{{"projection", json_of(e)},
                      {"reason", "equal projections not recognized"}};
        }
        for (int k = 0; k < shape.num_blocks; ++k) {
          const Complex expected =
              a.block(k).norm() > 1e-9 ? phases[static_cast<std::size_t>(k)]
                                       : Complex(1.0, 0.0);
          if (std::abs((*recovered)[static_cast<std::size_t>(k)] - expected) >
              1e-9) {
            return Json{{"projection", json_of(e)}, {"block", k}};
          }
        }
        return std::nullopt;
      });

  return suite.take();
}

SuiteReport stone_suite(const SuiteConfig& config) {
  Suite suite("stone", config);

  suite.property(
      "filter bases extend to quasipoints", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const Quasipoint target = random_quasipoint(shape, rng);
        const BlockProjection seed = generating_projection(target);
        const int count = sample_in(2, 5, rng);
        std::vector<BlockProjection> generators;
        for (int g = 0; g < count; ++g) {
          generators.push_back(
              block_join(seed, random_block_projection(shape, rng)));
        }
        const FilterBase base{shape, generators};
        const Quasipoint qp = extend_filterbase(base);
        for (const BlockProjection& p : generators) {
          if (!qp_contains(qp, p, 1e-6)) {
            return Json{{"base", json_of(base)}, {"point", json_of(qp)}};
          }
        }
        const BlockProjection abelian = generating_projection(qp);
        if (!is_abelian_projection(abelian) || !qp_contains(qp, abelian)) {
          return Json{{"point", json_of(qp)},
                      {"reason", "generated abelian member missing"}};
        }
        const BlockProjection full = extend_abelian_full_support(abelian);
        if (!qp_contains(qp, full) ||
            !(central_support(full) == CentralProjection::full(shape))) {
          return Json{{"point", json_of(qp)},
                      {"reason", "full-support extension failed"}};
        }
        return std::nullopt;
      });

  suite.property(
      "sections invert the projection to the base", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection e = random_abelian_projection(shape, rng);
        const auto section = section_sigma(e);
        const CentralProjection supp = central_support(e);
        if (static_cast<int>(section.size()) != supp.size()) {
          return Json{{"abelian", json_of(e)},
                      {"reason", "section domain is not the support"}};
        }
        for (const auto& [atom, point] : section) {
          if (!supp.contains(atom) || zeta_center(point).index != atom ||
              !qp_contains(point, e, 1e-7)) {
            return Json{{"abelian", json_of(e)}, {"atom", atom}};
          }
        }
        return std::nullopt;
      });

  suite.property(
      "basic opens project to central supports", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockProjection p = random_block_projection(shape, rng);
        const CentralProjection supp = central_support(p);
        for (int k = 0; k < shape.num_blocks; ++k) {
          if (supp.contains(k)) {
            const Quasipoint over(shape, k, range_basis(p.block(k)).col(0));
            if (!qp_contains(over, p, 1e-7)) {
              return Json{{"projection", json_of(p)}, {"atom", k}};
            }
          } else if (p.block(k).mat().norm() > 1e-9) {
            return Json{{"projection", json_of(p)}, {"atom", k}};
          }
        }
        // Preimage side: central membership is support membership.
        const Quasipoint qp = random_quasipoint(shape, rng);
        CentralProjection c(shape);
        for (int k = 0; k < shape.num_blocks; ++k) {
          if (rng.below(2) == 1) c.insert(k);
        }
        if (qp_contains(qp, c.to_projection()) != c.contains(qp.block())) {
          return Json{{"central", json_of(c)}, {"point", json_of(qp)}};
        }
        return std::nullopt;
      });

  suite.property(
      "fibres are single unitary orbits", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const int atom = sample_in(0, shape.num_blocks - 1, rng);
        const Quasipoint a(shape, atom,
                           random_unit_vector(shape.block_dim, rng));
        const Quasipoint b(shape, atom,
                           random_unit_vector(shape.block_dim, rng));
        const BlockOperator t = transitive_witness(a, b);
        if (!qp_equal(unitary_action(t, a), b)) {
          return Json{{"from", json_of(a)}, {"to", json_of(b)}};
        }
        if (shape.num_blocks >= 2) {
          const Quasipoint other(shape, (atom + 1) % shape.num_blocks,
                                 random_unit_vector(shape.block_dim, rng));
          try {
            transitive_witness(a, other);
            return Json{{"from", json_of(a)},
                        {"to", json_of(other)},
                        {"reason", "cross-fibre witness not rejected"}};
          } catch (const DifferentFibre&) {
          }
        }
        return std::nullopt;
      });

  suite.property(
      "isotropy conditions agree", config.trials,
      [&](Rng rng, int trial) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        BlockOperator t = random_block_unitary(shape, rng);
        const bool make_fixing = trial % 2 == 0;
        if (make_fixing) {
          const Cmat frame = complete_to_unitary(qp.ray());
          Cmat phases = Cmat::Zero(shape.block_dim, shape.block_dim);
          for (int i = 0; i < shape.block_dim; ++i) {
            phases(i, i) = std::polar(1.0, 6.283185307 * rng.uniform());
          }
          std::vector<Cmat> blocks = t.blocks();
          blocks[static_cast<std::size_t>(qp.block())] =
              frame * phases * frame.adjoint();
          t = BlockOperator(shape, blocks);
        }
        const auto [fixed, report] = isotropy_test(t, qp);
        if (!report.all_agree() || (make_fixing && !fixed)) {
          return Json{{"point", json_of(qp)},
                      {"unitary", json_of(t)},
                      {"overlap_fixed", report.overlap_fixed},
                      {"action_fixed", report.action_fixed},
                      {"conjugate_in", report.conjugate_in},
                      {"commutes", report.commutes}};
        }
        return std::nullopt;
      });

  return suite.take();
}

SuiteReport observable_suite(const SuiteConfig& config) {
  Suite suite("observable", config);

  suite.property(
      "gelfand coincidence on abelian blocks", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape{sample_in(1, config.shape.num_blocks, rng), 1};
        std::vector<Cmat> cells;
        for (int k = 0; k < shape.num_blocks; ++k) {
          Cmat c(1, 1);
          c(0, 0) = 3.0 * rng.gaussian();
          cells.push_back(c);
        }
        const BlockOperator a(shape, cells);
        for (int k = 0; k < shape.num_blocks; ++k) {
          const Quasipoint qp(shape, k, Cvec::Ones(1));
          const double value = observable_value(a, qp);
          const Complex character = tau_beta(a, CenterAtom{shape, k});
          if (std::abs(character - Complex(value, 0.0)) > 1e-9) {
            return Json{{"operator", json_of(a)}, {"atom", k}};
          }
        }
        return std::nullopt;
      });

  suite.property(
      "jump and component formulas agree", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator a = random_hermitian(shape, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        const double by_jumps = observable_value(a, qp);
        const EigenSystem sys = hermitian_spectral(a.block(qp.block()));
        double by_component = sys.eigenvalues.front();
        for (std::size_t j = 0; j < sys.eigenvalues.size(); ++j) {
          if ((sys.projections[j] * qp.ray()).norm() > kCompTol) {
            by_component = sys.eigenvalues[j];
          }
        }
        if (std::abs(by_jumps - by_component) > 1e-12) {
          return Json{{"operator", json_of(a)},
                      {"point", json_of(qp)},
                      {"jump_formula", by_jumps},
                      {"component_formula", by_component}};
        }
        return std::nullopt;
      });

  suite.property(
      "shift equivariance", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator a = random_hermitian(shape, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        const double c = 2.0 * rng.uniform() - 1.0;
        const double base = observable_value(a, qp);
        const double shifted =
            observable_value(a + c * BlockOperator::identity(shape), qp);
        if (std::abs(shifted - base - c) > 1e-8) {
          return Json{{"operator", json_of(a)},
                      {"point", json_of(qp)},
                      {"shift", c}};
        }
        return std::nullopt;
      });

  suite.property(
      "unitary equivariance", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator a = random_hermitian(shape, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        const BlockOperator t = random_block_unitary(shape, rng);
        std::vector<Cmat> conj;
        for (int k = 0; k < shape.num_blocks; ++k) {
          conj.push_back(t.block(k) * a.block(k) * t.block(k).adjoint());
        }
        const double base = observable_value(a, qp);
        const double moved = observable_value(BlockOperator(shape, conj),
                                              unitary_action(t, qp));
        if (std::abs(moved - base) > 1e-8) {
          return Json{{"operator", json_of(a)},
                      {"point", json_of(qp)},
                      {"unitary", json_of(t)}};
        }
        return std::nullopt;
      });

  suite.property(
      "values live in the block spectrum", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const BlockOperator a = random_hermitian(shape, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        const double value = observable_value(a, qp);
        const EigenSystem sys = hermitian_spectral(a.block(qp.block()));
        double nearest = 1e18;
        for (double mu : sys.eigenvalues) {
          nearest = std::min(nearest, std::abs(mu - value));
        }
        if (nearest > 1e-9) {
          return Json{{"operator", json_of(a)}, {"point", json_of(qp)}};
        }
        return std::nullopt;
      });

  return suite.take();
}

SuiteReport masa_suite(const SuiteConfig& config) {
  Suite suite("masa", config);

  suite.property(
      "a constructed subalgebra admits every point", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const Quasipoint qp = random_quasipoint(shape, rng);
        const Masa m = admissible_masa_for(qp);
        const MasaTrace trace = masa_trace(qp, m);
        if (!trace.success() || trace.point->block != qp.block() ||
            trace.point->column != 0) {
          return Json{{"point", json_of(qp)}};
        }
        return std::nullopt;
      });

  if (config.shape.block_dim >= 2) {
    suite.property(
        "two column mixtures defeat any masa", config.trials,
        [&](Rng rng, int) -> std::optional<Json> {
          const AlgebraShape shape = sample_shape(config, rng, 2);
          const Masa m = Masa::standard(shape).conjugated(
              random_block_unitary(shape, rng));
          const int block = sample_in(0, shape.num_blocks - 1, rng);
          const Cvec mix =
              (m.column(block, 0) + m.column(block, 1)) / std::sqrt(2.0);
          const MasaTrace trace = masa_trace(Quasipoint(shape, block, mix), m);
          if (trace.success() || trace.failure->witness_in_ideal ||
              trace.failure->complement_in_ideal) {
            return Json{{"masa", json_of(m)}, {"block", block}};
          }
          return std::nullopt;
        });
  }

  suite.property(
      "admissible points are exactly the column grid", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        const Masa m = Masa::standard(shape).conjugated(
            random_block_unitary(shape, rng));
        const std::vector<Quasipoint> grid = admissible_set_descriptor(m);
        if (static_cast<int>(grid.size()) !=
            shape.num_blocks * shape.block_dim) {
          return Json{{"masa", json_of(m)},
                      {"reason", "descriptor size is not m*n"}};
        }
        for (const Quasipoint& point : grid) {
          if (!masa_trace(point, m).success()) {
            return Json{{"masa", json_of(m)}, {"point", json_of(point)}};
          }
        }
        // Negative sample: a ray off the grid must fail.
        const Quasipoint off = random_quasipoint(shape, rng);
        bool on_grid = false;
        for (const Quasipoint& point : grid) {
          if (point.block() == off.block() &&
              rays_equal(point.ray(), off.ray(), 1e-6)) {
            on_grid = true;
          }
        }
        if (!on_grid && masa_trace(off, m).success()) {
          return Json{{"masa", json_of(m)}, {"point", json_of(off)}};
        }
        return std::nullopt;
      });

  suite.property(
      "the detector separates the center from masas", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const AlgebraShape shape = sample_shape(config, rng);
        // Random partition of the blocks.
        std::vector<std::vector<int>> buckets(
            static_cast<std::size_t>(shape.num_blocks));
        for (int k = 0; k < shape.num_blocks; ++k) {
          buckets[rng.below(static_cast<std::uint64_t>(shape.num_blocks))]
              .push_back(k);
        }
        std::vector<std::vector<int>> cells;
        for (auto& cell : buckets) {
          if (!cell.empty()) cells.push_back(std::move(cell));
        }
        std::sort(cells.begin(), cells.end());
        const CenterPartitionSubalgebra sub(shape, cells);
        if (!center_detector(sub, 10, rng.next_u64()).central) {
          return Json{{"reason", "partition subalgebra misclassified"}};
        }

        const Masa m = Masa::standard(shape).conjugated(
            random_block_unitary(shape, rng));
        const CenterVerdict verdict = center_detector(m, 10, rng.next_u64());
        if (shape.block_dim == 1) {
          if (!verdict.central) {
            return Json{{"masa", json_of(m)},
                        {"reason", "abelian masa misclassified"}};
          }
          return std::nullopt;
        }
        if (verdict.central || !verdict.failing.has_value() ||
            masa_trace(*verdict.failing, m).success()) {
          return Json{{"masa", json_of(m)},
                      {"reason", "masa not separated from the center"}};
        }
        return std::nullopt;
      });

  return suite.take();
}

SuiteReport ks_suite(const SuiteConfig& config) {
  Suite suite("ks", config);
  const AlgebraShape shape = config.shape;

  if (shape.block_dim == 1) {
    suite.property(
        "abelian ideals are prime", config.trials,
        [&](Rng rng, int) -> std::optional<Json> {
          const Quasipoint qp = random_quasipoint(shape, rng);
          const BlockProjection p = random_block_projection(shape, rng);
          if (!qp_contains(qp, p) && !qp_contains(qp, p.complement())) {
            return Json{{"point", json_of(qp)}, {"projection", json_of(p)}};
          }
          if (join_prime_violation(qp).has_value()) {
            return Json{{"point", json_of(qp)},
                        {"reason", "violation claimed in the abelian case"}};
          }
          return std::nullopt;
        });
    return suite.take();
  }

  suite.property(
      "every point yields a verified violation", config.trials,
      [&](Rng rng, int) -> std::optional<Json> {
        const Quasipoint qp = random_quasipoint(shape, rng);
        const auto witness = join_prime_violation(qp);
        if (!witness) {
          return Json{{"point", json_of(qp)}, {"reason", "witness missing"}};
        }
        if (!witness->join_in_ideal ||
            !qp_contains(qp, witness->join, 1e-7)) {
          return Json{{"point", json_of(qp)},
                      {"reason", "join not in the ideal"}};
        }
        for (std::size_t i = 0; i < witness->parts.size(); ++i) {
          if (witness->part_in_ideal[i] ||
              qp_contains(qp, witness->parts[i], 1e-7)) {
            return Json{{"point", json_of(qp)},
                        {"part", static_cast<int>(i)},
                        {"reason", "part in the ideal"}};
          }
        }
        // The first part also defeats the two-element property.
        if (qp_contains(qp, witness->parts[0]) ||
            qp_contains(qp, witness->parts[0].complement())) {
          return Json{{"point", json_of(qp)},
                      {"reason", "two-element property not defeated"}};
        }
        return std::nullopt;
      });

  suite.property(
      "the uniform vector contradiction certifies at every atom", 1,
      [&](Rng, int) -> std::optional<Json> {
        const EVectorReport report = e_vector_experiment(shape);
        if (!report.all_certified()) {
          return Json{{"shape", json_of(shape)},
                      {"sum_is_identity", report.sum_is_identity}};
        }
        return std::nullopt;
      });

  return suite.take();
}

}  // namespace

bool SuiteReport::ok() const {
  for (const PropertyResult& p : properties) {
    if (!p.ok()) return false;
  }
  return true;
}

int SuiteReport::passes() const {
  int total = 0;
  for (const PropertyResult& p : properties) total += p.pass;
  return total;
}

int SuiteReport::failures() const {
  int total = 0;
  for (const PropertyResult& p : properties) total += p.fail;
  return total;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "ks", "lattice-oracle", "masa", "observable", "rank", "stone"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  if (config.trials < 1) throw BadInput("verify: trials must be >= 1");
  if (name == "lattice-oracle") return lattice_oracle_suite(config);
  if (name == "rank") return rank_suite(config);
  if (name == "stone") return stone_suite(config);
  if (name == "observable") return observable_suite(config);
  if (name == "masa") return masa_suite(config);
  if (name == "ks") return ks_suite(config);
  throw BadInput("verify: unknown suite: " + name);
}

Json report_json(const std::vector<SuiteReport>& reports,
                 const SuiteConfig& config) {
  Json suites = Json::array();
  bool all_ok = true;
  for (const SuiteReport& report : reports) {
    Json properties = Json::array();
    for (const PropertyResult& p : report.properties) {
      properties.push_back(Json{{"name", p.name},
                                {"pass", p.pass},
                                {"fail", p.fail},
                                {"counterexamples", p.counterexamples}});
    }
    suites.push_back(Json{{"suite", report.suite},
                          {"ok", report.ok()},
                          {"pass", report.passes()},
                          {"fail", report.failures()},
                          {"properties", std::move(properties)}});
    all_ok = all_ok && report.ok();
  }
  return Json{{"config",
               Json{{"m", config.shape.num_blocks},
                    {"n", config.shape.block_dim},
                    {"seed", config.seed},
                    {"trials", config.trials},
                    {"tol", config.tol}}},
              {"suites", std::move(suites)},
              {"ok", all_ok}};
}

}  // namespace stonespec
