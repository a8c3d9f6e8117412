#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "stonespec/lattice.hpp"
#include "stonespec/quasipoint.hpp"

using namespace stonespec;

namespace {

Quasipoint standard_qp(const AlgebraShape& shape, int block) {
  return Quasipoint(shape, block, Cvec::Unit(shape.block_dim, 0));
}

BlockProjection with_block(const AlgebraShape& shape, int at, Projection p) {
  std::vector<Projection> blocks;
  for (int k = 0; k < shape.num_blocks; ++k) {
    blocks.push_back(k == at ? p : Projection::zero(shape.block_dim));
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

}  // namespace

TEST_CASE("membership predicate") {
  const AlgebraShape shape{2, 3};
  const Quasipoint qp = standard_qp(shape, 0);
  CHECK(qp_contains(qp, BlockProjection::identity(shape)));
  CHECK_FALSE(qp_contains(qp, BlockProjection::zero(shape)));

  Cmat d1 = Cmat::Zero(3, 3);
  d1(0, 0) = 1.0;
  CHECK(qp_contains(qp, with_block(shape, 0, Projection(d1))));
  Cmat d2 = Cmat::Zero(3, 3);
  d2(1, 1) = 1.0;
  CHECK_FALSE(qp_contains(qp, with_block(shape, 0, Projection(d2))));

  CHECK_THROWS_AS(qp_contains(qp, BlockProjection::identity({3, 3})),
                  ShapeMismatch);
  CHECK_THROWS_AS(Quasipoint(shape, 5, Cvec::Unit(3, 0)), BadInput);
  CHECK_THROWS_AS(Quasipoint(shape, 0, 2.0 * Cvec::Unit(3, 0)), BadInput);
}

TEST_CASE("dual ideal laws of the membership predicate") {
  Rng rng(20);
  for (int trial = 0; trial < 50; ++trial) {
    Rng tr = rng.split(trial);
    const AlgebraShape shape{1 + static_cast<int>(tr.below(4)),
                             1 + static_cast<int>(tr.below(4))};
    const int atom = static_cast<int>(tr.below(
        static_cast<std::uint64_t>(shape.num_blocks)));
    const Quasipoint qp(shape, atom,
                        random_unit_vector(shape.block_dim, tr));

    const BlockProjection p = random_block_projection(shape, tr);
    const BlockProjection q = random_block_projection(shape, tr);
    const BlockProjection meet = block_meet(p, q);
    const BlockProjection join = block_join(p, q);

    const bool in_p = qp_contains(qp, p, 1e-7);
    const bool in_q = qp_contains(qp, q, 1e-7);
    const bool in_meet = qp_contains(qp, meet, 1e-6);

    // Base law, which subsumes meet closure.
    CHECK(in_meet == (in_p && in_q));
    // Upward closure.
    if (in_p) CHECK(qp_contains(qp, join, 1e-6));

    // Maximality: anything outside the ideal meets the generating
    // projection at zero.
    const BlockProjection gen = generating_projection(qp);
    CHECK(qp_contains(qp, gen));
    if (!in_p) {
      const BlockProjection obstruction = block_meet(p, gen);
      CHECK(central_support(obstruction, 1e-7).empty());
    }
  }
}

TEST_CASE("zeta to the center and subalgebras") {
  const AlgebraShape shape{3, 2};
  Rng rng(21);
  const Quasipoint qp(shape, 1, random_unit_vector(2, rng));
  CHECK(zeta_center(qp).index == 1);

  // Preimage law: a central projection is in the ideal exactly when its
  // support holds the atom.
  for (int bits = 0; bits < 8; ++bits) {
    CentralProjection c(shape);
    for (int k = 0; k < 3; ++k) {
      if (bits & (1 << k)) c.insert(k);
    }
    CHECK(qp_contains(qp, c.to_projection()) == c.contains(1));
  }

  // Image law: a quasipoint over an atom containing P exists exactly when
  // the atom lies in the central support.
  for (int trial = 0; trial < 30; ++trial) {
    Rng tr = rng.split(trial);
    const BlockProjection p = random_block_projection(shape, tr);
    const CentralProjection supp = central_support(p);
    for (int k = 0; k < shape.num_blocks; ++k) {
      if (supp.contains(k)) {
        const Quasipoint over(
            shape, k, range_basis(p.block(k)).col(0));
        CHECK(qp_contains(over, p, 1e-7));
      } else {
        // Over a vanished block no ray survives: block k of p is zero.
        CHECK(p.block(k).mat().norm() <= 1e-9);
      }
    }
  }

  const CenterPartitionSubalgebra paired(shape, {{0, 1}, {2}});
  CHECK(zeta_subalgebra(qp, paired) == std::vector<int>({0, 1}));
  CHECK(zeta_subalgebra(qp, CenterPartitionSubalgebra::trivial(shape)) ==
        std::vector<int>({0, 1, 2}));
  CHECK(zeta_subalgebra(qp, CenterPartitionSubalgebra::full_center(shape)) ==
        std::vector<int>{1});
}

TEST_CASE("quasipoint from an abelian projection") {
  const AlgebraShape shape{3, 3};
  std::vector<Cvec> vecs(3, Cvec::Unit(3, 0));
  const BlockProjection e_first =
      abelian_from_vector(ModuleVector(shape, vecs));
  const Quasipoint qp =
      quasipoint_from_abelian(e_first, CenterAtom{shape, 0});
  CHECK(qp.block() == 0);
  CHECK(rays_equal(qp.ray(), Cvec::Unit(3, 0)));

  Rng rng(22);
  const Cvec v = random_unit_vector(3, rng);
  const BlockProjection e = with_block(shape, 2, Projection::onto_ray(v));
  const Quasipoint qp2 = quasipoint_from_abelian(e, CenterAtom{shape, 2});
  CHECK(qp2.block() == 2);
  CHECK(rays_equal(qp2.ray(), v));
  CHECK(qp_contains(qp2, e));

  CHECK_THROWS_AS(quasipoint_from_abelian(e, CenterAtom{shape, 0}),
                  NotOverBeta);
  CHECK_THROWS_AS(
      quasipoint_from_abelian(BlockProjection::identity(shape),
                              CenterAtom{shape, 0}),
      NotAbelian);

  // Uniqueness: any genuinely different ray over the same atom loses the
  // abelian projection (the separation that makes fibres discrete).
  for (int trial = 0; trial < 40; ++trial) {
    Rng tr = rng.split(trial);
    const Cvec w = random_unit_vector(3, tr);
    if (rays_equal(w, v, 1e-6)) continue;
    const Quasipoint other(shape, 2, w);
    CHECK_FALSE(qp_contains(other, e, 1e-7));
  }
}

TEST_CASE("sections of the fibration") {
  const AlgebraShape shape{3, 2};
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Rng tr = rng.split(trial);
    const BlockProjection e = random_abelian_projection(shape, tr);
    const auto section = section_sigma(e);
    const CentralProjection supp = central_support(e);
    REQUIRE(static_cast<int>(section.size()) == supp.size());
    for (const auto& [atom, point] : section) {
      CHECK(supp.contains(atom));
      CHECK(zeta_center(point).index == atom);
      CHECK(qp_contains(point, e, 1e-7));
    }

    // Section-preimage formula: the atoms whose section point absorbs P are
    // exactly the support of the central factor of P /\ E.
    const BlockProjection p = random_block_projection(shape, tr);
    const CentralProjection factor = meet_with_abelian_central_factor(p, e);
    for (const auto& [atom, point] : section) {
      CHECK(qp_contains(point, p, 1e-7) == factor.contains(atom));
    }
  }
}

TEST_CASE("central factor of meets with abelian projections") {
  const AlgebraShape shape{3, 3};
  Rng rng(24);
  const BlockProjection e = random_abelian_projection(shape, rng);
  CHECK(meet_with_abelian_central_factor(BlockProjection::identity(shape), e) ==
        central_support(e));
  CHECK(meet_with_abelian_central_factor(BlockProjection::zero(shape), e)
            .empty());

  for (int trial = 0; trial < 30; ++trial) {
    Rng tr = rng.split(trial);
    const BlockProjection p = random_block_projection(shape, tr);
    const BlockProjection f = random_abelian_projection(shape, tr);
    const CentralProjection factor = meet_with_abelian_central_factor(p, f);
    // P /\ E = pE, checked against the subspace meet blockwise.
    const BlockProjection meet = block_meet(p, f);
    const BlockProjection scaled =
        block_meet(factor.to_projection(), f);
    CHECK(block_equal(meet, scaled, 1e-6));
  }

  CHECK_THROWS_AS(
      meet_with_abelian_central_factor(e, BlockProjection::identity(shape)),
      NotAbelian);
}

TEST_CASE("pushforward along partial isometries") {
  const AlgebraShape shape{2, 3};
  Rng rng(25);
  const Quasipoint qp(shape, 0, random_unit_vector(3, rng));

  // Identity and unitaries.
  CHECK(qp_equal(theta_pushforward(BlockOperator::identity(shape), qp), qp));
  const BlockOperator t = random_block_unitary(shape, rng);
  CHECK(qp_equal(theta_pushforward(t, qp), unitary_action(t, qp)));

  // theta = T E for E the generating projection moves the ray by T.
  const BlockProjection e = generating_projection(qp);
  std::vector<Cmat> te_blocks;
  for (int k = 0; k < shape.num_blocks; ++k) {
    te_blocks.push_back(t.block(k) * e.block(k).mat());
  }
  const BlockOperator te(shape, te_blocks);
  const Quasipoint moved = theta_pushforward(te, qp);
  CHECK(moved.block() == 0);
  CHECK(rays_equal(moved.ray(),
                   phase_canonical(t.block(0) * qp.ray()), 1e-9));

  // Inverse direction undoes the move.
  const Quasipoint back = theta_pushforward(te.adjoint(), moved);
  CHECK(qp_equal(back, qp, 1e-9));

  // A quasipoint outside the initial subspace is rejected.
  Rng rng2(26);
  const Cvec w = random_unit_vector(3, rng2);
  if (!rays_equal(w, qp.ray(), 1e-3)) {
    const Quasipoint outside(shape, 0, w);
    CHECK_THROWS_AS(theta_pushforward(te, outside), NotInDomain);
  }
}

TEST_CASE("unitary action") {
  const AlgebraShape shape{2, 2};
  Rng rng(27);
  const Quasipoint qp(shape, 1, random_unit_vector(2, rng));
  CHECK(qp_equal(unitary_action(BlockOperator::identity(shape), qp), qp));

  // Diagonal phases act trivially on rays.
  std::vector<Cmat> phase_blocks;
  for (int k = 0; k < 2; ++k) {
    phase_blocks.push_back(std::polar(1.0, 0.3 + k) *
                           Cmat::Identity(2, 2));
  }
  CHECK(qp_equal(unitary_action(BlockOperator(shape, phase_blocks), qp), qp));

  // Membership equivariance.
  for (int trial = 0; trial < 40; ++trial) {
    Rng tr = rng.split(trial);
    const BlockOperator t = random_block_unitary(shape, tr);
    const BlockProjection p = random_block_projection(shape, tr);
    std::vector<Cmat> conj_blocks;
    for (int k = 0; k < shape.num_blocks; ++k) {
      conj_blocks.push_back(t.block(k) * p.block(k).mat() *
                            t.block(k).adjoint());
    }
    const BlockProjection tpt(BlockOperator(shape, conj_blocks), 1e-8);
    CHECK(qp_contains(unitary_action(t, qp), tpt, 1e-7) ==
          qp_contains(qp, p, 1e-7));
  }

  CHECK_THROWS_AS(
      unitary_action(2.0 * BlockOperator::identity(shape), qp), NotUnitary);
}

TEST_CASE("transitivity within a fibre") {
  const AlgebraShape shape{2, 3};
  const Quasipoint a = standard_qp(shape, 0);
  const Quasipoint b(shape, 0, Cvec::Unit(3, 1));
  const BlockOperator t = transitive_witness(a, b);
  CHECK(qp_equal(unitary_action(t, a), b));

  CHECK(qp_equal(unitary_action(transitive_witness(a, a), a), a));

  const Quasipoint c = standard_qp(shape, 1);
  CHECK_THROWS_AS(transitive_witness(a, c), DifferentFibre);

  Rng rng(28);
  for (int trial = 0; trial < 30; ++trial) {
    Rng tr = rng.split(trial);
    const Quasipoint x(shape, 1, random_unit_vector(3, tr));
    const Quasipoint y(shape, 1, random_unit_vector(3, tr));
    CHECK(qp_equal(unitary_action(transitive_witness(x, y), x), y));
  }
}

TEST_CASE("isotropy conditions agree") {
  const AlgebraShape shape{2, 3};
  Rng rng(29);
  const Quasipoint qp(shape, 0, random_unit_vector(3, rng));

  const auto [fixed_id, report_id] =
      isotropy_test(BlockOperator::identity(shape), qp);
  CHECK(fixed_id);
  CHECK(report_id.all_agree());

  for (int trial = 0; trial < 60; ++trial) {
    Rng tr = rng.split(trial);
    BlockOperator t = random_block_unitary(shape, tr);
    const bool make_fixing = trial % 2 == 0;
    if (make_fixing) {
      // Diagonalize in a frame whose first axis is the ray.
      const Cmat frame = complete_to_unitary(qp.ray());
      Cmat phases = Cmat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) {
        phases(i, i) = std::polar(1.0, 6.28 * tr.uniform());
      }
      std::vector<Cmat> blocks = t.blocks();
      blocks[0] = frame * phases * frame.adjoint();
      t = BlockOperator(shape, blocks);
    }
    const auto [fixed, report] = isotropy_test(t, qp);
    CHECK(report.all_agree());
    if (make_fixing) CHECK(fixed);
  }

  // Mapping the ray onto an orthogonal one fails all four conditions.
  const Cmat frame = complete_to_unitary(qp.ray());
  Cmat swap = Cmat::Identity(3, 3);
  swap(0, 0) = 0.0;
  swap(1, 1) = 0.0;
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  std::vector<Cmat> blocks(2, Cmat::Identity(3, 3));
  blocks[0] = frame * swap * frame.adjoint();
  const auto [fixed_swap, report_swap] =
      isotropy_test(BlockOperator(shape, blocks), qp);
  CHECK_FALSE(fixed_swap);
  CHECK(report_swap.all_agree());
}

TEST_CASE("filter base extension") {
  const AlgebraShape shape{3, 3};

  const FilterBase just_identity{
      shape, {BlockProjection::identity(shape)}};
  const Quasipoint from_identity = extend_filterbase(just_identity);
  CHECK(from_identity.block() == 0);
  CHECK(qp_equal(extend_filterbase(just_identity), from_identity));

  // An abelian singleton reproduces the principal construction.
  Rng rng(30);
  const BlockProjection e = random_abelian_projection(shape, rng);
  const int first = central_support(e).support().front();
  CHECK(qp_equal(extend_filterbase(FilterBase{shape, {e}}),
                 quasipoint_from_abelian(e, CenterAtom{shape, first})));

  // Random pairs with nonzero meet: both members land in the ideal.
  for (int trial = 0; trial < 40; ++trial) {
    Rng tr = rng.split(trial);
    const Projection shared = random_projection(3, 2, tr);
    const Projection sub1 = random_subprojection(shared, 2, tr);
    std::vector<Projection> pb(3, Projection::zero(3)), qb(3, Projection::zero(3));
    pb[1] = shared;
    qb[1] = sub1;
    pb[0] = random_projection(3, 1, tr);
    const FilterBase base{
        shape, {BlockProjection(shape, pb), BlockProjection(shape, qb)}};
    const Quasipoint qp = extend_filterbase(base);
    for (const BlockProjection& member : base.elements) {
      CHECK(qp_contains(qp, member, 1e-6));
    }
    // The generated abelian projection itself is a member, and its
    // full-support extension realizes a member with support everywhere.
    const BlockProjection gen = generating_projection(qp);
    CHECK(qp_contains(qp, gen));
    const BlockProjection extended = extend_abelian_full_support(gen);
    CHECK(qp_contains(qp, extended));
    CHECK(central_support(extended) == CentralProjection::full(shape));
  }

  // Preferred atoms.
  std::vector<Projection> wide(3, Projection::identity(3));
  wide[0] = Projection::zero(3);
  const FilterBase base{shape, {BlockProjection(shape, wide)}};
  CHECK(extend_filterbase(base).block() == 1);
  CHECK(extend_filterbase(base, CenterAtom{shape, 2}).block() == 2);
  CHECK_THROWS_AS(extend_filterbase(base, CenterAtom{shape, 0}),
                  AtomNotAdmissible);

  // Disjoint projections are not a filter base.
  std::vector<Projection> left(3, Projection::zero(3)),
      right(3, Projection::zero(3));
  left[0] = Projection::onto_ray(Cvec::Unit(3, 0));
  right[0] = Projection::onto_ray(Cvec::Unit(3, 1));
  CHECK_THROWS_AS(
      extend_filterbase(FilterBase{
          shape,
          {BlockProjection(shape, left), BlockProjection(shape, right)}}),
      NotAFilterBase);
}

TEST_CASE("fibre samples") {
  const AlgebraShape shape{2, 3};
  const CenterAtom beta{shape, 1};
  CHECK(fibre_sample(beta, 0, 5).empty());

  const auto sample = fibre_sample(beta, 10, 5);
  const auto sample_again = fibre_sample(beta, 10, 5);
  REQUIRE(sample.size() == 10);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    CHECK(sample[i].block() == 1);
    CHECK((sample[i].ray() - sample_again[i].ray()).norm() == 0.0);
  }
  for (const Quasipoint& a : sample) {
    for (const Quasipoint& b : sample) {
      CHECK(qp_equal(unitary_action(transitive_witness(a, b), a), b));
    }
  }

  // A one-dimensional block has a single ray.
  const AlgebraShape line{3, 1};
  const auto points = fibre_sample(CenterAtom{line, 0}, 5, 9);
  for (const Quasipoint& p : points) {
    CHECK(qp_equal(p, points.front()));
  }
}

TEST_CASE("socles") {
  const AlgebraShape shape{2, 2};
  Rng rng(31);
  const Quasipoint qp(shape, 0, random_unit_vector(2, rng));
  const BlockProjection f = block_join(
      generating_projection(qp),
      with_block(shape, 1, Projection::onto_ray(random_unit_vector(2, rng))));
  const SocleDescriptor socle = socle_descriptor(qp, f);
  CHECK(block_leq(socle.minimal, socle.bound, 1e-7));
  CHECK(qp_contains(qp, socle.minimal));

  CHECK_THROWS_AS(socle_descriptor(qp, BlockProjection::zero(shape)),
                  NotInDomain);
}

TEST_CASE("lattice oracle agreement with parametrized quasipoints") {
  // The sublattice generated by the center of m=3: its maximal dual ideals
  // are exactly the membership traces of quasipoints over each atom.
  const AlgebraShape shape{3, 2};
  std::vector<BlockProjection> gens;
  for (int k = 0; k < 3; ++k) {
    CentralProjection c(shape);
    c.insert(k);
    gens.push_back(c.to_projection());
  }
  const ProjectionSublattice sub = commuting_projection_sublattice(gens);
  const auto ideals = enumerate_maximal_dual_ideals(sub.lattice);
  REQUIRE(ideals.size() == 3);

  Rng rng(32);
  for (int k = 0; k < 3; ++k) {
    const Quasipoint qp(shape, k, random_unit_vector(2, rng));
    std::vector<int> trace;
    for (int e = 0; e < sub.lattice.size(); ++e) {
      if (qp_contains(qp, sub.elements[static_cast<std::size_t>(e)])) {
        trace.push_back(e);
      }
    }
    bool matched = false;
    for (const DualIdeal& ideal : ideals) {
      if (ideal.members == trace) matched = true;
    }
    CHECK(matched);
  }

  // Same story for a diagonal sublattice in a single block, where the
  // quasipoint ray is an atom of the sublattice.
  const AlgebraShape mono{1, 2};
  const BlockProjection d1(mono, {Projection::onto_ray(Cvec::Unit(2, 0))});
  const BlockProjection d2(mono, {Projection::onto_ray(Cvec::Unit(2, 1))});
  const ProjectionSublattice diag = commuting_projection_sublattice({d1, d2});
  const auto diag_ideals = enumerate_maximal_dual_ideals(diag.lattice);
  REQUIRE(diag_ideals.size() == 2);
  for (int which = 0; which < 2; ++which) {
    const Quasipoint qp(mono, 0, Cvec::Unit(2, which));
    std::vector<int> trace;
    for (int e = 0; e < diag.lattice.size(); ++e) {
      if (qp_contains(qp, diag.elements[static_cast<std::size_t>(e)])) {
        trace.push_back(e);
      }
    }
    bool matched = false;
    for (const DualIdeal& ideal : diag_ideals) {
      if (ideal.members == trace) matched = true;
    }
    CHECK(matched);
  }
}
