#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stonespec/block.hpp"
#include "stonespec/quasipoint.hpp"

namespace stonespec {

/// Maximal abelian subalgebra given by explicit eigenbases: per block a
/// unitary whose columns span the diagonal algebra { U diag U* }. Diagonal
/// algebras in a fixed basis are maximal abelian in a full matrix block, so
/// maximality holds by construction.
class Masa {
 public:
  Masa(AlgebraShape shape, std::vector<Cmat> bases, double tol = kTol);

  static Masa standard(const AlgebraShape& shape);

  /// The conjugated subalgebra T M T*, with eigenbases T_k U_k.
  Masa conjugated(const BlockOperator& t) const;

  const AlgebraShape& shape() const { return shape_; }
  const Cmat& basis(int block) const;
  Cvec column(int block, int index) const;

  /// Projection of the subalgebra spanned by one basis column, zero
  /// off-block.
  BlockProjection column_projection(int block, int index) const;

 private:
  AlgebraShape shape_;
  std::vector<Cmat> bases_;
};

/// A quasipoint of a maximal abelian subalgebra: one basis column of one
/// block.
struct MasaQuasipoint {
  AlgebraShape shape;
  int block;
  int column;
};

/// Evidence that an intersection with a subalgebra is not a quasipoint of
/// the subalgebra: a diagonal projection with neither itself nor its
/// in-subalgebra complement in the ideal.
struct TraceFailure {
  BlockProjection witness;
  bool witness_in_ideal;
  bool complement_in_ideal;
};

struct MasaTrace {
  std::optional<MasaQuasipoint> point;
  std::optional<TraceFailure> failure;
  bool success() const { return point.has_value(); }
};

/// Intersects the ideal with the subalgebra. Success when the ray is a
/// basis column of its block, in which case the subalgebra projections in
/// the ideal form the principal filter at that column; otherwise the ray
/// splits over at least two columns and a single-column witness certifies
/// the failure.
MasaTrace masa_trace(const Quasipoint& qp, const Masa& m, double tol = kTol);

/// A subalgebra whose trace at the given quasipoint succeeds: the ray is
/// completed to an orthonormal basis at its block, standard elsewhere.
Masa admissible_masa_for(const Quasipoint& qp);

/// All quasipoints whose trace on m succeeds: exactly one per basis column,
/// m.shape().num_blocks * block_dim in total, ordered by (block, column).
std::vector<Quasipoint> admissible_set_descriptor(const Masa& m);

/// Witness that the ideal is not join-prime: parts joining to a member while
/// no part is a member. Every field is re-checkable with qp_contains.
struct PrimenessWitness {
  std::vector<BlockProjection> parts;
  BlockProjection join;
  bool join_in_ideal;
  std::vector<bool> part_in_ideal;
};

/// Absent exactly when the block dimension is 1 (the abelian case, where
/// ideals are prime). For n >= 2 builds the witness from w = (v + u)/sqrt(2)
/// with u the first standard basis vector not parallel to the ray,
/// orthogonalized against it.
std::optional<PrimenessWitness> join_prime_violation(const Quasipoint& qp);

/// The uniform-vector obstruction at desk scale: e = (1,...,1)^t/sqrt(n) at
/// every block. The columns' abelian projections sum to the identity, yet at
/// the quasipoint (i, e) none of them is a member, and no central phase can
/// identify the generating vectors.
struct EVectorReport {
  AlgebraShape shape;
  ModuleVector e;
  bool sum_is_identity;
  std::vector<std::vector<bool>> column_in_ideal;
  std::vector<bool> phase_comparable;
  bool all_certified() const;
};

EVectorReport e_vector_experiment(const AlgebraShape& shape);

struct CenterVerdict {
  bool central;
  std::optional<Quasipoint> failing;
};

/// A subalgebra whose trace is a quasipoint at every sampled ideal behaves
/// like (a piece of) the center. Partition subalgebras always pass; a
/// maximal abelian one with n >= 2 always yields a failing sample, found by
/// the two-column construction even when the random draw misses.
CenterVerdict center_detector(const Masa& m, int samples, std::uint64_t seed,
                              double tol = kTol);
CenterVerdict center_detector(const CenterPartitionSubalgebra& sub,
                              int samples, std::uint64_t seed);

}  // namespace stonespec
