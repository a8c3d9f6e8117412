#pragma once

#include <optional>
#include <vector>

#include "stonespec/matrix.hpp"

namespace stonespec {

/// R = direct sum of m copies of M_n. Block indices are 0-based everywhere,
/// including serialized form.
struct AlgebraShape {
  int num_blocks = 1;  // m
  int block_dim = 1;   // n
  bool operator==(const AlgebraShape&) const = default;
};

void validate_shape(const AlgebraShape& shape);

/// An element of R: m complex n x n matrices.
class BlockOperator {
 public:
  BlockOperator(AlgebraShape shape, std::vector<Cmat> blocks);

  static BlockOperator zero(const AlgebraShape& shape);
  static BlockOperator identity(const AlgebraShape& shape);

  const AlgebraShape& shape() const { return shape_; }
  const Cmat& block(int k) const { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<Cmat>& blocks() const { return blocks_; }

  BlockOperator adjoint() const;
  double norm() const;  // operator norm: max over blocks

 private:
  AlgebraShape shape_;
  std::vector<Cmat> blocks_;
};

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator*(Complex scale, const BlockOperator& a);

/// A projection in R: every block a validated Projection.
class BlockProjection {
 public:
  BlockProjection(AlgebraShape shape, std::vector<Projection> blocks);
  /// Validates blockwise.
  explicit BlockProjection(const BlockOperator& op, double tol = kTol);

  static BlockProjection zero(const AlgebraShape& shape);
  static BlockProjection identity(const AlgebraShape& shape);

  const AlgebraShape& shape() const { return shape_; }
  const Projection& block(int k) const {
    return blocks_[static_cast<std::size_t>(k)];
  }
  BlockOperator op() const;
  BlockProjection complement() const;

 private:
  AlgebraShape shape_;
  std::vector<Projection> blocks_;
};

BlockProjection block_meet(const BlockProjection& p, const BlockProjection& q,
                           double meet_tol = kMeetTol);
BlockProjection block_join(const BlockProjection& p, const BlockProjection& q,
                           double meet_tol = kMeetTol);
bool block_leq(const BlockProjection& p, const BlockProjection& q,
               double tol = kTol);
bool block_equal(const BlockProjection& p, const BlockProjection& q,
                 double tol = kTol);

/// A projection in the center: a subset of block indices.
class CentralProjection {
 public:
  explicit CentralProjection(AlgebraShape shape);
  CentralProjection(AlgebraShape shape, const std::vector<int>& support);

  static CentralProjection full(const AlgebraShape& shape);

  const AlgebraShape& shape() const { return shape_; }
  bool contains(int k) const { return mask_[static_cast<std::size_t>(k)]; }
  void insert(int k);
  /// Sorted block indices.
  std::vector<int> support() const;
  int size() const;
  bool empty() const { return size() == 0; }

  CentralProjection complement() const;
  BlockProjection to_projection() const;

  bool operator==(const CentralProjection&) const = default;

 private:
  AlgebraShape shape_;
  std::vector<bool> mask_;
};

CentralProjection central_meet(const CentralProjection& p,
                               const CentralProjection& q);
CentralProjection central_join(const CentralProjection& p,
                               const CentralProjection& q);
bool central_leq(const CentralProjection& p, const CentralProjection& q);

/// A quasipoint of the center C = C^m: the principal filter at one block.
struct CenterAtom {
  AlgebraShape shape;
  int index = 0;
};

void validate_atom(const CenterAtom& beta);

/// A unital von Neumann subalgebra of the center, given by the partition of
/// blocks it fails to separate.
class CenterPartitionSubalgebra {
 public:
  CenterPartitionSubalgebra(AlgebraShape shape,
                            std::vector<std::vector<int>> cells);

  static CenterPartitionSubalgebra full_center(const AlgebraShape& shape);
  static CenterPartitionSubalgebra trivial(const AlgebraShape& shape);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<int>& cell_containing(int k) const;

 private:
  AlgebraShape shape_;
  std::vector<std::vector<int>> cells_;  // each sorted; sorted by first entry
  std::vector<int> cell_of_;
};

/// A column vector over C: one vector in C^n per block.
class ModuleVector {
 public:
  ModuleVector(AlgebraShape shape, std::vector<Cvec> blocks);

  const AlgebraShape& shape() const { return shape_; }
  const Cvec& block(int k) const { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<Cvec>& blocks() const { return blocks_; }

 private:
  AlgebraShape shape_;
  std::vector<Cvec> blocks_;
};

/// Smallest central projection above P: the blocks where P does not vanish.
CentralProjection central_support(const BlockProjection& p, double tol = kTol);

/// Smallest projection of the subalgebra above P: union of the cells meeting
/// the central support.
CentralProjection subalgebra_support(const BlockProjection& p,
                                     const CenterPartitionSubalgebra& sub,
                                     double tol = kTol);

/// Largest central projection below Q; equals I - central_support(I - Q).
CentralProjection central_kernel(const BlockProjection& q, double tol = kTol);

/// The blocks where a projection has each possible rank j in 1..n. The cells
/// are disjoint with union the central support.
class RankDecomposition {
 public:
  explicit RankDecomposition(std::vector<CentralProjection> by_rank);
  /// Blocks of rank j, 1 <= j <= n.
  const CentralProjection& at(int j) const;
  int max_rank() const { return static_cast<int>(by_rank_.size()); }

 private:
  std::vector<CentralProjection> by_rank_;
};

RankDecomposition rank_decomposition(const BlockProjection& p,
                                     double rank_tol = kRankTol);

bool is_projection_over_beta(const BlockProjection& p, const CenterAtom& beta,
                             double tol = kTol);

/// Rank of the beta block. Requires P to be a projection over beta.
int rank_over_beta(const BlockProjection& p, const CenterAtom& beta,
                   double rank_tol = kRankTol);

/// A ~_beta B: some central p in the filter beta has pA = pB. For the
/// principal filter at block i this is exactly equality of block i.
bool beta_equivalent(const BlockOperator& a, const BlockOperator& b,
                     const CenterAtom& beta, double tol = kTol);

bool beta_class_leq(const BlockProjection& p, const BlockProjection& q,
                    const CenterAtom& beta, double tol = kTol);

/// Representative of [P] /\ [Q]: the blockwise meet (its beta block is the
/// one that matters).
BlockProjection beta_class_meet(const BlockProjection& p,
                                const BlockProjection& q,
                                const CenterAtom& beta,
                                double meet_tol = kMeetTol);

/// Operator norm of the beta block: the infimum over the filter is attained
/// at the indicator of {beta.index}.
double beta_seminorm(const BlockOperator& a, const CenterAtom& beta);

/// Character of the center at beta. Requires every block of c to be a scalar
/// multiple of the identity.
Complex tau_beta(const BlockOperator& c, const CenterAtom& beta,
                 double tol = kTol);

/// E_a: b -> (b|a) a, blockwise a^(k) (a^(k))*. Requires every block norm to
/// be 0 or 1.
BlockProjection abelian_from_vector(const ModuleVector& a, double tol = kTol);

/// Every block has rank <= 1.
bool is_abelian_projection(const BlockProjection& p,
                           double rank_tol = kRankTol);

/// Recover a module vector with abelian_from_vector(a) = P. Blocks are phase
/// canonical; zero blocks stay zero.
ModuleVector abelian_vector_of(const BlockProjection& p,
                               double rank_tol = kRankTol);

/// If E_a = E_a', the per-block phases u with a' = u a (1 on zero blocks);
/// absent when the projections differ.
std::optional<std::vector<Complex>> abelian_equality_phase(
    const ModuleVector& a, const ModuleVector& a_prime, double tol = kTol);

/// G = E + (I - p) F for p the central support of E and F the abelian
/// projection onto the first coordinate; abelian with full central support.
BlockProjection extend_abelian_full_support(const BlockProjection& e,
                                            double tol = kTol);

BlockOperator random_block_operator(const AlgebraShape& shape, Rng& rng);
BlockProjection random_block_projection(const AlgebraShape& shape, Rng& rng);
/// Every block rank <= 1, at least one nonzero.
BlockProjection random_abelian_projection(const AlgebraShape& shape, Rng& rng);
/// Scalar blocks.
BlockOperator random_central_operator(const AlgebraShape& shape, Rng& rng);

}  // namespace stonespec
