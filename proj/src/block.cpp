#include "stonespec/block.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stonespec {

void validate_shape(const AlgebraShape& shape) {
  if (shape.num_blocks < 1 || shape.block_dim < 1) {
    throw ShapeMismatch("algebra shape requires m >= 1 and n >= 1");
  }
}

namespace {

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b) {
  if (!(a == b)) throw ShapeMismatch("operands live in different algebras");
}

}  // namespace

BlockOperator::BlockOperator(AlgebraShape shape, std::vector<Cmat> blocks)
    : shape_(shape), blocks_(std::move(blocks)) {
  validate_shape(shape_);
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks) {
    throw ShapeMismatch("block count does not match shape");
  }
  for (const Cmat& b : blocks_) {
    if (b.rows() != shape_.block_dim || b.cols() != shape_.block_dim) {
      throw ShapeMismatch("block size does not match shape");
    }
  }
}

BlockOperator BlockOperator::zero(const AlgebraShape& shape) {
  validate_shape(shape);
  std::vector<Cmat> blocks(static_cast<std::size_t>(shape.num_blocks),
                           Cmat::Zero(shape.block_dim, shape.block_dim));
  return BlockOperator(shape, std::move(blocks));
}

BlockOperator BlockOperator::identity(const AlgebraShape& shape) {
  validate_shape(shape);
  std::vector<Cmat> blocks(static_cast<std::size_t>(shape.num_blocks),
                           Cmat::Identity(shape.block_dim, shape.block_dim));
  return BlockOperator(shape, std::move(blocks));
}

BlockOperator BlockOperator::adjoint() const {
  std::vector<Cmat> blocks;
  blocks.reserve(blocks_.size());
  for (const Cmat& b : blocks_) blocks.push_back(b.adjoint());
  return BlockOperator(shape_, std::move(blocks));
}

double BlockOperator::norm() const {
  double best = 0.0;
  for (const Cmat& b : blocks_) best = std::max(best, operator_norm(b));
  return best;
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  require_same_shape(a.shape(), b.shape());
  std::vector<Cmat> blocks;
  blocks.reserve(a.blocks().size());
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    blocks.push_back(a.block(k) + b.block(k));
  }
  return BlockOperator(a.shape(), std::move(blocks));
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  require_same_shape(a.shape(), b.shape());
  std::vector<Cmat> blocks;
  blocks.reserve(a.blocks().size());
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    blocks.push_back(a.block(k) - b.block(k));
  }
  return BlockOperator(a.shape(), std::move(blocks));
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  require_same_shape(a.shape(), b.shape());
  std::vector<Cmat> blocks;
  blocks.reserve(a.blocks().size());
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    blocks.push_back(a.block(k) * b.block(k));
  }
  return BlockOperator(a.shape(), std::move(blocks));
}

BlockOperator operator*(Complex scale, const BlockOperator& a) {
  std::vector<Cmat> blocks;
  blocks.reserve(a.blocks().size());
  for (const Cmat& b : a.blocks()) blocks.push_back(scale * b);
  return BlockOperator(a.shape(), std::move(blocks));
}

BlockProjection::BlockProjection(AlgebraShape shape,
                                 std::vector<Projection> blocks)
    : shape_(shape), blocks_(std::move(blocks)) {
  validate_shape(shape_);
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks) {
    throw ShapeMismatch("block count does not match shape");
  }
  for (const Projection& b : blocks_) {
    if (b.dim() != shape_.block_dim) {
      throw ShapeMismatch("block size does not match shape");
    }
  }
}

BlockProjection::BlockProjection(const BlockOperator& op, double tol)
    : shape_(op.shape()) {
  blocks_.reserve(op.blocks().size());
  for (const Cmat& b : op.blocks()) blocks_.emplace_back(b, tol);
}

BlockProjection BlockProjection::zero(const AlgebraShape& shape) {
  validate_shape(shape);
  std::vector<Projection> blocks(static_cast<std::size_t>(shape.num_blocks),
                                 Projection::zero(shape.block_dim));
  return BlockProjection(shape, std::move(blocks));
}

BlockProjection BlockProjection::identity(const AlgebraShape& shape) {
  validate_shape(shape);
  std::vector<Projection> blocks(static_cast<std::size_t>(shape.num_blocks),
                                 Projection::identity(shape.block_dim));
  return BlockProjection(shape, std::move(blocks));
}

BlockOperator BlockProjection::op() const {
  std::vector<Cmat> blocks;
  blocks.reserve(blocks_.size());
  for (const Projection& b : blocks_) blocks.push_back(b.mat());
  return BlockOperator(shape_, std::move(blocks));
}

BlockProjection BlockProjection::complement() const {
  std::vector<Projection> blocks;
  blocks.reserve(blocks_.size());
  for (const Projection& b : blocks_) blocks.push_back(b.complement());
  return BlockProjection(shape_, std::move(blocks));
}

BlockProjection block_meet(const BlockProjection& p, const BlockProjection& q,
                           double meet_tol) {
  require_same_shape(p.shape(), q.shape());
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(p.shape().num_blocks));
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    blocks.push_back(project_meet(p.block(k), q.block(k), meet_tol));
  }
  return BlockProjection(p.shape(), std::move(blocks));
}

BlockProjection block_join(const BlockProjection& p, const BlockProjection& q,
                           double meet_tol) {
  require_same_shape(p.shape(), q.shape());
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(p.shape().num_blocks));
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    blocks.push_back(project_join(p.block(k), q.block(k), meet_tol));
  }
  return BlockProjection(p.shape(), std::move(blocks));
}

bool block_leq(const BlockProjection& p, const BlockProjection& q,
               double tol) {
  require_same_shape(p.shape(), q.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (!project_leq(p.block(k), q.block(k), tol)) return false;
  }
  return true;
}

bool block_equal(const BlockProjection& p, const BlockProjection& q,
                 double tol) {
  require_same_shape(p.shape(), q.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if ((p.block(k).mat() - q.block(k).mat()).norm() > tol) return false;
  }
  return true;
}

CentralProjection::CentralProjection(AlgebraShape shape)
    : shape_(shape), mask_(static_cast<std::size_t>(shape.num_blocks), false) {
  validate_shape(shape_);
}

CentralProjection::CentralProjection(AlgebraShape shape,
                                     const std::vector<int>& support)
    : CentralProjection(shape) {
  for (int k : support) insert(k);
}

CentralProjection CentralProjection::full(const AlgebraShape& shape) {
  CentralProjection out(shape);
  for (int k = 0; k < shape.num_blocks; ++k) out.insert(k);
  return out;
}

void CentralProjection::insert(int k) {
  if (k < 0 || k >= shape_.num_blocks) {
    throw ShapeMismatch("block index out of range: " + std::to_string(k));
  }
  mask_[static_cast<std::size_t>(k)] = true;
}

std::vector<int> CentralProjection::support() const {
  std::vector<int> out;
  for (int k = 0; k < shape_.num_blocks; ++k) {
    if (mask_[static_cast<std::size_t>(k)]) out.push_back(k);
  }
  return out;
}

int CentralProjection::size() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), true));
}

CentralProjection CentralProjection::complement() const {
  CentralProjection out(shape_);
  for (int k = 0; k < shape_.num_blocks; ++k) {
    if (!contains(k)) out.insert(k);
  }
  return out;
}

BlockProjection CentralProjection::to_projection() const {
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(shape_.num_blocks));
  for (int k = 0; k < shape_.num_blocks; ++k) {
    blocks.push_back(contains(k) ? Projection::identity(shape_.block_dim)
                                 : Projection::zero(shape_.block_dim));
  }
  return BlockProjection(shape_, std::move(blocks));
}

CentralProjection central_meet(const CentralProjection& p,
                               const CentralProjection& q) {
  require_same_shape(p.shape(), q.shape());
  CentralProjection out(p.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (p.contains(k) && q.contains(k)) out.insert(k);
  }
  return out;
}

CentralProjection central_join(const CentralProjection& p,
                               const CentralProjection& q) {
  require_same_shape(p.shape(), q.shape());
  CentralProjection out(p.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (p.contains(k) || q.contains(k)) out.insert(k);
  }
  return out;
}

bool central_leq(const CentralProjection& p, const CentralProjection& q) {
  require_same_shape(p.shape(), q.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (p.contains(k) && !q.contains(k)) return false;
  }
  return true;
}

void validate_atom(const CenterAtom& beta) {
  validate_shape(beta.shape);
  if (beta.index < 0 || beta.index >= beta.shape.num_blocks) {
    throw ShapeMismatch("center atom index out of range");
  }
}

CenterPartitionSubalgebra::CenterPartitionSubalgebra(
    AlgebraShape shape, std::vector<std::vector<int>> cells)
    : shape_(shape),
      cells_(std::move(cells)),
      cell_of_(static_cast<std::size_t>(shape.num_blocks), -1) {
  validate_shape(shape_);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].empty()) throw ShapeMismatch("partition cell is empty");
    std::sort(cells_[c].begin(), cells_[c].end());
    for (int k : cells_[c]) {
      if (k < 0 || k >= shape_.num_blocks) {
        throw ShapeMismatch("partition cell index out of range");
      }
      if (cell_of_[static_cast<std::size_t>(k)] != -1) {
        throw ShapeMismatch("partition cells overlap");
      }
      cell_of_[static_cast<std::size_t>(k)] = static_cast<int>(c);
    }
  }
  for (int owner : cell_of_) {
    if (owner == -1) throw ShapeMismatch("partition does not cover all blocks");
  }
  std::sort(cells_.begin(), cells_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int k : cells_[c]) cell_of_[static_cast<std::size_t>(k)] = static_cast<int>(c);
  }
}

CenterPartitionSubalgebra CenterPartitionSubalgebra::full_center(
    const AlgebraShape& shape) {
  std::vector<std::vector<int>> cells;
  for (int k = 0; k < shape.num_blocks; ++k) cells.push_back({k});
  return CenterPartitionSubalgebra(shape, std::move(cells));
}

CenterPartitionSubalgebra CenterPartitionSubalgebra::trivial(
    const AlgebraShape& shape) {
  std::vector<int> all(static_cast<std::size_t>(shape.num_blocks));
  for (int k = 0; k < shape.num_blocks; ++k) all[static_cast<std::size_t>(k)] = k;
  return CenterPartitionSubalgebra(shape, {all});
}

const std::vector<int>& CenterPartitionSubalgebra::cell_containing(
    int k) const {
  if (k < 0 || k >= shape_.num_blocks) {
    throw ShapeMismatch("block index out of range");
  }
  return cells_[static_cast<std::size_t>(cell_of_[static_cast<std::size_t>(k)])];
}

ModuleVector::ModuleVector(AlgebraShape shape, std::vector<Cvec> blocks)
    : shape_(shape), blocks_(std::move(blocks)) {
  validate_shape(shape_);
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks) {
    throw ShapeMismatch("block count does not match shape");
  }
  for (const Cvec& b : blocks_) {
    if (b.size() != shape_.block_dim) {
      throw ShapeMismatch("block vector size does not match shape");
    }
  }
}

CentralProjection central_support(const BlockProjection& p, double tol) {
  CentralProjection out(p.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (p.block(k).mat().norm() > tol) out.insert(k);
  }
  return out;
}

CentralProjection subalgebra_support(const BlockProjection& p,
                                     const CenterPartitionSubalgebra& sub,
                                     double tol) {
  require_same_shape(p.shape(), sub.shape());
  const CentralProjection supp = central_support(p, tol);
  CentralProjection out(p.shape());
  for (int k : supp.support()) {
    for (int j : sub.cell_containing(k)) out.insert(j);
  }
  return out;
}

CentralProjection central_kernel(const BlockProjection& q, double tol) {
  CentralProjection out(q.shape());
  const Cmat id = Cmat::Identity(q.shape().block_dim, q.shape().block_dim);
  for (int k = 0; k < q.shape().num_blocks; ++k) {
    if ((q.block(k).mat() - id).norm() <= tol) out.insert(k);
  }
  return out;
}

RankDecomposition::RankDecomposition(std::vector<CentralProjection> by_rank)
    : by_rank_(std::move(by_rank)) {}

const CentralProjection& RankDecomposition::at(int j) const {
  if (j < 1 || j > max_rank()) {
    throw BadRank("rank_decomposition index must lie in 1..n");
  }
  return by_rank_[static_cast<std::size_t>(j - 1)];
}

RankDecomposition rank_decomposition(const BlockProjection& p,
                                     double rank_tol) {
  const int n = p.shape().block_dim;
  std::vector<CentralProjection> by_rank(
      static_cast<std::size_t>(n), CentralProjection(p.shape()));
  bool any = false;
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    const int r = rank_of(p.block(k), rank_tol);
    if (r > 0) {
      by_rank[static_cast<std::size_t>(r - 1)].insert(k);
      any = true;
    }
  }
  if (!any) throw ZeroProjection("rank_decomposition requires P != 0");
  return RankDecomposition(std::move(by_rank));
}

bool is_projection_over_beta(const BlockProjection& p, const CenterAtom& beta,
                             double tol) {
  validate_atom(beta);
  require_same_shape(p.shape(), beta.shape);
  return central_support(p, tol).contains(beta.index);
}

int rank_over_beta(const BlockProjection& p, const CenterAtom& beta,
                   double rank_tol) {
  validate_atom(beta);
  require_same_shape(p.shape(), beta.shape);
  const int r = rank_of(p.block(beta.index), rank_tol);
  if (r == 0) throw NotOverBeta("P is not a projection over beta");
  return r;
}

bool beta_equivalent(const BlockOperator& a, const BlockOperator& b,
                     const CenterAtom& beta, double tol) {
  validate_atom(beta);
  require_same_shape(a.shape(), b.shape());
  require_same_shape(a.shape(), beta.shape);
  return (a.block(beta.index) - b.block(beta.index)).norm() <= tol;
}

bool beta_class_leq(const BlockProjection& p, const BlockProjection& q,
                    const CenterAtom& beta, double tol) {
  validate_atom(beta);
  require_same_shape(p.shape(), q.shape());
  require_same_shape(p.shape(), beta.shape);
  return project_leq(p.block(beta.index), q.block(beta.index), tol);
}

BlockProjection beta_class_meet(const BlockProjection& p,
                                const BlockProjection& q,
                                const CenterAtom& beta, double meet_tol) {
  validate_atom(beta);
  require_same_shape(p.shape(), beta.shape);
  return block_meet(p, q, meet_tol);
}

double beta_seminorm(const BlockOperator& a, const CenterAtom& beta) {
  validate_atom(beta);
  require_same_shape(a.shape(), beta.shape);
  return operator_norm(a.block(beta.index));
}

Complex tau_beta(const BlockOperator& c, const CenterAtom& beta, double tol) {
  validate_atom(beta);
  require_same_shape(c.shape(), beta.shape);
  const int n = c.shape().block_dim;
  const Cmat id = Cmat::Identity(n, n);
  for (int k = 0; k < c.shape().num_blocks; ++k) {
    const Complex scale = c.block(k).trace() / static_cast<double>(n);
    if ((c.block(k) - scale * id).norm() > tol) {
      throw NotCentral("tau_beta requires scalar blocks");
    }
  }
  return c.block(beta.index).trace() / static_cast<double>(n);
}

BlockProjection abelian_from_vector(const ModuleVector& a, double tol) {
  std::vector<Projection> blocks;
  blocks.reserve(a.blocks().size());
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    const double norm = a.block(k).norm();
    if (norm <= tol) {
      blocks.push_back(Projection::zero(a.shape().block_dim));
    } else if (std::abs(norm - 1.0) <= tol) {
      blocks.push_back(Projection::onto_ray(a.block(k) / norm));
    } else {
      throw NotSubnormalized("module vector block norms must be 0 or 1");
    }
  }
  return BlockProjection(a.shape(), std::move(blocks));
}

bool is_abelian_projection(const BlockProjection& p, double rank_tol) {
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (rank_of(p.block(k), rank_tol) > 1) return false;
  }
  return true;
}

ModuleVector abelian_vector_of(const BlockProjection& p, double rank_tol) {
  std::vector<Cvec> blocks;
  blocks.reserve(static_cast<std::size_t>(p.shape().num_blocks));
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    const int r = rank_of(p.block(k), rank_tol);
    if (r > 1) throw NotAbelian("projection has a block of rank above 1");
    if (r == 0) {
      blocks.push_back(Cvec::Zero(p.shape().block_dim));
    } else {
      blocks.push_back(phase_canonical(range_basis(p.block(k), rank_tol).col(0)));
    }
  }
  return ModuleVector(p.shape(), std::move(blocks));
}

std::optional<std::vector<Complex>> abelian_equality_phase(
    const ModuleVector& a, const ModuleVector& a_prime, double tol) {
  require_same_shape(a.shape(), a_prime.shape());
  std::vector<Complex> phases;
  phases.reserve(a.blocks().size());
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    const double na = a.block(k).norm();
    const double nb = a_prime.block(k).norm();
    if (na <= tol && nb <= tol) {
      phases.push_back(Complex(1.0, 0.0));
      continue;
    }
    if (na <= tol || nb <= tol) return std::nullopt;
    if (!rays_equal(a.block(k) / na, a_prime.block(k) / nb, tol)) {
      return std::nullopt;
    }
    const Complex inner = a.block(k).dot(a_prime.block(k));  // <a, a'>
    phases.push_back(inner / std::abs(inner));
  }
  return phases;
}

BlockProjection extend_abelian_full_support(const BlockProjection& e,
                                            double tol) {
  if (!is_abelian_projection(e)) {
    throw NotAbelian("extend_abelian_full_support requires an abelian input");
  }
  const CentralProjection supp = central_support(e, tol);
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(e.shape().num_blocks));
  for (int k = 0; k < e.shape().num_blocks; ++k) {
    if (supp.contains(k)) {
      blocks.push_back(e.block(k));
    } else {
      blocks.push_back(Projection::onto_ray(Cvec::Unit(e.shape().block_dim, 0)));
    }
  }
  return BlockProjection(e.shape(), std::move(blocks));
}

BlockOperator random_block_operator(const AlgebraShape& shape, Rng& rng) {
  validate_shape(shape);
  std::vector<Cmat> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks));
  for (int k = 0; k < shape.num_blocks; ++k) {
    Cmat b(shape.block_dim, shape.block_dim);
    for (int i = 0; i < shape.block_dim; ++i) {
      for (int j = 0; j < shape.block_dim; ++j) {
        b(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
    }
    blocks.push_back(std::move(b));
  }
  return BlockOperator(shape, std::move(blocks));
}

BlockProjection random_block_projection(const AlgebraShape& shape, Rng& rng) {
  validate_shape(shape);
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks));
  for (int k = 0; k < shape.num_blocks; ++k) {
    const int rank = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(shape.block_dim) + 1));
    blocks.push_back(random_projection(shape.block_dim, rank, rng));
  }
  return BlockProjection(shape, std::move(blocks));
}

BlockProjection random_abelian_projection(const AlgebraShape& shape,
                                          Rng& rng) {
  validate_shape(shape);
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks));
  bool any = false;
  for (int k = 0; k < shape.num_blocks; ++k) {
    const bool last = k + 1 == shape.num_blocks;
    const bool nonzero = (last && !any) || rng.below(4) != 0;
    if (nonzero) {
      blocks.push_back(Projection::onto_ray(
          random_unit_vector(shape.block_dim, rng)));
      any = true;
    } else {
      blocks.push_back(Projection::zero(shape.block_dim));
    }
  }
  return BlockProjection(shape, std::move(blocks));
}

BlockOperator random_central_operator(const AlgebraShape& shape, Rng& rng) {
  validate_shape(shape);
  std::vector<Cmat> blocks;
  blocks.reserve(static_cast<std::size_t>(shape.num_blocks));
  const Cmat id = Cmat::Identity(shape.block_dim, shape.block_dim);
  for (int k = 0; k < shape.num_blocks; ++k) {
    blocks.push_back(Complex(rng.gaussian(), rng.gaussian()) * id);
  }
  return BlockOperator(shape, std::move(blocks));
}

}  // namespace stonespec
