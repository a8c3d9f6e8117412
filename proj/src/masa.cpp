#include "stonespec/masa.hpp"

#include <cmath>
#include <utility>

#include "stonespec/errors.hpp"

namespace stonespec {

namespace {

void require_unitary_block(const Cmat& u, double tol, const char* what) {
  const Cmat gram = u.adjoint() * u;
  if ((gram - Cmat::Identity(u.rows(), u.cols())).norm() > std::max(tol, 1e-9)) {
    throw NotUnitary(what);
  }
}

}  // namespace

Masa::Masa(AlgebraShape shape, std::vector<Cmat> bases, double tol)
    : shape_(shape), bases_(std::move(bases)) {
  validate_shape(shape_);
  if (static_cast<int>(bases_.size()) != shape_.num_blocks) {
    throw ShapeMismatch("masa: basis count does not match shape");
  }
  for (const Cmat& u : bases_) {
    if (u.rows() != shape_.block_dim || u.cols() != shape_.block_dim) {
      throw ShapeMismatch("masa: basis dimension does not match shape");
    }
    require_unitary_block(u, tol, "masa: basis is not unitary");
  }
}

Masa Masa::standard(const AlgebraShape& shape) {
  validate_shape(shape);
  std::vector<Cmat> bases(static_cast<std::size_t>(shape.num_blocks),
                          Cmat::Identity(shape.block_dim, shape.block_dim));
  return Masa(shape, std::move(bases));
}

Masa Masa::conjugated(const BlockOperator& t) const {
  if (!(t.shape() == shape_)) {
    throw ShapeMismatch("masa: conjugating operator has a different shape");
  }
  std::vector<Cmat> bases;
  bases.reserve(bases_.size());
  for (int k = 0; k < shape_.num_blocks; ++k) {
    require_unitary_block(t.block(k), 1e-9,
                          "masa: conjugating operator is not unitary");
    bases.push_back(t.block(k) * basis(k));
  }
  return Masa(shape_, std::move(bases));
}

const Cmat& Masa::basis(int block) const {
  if (block < 0 || block >= shape_.num_blocks) {
    throw BadInput("masa: block index out of range");
  }
  return bases_[static_cast<std::size_t>(block)];
}

Cvec Masa::column(int block, int index) const {
  const Cmat& u = basis(block);
  if (index < 0 || index >= shape_.block_dim) {
    throw BadInput("masa: column index out of range");
  }
  return u.col(index);
}

BlockProjection Masa::column_projection(int block, int index) const {
  const Cvec u = column(block, index);
  std::vector<Projection> blocks;
  for (int k = 0; k < shape_.num_blocks; ++k) {
    blocks.push_back(k == block ? Projection::onto_ray(u)
                                : Projection::zero(shape_.block_dim));
  }
  return BlockProjection(shape_, std::move(blocks));
}

MasaTrace masa_trace(const Quasipoint& qp, const Masa& m, double tol) {
  if (!(qp.shape() == m.shape())) {
    throw ShapeMismatch("masa trace: shapes differ");
  }
  const int i = qp.block();
  const int n = qp.shape().block_dim;
  for (int j = 0; j < n; ++j) {
    if (rays_equal(qp.ray(), m.column(i, j), tol)) {
      return MasaTrace{MasaQuasipoint{qp.shape(), i, j}, std::nullopt};
    }
  }
  // The ray has weight on at least two columns. A single column with
  // nonzero weight serves as the witness: neither it nor its complement
  // holds the ray.
  int split = 0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(m.column(i, j).dot(qp.ray())) > tol) {
      split = j;
      break;
    }
  }
  TraceFailure failure{m.column_projection(i, split), false, false};
  failure.witness_in_ideal = qp_contains(qp, failure.witness, tol);
  failure.complement_in_ideal =
      qp_contains(qp, failure.witness.complement(), tol);
  return MasaTrace{std::nullopt, std::move(failure)};
}

Masa admissible_masa_for(const Quasipoint& qp) {
  const AlgebraShape shape = qp.shape();
  std::vector<Cmat> bases(static_cast<std::size_t>(shape.num_blocks),
                          Cmat::Identity(shape.block_dim, shape.block_dim));
  bases[static_cast<std::size_t>(qp.block())] = complete_to_unitary(qp.ray());
  return Masa(shape, std::move(bases));
}

std::vector<Quasipoint> admissible_set_descriptor(const Masa& m) {
  std::vector<Quasipoint> points;
  const AlgebraShape shape = m.shape();
  points.reserve(static_cast<std::size_t>(shape.num_blocks) *
                 static_cast<std::size_t>(shape.block_dim));
  for (int k = 0; k < shape.num_blocks; ++k) {
    for (int j = 0; j < shape.block_dim; ++j) {
      points.emplace_back(shape, k, m.column(k, j));
    }
  }
  return points;
}

std::optional<PrimenessWitness> join_prime_violation(const Quasipoint& qp) {
  const AlgebraShape shape = qp.shape();
  const int n = shape.block_dim;
  if (n < 2) return std::nullopt;

  const Cvec v = qp.ray();
  int pick = 0;
  for (int k = 0; k < n; ++k) {
    if (!rays_equal(Cvec::Unit(n, k), v, 1e-6)) {
      pick = k;
      break;
    }
  }
  Cvec u = Cvec::Unit(n, pick) - v.dot(Cvec::Unit(n, pick)) * v;
  u /= u.norm();
  const Cvec w = (v + u) / std::sqrt(2.0);

  const int i = qp.block();
  std::vector<Projection> first, second;
  for (int k = 0; k < shape.num_blocks; ++k) {
    first.push_back(k == i ? Projection::onto_ray(w) : Projection::zero(n));
    second.push_back(k == i ? Projection(Cmat::Identity(n, n) -
                                         first.back().mat())
                            : Projection::identity(n));
  }
  PrimenessWitness witness{
      {BlockProjection(shape, first), BlockProjection(shape, second)},
      BlockProjection::identity(shape),
      false,
      {}};
  witness.join = block_join(witness.parts[0], witness.parts[1]);
  witness.join_in_ideal = qp_contains(qp, witness.join, 1e-7);
  for (const BlockProjection& part : witness.parts) {
    witness.part_in_ideal.push_back(qp_contains(qp, part, 1e-7));
  }
  return witness;
}

bool EVectorReport::all_certified() const {
  if (!sum_is_identity) return false;
  for (const auto& per_atom : column_in_ideal) {
    for (bool member : per_atom) {
      if (member) return false;
    }
  }
  for (bool comparable : phase_comparable) {
    if (comparable) return false;
  }
  return true;
}

EVectorReport e_vector_experiment(const AlgebraShape& shape) {
  validate_shape(shape);
  const int n = shape.block_dim;
  if (n < 2) {
    throw RequiresNGe2("e vector experiment needs block dimension >= 2");
  }

  const Cvec uniform = Cvec::Ones(n) / std::sqrt(static_cast<double>(n));
  const ModuleVector e(
      shape, std::vector<Cvec>(static_cast<std::size_t>(shape.num_blocks),
                               uniform));

  std::vector<ModuleVector> columns;
  std::vector<BlockProjection> column_projections;
  BlockOperator sum = BlockOperator::zero(shape);
  for (int k = 0; k < n; ++k) {
    const ModuleVector ek(
        shape, std::vector<Cvec>(static_cast<std::size_t>(shape.num_blocks),
                                 Cvec::Unit(n, k)));
    columns.push_back(ek);
    column_projections.push_back(abelian_from_vector(ek));
    sum = sum + column_projections.back().op();
  }

  EVectorReport report{shape, e, false, {}, {}};
  report.sum_is_identity =
      (sum - BlockOperator::identity(shape)).norm() <= 1e-12;
  for (int i = 0; i < shape.num_blocks; ++i) {
    const Quasipoint qp(shape, i, uniform);
    std::vector<bool> members;
    for (int k = 0; k < n; ++k) {
      members.push_back(
          qp_contains(qp, column_projections[static_cast<std::size_t>(k)]));
    }
    report.column_in_ideal.push_back(std::move(members));
  }
  for (int k = 0; k < n; ++k) {
    report.phase_comparable.push_back(
        abelian_equality_phase(e, columns[static_cast<std::size_t>(k)])
            .has_value());
  }
  return report;
}

CenterVerdict center_detector(const Masa& m, int samples, std::uint64_t seed,
                              double tol) {
  const AlgebraShape shape = m.shape();
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Rng tr = rng.split(s);
    const int atom = static_cast<int>(
        tr.below(static_cast<std::uint64_t>(shape.num_blocks)));
    const Quasipoint qp(shape, atom,
                        random_unit_vector(shape.block_dim, tr));
    if (!masa_trace(qp, m, tol).success()) {
      return CenterVerdict{false, qp};
    }
  }
  // Random draws can miss the failure set; the two-column mixture cannot.
  if (shape.block_dim >= 2) {
    for (int k = 0; k < shape.num_blocks; ++k) {
      const Cvec mix =
          (m.column(k, 0) + m.column(k, 1)) / std::sqrt(2.0);
      const Quasipoint qp(shape, k, mix);
      if (!masa_trace(qp, m, tol).success()) {
        return CenterVerdict{false, qp};
      }
    }
  }
  return CenterVerdict{true, std::nullopt};
}

CenterVerdict center_detector(const CenterPartitionSubalgebra& sub,
                              int samples, std::uint64_t seed) {
  const AlgebraShape shape = sub.shape();
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Rng tr = rng.split(s);
    const int atom = static_cast<int>(
        tr.below(static_cast<std::uint64_t>(shape.num_blocks)));
    const Quasipoint qp(shape, atom,
                        random_unit_vector(shape.block_dim, tr));
    // The trace is the principal filter at the cell holding the atom: each
    // cell projection is a member exactly when its cell is that one.
    const std::vector<int> home = sub.cell_containing(atom);
    for (const std::vector<int>& cell : sub.cells()) {
      CentralProjection c(shape);
      for (int member : cell) c.insert(member);
      const bool in_ideal = qp_contains(qp, c.to_projection());
      if (in_ideal != (cell == home)) {
        return CenterVerdict{false, qp};
      }
    }
  }
  return CenterVerdict{true, std::nullopt};
}

}  // namespace stonespec
