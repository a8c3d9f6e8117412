#include "stonespec/quasipoint.hpp"

#include <cmath>
#include <string>

namespace stonespec {

Quasipoint::Quasipoint(AlgebraShape shape, int block, Cvec ray, double tol)
    : shape_(shape), block_(block), ray_(std::move(ray)) {
  validate_shape(shape_);
  if (block_ < 0 || block_ >= shape_.num_blocks) {
    throw BadInput("quasipoint block index out of range");
  }
  if (ray_.size() != shape_.block_dim) {
    throw BadInput("quasipoint ray has the wrong dimension");
  }
  const double norm = ray_.norm();
  if (std::abs(norm - 1.0) > tol) {
    throw BadInput("quasipoint ray must be a unit vector");
  }
  ray_ = phase_canonical(ray_ / norm);
}

bool qp_contains(const Quasipoint& qp, const BlockProjection& p, double tol) {
  if (!(qp.shape() == p.shape())) {
    throw ShapeMismatch("quasipoint and projection live in different algebras");
  }
  const Cmat& block = p.block(qp.block()).mat();
  return (block * qp.ray() - qp.ray()).norm() <= tol;
}

bool qp_equal(const Quasipoint& a, const Quasipoint& b, double tol) {
  if (!(a.shape() == b.shape())) {
    throw ShapeMismatch("quasipoints live in different algebras");
  }
  return a.block() == b.block() && rays_equal(a.ray(), b.ray(), tol);
}

BlockProjection generating_projection(const Quasipoint& qp) {
  std::vector<Projection> blocks;
  const int n = qp.shape().block_dim;
  blocks.reserve(static_cast<std::size_t>(qp.shape().num_blocks));
  for (int k = 0; k < qp.shape().num_blocks; ++k) {
    blocks.push_back(k == qp.block() ? Projection::onto_ray(qp.ray())
                                     : Projection::zero(n));
  }
  return BlockProjection(qp.shape(), std::move(blocks));
}

CenterAtom zeta_center(const Quasipoint& qp) {
  return CenterAtom{qp.shape(), qp.block()};
}

const std::vector<int>& zeta_subalgebra(const Quasipoint& qp,
                                        const CenterPartitionSubalgebra& sub) {
  if (!(qp.shape() == sub.shape())) {
    throw ShapeMismatch("quasipoint and subalgebra live in different algebras");
  }
  return sub.cell_containing(qp.block());
}

Quasipoint quasipoint_from_abelian(const BlockProjection& e,
                                   const CenterAtom& beta, double rank_tol,
                                   double tol) {
  validate_atom(beta);
  if (!(e.shape() == beta.shape)) {
    throw ShapeMismatch("projection and atom live in different algebras");
  }
  if (!is_abelian_projection(e, rank_tol)) {
    throw NotAbelian("quasipoint_from_abelian requires an abelian projection");
  }
  if (!central_support(e, tol).contains(beta.index)) {
    throw NotOverBeta("the abelian projection vanishes at the atom");
  }
  const Cvec v = range_basis(e.block(beta.index), rank_tol).col(0);
  return Quasipoint(e.shape(), beta.index, v, tol);
}

std::map<int, Quasipoint> section_sigma(const BlockProjection& e,
                                        double rank_tol, double tol) {
  if (!is_abelian_projection(e, rank_tol)) {
    throw NotAbelian("section_sigma requires an abelian projection");
  }
  std::map<int, Quasipoint> out;
  for (int k : central_support(e, tol).support()) {
    out.emplace(k, quasipoint_from_abelian(e, CenterAtom{e.shape(), k},
                                           rank_tol, tol));
  }
  return out;
}

CentralProjection meet_with_abelian_central_factor(const BlockProjection& p,
                                                   const BlockProjection& e,
                                                   double tol) {
  if (!(p.shape() == e.shape())) {
    throw ShapeMismatch("projections live in different algebras");
  }
  if (!is_abelian_projection(e)) {
    throw NotAbelian("central factor extraction requires an abelian input");
  }
  CentralProjection out(p.shape());
  for (int k = 0; k < p.shape().num_blocks; ++k) {
    if (e.block(k).mat().norm() <= tol) continue;
    if (project_leq(e.block(k), p.block(k), tol)) out.insert(k);
  }
  return out;
}

namespace {

void require_unitary(const BlockOperator& t, double tol) {
  for (const Cmat& block : t.blocks()) {
    if (!is_unitary(block, tol)) {
      throw NotUnitary("operator is not blockwise unitary within tol");
    }
  }
}

}  // namespace

Quasipoint theta_pushforward(const BlockOperator& theta, const Quasipoint& qp,
                             double tol) {
  if (!(theta.shape() == qp.shape())) {
    throw ShapeMismatch("partial isometry and quasipoint shapes differ");
  }
  std::vector<Projection> initial_blocks;
  for (const Cmat& block : theta.blocks()) {
    const PartialIsometry pi(block, std::max(tol, 1e-7));
    initial_blocks.push_back(pi.initial());
  }
  const BlockProjection initial(theta.shape(), std::move(initial_blocks));
  if (!qp_contains(qp, initial, tol)) {
    throw NotInDomain("the initial projection of theta is not in the ideal");
  }
  const Cvec image = theta.block(qp.block()) * qp.ray();
  return Quasipoint(qp.shape(), qp.block(), image / image.norm());
}

Quasipoint unitary_action(const BlockOperator& t, const Quasipoint& qp,
                          double tol) {
  if (!(t.shape() == qp.shape())) {
    throw ShapeMismatch("unitary and quasipoint shapes differ");
  }
  require_unitary(t, std::max(tol, 1e-9));
  const Cvec image = t.block(qp.block()) * qp.ray();
  return Quasipoint(qp.shape(), qp.block(), image / image.norm());
}

BlockOperator transitive_witness(const Quasipoint& a, const Quasipoint& b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeMismatch("quasipoints live in different algebras");
  }
  if (a.block() != b.block()) {
    throw DifferentFibre("quasipoints sit over different center atoms");
  }
  std::vector<Cmat> blocks;
  const int n = a.shape().block_dim;
  blocks.reserve(static_cast<std::size_t>(a.shape().num_blocks));
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    blocks.push_back(k == a.block() ? unitary_mapping_ray(a.ray(), b.ray())
                                    : Cmat::Identity(n, n));
  }
  return BlockOperator(a.shape(), std::move(blocks));
}

std::pair<bool, IsotropyReport> isotropy_test(const BlockOperator& t,
                                              const Quasipoint& qp,
                                              double tol) {
  if (!(t.shape() == qp.shape())) {
    throw ShapeMismatch("unitary and quasipoint shapes differ");
  }
  require_unitary(t, std::max(tol, 1e-9));
  const Cmat& ti = t.block(qp.block());
  const Cvec& v = qp.ray();
  const double sqrt_scale = std::sqrt(2.0 * tol);

  IsotropyReport report;
  report.overlap_fixed = std::abs(v.dot(ti * v)) >= 1.0 - tol;
  report.action_fixed = qp_equal(unitary_action(t, qp, tol), qp, tol);

  const BlockProjection e = generating_projection(qp);
  std::vector<Cmat> conjugated;
  for (int k = 0; k < qp.shape().num_blocks; ++k) {
    conjugated.push_back(t.block(k) * e.block(k).mat() *
                         t.block(k).adjoint());
  }
  const BlockProjection tet(
      BlockOperator(qp.shape(), std::move(conjugated)), 1e-7);
  report.conjugate_in = qp_contains(qp, tet, sqrt_scale);

  const Cmat vv = v * v.adjoint();
  report.commutes = (ti * vv - vv * ti).norm() <= 2.0 * sqrt_scale;

  return {report.overlap_fixed, report};
}

BlockProjection filter_total_meet(const FilterBase& f, double meet_tol) {
  validate_shape(f.shape);
  BlockProjection total = BlockProjection::identity(f.shape);
  for (const BlockProjection& p : f.elements) {
    if (!(p.shape() == f.shape)) {
      throw ShapeMismatch("filter base element has the wrong shape");
    }
    total = block_meet(total, p, meet_tol);
  }
  return total;
}

Quasipoint extend_filterbase(const FilterBase& f,
                             std::optional<CenterAtom> preferred_atom,
                             double meet_tol, double rank_tol) {
  const BlockProjection total = filter_total_meet(f, meet_tol);
  const CentralProjection supp = central_support(total);
  if (supp.empty()) {
    throw NotAFilterBase("total meet of the filter base is zero");
  }
  int atom = supp.support().front();
  if (preferred_atom.has_value()) {
    validate_atom(*preferred_atom);
    if (!(preferred_atom->shape == f.shape)) {
      throw ShapeMismatch("preferred atom shape differs from the base");
    }
    if (!supp.contains(preferred_atom->index)) {
      throw AtomNotAdmissible(
          "the preferred atom is outside the support of the total meet");
    }
    atom = preferred_atom->index;
  }
  const Cvec v = range_basis(total.block(atom), rank_tol).col(0);
  return Quasipoint(f.shape, atom, v);
}

std::vector<Quasipoint> fibre_sample(const CenterAtom& beta, int count,
                                     std::uint64_t seed) {
  validate_atom(beta);
  if (count < 0) throw BadInput("fibre_sample count must be nonnegative");
  Rng rng(seed);
  std::vector<Quasipoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng stream = rng.split(static_cast<std::uint64_t>(i));
    out.emplace_back(beta.shape, beta.index,
                     random_unit_vector(beta.shape.block_dim, stream));
  }
  return out;
}

SocleDescriptor socle_descriptor(const Quasipoint& qp,
                                 const BlockProjection& f, double tol) {
  if (!qp_contains(qp, f, tol)) {
    throw NotInDomain("the bounding projection is not a member of the ideal");
  }
  return SocleDescriptor{qp, f, generating_projection(qp)};
}

}  // namespace stonespec
