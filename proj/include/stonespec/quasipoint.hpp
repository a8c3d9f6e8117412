#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "stonespec/block.hpp"

namespace stonespec {

/// A maximal dual ideal of P(R), stored in parametrized form: the center
/// atom it sits over and the phase-canonical unit ray generating it. The
/// ideal itself is exposed through qp_contains.
class Quasipoint {
 public:
  Quasipoint(AlgebraShape shape, int block, Cvec ray, double tol = kTol);

  const AlgebraShape& shape() const { return shape_; }
  int block() const { return block_; }
  const Cvec& ray() const { return ray_; }

 private:
  AlgebraShape shape_;
  int block_;
  Cvec ray_;
};

/// Membership of P in the dual ideal: block `block` of P fixes the ray.
bool qp_contains(const Quasipoint& qp, const BlockProjection& p,
                 double tol = kTol);

/// Same atom and equal rays.
bool qp_equal(const Quasipoint& a, const Quasipoint& b, double tol = kTol);

/// The minimal member: vv* at the atom, zero elsewhere.
BlockProjection generating_projection(const Quasipoint& qp);

/// The restriction of the ideal to the center.
CenterAtom zeta_center(const Quasipoint& qp);

/// The restriction to a subalgebra of the center: the partition cell holding
/// the atom.
const std::vector<int>& zeta_subalgebra(const Quasipoint& qp,
                                        const CenterPartitionSubalgebra& sub);

/// The unique quasipoint over beta containing the abelian projection E.
Quasipoint quasipoint_from_abelian(const BlockProjection& e,
                                   const CenterAtom& beta,
                                   double rank_tol = kRankTol,
                                   double tol = kTol);

/// The section through E: one quasipoint per atom of the central support,
/// keyed by atom index. zeta_center inverts it on its domain.
std::map<int, Quasipoint> section_sigma(const BlockProjection& e,
                                        double rank_tol = kRankTol,
                                        double tol = kTol);

/// The central factor p with P /\ E = pE; every subprojection of an abelian
/// projection is a central multiple of it.
CentralProjection meet_with_abelian_central_factor(const BlockProjection& p,
                                                   const BlockProjection& e,
                                                   double tol = kTol);

/// Pushforward along a blockwise partial isometry whose initial projection
/// lies in the ideal: the ray moves by the atom block of theta.
Quasipoint theta_pushforward(const BlockOperator& theta, const Quasipoint& qp,
                             double tol = kTol);

/// T.B for a blockwise unitary T.
Quasipoint unitary_action(const BlockOperator& t, const Quasipoint& qp,
                          double tol = kTol);

/// A unitary carrying one quasipoint to another in the same fibre: the ray
/// map at the shared atom, identity elsewhere. Quasipoints over different
/// atoms are never related this way.
BlockOperator transitive_witness(const Quasipoint& a, const Quasipoint& b);

/// The four equivalent descriptions of T fixing a quasipoint. The overlap
/// threshold is 1 - tol on |<v, Tv>|; the conjugation and commutation checks
/// run at the matching square-root scale, since a ray fixed to first order
/// tol moves those residuals by sqrt(2 tol).
struct IsotropyReport {
  bool overlap_fixed = false;   // |<v, T_i v>| >= 1 - tol
  bool action_fixed = false;    // T.B = B as quasipoints
  bool conjugate_in = false;    // T E T* stays in the ideal, E = vv* at i
  bool commutes = false;        // T_i commutes with vv*
  bool all_agree() const {
    return overlap_fixed == action_fixed && overlap_fixed == conjugate_in &&
           overlap_fixed == commutes;
  }
};

std::pair<bool, IsotropyReport> isotropy_test(const BlockOperator& t,
                                              const Quasipoint& qp,
                                              double tol = kTol);

/// A finite set of projections with nonzero total meet; the germ of a dual
/// ideal.
struct FilterBase {
  AlgebraShape shape;
  std::vector<BlockProjection> elements;
};

/// Iterated blockwise meet of all elements.
BlockProjection filter_total_meet(const FilterBase& f,
                                  double meet_tol = kMeetTol);

/// Extends a filter base to a full quasipoint: take the total meet G, pick
/// an atom of its central support (preferred_atom when given and admissible,
/// smallest index otherwise), and generate from the first range-basis vector
/// of the atom block. Every element of the base lands in the resulting
/// ideal.
Quasipoint extend_filterbase(
    const FilterBase& f,
    std::optional<CenterAtom> preferred_atom = std::nullopt,
    double meet_tol = kMeetTol, double rank_tol = kRankTol);

/// Deterministic sample of quasipoints over one atom, rays uniform on the
/// unit sphere.
std::vector<Quasipoint> fibre_sample(const CenterAtom& beta, int count,
                                     std::uint64_t seed);

/// An F-socle: the part of the ideal below a member F. Its least element is
/// the generating projection.
struct SocleDescriptor {
  Quasipoint point;
  BlockProjection bound;
  BlockProjection minimal;
};

SocleDescriptor socle_descriptor(const Quasipoint& qp,
                                 const BlockProjection& f, double tol = kTol);

}  // namespace stonespec
