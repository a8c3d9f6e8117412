#pragma once

#include <string>
#include <vector>

#include "stonespec/block.hpp"
#include "stonespec/parallel.hpp"

namespace stonespec {

struct LatticeDiagnostics {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the order axioms, existence of bottom/top and of all pairwise
/// greatest lower / least upper bounds. Explicit meet/join tables, when
/// given, are checked against the bounds derived from leq.
LatticeDiagnostics validate_lattice(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<bool>>& leq,
    const std::vector<std::vector<int>>& meet_table = {},
    const std::vector<std::vector<int>>& join_table = {});

/// An explicit finite lattice. Construction validates the order and derives
/// the meet/join tables, bottom, top and atoms.
class FiniteLattice {
 public:
  FiniteLattice(std::vector<std::string> labels,
                std::vector<std::vector<bool>> leq);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int a) const {
    return labels_[static_cast<std::size_t>(a)];
  }
  const std::vector<std::string>& labels() const { return labels_; }
  bool leq(int a, int b) const {
    return leq_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  const std::vector<std::vector<bool>>& order() const { return leq_; }
  int meet(int a, int b) const {
    return meet_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  int join(int a, int b) const {
    return join_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  const std::vector<std::vector<int>>& meet_table() const { return meet_; }
  const std::vector<std::vector<int>>& join_table() const { return join_; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }
  /// Elements covering bottom.
  const std::vector<int>& atoms() const { return atoms_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> meet_;
  std::vector<std::vector<int>> join_;
  int bottom_ = 0;
  int top_ = 0;
  std::vector<int> atoms_;
};

/// Subsets of {0..m-1} ordered by inclusion; labels like "{0,2}".
FiniteLattice boolean_lattice(int m);
/// A linear order with `length` elements.
FiniteLattice chain_lattice(int length);

/// A dual ideal: upward closed, meet closed, excludes bottom. Members sorted.
struct DualIdeal {
  std::vector<int> members;
  bool operator==(const DualIdeal&) const = default;
};

bool is_dual_ideal(const FiniteLattice& lat, const std::vector<int>& members);
DualIdeal principal_filter(const FiniteLattice& lat, int a);
bool ideal_contains(const DualIdeal& ideal, int a);

inline constexpr int kEnumerationCap = 64;

struct IdealEnumeration {
  std::vector<DualIdeal> direct;      // maximal meet-closed upsets, found directly
  std::vector<DualIdeal> from_atoms;  // principal filters at atoms
  bool agree() const { return direct == from_atoms; }
};

/// Both enumeration routes, each sorted by member list: direct enumeration
/// of meet-closed upsets (raw subset scan up to 20 elements, antichain seeds
/// above) and principal filters at atoms.
IdealEnumeration enumerate_ideals_both_routes(const FiniteLattice& lat,
                                              int cap = kEnumerationCap,
                                              ExecMode mode = ExecMode::serial);

/// All maximal dual ideals. Runs both routes and requires agreement.
std::vector<DualIdeal> enumerate_maximal_dual_ideals(
    const FiniteLattice& lat, int cap = kEnumerationCap,
    ExecMode mode = ExecMode::serial);

struct StoneBaseReport {
  bool passed = true;
  std::vector<std::string> failures;
};

/// Exhaustive check of the basic-open-set identities on Q(L): the base set
/// of bottom is empty, the base set of top is everything, and base sets
/// intersect along meets.
StoneBaseReport stone_base_check(const FiniteLattice& lat,
                                 int cap = kEnumerationCap,
                                 ExecMode mode = ExecMode::serial);

struct ProjectionSublattice {
  FiniteLattice lattice;
  std::vector<BlockProjection> elements;  // indexed like lattice elements
};

inline constexpr int kClosureCap = 4096;

/// Closure of pairwise commuting projections plus {0, I} under meet and
/// join. For commuting projections both are exact products: P /\ Q = PQ and
/// P \/ Q = P + Q - PQ.
ProjectionSublattice commuting_projection_sublattice(
    const std::vector<BlockProjection>& generators, double tol = kTol,
    int cap = kClosureCap);

}  // namespace stonespec
