#include "stonespec/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

namespace stonespec {

namespace {

constexpr std::size_t kMaxViolations = 32;

void add_violation(LatticeDiagnostics& diag, std::string text) {
  if (diag.violations.size() < kMaxViolations) {
    diag.violations.push_back(std::move(text));
  }
}

// Index of the greatest lower bound of a and b under leq, or -1.
int derived_meet(const std::vector<std::vector<bool>>& leq, int a, int b) {
  const int n = static_cast<int>(leq.size());
  int best = -1;
  for (int x = 0; x < n; ++x) {
    if (leq[x][a] && leq[x][b]) {
      if (best == -1 || leq[best][x]) best = x;
    }
  }
  if (best == -1) return -1;
  // best must dominate every common lower bound, not just the ones seen
  // before it in the scan.
  for (int x = 0; x < n; ++x) {
    if (leq[x][a] && leq[x][b] && !leq[x][best]) return -1;
  }
  return best;
}

int derived_join(const std::vector<std::vector<bool>>& leq, int a, int b) {
  const int n = static_cast<int>(leq.size());
  int best = -1;
  for (int x = 0; x < n; ++x) {
    if (leq[a][x] && leq[b][x]) {
      if (best == -1 || leq[x][best]) best = x;
    }
  }
  if (best == -1) return -1;
  for (int x = 0; x < n; ++x) {
    if (leq[a][x] && leq[b][x] && !leq[best][x]) return -1;
  }
  return best;
}

}  // namespace

LatticeDiagnostics validate_lattice(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<bool>>& leq,
    const std::vector<std::vector<int>>& meet_table,
    const std::vector<std::vector<int>>& join_table) {
  LatticeDiagnostics diag;
  const int n = static_cast<int>(labels.size());
  if (n == 0) {
    add_violation(diag, "lattice has no elements");
    return diag;
  }
  if (static_cast<int>(leq.size()) != n) {
    add_violation(diag, "leq table row count differs from element count");
    return diag;
  }
  for (const auto& row : leq) {
    if (static_cast<int>(row.size()) != n) {
      add_violation(diag, "leq table is not square");
      return diag;
    }
  }

  for (int a = 0; a < n; ++a) {
    if (!leq[a][a]) add_violation(diag, "not reflexive at " + labels[a]);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && leq[a][b] && leq[b][a]) {
        add_violation(diag,
                      "not antisymmetric at " + labels[a] + ", " + labels[b]);
      }
      for (int c = 0; c < n; ++c) {
        if (leq[a][b] && leq[b][c] && !leq[a][c]) {
          add_violation(diag, "not transitive at " + labels[a] + " <= " +
                                  labels[b] + " <= " + labels[c]);
        }
      }
    }
  }
  if (!diag.ok()) return diag;

  int bottom = -1;
  int top = -1;
  for (int a = 0; a < n; ++a) {
    bool is_bottom = true;
    bool is_top = true;
    for (int b = 0; b < n; ++b) {
      if (!leq[a][b]) is_bottom = false;
      if (!leq[b][a]) is_top = false;
    }
    if (is_bottom) bottom = a;
    if (is_top) top = a;
  }
  if (bottom == -1) add_violation(diag, "no bottom element");
  if (top == -1) add_violation(diag, "no top element");

  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const int m = derived_meet(leq, a, b);
      const int j = derived_join(leq, a, b);
      if (m == -1) {
        add_violation(diag, "no greatest lower bound for " + labels[a] +
                                ", " + labels[b]);
      }
      if (j == -1) {
        add_violation(diag, "no least upper bound for " + labels[a] + ", " +
                                labels[b]);
      }
      if (!meet_table.empty() && m != -1 && meet_table[a][b] != m) {
        add_violation(diag, "meet table wrong at " + labels[a] + ", " +
                                labels[b]);
      }
      if (!join_table.empty() && j != -1 && join_table[a][b] != j) {
        add_violation(diag, "join table wrong at " + labels[a] + ", " +
                                labels[b]);
      }
    }
  }
  return diag;
}

FiniteLattice::FiniteLattice(std::vector<std::string> labels,
                             std::vector<std::vector<bool>> leq)
    : labels_(std::move(labels)), leq_(std::move(leq)) {
  const LatticeDiagnostics diag = validate_lattice(labels_, leq_);
  if (!diag.ok()) {
    throw BadInput("not a lattice: " + diag.violations.front());
  }
  const int n = size();
  meet_.assign(static_cast<std::size_t>(n),
               std::vector<int>(static_cast<std::size_t>(n), 0));
  join_.assign(static_cast<std::size_t>(n),
               std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      meet_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          derived_meet(leq_, a, b);
      join_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          derived_join(leq_, a, b);
    }
  }
  for (int a = 0; a < n; ++a) {
    if (meet(a, a) != a) throw BadInput("meet table inconsistent");
    bool is_bottom = true;
    bool is_top = true;
    for (int b = 0; b < n; ++b) {
      if (!this->leq(a, b)) is_bottom = false;
      if (!this->leq(b, a)) is_top = false;
    }
    if (is_bottom) bottom_ = a;
    if (is_top) top_ = a;
  }
  for (int a = 0; a < n; ++a) {
    if (a == bottom_) continue;
    bool covers_bottom = true;
    for (int b = 0; b < n; ++b) {
      if (b != bottom_ && b != a && this->leq(b, a)) {
        covers_bottom = false;
        break;
      }
    }
    if (covers_bottom) atoms_.push_back(a);
  }
}

FiniteLattice boolean_lattice(int m) {
  if (m < 0 || m > 16) throw TooLarge("boolean_lattice supports 0 <= m <= 16");
  const int n = 1 << m;
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::string label = "{";
    for (int k = 0; k < m; ++k) {
      if (s & (1 << k)) {
        if (label.size() > 1) label += ",";
        label += std::to_string(k);
      }
    }
    label += "}";
    labels.push_back(std::move(label));
  }
  std::vector<std::vector<bool>> leq(
      static_cast<std::size_t>(n),
      std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      leq[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
          (s & t) == s;
    }
  }
  return FiniteLattice(std::move(labels), std::move(leq));
}

FiniteLattice chain_lattice(int length) {
  if (length < 1) throw BadInput("chain_lattice requires length >= 1");
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(length));
  for (int a = 0; a < length; ++a) labels.push_back("c" + std::to_string(a));
  std::vector<std::vector<bool>> leq(
      static_cast<std::size_t>(length),
      std::vector<bool>(static_cast<std::size_t>(length), false));
  for (int a = 0; a < length; ++a) {
    for (int b = a; b < length; ++b) {
      leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    }
  }
  return FiniteLattice(std::move(labels), std::move(leq));
}

bool is_dual_ideal(const FiniteLattice& lat, const std::vector<int>& members) {
  if (members.empty()) return false;
  std::vector<bool> in(static_cast<std::size_t>(lat.size()), false);
  for (int a : members) {
    if (a < 0 || a >= lat.size()) return false;
    in[static_cast<std::size_t>(a)] = true;
  }
  if (in[static_cast<std::size_t>(lat.bottom())]) return false;
  for (int a : members) {
    for (int b = 0; b < lat.size(); ++b) {
      if (lat.leq(a, b) && !in[static_cast<std::size_t>(b)]) return false;
    }
    for (int b : members) {
      if (!in[static_cast<std::size_t>(lat.meet(a, b))]) return false;
    }
  }
  return true;
}

DualIdeal principal_filter(const FiniteLattice& lat, int a) {
  DualIdeal out;
  for (int b = 0; b < lat.size(); ++b) {
    if (lat.leq(a, b)) out.members.push_back(b);
  }
  return out;
}

bool ideal_contains(const DualIdeal& ideal, int a) {
  return std::binary_search(ideal.members.begin(), ideal.members.end(), a);
}

namespace {

// Raw scan over all subsets, usable up to 20 elements. Returns every dual
// ideal as a member bitmask.
std::vector<std::uint32_t> scan_all_filters(const FiniteLattice& lat,
                                            ExecMode mode) {
  const int n = lat.size();
  std::vector<std::uint32_t> up(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (lat.leq(a, b)) up[static_cast<std::size_t>(a)] |= 1u << b;
    }
  }
  const std::uint32_t bottom_bit = 1u << lat.bottom();
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t chunk = std::uint64_t{1} << 12;
  const std::ptrdiff_t chunks =
      static_cast<std::ptrdiff_t>((total + chunk - 1) / chunk);

  std::vector<std::vector<std::uint32_t>> found(
      static_cast<std::size_t>(chunks));
  for_each_index(chunks, mode, [&](std::ptrdiff_t c) {
    auto& slot = found[static_cast<std::size_t>(c)];
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    for (std::uint64_t raw = lo; raw < hi; ++raw) {
      const std::uint32_t mask = static_cast<std::uint32_t>(raw);
      if (mask == 0 || (mask & bottom_bit)) continue;
      bool good = true;
      for (std::uint32_t rest = mask; rest && good;) {
        const int a = std::countr_zero(rest);
        rest &= rest - 1;
        if ((mask & up[static_cast<std::size_t>(a)]) !=
            up[static_cast<std::size_t>(a)]) {
          good = false;
          break;
        }
        for (std::uint32_t other = mask; other;) {
          const int b = std::countr_zero(other);
          other &= other - 1;
          if (!(mask & (1u << lat.meet(a, b)))) {
            good = false;
            break;
          }
        }
      }
      if (good) slot.push_back(mask);
    }
  });

  std::vector<std::uint32_t> all;
  for (const auto& slot : found) {
    all.insert(all.end(), slot.begin(), slot.end());
  }
  return all;
}

// Antichain-seed route for larger lattices. Every upset is generated by the
// antichain of its minimal elements. Singleton seeds are checked and
// collected; pair seeds are checked and always fail meet closure (the meet
// of two incomparable generators cannot sit above a third element of any
// antichain extending the pair), which prunes every antichain of two or
// more elements. The checks are performed, not assumed, so a defective
// order table surfaces here.
std::vector<std::vector<int>> seed_all_filters(const FiniteLattice& lat) {
  const int n = lat.size();
  std::vector<std::vector<int>> filters;
  for (int a = 0; a < n; ++a) {
    if (a == lat.bottom()) continue;
    const DualIdeal up = principal_filter(lat, a);
    if (is_dual_ideal(lat, up.members)) filters.push_back(up.members);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (lat.leq(a, b) || lat.leq(b, a)) continue;
      std::vector<int> members;
      for (int x = 0; x < n; ++x) {
        if (lat.leq(a, x) || lat.leq(b, x)) members.push_back(x);
      }
      if (is_dual_ideal(lat, members)) filters.push_back(members);
    }
  }
  return filters;
}

std::vector<DualIdeal> keep_maximal(std::vector<std::vector<int>> filters) {
  std::vector<DualIdeal> out;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < filters.size() && maximal; ++j) {
      if (i == j || filters[i].size() >= filters[j].size()) continue;
      if (std::includes(filters[j].begin(), filters[j].end(),
                        filters[i].begin(), filters[i].end())) {
        maximal = false;
      }
    }
    if (maximal) out.push_back(DualIdeal{filters[i]});
  }
  std::sort(out.begin(), out.end(), [](const DualIdeal& x, const DualIdeal& y) {
    return x.members < y.members;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

IdealEnumeration enumerate_ideals_both_routes(const FiniteLattice& lat,
                                              int cap, ExecMode mode) {
  if (lat.size() > cap) {
    throw TooLarge("lattice exceeds the enumeration cap of " +
                   std::to_string(cap) + " elements");
  }

  std::vector<std::vector<int>> filters;
  if (lat.size() <= 20) {
    for (std::uint32_t mask : scan_all_filters(lat, mode)) {
      std::vector<int> members;
      for (std::uint32_t rest = mask; rest;) {
        members.push_back(std::countr_zero(rest));
        rest &= rest - 1;
      }
      filters.push_back(std::move(members));
    }
  } else {
    filters = seed_all_filters(lat);
  }

  IdealEnumeration out;
  out.direct = keep_maximal(std::move(filters));

  for (int a : lat.atoms()) out.from_atoms.push_back(principal_filter(lat, a));
  std::sort(out.from_atoms.begin(), out.from_atoms.end(),
            [](const DualIdeal& x, const DualIdeal& y) {
              return x.members < y.members;
            });
  return out;
}

std::vector<DualIdeal> enumerate_maximal_dual_ideals(const FiniteLattice& lat,
                                                     int cap, ExecMode mode) {
  IdealEnumeration both = enumerate_ideals_both_routes(lat, cap, mode);
  if (!both.agree()) {
    throw Error("maximal dual ideal enumeration routes disagree");
  }
  return std::move(both.direct);
}

StoneBaseReport stone_base_check(const FiniteLattice& lat, int cap,
                                 ExecMode mode) {
  const std::vector<DualIdeal> ideals =
      enumerate_maximal_dual_ideals(lat, cap, mode);
  const int n = lat.size();
  const int q = static_cast<int>(ideals.size());

  // base_set[a] = which ideals contain a.
  std::vector<std::vector<bool>> base_set(
      static_cast<std::size_t>(n),
      std::vector<bool>(static_cast<std::size_t>(q), false));
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < q; ++i) {
      base_set[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
          ideal_contains(ideals[static_cast<std::size_t>(i)], a);
    }
  }

  StoneBaseReport report;
  for (int i = 0; i < q; ++i) {
    if (base_set[static_cast<std::size_t>(lat.bottom())]
                [static_cast<std::size_t>(i)]) {
      report.failures.push_back("base set of bottom is not empty");
    }
    if (!base_set[static_cast<std::size_t>(lat.top())]
                 [static_cast<std::size_t>(i)]) {
      report.failures.push_back("base set of top misses an ideal");
    }
  }

  std::vector<std::vector<std::string>> row_failures(
      static_cast<std::size_t>(n));
  for_each_index(n, mode, [&](std::ptrdiff_t a) {
    auto& slot = row_failures[static_cast<std::size_t>(a)];
    for (int b = 0; b < n; ++b) {
      const int m = lat.meet(static_cast<int>(a), b);
      for (int i = 0; i < q; ++i) {
        const bool lhs =
            base_set[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] &&
            base_set[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
        const bool rhs =
            base_set[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
        if (lhs != rhs) {
          slot.push_back("intersection law fails at " +
                         lat.label(static_cast<int>(a)) + ", " + lat.label(b));
          break;
        }
      }
    }
  });
  for (auto& slot : row_failures) {
    for (auto& f : slot) report.failures.push_back(std::move(f));
  }
  report.passed = report.failures.empty();
  return report;
}

ProjectionSublattice commuting_projection_sublattice(
    const std::vector<BlockProjection>& generators, double tol, int cap) {
  if (generators.empty()) {
    throw BadInput("commuting_projection_sublattice needs a generator");
  }
  const AlgebraShape shape = generators.front().shape();
  for (const BlockProjection& g : generators) {
    if (!(g.shape() == shape)) {
      throw ShapeMismatch("generators live in different algebras");
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      for (int k = 0; k < shape.num_blocks; ++k) {
        const Cmat& p = generators[i].block(k).mat();
        const Cmat& q = generators[j].block(k).mat();
        if ((p * q - q * p).norm() > tol) {
          throw NotCommuting("generators do not commute within tol");
        }
      }
    }
  }

  std::vector<BlockProjection> elements;
  auto add_if_new = [&](const BlockProjection& candidate) -> bool {
    for (const BlockProjection& e : elements) {
      if (block_equal(e, candidate, 1e-8)) return false;
    }
    elements.push_back(candidate);
    if (static_cast<int>(elements.size()) > cap) {
      throw ClosureCapExceeded("projection closure exceeds " +
                               std::to_string(cap) + " elements");
    }
    return true;
  };

  add_if_new(BlockProjection::zero(shape));
  add_if_new(BlockProjection::identity(shape));
  for (const BlockProjection& g : generators) add_if_new(g);

  // For commuting projections meet and join are exact products; closure of a
  // finite commuting family is finite (it lives in the finite Boolean algebra
  // generated by the family's spectral projections).
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t count = elements.size();
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const BlockOperator prod = elements[i].op() * elements[j].op();
        const BlockOperator sum =
            elements[i].op() + elements[j].op() - prod;
        if (add_if_new(BlockProjection(prod, 1e-6))) changed = true;
        if (add_if_new(BlockProjection(sum, 1e-6))) changed = true;
      }
    }
  }

  const int n = static_cast<int>(elements.size());
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) labels.push_back("E" + std::to_string(a));
  std::vector<std::vector<bool>> leq(
      static_cast<std::size_t>(n),
      std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          block_leq(elements[static_cast<std::size_t>(a)],
                    elements[static_cast<std::size_t>(b)], 1e-7);
    }
  }
  return ProjectionSublattice{FiniteLattice(std::move(labels), std::move(leq)),
                              std::move(elements)};
}

}  // namespace stonespec
