#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "stonespec/errors.hpp"
#include "stonespec/rng.hpp"

namespace stonespec {

using Complex = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;

/// Default tolerances. Every routine that makes a numerical decision takes
/// the relevant one as a defaulted parameter.
inline constexpr double kTol = 1e-9;       // general residual comparisons
inline constexpr double kMeetTol = 1e-7;   // eigenvalue-2 window in meets
inline constexpr double kMergeTol = 1e-8;  // eigenvalue clustering
inline constexpr double kRankTol = 1e-7;   // rank decisions
inline constexpr double kCompTol = 1e-8;   // spectral component threshold

struct Tolerances {
  double tol = kTol;
  double meet_tol = kMeetTol;
  double merge_tol = kMergeTol;
  double rank_tol = kRankTol;
  double comp_tol = kCompTol;
};

bool is_hermitian(const Cmat& a, double tol = kTol);
bool is_unitary(const Cmat& t, double tol = kTol);

/// Largest singular value.
double operator_norm(const Cmat& a);

/// A validated orthogonal projection: Hermitian and idempotent within tol.
class Projection {
 public:
  explicit Projection(Cmat mat, double tol = kTol);

  static Projection zero(Eigen::Index dim);
  static Projection identity(Eigen::Index dim);
  /// vv* for a unit vector v.
  static Projection onto_ray(const Cvec& v, double tol = kTol);
  /// VV* for a matrix V with orthonormal columns.
  static Projection onto_span(const Cmat& orthonormal_columns,
                              double tol = kTol);

  const Cmat& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  Projection complement() const;
  bool is_zero(double tol = kTol) const { return mat_.norm() <= tol; }

 private:
  Cmat mat_;
};

/// A validated partial isometry: both theta*theta and theta theta* are
/// projections within tol.
class PartialIsometry {
 public:
  explicit PartialIsometry(Cmat mat, double tol = kTol);

  const Cmat& mat() const { return mat_; }
  const Projection& initial() const { return initial_; }  // theta*theta
  const Projection& final() const { return final_; }      // theta theta*

 private:
  Cmat mat_;
  Projection initial_;
  Projection final_;
};

/// Eigendecomposition of a Hermitian matrix with eigenvalues merged into
/// clusters: value list is strictly ascending, projections sum to I.
struct EigenSystem {
  std::vector<double> eigenvalues;
  std::vector<Cmat> projections;
};

/// Spectral decomposition, clustering eigenvalues closer than merge_tol so a
/// degenerate group yields a single spectral projection.
EigenSystem hermitian_spectral(const Cmat& a, double merge_tol = kMergeTol,
                               double tol = kTol);

/// Lattice meet: projection onto ran P intersect ran Q, computed from the
/// eigenspace of P+Q at eigenvalue 2 (within meet_tol).
Projection project_meet(const Projection& p, const Projection& q,
                        double meet_tol = kMeetTol);

/// Lattice join, as I - meet(I-P, I-Q).
Projection project_join(const Projection& p, const Projection& q,
                        double meet_tol = kMeetTol);

/// Order: ran P inside ran Q, tested as |QP - P| <= tol.
bool project_leq(const Projection& p, const Projection& q, double tol = kTol);

/// Number of eigenvalues within rank_tol of 1.
int rank_of(const Projection& p, double rank_tol = kRankTol);

/// Orthonormal basis of ran P (dim x rank), in the spectral routine's
/// column order. Deterministic for a fixed input.
Cmat range_basis(const Projection& p, double rank_tol = kRankTol);

/// Scale v so its largest-magnitude coordinate is real positive.
Cvec phase_canonical(Cvec v);

/// Ray equality: |<v, w>| >= 1 - tol for unit vectors.
bool rays_equal(const Cvec& v, const Cvec& w, double tol = kTol);

/// A unitary with first column v (Gram-Schmidt completion against the
/// standard basis, deterministic pivoting).
Cmat complete_to_unitary(const Cvec& v);

/// Unitary T with Tv = w exactly (so the phase witness c is 1).
Cmat unitary_mapping_ray(const Cvec& v, const Cvec& w);

Cvec random_unit_vector(int n, Rng& rng);
Cmat random_unitary(int n, Rng& rng);
Projection random_projection(int n, int rank, Rng& rng);
/// Random projection with given rank below q (throws BadRank if rank exceeds
/// rank q).
Projection random_subprojection(const Projection& q, int rank, Rng& rng);

Cvec random_unit_vector(int n, std::uint64_t seed);
Cmat random_unitary(int n, std::uint64_t seed);
Projection random_projection(int n, int rank, std::uint64_t seed);

}  // namespace stonespec
