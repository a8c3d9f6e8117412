#include "stonespec/matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace stonespec {

bool is_hermitian(const Cmat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol;
}

bool is_unitary(const Cmat& t, double tol) {
  if (t.rows() != t.cols()) return false;
  const Cmat gram = t.adjoint() * t;
  return (gram - Cmat::Identity(t.rows(), t.cols())).norm() <= tol;
}

double operator_norm(const Cmat& a) {
  if (a.size() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

Projection::Projection(Cmat mat, double tol) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) {
    throw NotAProjection("projection matrix must be square");
  }
  if (!is_hermitian(mat_, tol)) {
    throw NotAProjection("projection matrix is not Hermitian within tol");
  }
  if ((mat_ * mat_ - mat_).norm() > tol) {
    throw NotAProjection("projection matrix is not idempotent within tol");
  }
}

Projection Projection::zero(Eigen::Index dim) {
  return Projection(Cmat::Zero(dim, dim));
}

Projection Projection::identity(Eigen::Index dim) {
  return Projection(Cmat::Identity(dim, dim));
}

Projection Projection::onto_ray(const Cvec& v, double tol) {
  if (std::abs(v.norm() - 1.0) > tol) {
    throw NotAProjection("ray vector must be unit length");
  }
  const Cvec u = v / v.norm();
  return Projection(u * u.adjoint(), std::max(tol, 1e-12));
}

Projection Projection::onto_span(const Cmat& cols, double tol) {
  return Projection(cols * cols.adjoint(), std::max(tol, 1e-12));
}

Projection Projection::complement() const {
  Projection out = *this;
  out.mat_ = Cmat::Identity(dim(), dim()) - mat_;
  return out;
}

PartialIsometry::PartialIsometry(Cmat mat, double tol)
    : mat_(std::move(mat)),
      initial_(Projection::zero(0)),
      final_(Projection::zero(0)) {
  if (mat_.rows() != mat_.cols()) {
    throw NotAPartialIsometry("partial isometry must be square here");
  }
  try {
    initial_ = Projection(mat_.adjoint() * mat_, tol);
    final_ = Projection(mat_ * mat_.adjoint(), tol);
  } catch (const NotAProjection&) {
    throw NotAPartialIsometry(
        "theta*theta and theta theta* must both be projections");
  }
}

EigenSystem hermitian_spectral(const Cmat& a, double merge_tol, double tol) {
  if (!is_hermitian(a, tol)) {
    throw NonHermitian("hermitian_spectral requires a Hermitian input");
  }
  Eigen::SelfAdjointEigenSolver<Cmat> solver(a);
  const Eigen::VectorXd values = solver.eigenvalues();
  const Cmat& vectors = solver.eigenvectors();

  EigenSystem out;
  const Eigen::Index n = a.rows();
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && values(end) - values(end - 1) <= merge_tol) ++end;
    const Eigen::Index width = end - begin;
    const Cmat block = vectors.middleCols(begin, width);
    out.eigenvalues.push_back(values.segment(begin, width).mean());
    out.projections.push_back(block * block.adjoint());
    begin = end;
  }
  return out;
}

Projection project_meet(const Projection& p, const Projection& q,
                        double meet_tol) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("project_meet: dimensions differ");
  }
  const Cmat sum = p.mat() + q.mat();
  Eigen::SelfAdjointEigenSolver<Cmat> solver(sum);
  const Eigen::VectorXd values = solver.eigenvalues();
  const Eigen::Index n = p.dim();
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values(i) >= 2.0 - meet_tol) {
      first = i;
      break;
    }
  }
  if (first == n) return Projection::zero(n);
  const Cmat basis = solver.eigenvectors().rightCols(n - first);
  return Projection::onto_span(basis);
}

Projection project_join(const Projection& p, const Projection& q,
                        double meet_tol) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("project_join: dimensions differ");
  }
  return project_meet(p.complement(), q.complement(), meet_tol).complement();
}

bool project_leq(const Projection& p, const Projection& q, double tol) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("project_leq: dimensions differ");
  }
  return (q.mat() * p.mat() - p.mat()).norm() <= tol;
}

int rank_of(const Projection& p, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Cmat> solver(p.mat());
  const Eigen::VectorXd values = solver.eigenvalues();
  int rank = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i) - 1.0) <= rank_tol) ++rank;
  }
  return rank;
}

Cmat range_basis(const Projection& p, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Cmat> solver(p.mat());
  const Eigen::VectorXd values = solver.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i) - 1.0) <= rank_tol) keep.push_back(i);
  }
  Cmat basis(p.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(keep[j]);
  }
  return basis;
}

Cvec phase_canonical(Cvec v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  if (best <= 0.0) return v;
  const Complex phase = std::conj(v(arg)) / best;
  return v * phase;
}

bool rays_equal(const Cvec& v, const Cvec& w, double tol) {
  if (v.size() != w.size()) {
    throw DimensionMismatch("rays_equal: dimensions differ");
  }
  return std::abs(v.dot(w)) >= 1.0 - tol;
}

Cmat complete_to_unitary(const Cvec& v) {
  const Eigen::Index n = v.size();
  Cmat basis(n, n);
  Eigen::Index got = 0;
  auto try_accept = [&](Cvec candidate) {
    for (Eigen::Index j = 0; j < got; ++j) {
      candidate -= basis.col(j).dot(candidate) * basis.col(j);
    }
    const double norm = candidate.norm();
    if (norm < 1e-4) return;
    basis.col(got++) = candidate / norm;
  };
  try_accept(v);
  for (Eigen::Index k = 0; k < n && got < n; ++k) {
    try_accept(Cvec::Unit(n, k));
  }
  return basis;
}

Cmat unitary_mapping_ray(const Cvec& v, const Cvec& w) {
  if (v.size() != w.size()) {
    throw DimensionMismatch("unitary_mapping_ray: dimensions differ");
  }
  return complete_to_unitary(w) * complete_to_unitary(v).adjoint();
}

Cvec random_unit_vector(int n, Rng& rng) {
  Cvec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    v(i) = Complex(re, im);
  }
  const double norm = v.norm();
  if (norm == 0.0) return Cvec::Unit(n, 0);
  return v / norm;
}

Cmat random_unitary(int n, Rng& rng) {
  Cmat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<Cmat> qr(g);
  Cmat q = qr.householderQ() * Cmat::Identity(n, n);
  const Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the column phases so the factorization is unique.
  for (int j = 0; j < n; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

Projection random_projection(int n, int rank, Rng& rng) {
  if (rank < 0 || rank > n) {
    throw BadRank("random_projection: rank out of range");
  }
  if (rank == 0) return Projection::zero(n);
  const Cmat u = random_unitary(n, rng);
  return Projection::onto_span(u.leftCols(rank));
}

Projection random_subprojection(const Projection& q, int rank, Rng& rng) {
  const Cmat basis = range_basis(q);
  const int r = static_cast<int>(basis.cols());
  if (rank < 0 || rank > r) {
    throw BadRank("random_subprojection: rank exceeds rank of parent");
  }
  if (rank == 0) return Projection::zero(q.dim());
  const Cmat mix = random_unitary(r, rng);
  return Projection::onto_span((basis * mix).leftCols(rank));
}

Cvec random_unit_vector(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unit_vector(n, rng);
}

Cmat random_unitary(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(n, rng);
}

Projection random_projection(int n, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_projection(n, rank, rng);
}

}  // namespace stonespec
