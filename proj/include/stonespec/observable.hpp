#pragma once

#include <iosfwd>
#include <vector>

#include "stonespec/block.hpp"
#include "stonespec/parallel.hpp"
#include "stonespec/quasipoint.hpp"

namespace stonespec {

/// Blockwise spectral family of a self-adjoint block operator: per block the
/// ascending distinct eigenvalues and the cumulative projections
/// E_lambda = sum of eigenprojections with eigenvalue <= lambda.
class SpectralFamily {
 public:
  SpectralFamily(AlgebraShape shape, std::vector<std::vector<double>> jumps,
                 std::vector<std::vector<Projection>> cumulative);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<double>& jumps(int block) const;
  const Projection& cumulative(int block, int jump) const;

  /// Evaluation at an arbitrary real point: zero below the first jump,
  /// identity from the last jump on.
  BlockProjection at(double lambda) const;

 private:
  AlgebraShape shape_;
  std::vector<std::vector<double>> jumps_;
  std::vector<std::vector<Projection>> cumulative_;
};

SpectralFamily spectral_family(const BlockOperator& a,
                               double merge_tol = kMergeTol,
                               double tol = kTol);

/// Observable function at a quasipoint: the smallest jump of the point's
/// block whose cumulative projection, padded with the identity off-block,
/// lies in the ideal. Membership runs at comp_tol so the result agrees with
/// the largest-eigenvalue-with-nonzero-ray-component formula.
double observable_value(const SpectralFamily& family, const Quasipoint& qp,
                        double comp_tol = kCompTol);
double observable_value(const BlockOperator& a, const Quasipoint& qp,
                        double comp_tol = kCompTol);

struct ObservableRow {
  int block;
  Cvec ray;
  double value;
};

/// One row per quasipoint, in input order. The spectral family is computed
/// once and the evaluations are independent, so rows may be filled in
/// parallel.
std::vector<ObservableRow> observable_table(
    const BlockOperator& a, const std::vector<Quasipoint>& points,
    ExecMode mode = ExecMode::serial, double comp_tol = kCompTol);

/// CSV with a mandatory "block,ray,value" header. Rays are JSON-encoded
/// arrays of [re,im] pairs, quoted; values use round-trip formatting.
void write_observable_csv(std::ostream& out,
                          const std::vector<ObservableRow>& rows);

}  // namespace stonespec
