#include "stonespec/observable.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "stonespec/errors.hpp"

namespace stonespec {

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_ray(const Cvec& v) {
  std::string out = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += "[" + fmt_double(v(i).real()) + "," + fmt_double(v(i).imag()) + "]";
  }
  out += "]";
  return out;
}

}  // namespace

SpectralFamily::SpectralFamily(AlgebraShape shape,
                               std::vector<std::vector<double>> jumps,
                               std::vector<std::vector<Projection>> cumulative)
    : shape_(shape), jumps_(std::move(jumps)), cumulative_(std::move(cumulative)) {
  validate_shape(shape_);
  if (static_cast<int>(jumps_.size()) != shape_.num_blocks ||
      static_cast<int>(cumulative_.size()) != shape_.num_blocks) {
    throw BadInput("spectral family: per-block data does not match shape");
  }
  for (int k = 0; k < shape_.num_blocks; ++k) {
    const auto& js = jumps_[static_cast<std::size_t>(k)];
    const auto& cs = cumulative_[static_cast<std::size_t>(k)];
    if (js.empty() || js.size() != cs.size()) {
      throw BadInput("spectral family: jump list and projections disagree");
    }
    for (std::size_t j = 0; j + 1 < js.size(); ++j) {
      if (js[j] >= js[j + 1]) {
        throw BadInput("spectral family: jumps not strictly ascending");
      }
      if (!project_leq(cs[j], cs[j + 1], 1e-7)) {
        throw BadInput("spectral family: cumulative projections not monotone");
      }
    }
    const Cmat top =
        cs.back().mat() - Cmat::Identity(shape_.block_dim, shape_.block_dim);
    if (top.norm() > 1e-8) {
      throw BadInput("spectral family: top projection is not the identity");
    }
  }
}

const std::vector<double>& SpectralFamily::jumps(int block) const {
  if (block < 0 || block >= shape_.num_blocks) {
    throw BadInput("spectral family: block index out of range");
  }
  return jumps_[static_cast<std::size_t>(block)];
}

const Projection& SpectralFamily::cumulative(int block, int jump) const {
  const auto& js = jumps(block);
  if (jump < 0 || jump >= static_cast<int>(js.size())) {
    throw BadInput("spectral family: jump index out of range");
  }
  return cumulative_[static_cast<std::size_t>(block)]
                    [static_cast<std::size_t>(jump)];
}

BlockProjection SpectralFamily::at(double lambda) const {
  std::vector<Projection> blocks;
  blocks.reserve(static_cast<std::size_t>(shape_.num_blocks));
  for (int k = 0; k < shape_.num_blocks; ++k) {
    const auto& js = jumps_[static_cast<std::size_t>(k)];
    const auto it = std::upper_bound(js.begin(), js.end(), lambda);
    if (it == js.begin()) {
      blocks.push_back(Projection::zero(shape_.block_dim));
    } else {
      const auto j = static_cast<std::size_t>(it - js.begin() - 1);
      blocks.push_back(cumulative_[static_cast<std::size_t>(k)][j]);
    }
  }
  return BlockProjection(shape_, std::move(blocks));
}

SpectralFamily spectral_family(const BlockOperator& a, double merge_tol,
                               double tol) {
  const AlgebraShape shape = a.shape();
  std::vector<std::vector<double>> jumps(
      static_cast<std::size_t>(shape.num_blocks));
  std::vector<std::vector<Projection>> cumulative(
      static_cast<std::size_t>(shape.num_blocks));
  for (int k = 0; k < shape.num_blocks; ++k) {
    const EigenSystem sys = hermitian_spectral(a.block(k), merge_tol, tol);
    Cmat running = Cmat::Zero(shape.block_dim, shape.block_dim);
    for (std::size_t j = 0; j < sys.eigenvalues.size(); ++j) {
      running += sys.projections[j];
      jumps[static_cast<std::size_t>(k)].push_back(sys.eigenvalues[j]);
      cumulative[static_cast<std::size_t>(k)].emplace_back(running, 1e-7);
    }
  }
  return SpectralFamily(shape, std::move(jumps), std::move(cumulative));
}

double observable_value(const SpectralFamily& family, const Quasipoint& qp,
                        double comp_tol) {
  if (!(family.shape() == qp.shape())) {
    throw ShapeMismatch("observable value: shapes differ");
  }
  const int i = qp.block();
  const auto& js = family.jumps(i);
  // The top cumulative projection is the identity (validated on
  // construction), so the final jump needs no membership test.
  for (std::size_t j = 0; j + 1 < js.size(); ++j) {
    const Cvec image = family.cumulative(i, static_cast<int>(j)).mat() * qp.ray();
    if ((image - qp.ray()).norm() <= comp_tol) return js[j];
  }
  return js.back();
}

double observable_value(const BlockOperator& a, const Quasipoint& qp,
                        double comp_tol) {
  return observable_value(spectral_family(a), qp, comp_tol);
}

std::vector<ObservableRow> observable_table(const BlockOperator& a,
                                            const std::vector<Quasipoint>& points,
                                            ExecMode mode, double comp_tol) {
  const SpectralFamily family = spectral_family(a);
  for (const Quasipoint& qp : points) {
    if (!(qp.shape() == a.shape())) {
      throw ShapeMismatch("observable table: quasipoint shape differs");
    }
  }
  std::vector<ObservableRow> rows(points.size());
  for_each_index(static_cast<std::ptrdiff_t>(points.size()), mode,
                 [&](std::ptrdiff_t idx) {
                   const auto i = static_cast<std::size_t>(idx);
                   rows[i] = ObservableRow{
                       points[i].block(), points[i].ray(),
                       observable_value(family, points[i], comp_tol)};
                 });
  return rows;
}

void write_observable_csv(std::ostream& out,
                          const std::vector<ObservableRow>& rows) {
  out << "block,ray,value\n";
  for (const ObservableRow& row : rows) {
    out << row.block << ",\"" << json_ray(row.ray) << "\","
        << fmt_double(row.value) << "\n";
  }
}

}  // namespace stonespec
