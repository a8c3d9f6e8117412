#include "stonespec/json_io.hpp"

#include <fstream>
#include <utility>

#include "stonespec/errors.hpp"

namespace stonespec {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw BadInput(what);
}

double number_from(const Json& j, const char* what) {
  require(j.is_number(), what);
  return j.get<double>();
}

int index_from(const Json& j, const char* what) {
  require(j.is_number_integer(), what);
  return j.get<int>();
}

const Json& field(const Json& j, const char* key, const char* what) {
  require(j.is_object() && j.contains(key), what);
  return j.at(key);
}

}  // namespace

Json json_of(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json json_of(const Cvec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(json_of(Complex(v(i))));
  return out;
}

Json json_of(const Cmat& a) {
  Json out = Json::array();
  for (int r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < a.cols(); ++c) row.push_back(json_of(Complex(a(r, c))));
    out.push_back(std::move(row));
  }
  return out;
}

Json json_of(const AlgebraShape& shape) {
  return Json{{"m", shape.num_blocks}, {"n", shape.block_dim}};
}

Json json_of(const BlockOperator& a) {
  Json blocks = Json::array();
  for (int k = 0; k < a.shape().num_blocks; ++k) {
    blocks.push_back(json_of(a.block(k)));
  }
  return Json{{"shape", json_of(a.shape())}, {"blocks", std::move(blocks)}};
}

Json json_of(const BlockProjection& p) { return json_of(p.op()); }

Json json_of(const CentralProjection& c) {
  return Json{{"support", c.support()}};
}

Json json_of(const ModuleVector& v) {
  Json blocks = Json::array();
  for (int k = 0; k < v.shape().num_blocks; ++k) {
    blocks.push_back(json_of(v.block(k)));
  }
  return Json{{"blocks", std::move(blocks)}};
}

Json json_of(const Quasipoint& qp) {
  return Json{{"block", qp.block()}, {"ray", json_of(qp.ray())}};
}

Json json_of(const FilterBase& f) {
  Json projections = Json::array();
  for (const BlockProjection& p : f.elements) projections.push_back(json_of(p));
  return Json{{"projections", std::move(projections)}};
}

Json json_of(const Masa& m) {
  Json bases = Json::array();
  for (int k = 0; k < m.shape().num_blocks; ++k) {
    bases.push_back(json_of(m.basis(k)));
  }
  return Json{{"bases", std::move(bases)}};
}

Json json_of(const FiniteLattice& lat) {
  Json leq = Json::array();
  for (int a = 0; a < lat.size(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < lat.size(); ++b) row.push_back(lat.leq(a, b));
    leq.push_back(std::move(row));
  }
  return Json{{"elements", lat.labels()}, {"leq", std::move(leq)}};
}

Complex complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex number must be [re, im]");
  return Complex(number_from(j[0], "complex part must be a number"),
                 number_from(j[1], "complex part must be a number"));
}

Cvec vector_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "vector must be a nonempty array");
  Cvec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<int>(i)) = complex_from_json(j[i]);
  }
  return v;
}

Cmat matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a nonempty array");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  require(cols > 0, "matrix rows must be nonempty arrays");
  Cmat a(static_cast<int>(j.size()), static_cast<int>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    require(j[r].is_array() && j[r].size() == cols,
            "matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      a(static_cast<int>(r), static_cast<int>(c)) =
          complex_from_json(j[r][c]);
    }
  }
  return a;
}

AlgebraShape shape_from_json(const Json& j) {
  const AlgebraShape shape{
      index_from(field(j, "m", "shape needs integer field m"),
                 "shape needs integer field m"),
      index_from(field(j, "n", "shape needs integer field n"),
                 "shape needs integer field n")};
  validate_shape(shape);
  return shape;
}

BlockOperator block_operator_from_json(const Json& j) {
  const AlgebraShape shape =
      shape_from_json(field(j, "shape", "block operator needs a shape"));
  const Json& blocks = field(j, "blocks", "block operator needs blocks");
  require(blocks.is_array() &&
              static_cast<int>(blocks.size()) == shape.num_blocks,
          "block count must match the shape");
  std::vector<Cmat> mats;
  mats.reserve(blocks.size());
  for (const Json& b : blocks) {
    Cmat mat = matrix_from_json(b);
    require(mat.rows() == shape.block_dim && mat.cols() == shape.block_dim,
            "block dimension must match the shape");
    mats.push_back(std::move(mat));
  }
  return BlockOperator(shape, std::move(mats));
}

BlockProjection block_projection_from_json(const Json& j, double tol) {
  return BlockProjection(block_operator_from_json(j), tol);
}

CentralProjection central_projection_from_json(const Json& j,
                                               const AlgebraShape& shape) {
  const Json& support = field(j, "support", "central projection needs support");
  require(support.is_array(), "support must be an array of block indices");
  CentralProjection c(shape);
  for (const Json& entry : support) {
    const int k = index_from(entry, "support entries must be integers");
    require(k >= 0 && k < shape.num_blocks, "support index out of range");
    c.insert(k);
  }
  return c;
}

ModuleVector module_vector_from_json(const Json& j) {
  const Json& blocks = field(j, "blocks", "module vector needs blocks");
  require(blocks.is_array() && !blocks.empty(),
          "module vector needs at least one block");
  std::vector<Cvec> vecs;
  for (const Json& b : blocks) vecs.push_back(vector_from_json(b));
  const AlgebraShape shape{static_cast<int>(vecs.size()),
                           static_cast<int>(vecs.front().size())};
  for (const Cvec& v : vecs) {
    require(static_cast<int>(v.size()) == shape.block_dim,
            "module vector blocks must have equal dimension");
  }
  return ModuleVector(shape, std::move(vecs));
}

Quasipoint quasipoint_from_json(const Json& j, const AlgebraShape& shape) {
  const int block = index_from(field(j, "block", "quasipoint needs a block"),
                               "quasipoint block must be an integer");
  const Cvec ray =
      vector_from_json(field(j, "ray", "quasipoint needs a ray"));
  // Accept hand-written rays with few digits; construction renormalizes.
  return Quasipoint(shape, block, ray, 1e-6);
}

FilterBase filterbase_from_json(const Json& j) {
  const Json& projections =
      field(j, "projections", "filter base needs projections");
  require(projections.is_array() && !projections.empty(),
          "filter base needs at least one projection");
  std::vector<BlockProjection> elements;
  for (const Json& p : projections) {
    elements.push_back(block_projection_from_json(p));
  }
  const AlgebraShape shape = elements.front().shape();
  for (const BlockProjection& p : elements) {
    require(p.shape() == shape, "filter base projections must share a shape");
  }
  return FilterBase{shape, std::move(elements)};
}

Masa masa_from_json(const Json& j) {
  const Json& bases = field(j, "bases", "masa needs bases");
  require(bases.is_array() && !bases.empty(),
          "masa needs at least one basis");
  std::vector<Cmat> mats;
  for (const Json& b : bases) mats.push_back(matrix_from_json(b));
  const AlgebraShape shape{static_cast<int>(mats.size()),
                           static_cast<int>(mats.front().rows())};
  return Masa(shape, std::move(mats));
}

FiniteLattice lattice_from_json(const Json& j) {
  const Json& elements = field(j, "elements", "lattice needs elements");
  const Json& leq = field(j, "leq", "lattice needs a leq table");
  require(elements.is_array() && !elements.empty(),
          "lattice elements must be a nonempty array");
  std::vector<std::string> labels;
  for (const Json& e : elements) {
    require(e.is_string(), "lattice elements must be strings");
    labels.push_back(e.get<std::string>());
  }
  require(leq.is_array() && leq.size() == labels.size(),
          "leq table must be square over the elements");
  std::vector<std::vector<bool>> order;
  for (const Json& row : leq) {
    require(row.is_array() && row.size() == labels.size(),
            "leq table must be square over the elements");
    std::vector<bool> bits;
    for (const Json& cell : row) {
      require(cell.is_boolean(), "leq entries must be booleans");
      bits.push_back(cell.get<bool>());
    }
    order.push_back(std::move(bits));
  }
  return FiniteLattice(std::move(labels), std::move(order));
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open file: " + path);
  Json parsed = Json::parse(in, nullptr, false);
  if (parsed.is_discarded()) throw BadInput("invalid JSON in " + path);
  return parsed;
}

}  // namespace stonespec
