#pragma once

#include <string>

#include "json.hpp"

#include "stonespec/block.hpp"
#include "stonespec/lattice.hpp"
#include "stonespec/masa.hpp"
#include "stonespec/quasipoint.hpp"

namespace stonespec {

using Json = nlohmann::json;

// Complex numbers serialize as [re, im], matrices as row-major nested
// arrays. Every decoder validates shape and value constraints and throws
// BadInput on anything malformed, so callers never see a parser exception.

Json json_of(const Complex& z);
Json json_of(const Cvec& v);
Json json_of(const Cmat& a);
Json json_of(const AlgebraShape& shape);        // {"m", "n"}
Json json_of(const BlockOperator& a);           // {"shape", "blocks"}
Json json_of(const BlockProjection& p);
Json json_of(const CentralProjection& c);       // {"support"}
Json json_of(const ModuleVector& v);            // {"blocks"}
Json json_of(const Quasipoint& qp);             // {"block", "ray"}
Json json_of(const FilterBase& f);              // {"projections"}
Json json_of(const Masa& m);                    // {"bases"}
Json json_of(const FiniteLattice& lat);         // {"elements", "leq"}

Complex complex_from_json(const Json& j);
Cvec vector_from_json(const Json& j);
Cmat matrix_from_json(const Json& j);
AlgebraShape shape_from_json(const Json& j);
BlockOperator block_operator_from_json(const Json& j);
BlockProjection block_projection_from_json(const Json& j, double tol = kTol);
CentralProjection central_projection_from_json(const Json& j,
                                               const AlgebraShape& shape);
ModuleVector module_vector_from_json(const Json& j);
Quasipoint quasipoint_from_json(const Json& j, const AlgebraShape& shape);
FilterBase filterbase_from_json(const Json& j);
Masa masa_from_json(const Json& j);
FiniteLattice lattice_from_json(const Json& j);

/// Reads and parses a whole file; BadInput on missing file or bad JSON.
Json parse_json_file(const std::string& path);

}  // namespace stonespec
