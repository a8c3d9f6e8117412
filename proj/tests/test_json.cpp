#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "stonespec/json_io.hpp"

using namespace stonespec;

TEST_CASE("scalar and matrix round trips") {
  const Complex z(1.5, -2.25);
  CHECK(complex_from_json(json_of(z)) == z);
  CHECK(json_of(z).dump() == "[1.5,-2.25]");

  Rng rng(60);
  const Cmat a = random_unitary(3, rng);
  CHECK((matrix_from_json(json_of(a)) - a).norm() == 0.0);
  const Cvec v = random_unit_vector(4, rng);
  CHECK((vector_from_json(json_of(v)) - v).norm() == 0.0);

  CHECK_THROWS_AS(complex_from_json(Json::array({1.0})), BadInput);
  CHECK_THROWS_AS(complex_from_json(Json{{"re", 1.0}}), BadInput);
  CHECK_THROWS_AS(vector_from_json(Json::array()), BadInput);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[ [1,0] ],[ ]]")), BadInput);
}

TEST_CASE("algebra value round trips") {
  const AlgebraShape shape{2, 3};
  CHECK(shape_from_json(json_of(shape)) == shape);
  CHECK(json_of(shape).dump() == "{\"m\":2,\"n\":3}");

  Rng rng(61);
  const BlockOperator op = random_block_operator(shape, rng);
  const BlockOperator back = block_operator_from_json(json_of(op));
  CHECK((back - op).norm() == 0.0);

  const BlockProjection p = random_block_projection(shape, rng);
  CHECK(block_equal(block_projection_from_json(json_of(p)), p));

  CentralProjection c(shape);
  c.insert(1);
  CHECK(central_projection_from_json(json_of(c), shape) == c);
  CHECK(json_of(c).dump() == "{\"support\":[1]}");

  const ModuleVector mv(shape, {random_unit_vector(3, rng), Cvec::Zero(3)});
  const ModuleVector mv_back = module_vector_from_json(json_of(mv));
  for (int k = 0; k < 2; ++k) {
    CHECK((mv_back.block(k) - mv.block(k)).norm() == 0.0);
  }

  const Quasipoint qp(shape, 1, random_unit_vector(3, rng));
  CHECK(qp_equal(quasipoint_from_json(json_of(qp), shape), qp));

  const FilterBase base{shape, {p, BlockProjection::identity(shape)}};
  const FilterBase base_back = filterbase_from_json(json_of(base));
  REQUIRE(base_back.elements.size() == 2);
  CHECK(block_equal(base_back.elements[0], p));

  const Masa m = Masa::standard(shape);
  CHECK((masa_from_json(json_of(m)).basis(1) - m.basis(1)).norm() == 0.0);

  const FiniteLattice lat = boolean_lattice(2);
  const FiniteLattice lat_back = lattice_from_json(json_of(lat));
  CHECK(lat_back.labels() == lat.labels());
  CHECK(lat_back.order() == lat.order());
}

TEST_CASE("malformed payloads are rejected") {
  const AlgebraShape shape{2, 2};
  CHECK_THROWS_AS(shape_from_json(Json{{"m", 0}, {"n", 2}}), Error);
  CHECK_THROWS_AS(shape_from_json(Json{{"m", 2}}), BadInput);
  CHECK_THROWS_AS(
      block_operator_from_json(Json{{"shape", json_of(shape)},
                                    {"blocks", Json::array()}}),
      BadInput);
  CHECK_THROWS_AS(
      central_projection_from_json(Json{{"support", {5}}}, shape), BadInput);
  CHECK_THROWS_AS(quasipoint_from_json(
                      Json{{"block", 0}, {"ray", {{2.0, 0.0}, {0.0, 0.0}}}},
                      shape),
                  BadInput);
  CHECK_THROWS_AS(filterbase_from_json(Json{{"projections", Json::array()}}),
                  BadInput);
  CHECK_THROWS_AS(masa_from_json(Json{{"bases", Json::array()}}), BadInput);

  // A non-lattice order: two incomparable tops.
  Json bad = json_of(boolean_lattice(1));
  bad["leq"] = Json::parse("[[true,false],[false,true]]");
  CHECK_THROWS_AS(lattice_from_json(bad), BadInput);

  // Projection payload that is not idempotent.
  Json skew = json_of(BlockOperator::identity(shape));
  skew["blocks"][0][0][1] = Json::array({0.5, 0.0});
  CHECK_THROWS_AS(block_projection_from_json(skew), Error);
}

TEST_CASE("file parsing") {
  const std::string good = "/tmp/stonespec_good.json";
  {
    std::ofstream out(good);
    out << "{\"m\": 2, \"n\": 2}";
  }
  CHECK(shape_from_json(parse_json_file(good)) == AlgebraShape{2, 2});
  std::remove(good.c_str());

  const std::string bad = "/tmp/stonespec_bad.json";
  {
    std::ofstream out(bad);
    out << "{\"m\": 2,";
  }
  CHECK_THROWS_AS(parse_json_file(bad), BadInput);
  std::remove(bad.c_str());

  CHECK_THROWS_AS(parse_json_file("/tmp/stonespec_missing.json"), BadInput);
}
