#include "doctest.h"
#include "opalg/io.hpp"
#include "support.hpp"

using namespace opalg;

TEST_CASE("matrix and vector round trips") {
  Rng rng(1);
  const Matrix m = random_gaussian(rng, 3, 2);
  CHECK(io::matrix_from_json(io::to_json(m)) == m);
  const Vector v = random_unit_vector(rng, 4);
  CHECK(io::vector_from_json(io::to_json(v)) == v);
  // Text round trip keeps every bit.
  const io::json reparsed = io::json::parse(io::to_json(m).dump());
  CHECK(io::matrix_from_json(reparsed) == m);
}

TEST_CASE("malformed matrices are rejected") {
  CHECK_THROWS_AS(io::matrix_from_json(io::json{{"rows", 2}, {"cols", 2}, {"entries", io::json::array()}}), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(io::json{{"rows", 1}, {"cols", 1}}), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(io::json{{"rows", 1}, {"cols", 1}, {"entries", {{1, "x"}}}}), ValidationError);
}

TEST_CASE("algebra, state and triple round trips") {
  Rng rng(2);
  const StarAlgebra alg = testing::random_generated_algebra(rng, 3);
  const StarAlgebra back = io::algebra_from_json(io::to_json(alg));
  CHECK(back.size() == alg.size());
  CHECK(span_distance(back, alg) < 1e-14);

  const State s(random_density(rng, 3, 2));
  CHECK(io::state_from_json(io::to_json(s)).rho() == s.rho());

  const GnsTriple t = gns_construct(alg, s);
  const GnsTriple t2 = io::gns_from_json(io::to_json(t));
  CHECK(t2.space_dim == t.space_dim);
  REQUIRE(t2.rep.size() == t.rep.size());
  for (std::size_t k = 0; k < t.rep.size(); ++k) CHECK(t2.rep[k] == t.rep[k]);
  CHECK(t2.cyclic_vector == t.cyclic_vector);
  CHECK(verify_representation(t2, alg, s).max_residual() < 1e-8);

  io::json broken = io::to_json(t);
  broken["rep"].erase("0");
  CHECK_THROWS_AS(io::gns_from_json(broken), ValidationError);
}

TEST_CASE("decomposition and Weyl system round trips") {
  const StarAlgebra blocks = StarAlgebra::block_diagonal({2, 1});
  const SectorDecomposition d = decompose(blocks, SectorKind::isotypic, 3);
  const SectorDecomposition d2 = io::decomposition_from_json(io::to_json(d));
  CHECK(d2.blocks == d.blocks);
  CHECK(d2.kind == d.kind);
  CHECK(d2.basis_change == d.basis_change);

  io::json gap = io::to_json(d);
  gap["blocks"] = {{0, 2}};
  CHECK_THROWS_AS(io::decomposition_from_json(gap), ValidationError);

  const DiscreteWeylSystem w = schrodinger_system(5);
  const DiscreteWeylSystem w2 = io::weyl_system_from_json(io::to_json(w));
  CHECK(w2.modulus == 5);
  CHECK(w2.u == w.u);
  CHECK(w2.v == w.v);
}

TEST_CASE("problem documents") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/opalg/problem.io::json"), io::IoError);
  CHECK_THROWS_AS(io::member(io::json::object(), "inputs"), ValidationError);
}
