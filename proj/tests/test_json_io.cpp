#include "catch2/catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <edgewit/edgewit.hpp>

using namespace edgewit;

namespace {

Matrix random_hermitian(int n, std::uint64_t seed) {
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(engine), gauss(engine));
  return (g + g.adjoint()) / 2.0;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("complex and vector round trips", "[json]") {
  const Complex z(1.25, -2.5);
  REQUIRE(complex_from_json(complex_to_json(z)) == z);
  REQUIRE_THROWS_AS(complex_from_json(Json::array({1.0})), invalid_operator_error);
  REQUIRE_THROWS_AS(complex_from_json(Json("x")), invalid_operator_error);
  Vector v(3);
  v << Complex(1, 2), Complex(0, -1), Complex(3, 0);
  REQUIRE((vector_from_json(vector_to_json(v)) - v).norm() == 0.0);
  REQUIRE_THROWS_AS(vector_from_json(Json::array()), invalid_operator_error);
}

TEST_CASE("operator round trip preserves dims and entries", "[json]") {
  const BipartiteDims dims(2, 3);
  const HermitianOperator op(dims, random_hermitian(6, 21));
  const HermitianOperator back = operator_from_json(operator_to_json(op));
  REQUIRE(back.dims() == dims);
  REQUIRE((back.matrix() - op.matrix()).norm() < 1e-15);
}

TEST_CASE("malformed operator payloads are rejected", "[json]") {
  const HermitianOperator op(BipartiteDims(2, 2), Matrix::Identity(4, 4));
  Json good = operator_to_json(op);

  Json no_dims = good;
  no_dims.erase("dims");
  REQUIRE_THROWS_AS(operator_from_json(no_dims), invalid_operator_error);

  Json bad_dims = good;
  bad_dims["dims"] = Json::array({2});
  REQUIRE_THROWS_AS(operator_from_json(bad_dims), invalid_operator_error);

  Json small_dims = good;
  small_dims["dims"] = Json::array({1, 4});
  REQUIRE_THROWS_AS(operator_from_json(small_dims), invalid_operator_error);

  Json ragged = good;
  ragged["matrix"][1] = Json::array({Json::array({1.0, 0.0})});
  REQUIRE_THROWS_AS(operator_from_json(ragged), invalid_operator_error);

  Json skew = good;
  skew["matrix"][0][1] = Json::array({0.5, 0.0});  // breaks hermiticity
  REQUIRE_THROWS_AS(operator_from_json(skew), invalid_operator_error);
}

TEST_CASE("density parsing enforces state constraints", "[json]") {
  const BipartiteDims dims(2, 2);
  const DensityMatrix rho(dims, Matrix::Identity(4, 4) / 4.0);
  const DensityMatrix back = density_from_json(operator_to_json(rho));
  REQUIRE((back.matrix() - rho.matrix()).norm() < 1e-15);
  const HermitianOperator not_a_state(dims, Matrix::Identity(4, 4));
  REQUIRE_THROWS_AS(density_from_json(operator_to_json(not_a_state)), invalid_operator_error);
}

TEST_CASE("product vector and zero set serialization", "[json]") {
  const ProductVector v = sample_pure_product(BipartiteDims(2, 4), 5);
  const ProductVector back = product_vector_from_json(product_vector_to_json(v));
  REQUIRE((back.e() - v.e()).norm() < 1e-15);
  REQUIRE((back.f() - v.f()).norm() < 1e-15);

  ZeroSet zs;
  zs.vectors.push_back(v);
  zs.vectors.push_back(v.partial_conjugate());
  zs.span_dim = span_dimension(zs.vectors);
  const Json j = zero_set_to_json(zs);
  REQUIRE(j["vectors"].size() == 2);
  REQUIRE(j["span_dim"].get<int>() == zs.span_dim);
}

TEST_CASE("map serialization checks dimensional consistency", "[json]") {
  const BipartiteDims dims(2, 3);
  const HermitianOperator w(dims, random_hermitian(6, 9));
  const ChoiMap m = witness_to_map(w);
  const ChoiMap back = choi_from_json(choi_to_json(m));
  REQUIRE(back.d_in == 2);
  REQUIRE(back.d_out == 3);
  REQUIRE((back.choi.matrix() - m.choi.matrix()).norm() < 1e-15);
  Json j = choi_to_json(m);
  j["d_in"] = 3;
  REQUIRE_THROWS_AS(choi_from_json(j), invalid_operator_error);
}

TEST_CASE("file save and load round trip", "[json]") {
  const auto path = temp_file("edgewit_json_io_test.json");
  const HermitianOperator op(BipartiteDims(2, 4), random_hermitian(8, 55));
  save_json_file(path.string(), operator_to_json(op));
  const HermitianOperator back = operator_from_json(load_json_file(path.string()));
  REQUIRE((back.matrix() - op.matrix()).norm() < 1e-15);
  std::filesystem::remove(path);
  REQUIRE_THROWS_AS(load_json_file(path.string()), io_error);

  const auto garbled = temp_file("edgewit_json_io_garbled.json");
  std::ofstream(garbled) << "this is not json";
  REQUIRE_THROWS(load_json_file(garbled.string()));
  std::filesystem::remove(garbled);
}

TEST_CASE("decomposition and report serialization shapes", "[json]") {
  const BipartiteDims dims(2, 2);
  Matrix sep = Matrix::Zero(4, 4);
  sep(0, 0) = 0.5;
  sep(3, 3) = 0.5;
  const EdgeDecomposition dec = decompose_edge(DensityMatrix(dims, sep), 60, 4);
  const Json j = edge_decomposition_to_json(dec);
  REQUIRE(j.contains("p"));
  REQUIRE(j.contains("components"));
  REQUIRE(j.contains("steps"));
  REQUIRE(j["delta"].is_null());

  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  Matrix w = Matrix::Identity(4, 4) / 2.0 - v * v.adjoint();
  const WitnessReport rep = basic_report(HermitianOperator(dims, w), 60, 4);
  const Json jr = witness_report_to_json(rep);
  REQUIRE(jr.contains("witness"));
  REQUIRE(jr.contains("zero_set"));
  REQUIRE(jr.contains("zero_set_pt"));
  REQUIRE(jr["optimal_certificate"].is_string());
  REQUIRE(jr["iterations"].get<int>() == 0);
  REQUIRE(jr["nd_certificate"].is_null());
}
