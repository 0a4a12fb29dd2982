#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "vn/random.hpp"
#include "vn/serialize.hpp"

using namespace vn;

namespace {

GapCertificate small_certificate() {
  SearchOptions o;
  o.restarts = 2;
  o.seed = 3;
  o.grid = 16;
  o.fine_grid = 64;
  o.budget = 20;
  return search(2, pauli_pair(), o);
}

}  // namespace

TEST_CASE("matrix encodings") {
  const ComplexMatrix m = ComplexMatrix::FromRows({{Complex(1.0, -2.0), 0.5}, {0.0, Complex(0.0, 1.0)}});
  const Json pairs = matrix_to_pairs(m);
  CHECK(pairs.dump() == "[[[1.0,-2.0],[0.5,0.0]],[[0.0,0.0],[0.0,1.0]]]");
  CHECK(matrix_from_pairs(pairs) == m);
  const Json split = matrix_to_split(m);
  CHECK(matrix_from_split(split["real"], split["imag"]) == m);

  CHECK_THROWS_AS(matrix_from_pairs(Json::parse("[]")), SchemaError);
  CHECK_THROWS_AS(matrix_from_pairs(Json::parse("[[[1,0]],[[1,0],[2,0]]]")), SchemaError);
  CHECK_THROWS_AS(matrix_from_pairs(Json::parse("[[[1,0,3]]]")), SchemaError);
  CHECK_THROWS_AS(matrix_from_pairs(Json::parse("[[[\"x\",0]]]")), SchemaError);
  CHECK_THROWS_AS(matrix_from_split(Json::parse("[[1]]"), Json::parse("[[1,2]]")), SchemaError);
}

TEST_CASE("polynomial round trip") {
  const MatrixPolynomial p = random_matrix_polynomial(3, 2, 2, 1);
  const Json j = polynomial_to_json(p);
  CHECK(j["schema"] == "vn-polynomial/1");
  CHECK(polynomial_from_json(j) == p);
  CHECK(polynomial_from_json(Json::parse(j.dump())) == p);
}

TEST_CASE("polynomial schema errors") {
  const Json good = polynomial_to_json(random_matrix_polynomial(1, 1, 1, 2));
  Json wrong_schema = good;
  wrong_schema["schema"] = "vn-polynomial/2";
  CHECK_THROWS_AS(polynomial_from_json(wrong_schema), SchemaError);
  Json extra = good;
  extra["colour"] = 1;
  CHECK_THROWS_AS(polynomial_from_json(extra), SchemaError);
  Json missing = good;
  missing.erase("num_vars");
  CHECK_THROWS_AS(polynomial_from_json(missing), SchemaError);
  Json negative = good;
  negative["terms"][0]["multi_index"][0] = -1;
  CHECK_THROWS_AS(polynomial_from_json(negative), SchemaError);
  Json arity = good;
  arity["terms"][0]["multi_index"] = Json::array({0, 0});
  CHECK_THROWS_AS(polynomial_from_json(arity), SchemaError);
  CHECK_THROWS_AS(polynomial_from_json(Json::array()), SchemaError);
}

TEST_CASE("tuple round trip keeps tolerances, including infinity") {
  const ContractionTuple t = random_contraction_tuple(3, 2, 4);
  const Json j = tuple_to_json(t);
  CHECK(j["commutativity_tol"].is_null());
  const ContractionTuple back = tuple_from_json(Json::parse(j.dump()));
  CHECK(back.operators() == t.operators());
  CHECK(back.commutativity_tol() == ContractionTuple::kNoCommutativity);
  CHECK(back.contraction_tol() == t.contraction_tol());

  const auto [b1, b2] = pauli_pair();
  const ContractionTuple p = parrott_triple(b1, b2);
  CHECK(tuple_from_json(tuple_to_json(p)).commutativity_tol() == 0.0);
}

TEST_CASE("bpair and matrix files") {
  const auto [b1, b2] = pauli_pair();
  const auto back = bpair_from_json(bpair_to_json(b1, b2));
  CHECK(back.first == b1);
  CHECK(back.second == b2);
  const ComplexMatrix m = Rng(5).matrix(2, 3);
  CHECK(matrix_file_from_json(matrix_file_to_json(m)) == m);
  CHECK_THROWS_AS(bpair_from_json(matrix_file_to_json(m)), SchemaError);
}

TEST_CASE("certificate round trip") {
  const GapCertificate cert = small_certificate();
  const Json j = certificate_to_json(cert, "2026-01-01T00:00:00Z");
  const GapCertificate back = certificate_from_json(Json::parse(j.dump(2)));
  CHECK(canonical_certificate_json(back) == canonical_certificate_json(cert));
  CHECK(back.a == cert.a);
  CHECK(back.witness == cert.witness);
  CHECK(back.rhs.certified_upper == cert.rhs.certified_upper);
  CHECK(j["digest"] == digest_hex(canonical_certificate_json(cert)));
  CHECK(j["provenance"]["created_utc"] == "2026-01-01T00:00:00Z");
}

TEST_CASE("certificate schema errors") {
  const Json good = certificate_to_json(small_certificate());
  for (const char* key : {"n", "a1", "witness", "rhs_result", "search_meta", "seed"}) {
    Json broken = good;
    broken.erase(key);
    CHECK_THROWS_AS(certificate_from_json(broken), SchemaError);
  }
  Json extra = good;
  extra["note"] = "hand edited";
  CHECK_THROWS_AS(certificate_from_json(extra), SchemaError);
  Json wrong_d = good;
  wrong_d["d"] = 3;
  CHECK_THROWS_AS(certificate_from_json(wrong_d), SchemaError);
  Json schema = good;
  schema["schema"] = "vn-gap-cert/0";
  CHECK_THROWS_AS(certificate_from_json(schema), SchemaError);
  Json violation = good;
  violation["violation"] = "yes";
  CHECK_THROWS_AS(certificate_from_json(violation), SchemaError);
  Json nan_lhs = good;
  nan_lhs["lhs_lower"] = "NaN";
  CHECK_THROWS_AS(certificate_from_json(nan_lhs), SchemaError);
}

TEST_CASE("digest is FNV-1a of the compact dump") {
  // 64-bit FNV-1a of the bytes "{}" and of the raw-number dump "0",
  // computed independently.
  CHECK(digest_hex(Json::parse("{}")) == "08f44b07b5901a25");
  CHECK(digest_hex(Json(0)) == "af63ad4c86019caf");
  CHECK(digest_hex(Json::parse("{\"b\":1,\"a\":2}")) == digest_hex(Json::parse("{\"a\":2,\"b\":1}")));
  CHECK(digest_hex(Json::parse("[1,2]")) != digest_hex(Json::parse("[2,1]")));
}

TEST_CASE("reports serialize with their schemas") {
  const InequalityReport r{1.0, 2.0, 0.5, 1.9, 1.0 / 1.9, true, 1e-9, 64, "0123456789abcdef"};
  const Json j = inequality_report_to_json(r);
  CHECK(j["schema"] == "vn-inequality-report/1");
  CHECK(j["holds"] == true);
  const SuiteReport s = n1_suite(3, 1, 1e-6);
  const Json sj = suite_report_to_json(s);
  CHECK(sj["schema"] == "vn-suite-report/1");
  CHECK(sj["ok"] == true);
  CHECK(sj["trials"] == 3);
  const auto [b1, b2] = pauli_pair();
  const Json vj = validation_report_to_json(validate(ContractionTuple({b1, b2})));
  CHECK(vj["accepted"] == false);
  CHECK(vj["commutators"][0]["norm"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("file round trip and read errors") {
  const auto dir = std::filesystem::temp_directory_path() / "vn_serialize_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.json").string();
  const ComplexMatrix m = Rng(6).matrix(2, 2);
  write_json_file(path, matrix_file_to_json(m));
  CHECK(matrix_file_from_json(read_json_file(path)) == m);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{\"schema\": \"vn-matrix/1\", \"matrix\": [[[1", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_json_file(path), SchemaError);
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), SchemaError);
  std::filesystem::remove_all(dir);
}

// Properties.

TEST_CASE("property: doubles survive a dump/parse round trip bit for bit") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix m = rng.matrix(1 + trial % 3, 1 + trial % 4);
    ComplexMatrix scaled = m;
    scaled *= std::pow(10.0, rng.uniform(-30.0, 30.0));
    CHECK(matrix_from_pairs(Json::parse(matrix_to_pairs(scaled).dump())) == scaled);
  }
}

TEST_CASE("property: polynomial and tuple round trips over random instances") {
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixPolynomial p = random_matrix_polynomial(1 + trial % 3, 1 + trial % 2, trial % 4, 100 + trial);
    CHECK(polynomial_from_json(Json::parse(polynomial_to_json(p).dump())) == p);
    const ContractionTuple t = random_commuting_tuple(1 + trial % 3, 1 + trial % 4, 200 + trial);
    const ContractionTuple back = tuple_from_json(Json::parse(tuple_to_json(t).dump()));
    CHECK(back.operators() == t.operators());
    CHECK(back.commutativity_tol() == t.commutativity_tol());
  }
}

TEST_CASE("property: digests are stable across re-encoding") {
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixPolynomial p = random_matrix_polynomial(2, 2, 2, 300 + trial);
    const ContractionTuple t = random_commuting_tuple(2, 2, 400 + trial);
    const Json j = instance_to_json(p, t);
    const Json again = instance_to_json(polynomial_from_json(j["polynomial"]), tuple_from_json(j["tuple"]));
    CHECK(digest_hex(j) == digest_hex(again));
  }
}
