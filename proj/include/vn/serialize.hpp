// JSON encodings shared by the library and the command-line tool.
//
//   matrix (pair form):  [[[re, im], ...], ...]            rows of pairs
//   matrix (split form): {"real": [[...]], "imag": [[...]]}
//   polynomial  "vn-polynomial/1": num_vars, coeff_dim,
//               terms: [{multi_index, coeff_real, coeff_imag}]
//   tuple       "vn-tuple/1": operators (split form), contraction_tol,
//               commutativity_tol (null: commutativity not required)
//   B pair      "vn-bpair/1": b1, b2 (pair form)
//   matrix file "vn-matrix/1": matrix (pair form)
//   certificate "vn-gap-cert/1": see certificate_to_json
//
// Objects are written with sorted keys and shortest round-trip doubles, so
// the dump of a value is canonical and its digest is stable.
#pragma once

#include "json.hpp"

#include <string>

#include "vn/gap_search.hpp"
#include "vn/verify.hpp"

namespace vn {

using Json = nlohmann::json;

/// Input JSON does not match the expected schema.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json matrix_to_pairs(const ComplexMatrix& m);
ComplexMatrix matrix_from_pairs(const Json& j);
Json matrix_to_split(const ComplexMatrix& m);
ComplexMatrix matrix_from_split(const Json& real, const Json& imag);
Json vector_to_pairs(std::span<const Complex> v);
ComplexVector vector_from_pairs(const Json& j);

Json polynomial_to_json(const MatrixPolynomial& p);
MatrixPolynomial polynomial_from_json(const Json& j);

Json tuple_to_json(const ContractionTuple& t);
ContractionTuple tuple_from_json(const Json& j);

Json bpair_to_json(const ComplexMatrix& b1, const ComplexMatrix& b2);
std::pair<ComplexMatrix, ComplexMatrix> bpair_from_json(const Json& j);

Json matrix_file_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_file_from_json(const Json& j);

Json torus_sup_to_json(const TorusSupResult& r);
TorusSupResult torus_sup_from_json(const Json& j);

/// Full certificate, including the "provenance" object (creation time and
/// wall time) that is excluded from the digest.
Json certificate_to_json(const GapCertificate& cert, const std::string& created_utc = "");
GapCertificate certificate_from_json(const Json& j);

/// Certificate without its provenance: identical for identical searches.
Json canonical_certificate_json(const GapCertificate& cert);

Json instance_to_json(const MatrixPolynomial& p, const ContractionTuple& t);
Json inequality_report_to_json(const InequalityReport& r);
Json suite_report_to_json(const SuiteReport& r);
Json validation_report_to_json(const ValidationReport& r);
Json verdict_to_json(const CertifiedVerdict& v);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string digest_hex(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace vn
