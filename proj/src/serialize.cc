#include "vn/serialize.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vn {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
  return *it;
}

void require_schema(const Json& j, const std::string& schema) {
  const Json& s = require(j, "schema");
  if (!s.is_string() || s.get<std::string>() != schema) {
    throw SchemaError("expected schema \"" + schema + "\", got " + s.dump());
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw SchemaError("unknown field \"" + key + "\"");
  }
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(std::string(what) + " must be finite");
  return x;
}

std::size_t positive_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw SchemaError(std::string(what) + " must be a positive integer");
  }
  return j.get<std::size_t>();
}

Complex pair_value(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("complex entries are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

ComplexMatrix build(std::size_t rows, std::size_t cols, std::vector<Complex> entries) {
  try {
    return ComplexMatrix(rows, cols, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json real_rows(const ComplexMatrix& m, bool imag) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace

Json matrix_to_pairs(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_pairs(const Json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw SchemaError("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw SchemaError("ragged matrix rows");
    for (const auto& x : row) entries.push_back(pair_value(x));
  }
  return build(rows, cols, std::move(entries));
}

Json matrix_to_split(const ComplexMatrix& m) {
  return {{"real", real_rows(m, false)}, {"imag", real_rows(m, true)}};
}

ComplexMatrix matrix_from_split(const Json& real, const Json& imag) {
  if (!real.is_array() || !imag.is_array() || real.empty() || real.size() != imag.size()) {
    throw SchemaError("real and imaginary parts must be arrays of equal shape");
  }
  const std::size_t rows = real.size();
  const std::size_t cols = real[0].is_array() ? real[0].size() : 0;
  if (cols == 0) throw SchemaError("matrix rows must be nonempty arrays");
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!real[i].is_array() || !imag[i].is_array() || real[i].size() != cols ||
        imag[i].size() != cols) {
      throw SchemaError("ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      entries.emplace_back(number(real[i][c], "real part"), number(imag[i][c], "imaginary part"));
    }
  }
  return build(rows, cols, std::move(entries));
}

Json vector_to_pairs(std::span<const Complex> v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back({x.real(), x.imag()});
  return out;
}

ComplexVector vector_from_pairs(const Json& j) {
  if (!j.is_array()) throw SchemaError("vector must be an array of [re, im] pairs");
  ComplexVector v;
  for (const auto& x : j) v.push_back(pair_value(x));
  return v;
}

Json polynomial_to_json(const MatrixPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [t, a] : p.terms()) {
    terms.push_back({{"multi_index", t.components()},
                     {"coeff_real", real_rows(a, false)},
                     {"coeff_imag", real_rows(a, true)}});
  }
  return {{"schema", "vn-polynomial/1"},
          {"num_vars", p.num_vars()},
          {"coeff_dim", p.coeff_dim()},
          {"terms", std::move(terms)}};
}

MatrixPolynomial polynomial_from_json(const Json& j) {
  require_schema(j, "vn-polynomial/1");
  reject_unknown(j, {"schema", "num_vars", "coeff_dim", "terms"});
  const std::size_t num_vars = positive_size(require(j, "num_vars"), "num_vars");
  const std::size_t coeff_dim = positive_size(require(j, "coeff_dim"), "coeff_dim");
  const Json& terms = require(j, "terms");
  if (!terms.is_array()) throw SchemaError("terms must be an array");
  MatrixPolynomial p(num_vars, coeff_dim);
  for (const auto& term : terms) {
    reject_unknown(term, {"multi_index", "coeff_real", "coeff_imag"});
    const Json& mi = require(term, "multi_index");
    if (!mi.is_array()) throw SchemaError("multi_index must be an array");
    std::vector<int> components;
    for (const auto& c : mi) {
      if (!c.is_number_integer() || c.get<long long>() < 0) {
        throw SchemaError("multi_index entries must be nonnegative integers");
      }
      components.push_back(c.get<int>());
    }
    try {
      p.add_term(MultiIndex(std::move(components)),
                 matrix_from_split(require(term, "coeff_real"), require(term, "coeff_imag")));
    } catch (const DimensionError& e) {
      throw SchemaError(e.what());
    }
  }
  return p;
}

Json tuple_to_json(const ContractionTuple& t) {
  Json ops = Json::array();
  for (const auto& op : t.operators()) ops.push_back(matrix_to_split(op));
  Json comm = std::isfinite(t.commutativity_tol()) ? Json(t.commutativity_tol()) : Json(nullptr);
  return {{"schema", "vn-tuple/1"},
          {"operators", std::move(ops)},
          {"contraction_tol", t.contraction_tol()},
          {"commutativity_tol", std::move(comm)}};
}

ContractionTuple tuple_from_json(const Json& j) {
  require_schema(j, "vn-tuple/1");
  reject_unknown(j, {"schema", "operators", "contraction_tol", "commutativity_tol"});
  const Json& ops = require(j, "operators");
  if (!ops.is_array() || ops.empty()) throw SchemaError("operators must be a nonempty array");
  std::vector<ComplexMatrix> matrices;
  for (const auto& op : ops) matrices.push_back(matrix_from_split(require(op, "real"), require(op, "imag")));
  double contraction_tol = ContractionTuple::kDefaultContractionTol;
  double commutativity_tol = ContractionTuple::kDefaultCommutativityTol;
  if (j.contains("contraction_tol")) contraction_tol = number(j["contraction_tol"], "contraction_tol");
  if (j.contains("commutativity_tol")) {
    commutativity_tol = j["commutativity_tol"].is_null()
                            ? ContractionTuple::kNoCommutativity
                            : number(j["commutativity_tol"], "commutativity_tol");
  }
  try {
    return ContractionTuple(std::move(matrices), contraction_tol, commutativity_tol);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json bpair_to_json(const ComplexMatrix& b1, const ComplexMatrix& b2) {
  return {{"schema", "vn-bpair/1"}, {"b1", matrix_to_pairs(b1)}, {"b2", matrix_to_pairs(b2)}};
}

std::pair<ComplexMatrix, ComplexMatrix> bpair_from_json(const Json& j) {
  require_schema(j, "vn-bpair/1");
  reject_unknown(j, {"schema", "b1", "b2"});
  return {matrix_from_pairs(require(j, "b1")), matrix_from_pairs(require(j, "b2"))};
}

Json matrix_file_to_json(const ComplexMatrix& m) {
  return {{"schema", "vn-matrix/1"}, {"matrix", matrix_to_pairs(m)}};
}

ComplexMatrix matrix_file_from_json(const Json& j) {
  require_schema(j, "vn-matrix/1");
  reject_unknown(j, {"schema", "matrix"});
  return matrix_from_pairs(require(j, "matrix"));
}

Json torus_sup_to_json(const TorusSupResult& r) {
  return {{"best_value", r.best_value},
          {"best_point", r.best_point.angles},
          {"certified_upper", r.certified_upper},
          {"grid_max", r.grid_max},
          {"grid_step", r.grid_step},
          {"grid_points_per_dim", r.grid_points_per_dim},
          {"lipschitz_bound", r.lipschitz_bound},
          {"refined", r.refined},
          {"domain", r.domain}};
}

TorusSupResult torus_sup_from_json(const Json& j) {
  TorusSupResult r;
  r.best_value = number(require(j, "best_value"), "best_value");
  const Json& point = require(j, "best_point");
  if (!point.is_array()) throw SchemaError("best_point must be an array of angles");
  for (const auto& a : point) r.best_point.angles.push_back(number(a, "angle"));
  r.certified_upper = number(require(j, "certified_upper"), "certified_upper");
  r.grid_max = number(require(j, "grid_max"), "grid_max");
  r.grid_step = number(require(j, "grid_step"), "grid_step");
  r.grid_points_per_dim =
      static_cast<int>(positive_size(require(j, "grid_points_per_dim"), "grid_points_per_dim"));
  r.lipschitz_bound = number(require(j, "lipschitz_bound"), "lipschitz_bound");
  const Json& refined = require(j, "refined");
  if (!refined.is_boolean()) throw SchemaError("refined must be a boolean");
  r.refined = refined.get<bool>();
  const Json& domain = require(j, "domain");
  if (!domain.is_string()) throw SchemaError("domain must be a string");
  r.domain = domain.get<std::string>();
  return r;
}

Json canonical_certificate_json(const GapCertificate& cert) {
  Json attempts = Json::array();
  for (const auto& a : cert.meta.attempts) {
    attempts.push_back({{"n", a.n},
                        {"evaluations", a.evaluations},
                        {"best_restart", a.best_restart},
                        {"best_objective", a.best_objective},
                        {"ratio_lower", a.ratio_lower},
                        {"violation", a.violation}});
  }
  return {{"schema", kCertificateSchema},
          {"n", cert.n},
          {"d", cert.b1.rows()},
          {"a1", matrix_to_pairs(cert.a[0])},
          {"a2", matrix_to_pairs(cert.a[1])},
          {"a3", matrix_to_pairs(cert.a[2])},
          {"b1", matrix_to_pairs(cert.b1)},
          {"b2", matrix_to_pairs(cert.b2)},
          {"witness", vector_to_pairs(cert.witness)},
          {"lhs_lower", cert.lhs_lower},
          {"rhs_result", torus_sup_to_json(cert.rhs)},
          {"ratio_lower", cert.ratio_lower},
          {"violation", cert.violation},
          {"seed", cert.seed},
          {"search_meta",
           {{"restarts", cert.meta.restarts},
            {"budget", cert.meta.budget},
            {"grid", cert.meta.grid},
            {"attempts", std::move(attempts)}}}};
}

Json certificate_to_json(const GapCertificate& cert, const std::string& created_utc) {
  Json j = canonical_certificate_json(cert);
  j["digest"] = digest_hex(j);
  j["provenance"] = {{"created_utc", created_utc},
                     {"wall_time_seconds", cert.meta.wall_time_seconds}};
  return j;
}

GapCertificate certificate_from_json(const Json& j) {
  require_schema(j, kCertificateSchema);
  reject_unknown(j, {"schema", "n", "d", "a1", "a2", "a3", "b1", "b2", "witness", "lhs_lower",
                     "rhs_result", "ratio_lower", "violation", "seed", "search_meta", "digest",
                     "provenance"});
  GapCertificate cert;
  cert.n = positive_size(require(j, "n"), "n");
  cert.a = {matrix_from_pairs(require(j, "a1")), matrix_from_pairs(require(j, "a2")),
            matrix_from_pairs(require(j, "a3"))};
  cert.b1 = matrix_from_pairs(require(j, "b1"));
  cert.b2 = matrix_from_pairs(require(j, "b2"));
  if (positive_size(require(j, "d"), "d") != cert.b1.rows()) {
    throw SchemaError("d does not match the B blocks");
  }
  cert.witness = vector_from_pairs(require(j, "witness"));
  cert.lhs_lower = number(require(j, "lhs_lower"), "lhs_lower");
  cert.rhs = torus_sup_from_json(require(j, "rhs_result"));
  cert.ratio_lower = number(require(j, "ratio_lower"), "ratio_lower");
  const Json& violation = require(j, "violation");
  if (!violation.is_boolean()) throw SchemaError("violation must be a boolean");
  cert.violation = violation.get<bool>();
  const Json& seed = require(j, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw SchemaError("seed must be a nonnegative integer");
  }
  cert.seed = seed.get<std::uint64_t>();
  const Json& meta = require(j, "search_meta");
  cert.meta.restarts = static_cast<int>(number(require(meta, "restarts"), "restarts"));
  cert.meta.budget = static_cast<long>(number(require(meta, "budget"), "budget"));
  cert.meta.grid = static_cast<int>(number(require(meta, "grid"), "grid"));
  const Json& attempts = require(meta, "attempts");
  if (!attempts.is_array()) throw SchemaError("attempts must be an array");
  for (const auto& a : attempts) {
    SearchAttempt at;
    at.n = positive_size(require(a, "n"), "n");
    at.evaluations = static_cast<long>(number(require(a, "evaluations"), "evaluations"));
    at.best_restart = static_cast<int>(number(require(a, "best_restart"), "best_restart"));
    at.best_objective = number(require(a, "best_objective"), "best_objective");
    at.ratio_lower = number(require(a, "ratio_lower"), "ratio_lower");
    const Json& v = require(a, "violation");
    if (!v.is_boolean()) throw SchemaError("attempt violation must be a boolean");
    at.violation = v.get<bool>();
    cert.meta.attempts.push_back(at);
  }
  if (j.contains("provenance") && j["provenance"].contains("wall_time_seconds")) {
    cert.meta.wall_time_seconds = number(j["provenance"]["wall_time_seconds"], "wall_time_seconds");
  }
  return cert;
}

Json instance_to_json(const MatrixPolynomial& p, const ContractionTuple& t) {
  return {{"polynomial", polynomial_to_json(p)}, {"tuple", tuple_to_json(t)}};
}

Json inequality_report_to_json(const InequalityReport& r) {
  return {{"schema", "vn-inequality-report/1"},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"ratio", r.ratio},
          {"rhs_estimate", r.rhs_estimate},
          {"ratio_estimate", r.ratio_estimate},
          {"holds", r.holds},
          {"tol", r.tol},
          {"grid_points_per_dim", r.grid_points_per_dim},
          {"digest", r.digest}};
}

Json suite_report_to_json(const SuiteReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"trial", f.trial},
                        {"seed", f.seed},
                        {"ratio", f.ratio},
                        {"instance", instance_to_json(f.polynomial, f.tuple)}});
  }
  return {{"schema", "vn-suite-report/1"},
          {"name", r.name},
          {"trials", r.trials},
          {"seed", r.seed},
          {"tol", r.tol},
          {"passed", r.passed},
          {"max_ratio", r.max_ratio},
          {"worst_trial", r.worst_trial},
          {"ok", r.ok()},
          {"failures", std::move(failures)}};
}

Json validation_report_to_json(const ValidationReport& r) {
  Json commutators = Json::array();
  for (const auto& c : r.commutators) {
    commutators.push_back({{"pair", {c.first, c.second}}, {"norm", c.norm}});
  }
  return {{"accepted", r.accepted},
          {"norms", r.norms},
          {"norm_margins", r.norm_margins},
          {"commutators", std::move(commutators)},
          {"failures", r.failures}};
}

Json verdict_to_json(const CertifiedVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"lhs_lower", v.lhs_lower},
          {"rhs_result", torus_sup_to_json(v.rhs)},
          {"ratio_lower", v.ratio_lower}};
}

std::string digest_hex(const Json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace vn
