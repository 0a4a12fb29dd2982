// Runs the vn executable end to end and checks exit codes and output.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "vn/serialize.hpp"

using namespace vn;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::current_path() / "cli_test_files";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

Result run(const std::string& args) {
  const std::string cmd = std::string(VN_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream(file) << text;
}

std::string read_text(const std::string& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSmallSearch = "--restarts 4 --grid 32 --fine-grid 128 --seed 7 --workers 1";

// A violating certificate shared by several cases.
const std::string& certificate_path() {
  static const std::string p = [] {
    const std::string out = path("search.json");
    const Result r = run("search --n 2 " + kSmallSearch + " --out " + out);
    REQUIRE(r.code == 0);
    return out;
  }();
  return p;
}

}  // namespace

TEST_CASE("search --n 1 is a configuration error") {
  const Result r = run("search --n 1");
  CHECK(r.code == 2);
  CHECK(r.out.find("n >= 2") != std::string::npos);
}

TEST_CASE("search writes a certificate and prints a summary") {
  const std::string cert = certificate_path();
  const Json j = read_json_file(cert);
  CHECK(j["schema"] == "vn-gap-cert/1");
  CHECK(j["violation"] == true);
  CHECK(j["seed"] == 7);
  CHECK(j["digest"].get<std::string>().size() == 16);
  const Result again = run("search --n 2 " + kSmallSearch + " --out " + path("search2.json"));
  CHECK(again.code == 0);
  CHECK(again.out.find("seed=7") != std::string::npos);
  CHECK(again.out.find("ratio_lower=") != std::string::npos);
  CHECK(again.out.find("verdict=VIOLATION") != std::string::npos);
}

TEST_CASE("a commuting B pair gives exit 3") {
  const ComplexMatrix d1 = ComplexMatrix::FromRows({{1.0, 0.0}, {0.0, -1.0}});
  const ComplexMatrix d2 = ComplexMatrix::FromRows({{Complex(0.0, 1.0), 0.0}, {0.0, 1.0}});
  write_json_file(path("commuting.json"), bpair_to_json(d1, d2));
  const Result r = run("search --n 2 --max-n 3 --restarts 2 --budget 20 --grid 16 --fine-grid 64 --b-pair " +
                       path("commuting.json") + " --out " + path("commuting_cert.json"));
  CHECK(r.code == 3);
  CHECK(r.out.find("NO_VIOLATION") != std::string::npos);
  CHECK(read_json_file(path("commuting_cert.json"))["violation"] == false);
}

TEST_CASE("a non-unitary B pair is an input error") {
  const ComplexMatrix half = ComplexMatrix::FromRows({{0.5, 0.0}, {0.0, 0.5}});
  write_json_file(path("bad_pair.json"), bpair_to_json(half, half));
  CHECK(run("search --restarts 1 --budget 5 --b-pair " + path("bad_pair.json")).code == 2);
  CHECK(run("search --restarts 1 --b-pair " + path("missing.json")).code == 2);
}

TEST_CASE("certify re-verifies a search certificate") {
  const Result r = run("certify --cert " + certificate_path() + " --fine-grid 512 --out " + path("verdict.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict=VIOLATION") != std::string::npos);
  CHECK(r.out.find("certified_upper=") != std::string::npos);
  CHECK(read_json_file(path("verdict.json"))["verdict"] == "VIOLATION");
}

TEST_CASE("certify ignores hand-edited result fields") {
  Json j = read_json_file(certificate_path());
  const double lhs = j["lhs_lower"].get<double>();
  j["ratio_lower"] = 0.5;
  j["lhs_lower"] = 0.25;
  j["violation"] = false;
  write_json_file(path("edited.json"), j);
  const Result r = run("certify --cert " + path("edited.json") + " --fine-grid 128 --out " + path("edited_verdict.json"));
  CHECK(r.code == 0);
  const Json v = read_json_file(path("edited_verdict.json"));
  CHECK(v["lhs_lower"].get<double>() == lhs);
  CHECK(v["ratio_lower"].get<double>() > 1.0);
}

TEST_CASE("certify rejects truncated and malformed files") {
  const std::string text = read_text(certificate_path());
  write_text(path("truncated.json"), text.substr(0, text.size() / 2));
  CHECK(run("certify --cert " + path("truncated.json")).code == 2);

  Json j = read_json_file(certificate_path());
  for (auto& w : j["witness"]) w = Json::array({0.0, 0.0});
  write_json_file(path("zero_witness.json"), j);
  CHECK(run("certify --cert " + path("zero_witness.json")).code == 2);

  CHECK(run("certify").code == 2);
}

TEST_CASE("certify of a non-violating certificate exits 3") {
  Json j = read_json_file(certificate_path());
  const Json id = matrix_to_pairs(ComplexMatrix::Identity(2));
  j["a1"] = id;
  j["a2"] = id;
  j["a3"] = id;
  write_json_file(path("identity.json"), j);
  const Result r = run("certify --cert " + path("identity.json") + " --fine-grid 64");
  CHECK(r.code == 3);
  CHECK(r.out.find("NO_VIOLATION") != std::string::npos);
}

TEST_CASE("verify on the assembled counterexample reports holds=false") {
  const Result r = run("verify --cert " + certificate_path() + " --grid 64 --out " + path("report.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("holds=false") != std::string::npos);
  const Json rep = read_json_file(path("report.json"));
  CHECK(rep["schema"] == "vn-inequality-report/1");
  CHECK(rep["holds"] == false);
}

TEST_CASE("verify from polynomial and tuple files") {
  MatrixPolynomial p(1, 1);
  p.add_term(MultiIndex({1}), ComplexMatrix(1, 1, {1.0}));
  write_json_file(path("z.json"), polynomial_to_json(p));
  write_json_file(path("unitary.json"), tuple_to_json(ContractionTuple({ComplexMatrix::FromRows({{0.0, 1.0}, {1.0, 0.0}})})));
  const Result r = run("verify --poly " + path("z.json") + " --tuple " + path("unitary.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("holds=true") != std::string::npos);
  CHECK(r.out.find("ratio_estimate=1 ") != std::string::npos);

  const auto [b1, b2] = pauli_pair();
  write_json_file(path("noncommuting.json"), tuple_to_json(ContractionTuple({b1, b2})));
  MatrixPolynomial q(2, 1);
  q.add_term(MultiIndex({1, 0}), ComplexMatrix(1, 1, {1.0}));
  write_json_file(path("z1.json"), polynomial_to_json(q));
  CHECK(run("verify --poly " + path("z1.json") + " --tuple " + path("noncommuting.json")).code == 2);
  CHECK(run("verify --poly " + path("z1.json")).code == 2);
}

TEST_CASE("suite passes") {
  const Result r = run("suite --trials 10 --seed 1 --out " + path("suite.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("scalar-affine: 10/10") != std::string::npos);
  CHECK(r.out.find("seed=1") != std::string::npos);
  const Json j = read_json_file(path("suite.json"));
  REQUIRE(j.size() == 3);
  CHECK(j[0]["schema"] == "vn-suite-report/1");
  CHECK(run("suite --which n1 --trials 5").code == 0);
  CHECK(run("suite --which bogus").code == 2);
}

TEST_CASE("norm computations") {
  const ComplexMatrix e11 = ComplexMatrix::FromRows({{1.0, 0.0}, {0.0, 0.0}});
  const ComplexMatrix e22 = ComplexMatrix::FromRows({{0.0, 0.0}, {0.0, 1.0}});
  const std::vector<ComplexMatrix> coeffs{e11, e22, ComplexMatrix::Identity(2)};
  write_json_file(path("diag.json"), polynomial_to_json(linear_pencil(coeffs)));
  const Result r = run("norm --op torus-sup --grid 16 --input " + path("diag.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("value=2\n") != std::string::npos);
  CHECK(run("norm --op polydisk-sup --grid 16 --input " + path("diag.json")).out.find("domain=polydisk") !=
        std::string::npos);

  write_json_file(path("m.json"), matrix_file_to_json(ComplexMatrix::FromRows({{0.0, 2.0}, {0.0, 0.0}})));
  const Result m = run("norm --op op-norm --input " + path("m.json"));
  CHECK(m.code == 0);
  CHECK(m.out.find("value=2\n") != std::string::npos);

  CHECK(run("norm --op op-norm --input " + path("diag.json")).code == 2);
  CHECK(run("norm --op frobenius --input " + path("diag.json")).code == 2);
  CHECK(run("norm --op torus-sup --grid 2 --input " + path("diag.json")).code == 2);
}

TEST_CASE("config file: values apply, flags win, unknown keys fail") {
  write_text(path("run.ini"), "seed = 5\nrestarts = 3\ngrid = 16\nfine-grid = 64\nbudget = 30\nmax-n = 2\n");
  const Result r = run("search --config " + path("run.ini") + " --restarts 2 --out " + path("cfg.json"));
  CHECK((r.code == 0 || r.code == 3));
  const Json j = read_json_file(path("cfg.json"));
  CHECK(j["seed"] == 5);
  CHECK(j["search_meta"]["restarts"] == 2);
  CHECK(j["search_meta"]["budget"] == 30);
  CHECK(j["rhs_result"]["grid_points_per_dim"] == 64);

  write_text(path("bad.ini"), "seed = 5\ncolour = blue\n");
  CHECK(run("search --config " + path("bad.ini")).code == 2);
  write_text(path("range.ini"), "restarts = 0\n");
  CHECK(run("search --config " + path("range.ini")).code == 2);
}

TEST_CASE("identical config and seed give identical certificates") {
  const std::string args = "search --n 2 --restarts 3 --grid 16 --fine-grid 64 --budget 60 --seed 9 --max-n 2";
  run(args + " --workers 1 --out " + path("det1.json"));
  run(args + " --workers 2 --out " + path("det2.json"));
  Json a = read_json_file(path("det1.json"));
  Json b = read_json_file(path("det2.json"));
  a.erase("provenance");
  b.erase("provenance");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("plain output when stdout is not a terminal") {
  const Result r = run("certify --cert " + certificate_path() + " --fine-grid 64");
  CHECK(r.out.find('\033') == std::string::npos);
}

TEST_CASE("unknown commands and flags are input errors") {
  CHECK(run("frobnicate").code == 2);
  CHECK(run("search --frobnicate 1").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
}
