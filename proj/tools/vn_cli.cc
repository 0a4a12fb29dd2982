// vn: search for, certify and inspect counterexamples to the generalized
// von Neumann inequality, and run the regression suites.
//
// Exit codes: 0 success (or violation certified), 1 suite failure,
// 2 input or configuration error, 3 no violation, 4 non-convergence.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "vn/gap_search.hpp"
#include "vn/serialize.hpp"
#include "vn/verify.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kSuiteFailure = 1,
  kInputError = 2,
  kNoViolation = 3,
  kNonConvergence = 4,
};

struct RunConfig {
  std::size_t n = 2;
  std::size_t max_n = 4;
  int restarts = 200;
  long budget = 0;
  std::uint64_t seed = 0;
  int grid = 0;  // 0: the command's own default
  int fine_grid = vn::kCertificationGridPoints;
  std::optional<double> tol;
  std::string b_pair = "pauli";
  std::string out;
  int workers = 1;
  std::string poly;
  std::string tuple;
  std::string cert;
  std::string input;
  std::string op = "torus-sup";
  std::string which = "all";
  int trials = 100;
};

class Style {
 public:
  Style() : enabled_(std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO)) {}
  std::string verdict(const std::string& text, bool good) const {
    if (!enabled_) return text;
    return (good ? "\033[1;32m" : "\033[1;31m") + text + "\033[0m";
  }

 private:
  bool enabled_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::pair<vn::ComplexMatrix, vn::ComplexMatrix> load_b_pair(const std::string& source) {
  if (source == "pauli") return vn::pauli_pair();
  return vn::bpair_from_json(vn::read_json_file(source));
}

void write_if_requested(const RunConfig& cfg, const vn::Json& j) {
  if (!cfg.out.empty()) vn::write_json_file(cfg.out, j);
}

int cmd_search(const RunConfig& cfg, const Style& style) {
  if (cfg.n < 2) throw ConfigError("search needs --n >= 2 (n = 1 has no gap)");
  if (cfg.max_n < cfg.n) throw ConfigError("--max-n must be at least --n");
  const auto b_pair = load_b_pair(cfg.b_pair);

  vn::SearchOptions opts;
  opts.restarts = cfg.restarts;
  opts.budget = cfg.budget;
  opts.seed = cfg.seed;
  opts.grid = cfg.grid > 0 ? cfg.grid : vn::kSearchGridPoints;
  opts.fine_grid = cfg.fine_grid;
  opts.workers = cfg.workers;

  const vn::GapCertificate cert = vn::search_escalating(b_pair, cfg.n, cfg.max_n, opts);
  const std::string out = cfg.out.empty() ? "certificate.json" : cfg.out;
  vn::write_json_file(out, vn::certificate_to_json(cert, utc_now()));

  for (const auto& a : cert.meta.attempts) {
    std::cout << "n=" << a.n << " evaluations=" << a.evaluations << " best_restart=" << a.best_restart
              << " objective=" << fmt(a.best_objective) << " ratio_lower=" << fmt(a.ratio_lower)
              << (a.violation ? " violation" : "") << "\n";
  }
  std::cout << "seed=" << cert.seed << " n=" << cert.n << " lhs_lower=" << fmt(cert.lhs_lower)
            << " certified_upper=" << fmt(cert.rhs.certified_upper)
            << " ratio_lower=" << fmt(cert.ratio_lower)
            << " wall_time=" << fmt(cert.meta.wall_time_seconds) << "s\n";
  std::cout << "verdict="
            << style.verdict(cert.violation ? "VIOLATION" : "NO_VIOLATION", cert.violation)
            << " certificate=" << out << "\n";
  return cert.violation ? kOk : kNoViolation;
}

vn::GapCertificate load_certificate(const RunConfig& cfg) {
  if (cfg.cert.empty()) throw ConfigError("--cert is required");
  return vn::certificate_from_json(vn::read_json_file(cfg.cert));
}

int cmd_certify(const RunConfig& cfg, const Style& style) {
  const vn::GapCertificate cert = load_certificate(cfg);
  const vn::CertifiedVerdict v = vn::certify(cert, cfg.fine_grid, cfg.workers);
  const bool violation = v.verdict == vn::Verdict::kViolation;
  std::cout << "seed=" << cert.seed << " n=" << cert.n << " grid=" << cfg.fine_grid << "\n";
  std::cout << "lhs_lower=" << fmt(v.lhs_lower) << " certified_upper=" << fmt(v.rhs.certified_upper)
            << " ratio_lower=" << fmt(v.ratio_lower) << "\n";
  std::cout << "verdict=" << style.verdict(vn::to_string(v.verdict), violation) << "\n";
  write_if_requested(cfg, vn::verdict_to_json(v));
  return violation ? kOk : kNoViolation;
}

void print_report(const vn::InequalityReport& r, const Style& style) {
  std::cout << "lhs=" << fmt(r.lhs) << " rhs=" << fmt(r.rhs) << " ratio=" << fmt(r.ratio) << "\n";
  std::cout << "rhs_estimate=" << fmt(r.rhs_estimate) << " ratio_estimate=" << fmt(r.ratio_estimate)
            << " grid=" << r.grid_points_per_dim << " tol=" << fmt(r.tol) << "\n";
  std::cout << "holds=" << style.verdict(r.holds ? "true" : "false", r.holds) << " digest=" << r.digest
            << "\n";
}

int cmd_verify(const RunConfig& cfg, const Style& style) {
  const double tol = cfg.tol.value_or(1e-9);
  vn::InequalityReport report;
  if (!cfg.cert.empty()) {
    if (!cfg.poly.empty() || !cfg.tuple.empty()) {
      throw ConfigError("give either --cert or --poly/--tuple, not both");
    }
    const vn::GapCertificate cert = load_certificate(cfg);
    const vn::Counterexample c = vn::assemble_counterexample(cert, 64, cfg.workers);
    std::cout << "assembled Parrott triple from " << cfg.cert << " (seed=" << cert.seed << ")\n";
    report = vn::check_inequality(c.pencil, c.triple, tol, cfg.grid, cfg.workers);
  } else {
    if (cfg.poly.empty() || cfg.tuple.empty()) throw ConfigError("verify needs --poly and --tuple, or --cert");
    const vn::MatrixPolynomial p = vn::polynomial_from_json(vn::read_json_file(cfg.poly));
    const vn::ContractionTuple t = vn::tuple_from_json(vn::read_json_file(cfg.tuple));
    report = vn::check_inequality(p, t, tol, cfg.grid, cfg.workers);
  }
  print_report(report, style);
  write_if_requested(cfg, vn::inequality_report_to_json(report));
  return kOk;
}

int cmd_suite(const RunConfig& cfg, const Style& style) {
  struct Entry {
    const char* name;
    vn::SuiteReport (*run)(int, std::uint64_t, double);
    double default_tol;
  };
  const Entry entries[] = {{"scalar-affine", vn::scalar_affine_suite, 1e-8},
                           {"n1", vn::n1_suite, 1e-6},
                           {"ando", vn::ando_suite, 1e-6}};
  if (cfg.which != "all" && cfg.which != "scalar-affine" && cfg.which != "n1" && cfg.which != "ando") {
    throw ConfigError("--which must be all, scalar-affine, n1 or ando");
  }
  vn::Json reports = vn::Json::array();
  bool ok = true;
  for (const auto& e : entries) {
    if (cfg.which != "all" && cfg.which != e.name) continue;
    const auto start = std::chrono::steady_clock::now();
    const vn::SuiteReport r = e.run(cfg.trials, cfg.seed, cfg.tol.value_or(e.default_tol));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && r.ok();
    std::cout << e.name << ": " << r.passed << "/" << r.trials << " passed, max_ratio=" << fmt(r.max_ratio)
              << " (trial " << r.worst_trial << "), tol=" << fmt(r.tol) << ", seed=" << r.seed
              << ", " << fmt(secs) << "s " << style.verdict(r.ok() ? "OK" : "FAILED", r.ok()) << "\n";
    for (const auto& f : r.failures) {
      std::cout << "  failure: trial " << f.trial << " seed=" << f.seed << " ratio=" << fmt(f.ratio) << "\n";
    }
    reports.push_back(vn::suite_report_to_json(r));
  }
  write_if_requested(cfg, reports);
  return ok ? kOk : kSuiteFailure;
}

void print_sup(const vn::TorusSupResult& r) {
  std::cout << "value=" << fmt(r.best_value) << "\n";
  std::cout << "certified_upper=" << fmt(r.certified_upper) << " grid_max=" << fmt(r.grid_max)
            << " grid=" << r.grid_points_per_dim << " lipschitz_bound=" << fmt(r.lipschitz_bound)
            << "\n";
  std::cout << "domain=" << r.domain << "\n";
}

int cmd_norm(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("norm needs --input");
  const vn::Json in = vn::read_json_file(cfg.input);
  if (cfg.op == "op-norm") {
    const vn::ComplexMatrix m = vn::matrix_file_from_json(in);
    const vn::SingularPair pair = vn::top_singular_pair(m);
    std::cout << "value=" << fmt(pair.value) << "\n";
    std::cout << "iterations=" << pair.iterations << " restarts=" << pair.restarts << "\n";
    write_if_requested(cfg, {{"op", cfg.op},
                             {"value", pair.value},
                             {"right_vector", vn::vector_to_pairs(pair.right_vector)}});
    return kOk;
  }
  const vn::MatrixPolynomial p = vn::polynomial_from_json(in);
  const int grid = cfg.grid > 0 ? cfg.grid : vn::default_grid_points(p.num_vars());
  vn::TorusSupResult r;
  if (cfg.op == "torus-sup") {
    r = vn::torus_sup(p, grid, true, cfg.workers);
  } else if (cfg.op == "polydisk-sup") {
    r = vn::polydisk_sup(p, grid, true, cfg.workers);
  } else {
    throw ConfigError("--op must be op-norm, torus-sup or polydisk-sup");
  }
  print_sup(r);
  vn::Json j = vn::torus_sup_to_json(r);
  j["op"] = cfg.op;
  write_if_requested(cfg, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{"Search for and certify counterexamples to the generalized von Neumann inequality"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--n", cfg.n, "Coefficient size to start the search at")->check(CLI::Range(1, 16));
  app.add_option("--max-n", cfg.max_n, "Largest coefficient size the search escalates to")
      ->check(CLI::Range(2, 16));
  app.add_option("--restarts", cfg.restarts, "Random restarts per coefficient size")
      ->check(CLI::Range(1, 1000000));
  app.add_option("--budget", cfg.budget, "Objective evaluations per size (0: 200 per restart)")
      ->check(CLI::Range(0L, 1000000000L));
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--grid", cfg.grid, "Grid points per dimension (0: command default)")
      ->check(CLI::Range(0, 1 << 20) & !CLI::Range(1, vn::kMinGridPoints - 1));
  app.add_option("--fine-grid", cfg.fine_grid, "Certification grid points per dimension")
      ->check(CLI::Range(vn::kMinGridPoints, 1 << 16));
  app.add_option("--tol", cfg.tol, "Tolerance for verify and suite")->check(CLI::Range(0.0, 1.0));
  app.add_option("--b-pair", cfg.b_pair, "\"pauli\" or a vn-bpair/1 file");
  app.add_option("--out", cfg.out, "Output JSON path");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--poly", cfg.poly, "vn-polynomial/1 file");
  app.add_option("--tuple", cfg.tuple, "vn-tuple/1 file");
  app.add_option("--cert", cfg.cert, "vn-gap-cert/1 file");
  app.add_option("--input", cfg.input, "Input for norm: vn-matrix/1 or vn-polynomial/1");
  app.add_option("--op", cfg.op, "op-norm, torus-sup or polydisk-sup");
  app.add_option("--which", cfg.which, "Suite to run: all, scalar-affine, n1 or ando");
  app.add_option("--trials", cfg.trials, "Trials per suite")->check(CLI::Range(1, 1000000));

  auto* search = app.add_subcommand("search", "Search for a certified violation");
  auto* certify = app.add_subcommand("certify", "Recompute a certificate's verdict");
  auto* verify = app.add_subcommand("verify", "Check the inequality for a polynomial and tuple");
  auto* suite = app.add_subcommand("suite", "Run the property suites");
  auto* norm = app.add_subcommand("norm", "Operator norm or torus/polydisk sup of an input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  const Style style;
  try {
    if (*search) return cmd_search(cfg, style);
    if (*certify) return cmd_certify(cfg, style);
    if (*verify) return cmd_verify(cfg, style);
    if (*suite) return cmd_suite(cfg, style);
    if (*norm) return cmd_norm(cfg);
  } catch (const vn::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const vn::InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kSuiteFailure;
  } catch (const std::invalid_argument& e) {
    // Schema, tuple, certificate and configuration errors.
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
