// crclassify: classify quadratic CR singularities, flatten cubic terms,
// locate CR singular points of charted 4-manifolds and run the acceptance suite.
//
// Exit codes: 0 ok, 1 error, 2 classification boundary snap, 3 degenerate
// point found, 4 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crsing/acceptance.hpp"
#include "crsing/json_io.hpp"

using namespace crsing;

namespace {

enum Exit { kOk = 0, kError = 1, kBoundary = 2, kDegenerate = 3, kVerifyFailed = 4 };

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string builtin_name;
  double tol = kDefaultTol;
  int seed_grid = EnumerateOptions{}.seeds_per_axis;
  double t_param = 1.0;
  std::vector<double> d_params{1, 1, 1, 1, 1};
  std::vector<double> abc_params{1, 2, 1, 3, 5, 1};
  Convention convention = Convention::Lai;
  bool json = false;
};

std::string read_input(const std::string &path) {
  if (path.empty()) throw Error(ErrorCode::ParseError, "--input is required");
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::ParseError, "cannot read " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

void emit(const Json &j) { std::cout << j.dump(2) << "\n"; }

std::string mat_text(const CMat &m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t k = 0; k < m.cols(); ++k) s += (k ? ", " : "") + format_cplx(m(i, k));
    s += "]";
  }
  return s + "]";
}

std::string series_text(const PSeries &h) {
  std::string s;
  for (const auto &[k, v] : h.terms()) {
    std::string key;
    for (int e : k) key += std::to_string(e);
    s += "  " + key + "  " + format_cplx(v) + "\n";
  }
  return s;
}

std::string sigma_text(const std::optional<int> &s) { return s ? std::to_string(*s) : "-"; }

int run_classify(const RunConfig &cfg) {
  const Json in = parse_json(read_input(cfg.input_path));
  if (!in.is_object() || !in.contains("R") || !in.contains("S"))
    throw Error(ErrorCode::ParseError, "input needs \"R\" and \"S\"");
  const CMat r = cmat_from_json(in.at("R"), cfg.tol), s = cmat_from_json(in.at("S"), cfg.tol);
  if (r.rows() != 2 || r.cols() != 2 || s.rows() != 2 || s.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "R and S must be 2x2");
  const TableRow row = classify_pair(r, s);
  if (cfg.json) {
    emit({{"table_row", to_json(row)}});
  } else {
    std::string moduli;
    for (const auto &m : row.moduli)
      moduli += (moduli.empty() ? "" : ", ") + m.name + "=" + format_cplx(m.value) + " (" + std::to_string(m.dof) + ")";
    std::printf("case          %s\n", rcase_label(row.r_case).c_str());
    std::printf("N             %s\n", mat_text(row.N).c_str());
    std::printf("P             %s\n", mat_text(row.P).c_str());
    std::printf("shape         %s\n", row.shape.c_str());
    std::printf("moduli        %s\n", moduli.empty() ? "none" : moduli.c_str());
    std::printf("rho(P) rho(N|P) rho(Gamma) sigma(Gamma) det\n");
    std::printf("%6d %9d %10d %12s %3c\n", row.rho_P, row.rho_NP, row.rho_Gamma, sigma_text(row.sigma_Gamma).c_str(),
                det_sign_char(row.det_sign));
    std::printf("rho(N) %d, sigma(N) %s\n", row.rho_N, sigma_text(row.sigma_N).c_str());
    std::printf("witness       c=%s A=%s residual=%.3g\n", format_cplx(row.witness.c).c_str(),
                mat_text(row.witness.A).c_str(), row.witness.residual);
    std::printf("boundary      %s\n", row.boundary ? "yes" : "no");
  }
  return row.boundary ? kBoundary : kOk;
}

int run_flatten(const RunConfig &cfg) {
  const Json in = parse_json(read_input(cfg.input_path));
  const PSeries h = pseries_from_json(in.contains("series") ? in.at("series") : in);
  const FlattenResult f = cubic_flatten(h);
  if (cfg.json) {
    emit({{"series", to_json(f.h)}, {"change", to_json(f.change)}});
  } else {
    std::printf("flattened series (alpha beta  coefficient)\n%s", series_text(f.h).c_str());
    std::printf("linear part C = %s\n", mat_text(f.change.C).c_str());
    for (std::size_t k = 0; k < f.change.p.size(); ++k)
      std::printf("p[%zu]\n%s", k, series_text(f.change.p[k]).c_str());
  }
  return kOk;
}

ChartedManifold manifold_for(const RunConfig &cfg) {
  if (!cfg.builtin_name.empty() && !cfg.input_path.empty())
    throw Error(ErrorCode::BadParams, "give either --builtin or --input, not both");
  if (!cfg.input_path.empty()) return manifold_from_json(parse_json(read_input(cfg.input_path)));
  if (cfg.builtin_name == "cp2") return builtin("cp2", {cfg.t_param});
  if (cfg.builtin_name == "s4") return builtin("s4", cfg.d_params);
  if (cfg.builtin_name == "s2xs2") return builtin("s2xs2", cfg.abc_params);
  throw Error(ErrorCode::BadParams, "locate needs --builtin or --input");
}

int run_locate(const RunConfig &cfg) {
  const ChartedManifold m = manifold_for(cfg);
  const Enumeration e = enumerate(m, {cfg.seed_grid, cfg.convention});
  std::optional<TopologyReport> tr;
  if (m.expected_topology) tr = topology_check(m, e.I_plus, e.I_minus, cfg.convention);
  if (cfg.json) {
    Json j = to_json(e);
    j["manifold"] = m.name;
    j["convention"] = cfg.convention == Convention::Lai ? "lai" : "switched";
    j["topology"] = tr ? to_json(*tr) : Json(nullptr);
    emit(j);
  } else {
    std::printf("manifold %s, %zu CR points\n", m.name.c_str(), e.points.size());
    std::printf("%-12s %-34s %-4s %-10s %-14s %s\n", "chart", "location", "type", "index", "shape",
                "rho(P) rho(N|P) rho(Gamma) sigma(Gamma) det");
    for (const auto &p : e.points) {
      const std::string loc = "(" + format_cplx(p.z1) + ", " + format_cplx(p.z2) + ")";
      std::printf("%-12s %-34s %-4s %-10s %-14s %d %d %d %s %c%s\n", p.chart.c_str(), loc.c_str(),
                  orientation_name(p.orientation), index_name(p.index), p.row.shape.c_str(), p.row.rho_P,
                  p.row.rho_NP, p.row.rho_Gamma, sigma_text(p.row.sigma_Gamma).c_str(),
                  det_sign_char(p.row.det_sign), p.snapped ? "  (snapped)" : "");
    }
    std::printf("I+ = %d, I- = %d\n", e.I_plus, e.I_minus);
    if (tr)
      std::printf("topology %s: I+ + I- = %d (expected %d), I+ - I- = %d (expected %d)\n", tr->pass ? "PASS" : "FAIL",
                  tr->sum, tr->expected_sum, tr->diff, tr->expected_diff);
    else
      std::printf("topology: no expectation given\n");
    if (e.degenerate) std::printf("%d degenerate points\n", e.degenerate);
    if (e.identically_critical) std::printf("some chart is identically CR singular\n");
    if (e.no_convergence) std::printf("seeds abandoned without convergence: %d\n", e.no_convergence);
    for (const auto &w : e.warnings) std::printf("warning: %s\n", w.c_str());
  }
  return e.degenerate > 0 ? kDegenerate : kOk;
}

int run_verify(const RunConfig &cfg) {
  AcceptanceOptions opt;
  opt.tol_scale = cfg.tol / kDefaultTol;
  opt.seeds_per_axis = cfg.seed_grid;
  opt.convention = cfg.convention;
  int passed = 0;
  Json criteria = Json::array();
  for (int id = 1; id <= 10; ++id) {
    const CriterionResult r = run_criterion(id, opt);
    passed += r.pass ? 1 : 0;
    if (cfg.json) {
      criteria.push_back(
          {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"failures", r.failures}});
    } else {
      std::printf("%s\n", format_result_line(r).c_str());
      std::fflush(stdout);
    }
  }
  if (cfg.json)
    emit({{"criteria", criteria}, {"passed", passed}, {"total", 10}, {"tol", cfg.tol}});
  else
    std::printf("%d of 10 criteria passed\n", passed);
  return passed == 10 ? kOk : kVerifyFailed;
}

void report_error(const RunConfig &cfg, const std::string &code, const std::string &message) {
  if (cfg.json)
    emit({{"error", {{"code", code}, {"message", message}}}});
  else
    std::fprintf(stderr, "error [%s]: %s\n", code.c_str(), message.c_str());
}

} // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  CLI::App app{"Classify CR singularities of real 4-manifolds in C^3"};
  app.require_subcommand(1, 1);

  std::string output = "text", convention = "lai";
  std::optional<double> tol_flag;
  app.add_option("--input", cfg.input_path, "JSON input file, '-' for stdin");
  app.add_option("--builtin", cfg.builtin_name, "built-in manifold")->check(CLI::IsMember({"s4", "s2xs2", "cp2"}));
  app.add_option("--t", cfg.t_param, "parameter t of the cp2 family");
  app.add_option("--d", cfg.d_params, "s4 ellipsoid axes d1..d5")->delimiter(',')->expected(5);
  app.add_option("--abc", cfg.abc_params, "s2xs2 parameters a,b,c,d,e,f")->delimiter(',')->expected(6);
  app.add_option("--tol", tol_flag, "numeric tolerance in (0, 1e-3]");
  app.add_option("--seeds", cfg.seed_grid, "Newton seeds per axis (>= 2)");
  app.add_option("--convention", convention, "index convention")->check(CLI::IsMember({"lai", "switched"}));
  app.add_option("--output", output, "output format")->check(CLI::IsMember({"text", "json"}));
  for (const char *name : {"classify", "flatten", "locate", "verify"}) {
    const char *help = std::string(name) == "classify" ? "normal form of a pair (R, S) read from --input"
                       : std::string(name) == "flatten" ? "remove cubic terms of a series read from --input"
                       : std::string(name) == "locate"  ? "enumerate CR singular points of a manifold"
                                                        : "run the acceptance suite";
    app.add_subcommand(name, help)->fallthrough()->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }
  cfg.json = output == "json";
  cfg.convention = convention == "switched" ? Convention::Switched : Convention::Lai;

  try {
    if (const char *env = std::getenv("CRCLASSIFY_TOL")) {
      try {
        cfg.tol = std::stod(env);
      } catch (const std::exception &) {
        throw Error(ErrorCode::BadParams, std::string("CRCLASSIFY_TOL is not a number: ") + env);
      }
    }
    if (tol_flag) cfg.tol = *tol_flag;
    if (!(cfg.tol > 0 && cfg.tol <= 1e-3)) throw Error(ErrorCode::BadParams, "tolerance must lie in (0, 1e-3]");
    if (cfg.seed_grid < 2) throw Error(ErrorCode::BadParams, "--seeds must be at least 2");

    if (cfg.command == "classify") return run_classify(cfg);
    if (cfg.command == "flatten") return run_flatten(cfg);
    if (cfg.command == "locate") return run_locate(cfg);
    return run_verify(cfg);
  } catch (const Error &e) {
    const std::string code = error_name(e.code()), what = e.what();
    report_error(cfg, code, what.rfind(code + ": ", 0) == 0 ? what.substr(code.size() + 2) : what);
  } catch (const std::exception &e) {
    report_error(cfg, "Internal", e.what());
  }
  return kError;
}
