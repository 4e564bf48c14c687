#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "hessian_atlas/errors.hpp"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/report.hpp"

namespace fs = std::filesystem;
using namespace hatlas;

namespace {

enum Exit { kOk = 0, kParse = 2, kNonGeneric = 3, kAudit = 4, kIo = 5 };

bool non_generic(const AnalysisReport& r) {
  if (!r.failures.empty()) return true;
  return r.degree >= 3 && !r.generic;
}

void print_summary(const AnalysisReport& r, std::ostream& os) {
  os << "f = " << r.canonical << "\n";
  os << "degree " << r.degree << ", k = " << r.k << ", top form " << r.top_form_class
     << (r.transverse_at_infinity ? ", transverse at infinity" : "") << "\n";
  if (r.curve_traced)
    os << "parabolic curve: " << r.oval_count << " oval(s), P=" << r.P << " N=" << r.N
       << (r.compact ? ", compact" : ", meets infinity") << "; H<=0 is " << r.H_le0_is
       << " (chi " << r.chi_H_le0 << ")\n";
  os << "godrons: P- = " << r.P_minus << ", P+ = " << r.P_plus << "\n";
  for (const auto& g : r.godrons) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  (%.6g, %.6g) %s index %+d\n", g.x, g.y, g.type.c_str(), g.index);
    os << buf;
  }
  if (!r.infinity.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "points at infinity: %zu on the sphere, index sum %.3g\n", r.infinity.size(),
                  r.S_inf);
    os << buf;
  }
  for (const auto& a : r.audits) os << "  [" << to_string(a.status) << "] " << a.name << ": " << a.detail << "\n";
  for (const auto& f : r.failures) os << "failure in " << f.stage << " (" << f.kind << "): " << f.message << "\n";
}

std::string read_corpus_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::string line, expr;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!expr.empty()) expr += ' ';
    expr += line;
  }
  return expr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic curves, godrons and index audits for real bivariate polynomials"};
  app.require_subcommand(1);

  AnalyzeOptions opt;
  std::string poly, json_path, svg_path;
  bool strict = false;
  auto* an = app.add_subcommand("analyze", "analyze one polynomial");
  an->add_option("--poly", poly, "polynomial in x and y")->required();
  an->add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
  an->add_option("--svg", svg_path, "write an SVG plot of the z=1 chart here");
  an->add_option("--grid", opt.grid, "grid size for seeding and the sign complex")->capture_default_str();
  an->add_option("--window", opt.window, "seed window half-width")->capture_default_str();
  an->add_option("--tol", opt.tol, "relative curve tolerance")->capture_default_str();
  an->add_option("--seed", opt.seed, "seed for jittered ray casting")->capture_default_str();
  an->add_flag("--strict", strict, "exit with 4 when an audit fails");
  an->add_flag("--timing", opt.timing, "record wall-clock seconds in the report");

  std::string dir = "tests/corpus", summary_path;
  AnalyzeOptions copt;
  bool cstrict = false;
  auto* co = app.add_subcommand("corpus", "analyze every polynomial file in a directory");
  co->add_option("--dir", dir, "corpus directory")->capture_default_str();
  co->add_option("--report", summary_path, "write the aggregate summary JSON here");
  co->add_option("--grid", copt.grid)->capture_default_str();
  co->add_option("--window", copt.window)->capture_default_str();
  co->add_option("--tol", copt.tol)->capture_default_str();
  co->add_option("--seed", copt.seed)->capture_default_str();
  co->add_flag("--strict", cstrict, "exit with 4 when an audit fails");
  co->add_flag("--timing", copt.timing);

  CLI11_PARSE(app, argc, argv);

  if (an->parsed()) {
    BivariatePolynomial f;
    try {
      f = parse_polynomial(poly);
    } catch (const ParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return kParse;
    }
    const Analysis a = analyze_full(f, opt, poly);
    try {
      if (json_path == "-") std::cout << dump_json(a.report);
      else if (!json_path.empty()) emit_json(a.report, json_path);
      if (!svg_path.empty()) emit_svg(a, svg_path);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kIo;
    }
    if (json_path != "-") print_summary(a.report, std::cout);
    if (non_generic(a.report)) return kNonGeneric;
    if (strict && !a.report.audits_pass()) return kAudit;
    return kOk;
  }

  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file()) files.push_back(e.path());
  if (ec) {
    std::cerr << "cannot read directory " << dir << "\n";
    return kIo;
  }
  std::sort(files.begin(), files.end());

  nlohmann::ordered_json summary;
  summary["schema"] = kSchema;
  summary["directory"] = dir;
  nlohmann::ordered_json instances = nlohmann::ordered_json::array();
  std::map<std::string, std::array<int, 3>> tally;
  for (const auto& n : audit_names()) tally[n] = {0, 0, 0};
  bool any_fail = false, any_parse = false;
  for (const auto& file : files) {
    nlohmann::ordered_json inst;
    inst["file"] = file.filename().string();
    std::string expr;
    try {
      expr = read_corpus_file(file);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kIo;
    }
    inst["input"] = expr;
    BivariatePolynomial f;
    try {
      f = parse_polynomial(expr);
    } catch (const ParseError& e) {
      inst["parse_error"] = e.what();
      instances.push_back(inst);
      any_parse = true;
      std::cout << file.filename().string() << ": parse error: " << e.what() << "\n";
      continue;
    }
    const AnalysisReport r = analyze(f, copt, expr);
    inst["degree"] = r.degree;
    inst["k"] = r.k;
    inst["generic"] = r.generic;
    inst["oval_count"] = r.oval_count;
    inst["P_minus"] = r.P_minus;
    inst["P_plus"] = r.P_plus;
    nlohmann::ordered_json st;
    int fails = 0;
    for (const auto& a : r.audits) {
      st[a.name] = to_string(a.status);
      tally[a.name][static_cast<int>(a.status)]++;
      if (a.status == AuditStatus::fail) ++fails;
    }
    inst["audits"] = st;
    nlohmann::ordered_json fl = nlohmann::ordered_json::array();
    for (const auto& x : r.failures) fl.push_back(x.stage + ": " + x.message);
    inst["failures"] = fl;
    if (r.seconds) inst["seconds"] = *r.seconds;
    instances.push_back(inst);
    any_fail = any_fail || fails > 0;
    std::cout << file.filename().string() << ": degree " << r.degree << ", " << r.oval_count << " oval(s), P-="
              << r.P_minus << " P+=" << r.P_plus << ", " << fails << " failed audit(s)"
              << (r.failures.empty() ? "" : ", analysis incomplete") << "\n";
  }
  nlohmann::ordered_json agg;
  for (const auto& n : audit_names()) {
    const auto& t = tally[n];
    const int decided = t[0] + t[1];
    agg[n] = {{"pass", t[0]}, {"fail", t[1]}, {"skipped", t[2]},
              {"pass_rate", decided ? static_cast<double>(t[0]) / decided : 1.0}};
  }
  summary["instances"] = instances;
  summary["audits"] = agg;
  if (!summary_path.empty()) {
    std::ofstream os(summary_path);
    if (!os || !(os << summary.dump(2) << "\n")) {
      std::cerr << "cannot write " << summary_path << "\n";
      return kIo;
    }
  }
  if (cstrict && any_fail) return kAudit;
  if (any_parse) return kParse;
  return kOk;
}
