#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/report.hpp"

using namespace hatlas;

namespace {

int count(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

bool has_note(const AnalysisReport& r, const std::string& s) {
  return std::find(r.notes.begin(), r.notes.end(), s) != r.notes.end();
}

}  // namespace

TEST_CASE("degree 2 report") {
  const auto r = analyze(parse_polynomial("x^2 + y^2"));
  CHECK(r.degree == 2);
  CHECK(r.godrons.empty());
  CHECK(r.failures.empty());
  CHECK(has_note(r, "no special parabolic points"));
  CHECK(has_note(r, "no hyperbolic points"));
  for (const auto& a : r.audits) CHECK(a.status == AuditStatus::skipped);
}

TEST_CASE("cubic hyperbola report") {
  const auto r = analyze(parse_polynomial("x^3 + y^3 + 3x y"));
  CHECK(r.failures.empty());
  CHECK(r.generic);
  CHECK(r.k == 1);
  CHECK(r.S_inf == 0.5);
  REQUIRE(r.audit("index_sum") != nullptr);
  CHECK(r.audit("index_sum")->status == AuditStatus::pass);
  CHECK(r.audits_pass());
  CHECK(!r.godrons.empty());
  CHECK(r.P_plus == 0);
}

TEST_CASE("Hessian identically zero") {
  const auto r = analyze(parse_polynomial("x^3"));
  REQUIRE(r.failures.size() >= 1);
  bool found = false;
  for (const auto& f : r.failures) found = found || f.message == "Hessian identically zero";
  CHECK(found);
  CHECK(r.has_failure("non_generic"));
  for (const auto& a : r.audits) CHECK(a.status == AuditStatus::skipped);
}

TEST_CASE("empty hyperbolic region") {
  const auto r = analyze(parse_polynomial("x^4 + x^2y^2 + y^4 + x^2 + y^2"));
  CHECK(r.oval_count == 0);
  CHECK(r.H_le0_is == "empty");
  CHECK(has_note(r, "no hyperbolic points"));
}

TEST_CASE("audit completeness") {
  for (const char* s : {"x^2 + y^2", "x^3", "x^3 + y^3 + 3x y", "x^3 + y^3", "x^4 + x^2y^2 + y^4 - 3x^2 + y^2 + x y"}) {
    CAPTURE(s);
    const auto r = analyze(parse_polynomial(s));
    REQUIRE(r.audits.size() == audit_names().size());
    for (std::size_t i = 0; i < r.audits.size(); ++i) CHECK(r.audits[i].name == audit_names()[i]);
    for (const auto& n : audit_names())
      CHECK(std::count_if(r.audits.begin(), r.audits.end(), [&](const AuditResult& a) { return a.name == n; }) == 1);
  }
}

TEST_CASE("JSON round trip and determinism") {
  for (const char* s : {"x^3 + y^3 + 3x y", "x^4 - 6x^2y^2 + y^4 + 12x(x^2 + y^2) + x^2 + y^2", "x^3", "x^2 + y^2"}) {
    CAPTURE(s);
    const auto f = parse_polynomial(s);
    const auto r = analyze(f, {}, s);
    const std::string text = dump_json(r);
    const auto back = report_from_json(nlohmann::ordered_json::parse(text));
    CHECK(dump_json(back) == text);
    CHECK(back.input == s);
    CHECK(back.godrons == r.godrons);
    CHECK(back.infinity == r.infinity);
    CHECK(back.branches == r.branches);
    CHECK(back.failures == r.failures);
    CHECK(back.S_inf == r.S_inf);
    CHECK(dump_json(analyze(f, {}, s)) == text);
    CHECK(text.find("\"schema\": \"hessian-atlas/1\"") != std::string::npos);
    // every numeric field is finite
    CHECK(text.find("null") == std::string::npos);
  }
}

TEST_CASE("floats keep 17 significant digits") {
  auto r = analyze(parse_polynomial("x^2 + y^2"));
  r.S_inf = 0.1;
  const std::string text = dump_json(r);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(report_from_json(nlohmann::ordered_json::parse(text)).S_inf == 0.1);
}

TEST_CASE("timing appears only on request") {
  const auto f = parse_polynomial("x^3 + y^3 + 3x y");
  CHECK_FALSE(analyze(f).seconds.has_value());
  AnalyzeOptions opt;
  opt.timing = true;
  const auto r = analyze(f, opt);
  REQUIRE(r.seconds.has_value());
  CHECK(*r.seconds >= 0.0);
}

TEST_CASE("unwritable path") {
  const auto r = analyze(parse_polynomial("x^2 + y^2"));
  CHECK_THROWS_WITH_AS(emit_json(r, "/nonexistent-dir/out.json"), "cannot write /nonexistent-dir/out.json",
                       std::runtime_error);
}

TEST_CASE("SVG output") {
  {
    const auto a = analyze_full(parse_polynomial("x^2 + y^2"));
    const std::string svg = render_svg(a);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count(svg, "<polyline") == 0);
    CHECK(svg.find("parabolic curve") != std::string::npos);
    CHECK(count(svg, "<line") >= 2);
  }
  {
    const auto a = analyze_full(parse_polynomial("x^3 + y^3 + 3x y"));
    const std::string svg = render_svg(a);
    CHECK(count(svg, "<polyline") == 2);
    int saddles = 0;
    for (const auto& g : a.report.godrons) saddles += g.type == "saddle";
    CHECK(saddles >= 1);
    // one triangle per saddle plus the legend entry
    CHECK(count(svg, "<polygon") == saddles + 1);
    const auto path = std::filesystem::temp_directory_path() / "hessian_atlas_test.svg";
    emit_svg(a, path.string());
    std::ifstream is(path);
    std::string back((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    CHECK(back == svg);
    std::filesystem::remove(path);
  }
}
