#include "hessian_atlas/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "hessian_atlas/errors.hpp"
#include "hessian_atlas/hessian.hpp"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/special_points.hpp"
#include "hessian_atlas/top_form.hpp"
#include "hessian_atlas/topology.hpp"

namespace hatlas {

const std::vector<std::string>& audit_names() {
  static const std::vector<std::string> names{
      "infinity_index_half", "index_sum",          "index_sum_bounds", "euler_index_identity",
      "godron_balance",      "no_lone_positive_godron", "topology_agreement", "petrowsky",
      "harnack",             "harnack_affine",     "godron_upper_bounds", "godron_oracle"};
  return names;
}

bool AnalysisReport::audits_pass() const {
  for (const auto& a : audits)
    if (a.status == AuditStatus::fail) return false;
  return true;
}

const AuditResult* AnalysisReport::audit(const std::string& name) const {
  for (const auto& a : audits)
    if (a.name == name) return &a;
  return nullptr;
}

bool AnalysisReport::has_failure(const std::string& kind) const {
  for (const auto& f : failures)
    if (f.kind == kind) return true;
  return false;
}

namespace {

class AuditTable {
 public:
  AuditTable() {
    for (const auto& n : audit_names()) rows_.push_back({n, AuditStatus::skipped, "not reached"});
  }
  void set(const std::string& name, AuditStatus s, std::string detail) {
    for (auto& r : rows_)
      if (r.name == name) {
        r.status = s;
        r.detail = std::move(detail);
        return;
      }
    throw std::logic_error("unknown audit " + name);
  }
  void check(const std::string& name, bool ok, std::string detail) {
    set(name, ok ? AuditStatus::pass : AuditStatus::fail, std::move(detail));
  }
  void skip(const std::string& name, std::string reason) { set(name, AuditStatus::skipped, std::move(reason)); }
  void skip_all(const std::string& reason) {
    for (auto& r : rows_) {
      r.status = AuditStatus::skipped;
      r.detail = reason;
    }
  }
  std::vector<AuditResult> rows() const { return rows_; }

 private:
  std::vector<AuditResult> rows_;
};

// Runs one stage; exceptions become failure records. Returns false if the
// stage threw.
template <class Fn>
bool stage(AnalysisReport& r, const char* name, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const NonGenericError& e) {
    r.failures.push_back({name, "non_generic", e.what()});
  } catch (const NumericalError& e) {
    r.failures.push_back({name, "numerical", e.what()});
  } catch (const std::invalid_argument& e) {
    r.failures.push_back({name, "invalid_input", e.what()});
  } catch (const std::exception& e) {
    r.failures.push_back({name, "numerical", e.what()});
  }
  return false;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

Analysis analyze_full(const BivariatePolynomial& f, const AnalyzeOptions& opt, const std::string& input) {
  const auto t0 = std::chrono::steady_clock::now();
  Analysis a;
  a.f = f;
  AnalysisReport& r = a.report;
  AuditTable audits;
  r.canonical = to_string(f);
  r.input = input.empty() ? r.canonical : input;
  r.degree = f.degree();

  auto finish = [&]() -> Analysis {
    r.audits = audits.rows();
    if (opt.timing)
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(a);
  };

  if (f.is_zero() || f.degree() < 1) {
    r.failures.push_back({"input", "invalid_input", "constant polynomial"});
    audits.skip_all("no surface to analyze");
    return finish();
  }

  TopFormAnalysis tfa;
  const auto parts = homogeneous_parts(f);
  bool top_ok = stage(r, "top_form", [&] {
    tfa = real_linear_factors(parts.back());
    r.k = tfa.k;
    r.top_factors_simple = tfa.all_real_factors_simple;
  });
  if (top_ok && f.degree() >= 2) {
    r.top_form_class = "degenerate";
    stage(r, "top_form", [&] { r.top_form_class = to_string(classify_form(parts.back())); });
  }

  HessianData hd;
  if (!stage(r, "hessian", [&] { hd = build_hessian(f); })) {
    audits.skip_all("Hessian unavailable");
    return finish();
  }

  if (f.degree() < 3) {
    r.smooth = true;
    r.notes.push_back("no special parabolic points");
    if (hd.hess.coeff(0, 0) > 0) r.notes.push_back("no hyperbolic points");
    audits.skip_all("degree below 3: no special parabolic points");
    return finish();
  }

  if (top_ok)
    stage(r, "transversality", [&] { hd.transverse_at_infinity = check_transversality_at_infinity(hd, tfa); });
  r.transverse_at_infinity = hd.transverse_at_infinity;

  stage(r, "singular_points", [&] {
    if (!find_singular_points(hd.Hf).empty()) {
      hd.smooth = false;
      throw NonGenericError("Hessian curve is singular");
    }
  });

  TraceOptions topt;
  topt.grid = opt.grid;
  topt.window = opt.window;
  topt.tol = opt.tol;
  if (hd.smooth) {
    r.curve_traced = stage(r, "trace", [&] { a.curves = trace_curve(hd, topt); });
  }
  if (r.curve_traced) {
    r.compact = a.curves.compact_in_affine_chart;
    r.oval_count = static_cast<int>(a.curves.branches.size());
    for (const auto& b : a.curves.branches)
      r.branches.push_back({b.points.size(), b.closed, b.crosses_infinity, b.arc_length});
    stage(r, "trace", [&] {
      const auto h = hd.Hf.at_infinity();
      if (!h.is_zero() && h.degree() > 0) r.points_at_infinity = real_linear_factors(h).k;
    });
  }

  bool topo_ok = false;
  RegionTopology rt;
  if (r.curve_traced) {
    topo_ok = stage(r, "topology", [&] {
      const NestingResult nest = nesting_forest(a.curves, opt.seed);
      rt = identify_H_le0(a.curves, hd.Hf, nest, opt.seed);
    });
    if (topo_ok) {
      r.P = rt.P;
      r.N = rt.N;
      r.chi_Bplus = rt.chi_Bplus;
      r.chi_Bminus = rt.chi_Bminus;
      r.H_le0_is = to_string(rt.H_le0_is);
      r.chi_H_le0 = rt.chi_H_le0;
      r.H_le0_orientable = rt.H_le0_orientable;
      r.depth = rt.depth;
      if (rt.H_le0_is == Side::empty) r.notes.push_back("no hyperbolic points");
    }
  }
  if (hd.smooth) {
    r.grid_done = stage(r, "grid", [&] {
      const GridTopology gt = sphere_grid_fallback(hd.Hf, opt.grid);
      r.grid_chi_Bplus = gt.chi_Bplus;
      r.grid_chi_Bminus = gt.chi_Bminus;
      r.grid_H_le0_is = to_string(gt.H_le0_is);
      r.grid_refinements = gt.refinements;
    });
  }

  bool godrons_ok = false;
  if (r.curve_traced) {
    godrons_ok = stage(r, "godrons", [&] {
      for (const auto& c : detect_godrons(a.curves, f)) {
        SpecialParabolicPoint sp;
        try {
          sp = classify_godron(c, f);
        } catch (const NonGenericError&) {
          r.folds_nondegenerate = false;
          throw;
        }
        GodronRecord g;
        g.x = sp.location.coords[0];
        g.y = sp.location.coords[1];
        g.direction = sp.direction.direction;
        g.type = to_string(sp.folded_type);
        g.index = sp.index;
        g.lie_cartan_det = sp.lie_cartan_det;
        g.lie_cartan_trace = sp.lie_cartan_trace;
        try {
          g.winding = winding_index(sp, f);
        } catch (const NumericalError&) {
          g.winding = 0;
        }
        (g.index < 0 ? r.P_minus : r.P_plus)++;
        r.godrons.push_back(g);
      }
    });
  }

  std::vector<InfinitySingularPoint> inf;
  bool inf_ok = false;
  if (top_ok) {
    inf_ok = stage(r, "infinity", [&] {
      inf = singular_points_at_infinity(build_sphere_form(f), tfa, hd.Hf);
    });
    double sum = 0.0;
    for (const auto& p : inf) {
      r.infinity.push_back({p.direction, p.representative, p.index, p.raw_index, p.radius,
                            p.Hf_sign_nearby, p.sheets_agree});
      if (p.representative) sum += p.index;
    }
    r.S_inf = sum;
  }

  const GenericityScreen screen = genericity_screen(hd, tfa, r.folds_nondegenerate, false);
  r.smooth = screen.smooth;
  r.genericity_notes = screen.notes;
  if (!r.transverse_at_infinity) r.genericity_notes.push_back("curve not transverse to the line at infinity");
  r.generic = screen.passed() && r.transverse_at_infinity && r.failures.empty();

  // Index audits.
  if (!inf_ok) {
    audits.skip("infinity_index_half", "singular points at infinity unavailable");
  } else if (!r.generic) {
    audits.skip("infinity_index_half", "non-generic - index audits disabled");
  } else {
    int bad = 0;
    double worst = 0.0;
    for (const auto& p : r.infinity) {
      worst = std::max(worst, std::abs(p.raw_index - 0.5));
      if (std::abs(p.raw_index - 0.5) >= 0.05) ++bad;
    }
    audits.check("infinity_index_half", bad == 0,
                 fmt("%zu points, %d off 1/2, max residual %.3g", r.infinity.size(), bad, worst));
  }
  std::optional<std::string> skip_reason;
  if (!inf_ok) skip_reason = "singular points at infinity unavailable";
  else if (!topo_ok) skip_reason = "curve topology unavailable";
  else if (!godrons_ok) skip_reason = "godron list unavailable";
  GlobalIndexInputs gin{r.degree, r.k, r.generic, r.transverse_at_infinity, r.oval_count, r.P_minus, r.P_plus};
  for (const auto& ar : global_index_audit(inf, rt, gin, skip_reason)) audits.set(ar.name, ar.status, ar.detail);

  // Topology audits.
  if (!topo_ok || !r.grid_done) {
    audits.skip("topology_agreement", "nesting or grid topology unavailable");
  } else {
    const bool ok = r.chi_Bplus == r.grid_chi_Bplus && r.chi_Bminus == r.grid_chi_Bminus &&
                    r.H_le0_is == r.grid_H_le0_is && r.chi_Bplus + r.chi_Bminus == 1;
    audits.check("topology_agreement", ok,
                 fmt("nesting chi+=%d chi-=%d H<=0=%s, grid chi+=%d chi-=%d H<=0=%s", r.chi_Bplus,
                     r.chi_Bminus, r.H_le0_is.c_str(), r.grid_chi_Bplus, r.grid_chi_Bminus,
                     r.grid_H_le0_is.c_str()));
  }
  const int n = r.degree;
  if (!topo_ok) {
    audits.skip("petrowsky", "curve topology unavailable");
  } else {
    const int kh = n - 2;
    const int lo2 = -3 * kh * (kh - 1), hi2 = 3 * kh * (kh - 1) + 2;
    const int d2 = 2 * (r.P - r.N);
    audits.check("petrowsky", d2 >= lo2 && d2 <= hi2,
                 fmt("P-N=%d within [%g, %g]", r.P - r.N, lo2 / 2.0, hi2 / 2.0));
  }
  if (!r.curve_traced) {
    audits.skip("harnack", "curve not traced");
    audits.skip("harnack_affine", "curve not traced");
  } else {
    const int bound = (2 * n - 5) * (n - 1) + 1;
    audits.check("harnack", r.oval_count <= bound, fmt("%d ovals <= %d", r.oval_count, bound));
    const int sharp = (2 * n - 5) * (n - 3);
    if (r.compact) {
      audits.check("harnack_affine", r.oval_count <= sharp + 1,
                   fmt("compact: %d ovals <= %d", r.oval_count, sharp + 1));
    } else {
      int affine = 0;
      for (const auto& b : r.branches) affine += b.crosses_infinity ? 0 : 1;
      audits.check("harnack_affine", affine <= sharp && r.points_at_infinity <= 2 * n - 4,
                   fmt("non-compact: %d ovals <= %d, %d unbounded components <= %d", affine, sharp,
                       r.points_at_infinity, 2 * n - 4));
    }
  }
  if (!godrons_ok) {
    audits.skip("godron_upper_bounds", "godron list unavailable");
    audits.skip("godron_oracle", "godron list unavailable");
  } else {
    const int base = (n - 2) * (8 * n - 21);
    const int total = (n - 2) * (5 * n - 12);
    const bool ok = 2 * r.P_minus <= base + r.k && 2 * r.P_plus <= 2 + base - r.k &&
                    r.P_minus + r.P_plus <= total;
    audits.check("godron_upper_bounds", ok,
                 fmt("P-=%d <= %g, P+=%d <= %g, total %d <= %d", r.P_minus, (base + r.k) / 2.0, r.P_plus,
                     1 + (base - r.k) / 2.0, r.P_minus + r.P_plus, total));
    int agree = 0;
    for (const auto& g : r.godrons) agree += g.winding == g.index ? 1 : 0;
    audits.check("godron_oracle", agree == static_cast<int>(r.godrons.size()),
                 fmt("%d of %zu classifications match the winding oracle", agree, r.godrons.size()));
  }
  if (r.godrons.empty() && godrons_ok) r.notes.push_back("no special parabolic points");
  return finish();
}

AnalysisReport analyze(const BivariatePolynomial& f, const AnalyzeOptions& opt, const std::string& input) {
  return analyze_full(f, opt, input).report;
}

// ---- JSON ----

using ojson = nlohmann::ordered_json;

ojson to_json(const AnalysisReport& r) {
  ojson j;
  j["schema"] = r.schema;
  j["input"] = r.input;
  j["canonical"] = r.canonical;
  j["degree"] = r.degree;
  j["k"] = r.k;
  j["top_form_class"] = r.top_form_class;
  j["transverse_at_infinity"] = r.transverse_at_infinity;
  j["genericity"] = {{"smooth", r.smooth},
                     {"folds_nondegenerate", r.folds_nondegenerate},
                     {"top_factors_simple", r.top_factors_simple},
                     {"generic", r.generic},
                     {"notes", r.genericity_notes}};
  ojson branches = ojson::array();
  for (const auto& b : r.branches)
    branches.push_back({{"points", b.points},
                        {"closed", b.closed},
                        {"crosses_infinity", b.crosses_infinity},
                        {"arc_length", b.arc_length}});
  j["curve"] = {{"traced", r.curve_traced},
                {"compact", r.compact},
                {"oval_count", r.oval_count},
                {"points_at_infinity", r.points_at_infinity},
                {"P", r.P},
                {"N", r.N},
                {"chi_Bplus", r.chi_Bplus},
                {"chi_Bminus", r.chi_Bminus},
                {"H_le0_is", r.H_le0_is},
                {"chi_H_le0", r.chi_H_le0},
                {"H_le0_orientable", r.H_le0_orientable},
                {"depth", r.depth},
                {"branches", branches}};
  j["grid"] = {{"done", r.grid_done},
               {"chi_Bplus", r.grid_chi_Bplus},
               {"chi_Bminus", r.grid_chi_Bminus},
               {"H_le0_is", r.grid_H_le0_is},
               {"refinements", r.grid_refinements}};
  ojson gods = ojson::array();
  for (const auto& g : r.godrons)
    gods.push_back({{"x", g.x},
                    {"y", g.y},
                    {"direction", g.direction},
                    {"type", g.type},
                    {"index", g.index},
                    {"lie_cartan_det", g.lie_cartan_det},
                    {"lie_cartan_trace", g.lie_cartan_trace},
                    {"winding", g.winding}});
  j["godrons"] = gods;
  j["P_minus"] = r.P_minus;
  j["P_plus"] = r.P_plus;
  ojson inf = ojson::array();
  for (const auto& p : r.infinity)
    inf.push_back({{"direction", p.direction},
                   {"representative", p.representative},
                   {"index", p.index},
                   {"raw_index", p.raw_index},
                   {"radius", p.radius},
                   {"Hf_sign_nearby", p.Hf_sign_nearby},
                   {"sheets_agree", p.sheets_agree}});
  j["infinity"] = inf;
  j["S_inf"] = r.S_inf;
  ojson au = ojson::array();
  for (const auto& a : r.audits) au.push_back({{"name", a.name}, {"status", to_string(a.status)}, {"detail", a.detail}});
  j["audits"] = au;
  ojson fl = ojson::array();
  for (const auto& f : r.failures) fl.push_back({{"stage", f.stage}, {"kind", f.kind}, {"message", f.message}});
  j["failures"] = fl;
  j["notes"] = r.notes;
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

namespace {

AuditStatus status_from(const std::string& s) {
  if (s == "pass") return AuditStatus::pass;
  if (s == "fail") return AuditStatus::fail;
  return AuditStatus::skipped;
}

}  // namespace

AnalysisReport report_from_json(const ojson& j) {
  AnalysisReport r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != kSchema) throw std::invalid_argument("unsupported schema " + r.schema);
  r.input = j.at("input").get<std::string>();
  r.canonical = j.at("canonical").get<std::string>();
  r.degree = j.at("degree").get<int>();
  r.k = j.at("k").get<int>();
  r.top_form_class = j.at("top_form_class").get<std::string>();
  r.transverse_at_infinity = j.at("transverse_at_infinity").get<bool>();
  const auto& g = j.at("genericity");
  r.smooth = g.at("smooth").get<bool>();
  r.folds_nondegenerate = g.at("folds_nondegenerate").get<bool>();
  r.top_factors_simple = g.at("top_factors_simple").get<bool>();
  r.generic = g.at("generic").get<bool>();
  r.genericity_notes = g.at("notes").get<std::vector<std::string>>();
  const auto& c = j.at("curve");
  r.curve_traced = c.at("traced").get<bool>();
  r.compact = c.at("compact").get<bool>();
  r.oval_count = c.at("oval_count").get<int>();
  r.points_at_infinity = c.at("points_at_infinity").get<int>();
  r.P = c.at("P").get<int>();
  r.N = c.at("N").get<int>();
  r.chi_Bplus = c.at("chi_Bplus").get<int>();
  r.chi_Bminus = c.at("chi_Bminus").get<int>();
  r.H_le0_is = c.at("H_le0_is").get<std::string>();
  r.chi_H_le0 = c.at("chi_H_le0").get<int>();
  r.H_le0_orientable = c.at("H_le0_orientable").get<bool>();
  r.depth = c.at("depth").get<std::vector<int>>();
  for (const auto& b : c.at("branches"))
    r.branches.push_back({b.at("points").get<std::size_t>(), b.at("closed").get<bool>(),
                          b.at("crosses_infinity").get<bool>(), b.at("arc_length").get<double>()});
  const auto& gr = j.at("grid");
  r.grid_done = gr.at("done").get<bool>();
  r.grid_chi_Bplus = gr.at("chi_Bplus").get<int>();
  r.grid_chi_Bminus = gr.at("chi_Bminus").get<int>();
  r.grid_H_le0_is = gr.at("H_le0_is").get<std::string>();
  r.grid_refinements = gr.at("refinements").get<int>();
  for (const auto& x : j.at("godrons")) {
    GodronRecord gd;
    gd.x = x.at("x").get<double>();
    gd.y = x.at("y").get<double>();
    gd.direction = x.at("direction").get<std::array<double, 2>>();
    gd.type = x.at("type").get<std::string>();
    gd.index = x.at("index").get<int>();
    gd.lie_cartan_det = x.at("lie_cartan_det").get<double>();
    gd.lie_cartan_trace = x.at("lie_cartan_trace").get<double>();
    gd.winding = x.at("winding").get<int>();
    r.godrons.push_back(gd);
  }
  r.P_minus = j.at("P_minus").get<int>();
  r.P_plus = j.at("P_plus").get<int>();
  for (const auto& x : j.at("infinity")) {
    InfinityRecord p;
    p.direction = x.at("direction").get<std::array<double, 2>>();
    p.representative = x.at("representative").get<bool>();
    p.index = x.at("index").get<double>();
    p.raw_index = x.at("raw_index").get<double>();
    p.radius = x.at("radius").get<double>();
    p.Hf_sign_nearby = x.at("Hf_sign_nearby").get<int>();
    p.sheets_agree = x.at("sheets_agree").get<bool>();
    r.infinity.push_back(p);
  }
  r.S_inf = j.at("S_inf").get<double>();
  for (const auto& a : j.at("audits"))
    r.audits.push_back({a.at("name").get<std::string>(), status_from(a.at("status").get<std::string>()),
                        a.at("detail").get<std::string>()});
  for (const auto& f : j.at("failures"))
    r.failures.push_back(
        {f.at("stage").get<std::string>(), f.at("kind").get<std::string>(), f.at("message").get<std::string>()});
  r.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
  return r;
}

namespace {

// nlohmann prints the shortest round-trip form; the schema asks for %.17g.
void write(const ojson& j, std::string& out, int level) {
  const std::string pad(2 * (level + 1), ' '), close(2 * level, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(k).dump() + ": ";
        write(v, out, level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, level + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // keep integral values (and -0) floats when read back
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const AnalysisReport& r) {
  std::string out;
  write(to_json(r), out, 0);
  out += "\n";
  return out;
}

void emit_json(const AnalysisReport& r, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << dump_json(r);
  if (!os) throw std::runtime_error("cannot write " + path);
}

}  // namespace hatlas
