// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/report.hpp"

using namespace hatlas;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

BivariatePolynomial random_poly(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BivariatePolynomial::Coefficients c;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) c[{i, j}] = u(rng);
  return BivariatePolynomial(c);
}

bool clean(const AnalysisReport& r) { return r.generic && r.failures.empty(); }

struct Instance {
  std::string file;
  BivariatePolynomial f;
  AnalysisReport r;
};

std::vector<Instance> load_corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(HATLAS_CORPUS_DIR))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const auto& p : files) {
    std::ifstream is(p);
    std::string line, expr;
    while (std::getline(is, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      expr += line + " ";
    }
    Instance in;
    in.file = p.filename().string();
    in.f = parse_polynomial(expr);
    in.r = analyze(in.f, {}, expr);
    out.push_back(std::move(in));
  }
  return out;
}

bool audit_passes(const AnalysisReport& r, const char* name) {
  const auto* a = r.audit(name);
  return a && a->status == AuditStatus::pass;
}

void compact_cubic() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  int tried = 0;
  while (since(t0) < 10.0) {
    ++tried;
    const auto f = random_poly(rng, 3);
    const auto r = analyze(f);
    if (!clean(r) || !r.compact || r.oval_count != 1) continue;
    const bool ok = r.P_minus == 3 && r.P_plus == 0;
    const double secs = since(t0);
    verdict(1, ok && secs < 10.0,
            fmt("compact Hessian conic after %d random cubics, P-=%d P+=%d, %.2f s", tried, r.P_minus, r.P_plus,
                secs));
    std::printf("  cubic: %s\n", to_string(f).c_str());
    return;
  }
  verdict(1, false, fmt("no compact Hessian conic among %d random cubics within 10 s", tried));
}

void hyperbola_cubic() {
  const auto t0 = Clock::now();
  const auto r = analyze(parse_polynomial("x^3 + y^3 + 3x y"));
  const double secs = since(t0);
  bool all_minus = !r.godrons.empty();
  for (const auto& g : r.godrons) all_minus = all_minus && g.index == -1;
  verdict(2, clean(r) && all_minus && r.P_plus == 0 && secs < 10.0,
          fmt("x^3 + y^3 + 3xy: %zu godron(s), P-=%d P+=%d, %.2f s", r.godrons.size(), r.P_minus, r.P_plus, secs));
}

void infinity_half(const std::vector<Instance>& corpus) {
  std::set<int> ks, ns;
  int points = 0, off = 0, simple = 0;
  double worst = 0.0;
  for (const auto& in : corpus) {
    if (!in.r.top_factors_simple) continue;
    ++simple;
    ks.insert(in.r.k);
    ns.insert(in.r.degree);
    if (static_cast<int>(in.r.infinity.size()) != 2 * in.r.k) ++off;
    for (const auto& p : in.r.infinity) {
      ++points;
      const double res = std::abs(p.raw_index - 0.5);
      worst = std::max(worst, res);
      if (res >= 0.05) ++off;
    }
  }
  const bool span = ks.count(0) && ks.count(1) && ks.count(2) && ks.count(3) && ns.count(3) && ns.count(4) &&
                    ns.count(5);
  verdict(3, simple >= 10 && span && off == 0,
          fmt("%d corpus polynomials, k in {%s}, %d points at infinity, %d off 1/2, max residual %.3g", simple,
              [&] {
                std::string s;
                for (int k : ks) s += (s.empty() ? "" : ",") + std::to_string(k);
                return s;
              }()
                  .c_str(),
              points, off, worst));
}

void index_sum(const std::vector<Instance>& corpus) {
  int bad = 0, checked = 0;
  for (const auto& in : corpus) {
    if (!in.r.top_factors_simple) continue;
    ++checked;
    const long twice = std::lround(2 * in.r.S_inf);
    const bool ok = twice == in.r.k && twice >= 0 && twice <= 2 * in.r.degree;
    if (!ok) {
      ++bad;
      std::printf("  %s: S_inf=%g k=%d\n", in.file.c_str(), in.r.S_inf, in.r.k);
    }
  }
  verdict(4, bad == 0 && checked >= 10, fmt("S_inf = k/2 and 0 <= S_inf <= n on %d of %d", checked - bad, checked));
}

void euler_identity(const std::vector<Instance>& corpus) {
  int bad = 0, checked = 0;
  for (const auto& in : corpus) {
    if (!clean(in.r)) continue;
    ++checked;
    const long lhs = std::lround(2 * in.r.S_inf);
    const long rhs = 2 * in.r.chi_H_le0 + in.r.P_minus - in.r.P_plus;
    if (lhs != rhs || !audit_passes(in.r, "euler_index_identity")) {
      ++bad;
      std::printf("  %s: 2S=%ld, 2chi+P--P+=%ld\n", in.file.c_str(), lhs, rhs);
    }
  }
  verdict(5, bad == 0 && checked == static_cast<int>(corpus.size()),
          fmt("identity exact on %d of %d generic instances (%zu in corpus)", checked - bad, checked, corpus.size()));
}

void ragsdale_petrowsky(const std::vector<Instance>& corpus) {
  int bad = 0, checked = 0;
  for (const auto& in : corpus) {
    if (!in.r.smooth) continue;
    ++checked;
    const bool ok = in.r.curve_traced && in.r.grid_done && in.r.chi_Bplus == in.r.grid_chi_Bplus &&
                    in.r.chi_Bminus == in.r.grid_chi_Bminus && in.r.chi_Bplus + in.r.chi_Bminus == 1 &&
                    in.r.chi_Bplus == in.r.P - in.r.N && audit_passes(in.r, "petrowsky");
    if (!ok) {
      ++bad;
      std::printf("  %s: nesting chi %d/%d, grid chi %d/%d\n", in.file.c_str(), in.r.chi_Bplus, in.r.chi_Bminus,
                  in.r.grid_chi_Bplus, in.r.grid_chi_Bminus);
    }
  }
  verdict(6, bad == 0 && checked > 0,
          fmt("nesting and grid agree, chi sum 1, Petrowsky holds on %d of %d smooth instances", checked - bad,
              checked));
}

void harnack(const std::vector<Instance>& corpus) {
  int bad = 0;
  std::string four;
  for (const auto& in : corpus) {
    if (!audit_passes(in.r, "harnack") || !audit_passes(in.r, "harnack_affine")) {
      ++bad;
      std::printf("  %s: oval bound violated or undecided\n", in.file.c_str());
    }
    if (in.r.degree == 4 && in.r.oval_count == 4 && in.r.compact) four = in.file;
  }
  verdict(7, bad == 0 && !four.empty(),
          fmt("%d of %zu instances within the oval bounds; four-oval quartic: %s", static_cast<int>(corpus.size()) - bad,
              corpus.size(), four.empty() ? "none" : four.c_str()));
}

void sweep() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const int want = 500;
  int accepted = 0, rejected = 0, numerical = 0, hits = 0, eligible = 0, violations = 0;
  int per_degree[6] = {0, 0, 0, 0, 0, 0};
  while (accepted < want && since(t0) < 1800.0) {
    const int n = 3 + (accepted + rejected) % 3;
    const auto f = random_poly(rng, n);
    const auto r = analyze(f);
    if (!clean(r)) {
      ++rejected;
      if (r.has_failure("numerical")) ++numerical;
      continue;
    }
    ++accepted;
    ++per_degree[n];
    const bool lone = r.P_plus == 1 && r.P_minus == 0 && r.transverse_at_infinity && r.oval_count == 1 &&
                      !r.H_le0_orientable;
    if (lone) {
      ++hits;
      std::printf("  lone positive godron: %s\n", to_string(f).c_str());
    }
    if (r.k - 2 * r.chi_H_le0 >= 0) {
      ++eligible;
      if (r.P_minus < r.P_plus) {
        ++violations;
        std::printf("  P- < P+: %s\n", to_string(f).c_str());
      }
    }
  }
  const double secs = since(t0);
  const bool done = accepted >= want && secs < 1800.0;
  verdict(8, done && hits == 0,
          fmt("%d generic polynomials (n=3: %d, n=4: %d, n=5: %d; %d rejected, %d of them numerical), %d lone "
              "positive godron configurations, %.1f s",
              accepted, per_degree[3], per_degree[4], per_degree[5], rejected, numerical, hits, secs));
  verdict(9, done && violations == 0,
          fmt("%d instances with k - 2chi(H<=0) >= 0, %d with P- < P+", eligible, violations));
}

void oracles(const std::vector<Instance>& corpus) {
  int godrons = 0, agree = 0;
  for (const auto& in : corpus)
    for (const auto& g : in.r.godrons) {
      ++godrons;
      if (g.winding == g.index && (g.lie_cartan_det < 0) == (g.index < 0)) ++agree;
    }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double h = 1e-5;
  int fd_checked = 0, fd_bad = 0;
  double fd_worst = 0.0;
  for (const auto& in : corpus) {
    for (Axis ax : {Axis::x, Axis::y}) {
      const auto d1 = differentiate(in.f, ax);
      const auto d2 = differentiate(in.f, ax, 2);
      for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng);
        auto at = [&](const BivariatePolynomial& p, double s) {
          return ax == Axis::x ? p(x + s, y) : p(x, y + s);
        };
        const double e1 = d1(x, y), e2 = d2(x, y);
        // central differences of f and of f' for the first two orders
        if (std::abs(e1) > 1e-2) {
          const double rel = std::abs((at(in.f, h) - at(in.f, -h)) / (2 * h) - e1) / std::abs(e1);
          fd_worst = std::max(fd_worst, rel);
          fd_bad += rel > 1e-6;
          ++fd_checked;
        }
        if (std::abs(e2) > 1e-2) {
          const double rel = std::abs((at(d1, h) - at(d1, -h)) / (2 * h) - e2) / std::abs(e2);
          fd_worst = std::max(fd_worst, rel);
          fd_bad += rel > 1e-6;
          ++fd_checked;
        }
      }
    }
  }
  verdict(10, godrons > 0 && agree == godrons && fd_bad == 0,
          fmt("Lie-Cartan vs winding: %d of %d corpus godrons agree; finite differences: %d of %d within 1e-6 "
              "(worst %.2g)",
              agree, godrons, fd_checked - fd_bad, fd_checked, fd_worst));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  compact_cubic();
  hyperbola_cubic();
  const auto corpus = load_corpus();
  infinity_half(corpus);
  index_sum(corpus);
  euler_identity(corpus);
  ragsdale_petrowsky(corpus);
  harnack(corpus);
  sweep();
  oracles(corpus);
  std::printf("%d criteria failed, %.1f s total\n", failures, since(t0));
  return failures == 0 ? 0 : 1;
}
