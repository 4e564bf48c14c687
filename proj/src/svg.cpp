#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/report.hpp"
#include "hessian_atlas/special_points.hpp"

namespace hatlas {

namespace {

struct Box {
  double x0, y0, x1, y1;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

// Affine pieces of a branch that stay within `lim` of the origin.
std::vector<std::vector<std::array<double, 2>>> affine_pieces(const CurveBranch& b, double lim) {
  std::vector<std::vector<std::array<double, 2>>> out;
  std::vector<std::array<double, 2>> cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (const auto& p : b.points) {
    const auto& q = p.sphere;
    if (std::abs(q[2]) < 1e-9) {
      flush();
      continue;
    }
    const double x = q[0] / q[2], y = q[1] / q[2];
    if (std::abs(x) > lim || std::abs(y) > lim) {
      flush();
      continue;
    }
    if (!cur.empty() && std::hypot(x - cur.back()[0], y - cur.back()[1]) > 0.25 * lim) flush();
    cur.push_back({x, y});
  }
  if (b.closed && cur.size() >= 2 && out.empty()) cur.push_back(cur.front());
  flush();
  return out;
}

}  // namespace

std::string render_svg(const Analysis& a) {
  const AnalysisReport& r = a.report;
  const double lim = 8.0;
  std::vector<std::vector<std::array<double, 2>>> pieces;
  for (const auto& b : a.curves.branches)
    for (auto& p : affine_pieces(b, lim)) pieces.push_back(std::move(p));

  Box bx{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto grow = [&](double x, double y) {
    bx.x0 = std::min(bx.x0, x);
    bx.y0 = std::min(bx.y0, y);
    bx.x1 = std::max(bx.x1, x);
    bx.y1 = std::max(bx.y1, y);
  };
  for (const auto& p : pieces)
    for (const auto& v : p) grow(v[0], v[1]);
  for (const auto& g : r.godrons)
    if (std::abs(g.x) <= lim && std::abs(g.y) <= lim) grow(g.x, g.y);
  if (!std::isfinite(bx.x0)) bx = {-2, -2, 2, 2};
  double w = std::max(bx.x1 - bx.x0, 1e-3), h = std::max(bx.y1 - bx.y0, 1e-3);
  bx = {bx.x0 - 0.2 * w, bx.y0 - 0.2 * h, bx.x1 + 0.2 * w, bx.y1 + 0.2 * h};
  w = bx.x1 - bx.x0;
  h = bx.y1 - bx.y0;
  const double px = w / 800;  // viewBox units per output pixel
  const double stroke = 1.2 * px;
  const double band = 136 * px;  // legend strip under the plot

  // y is flipped so the plot reads with y upward
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
     << static_cast<int>(800 * (h + band) / w) << "\" viewBox=\"" << num(bx.x0) << ' ' << num(-bx.y1) << ' '
     << num(w) << ' ' << num(h + band) << "\">\n";
  os << "<title>Hessian curve of " << r.canonical << "</title>\n";
  os << "<rect x=\"" << num(bx.x0) << "\" y=\"" << num(-bx.y1) << "\" width=\"" << num(w) << "\" height=\""
     << num(h + band) << "\" fill=\"white\"/>\n";

  // sampled Hess f < 0 region, merged into row runs
  if (r.degree >= 2) {
    const BivariatePolynomial hess = hessian_determinant(a.f);
    const int G = 160;
    const double cw = w / G, ch = h / G;
    os << "<g fill=\"#f4c7a1\" stroke=\"none\" shape-rendering=\"crispEdges\">\n";
    for (int j = 0; j < G; ++j) {
      const double y = bx.y0 + (j + 0.5) * ch;
      int start = -1;
      for (int i = 0; i <= G; ++i) {
        const bool neg = i < G && hess(bx.x0 + (i + 0.5) * cw, y) < 0;
        if (neg && start < 0) start = i;
        if (!neg && start >= 0) {
          os << "<rect x=\"" << num(bx.x0 + start * cw) << "\" y=\"" << num(-(y + 0.5 * ch)) << "\" width=\""
             << num((i - start) * cw) << "\" height=\"" << num(ch * 1.02) << "\"/>\n";
          start = -1;
        }
      }
    }
    os << "</g>\n";
  }

  // axes
  os << "<g stroke=\"#999999\" stroke-width=\"" << num(stroke * 0.6) << "\">\n";
  if (bx.y0 < 0 && bx.y1 > 0)
    os << "<line x1=\"" << num(bx.x0) << "\" y1=\"0\" x2=\"" << num(bx.x1) << "\" y2=\"0\"/>\n";
  if (bx.x0 < 0 && bx.x1 > 0)
    os << "<line x1=\"0\" y1=\"" << num(-bx.y1) << "\" x2=\"0\" y2=\"" << num(-bx.y0) << "\"/>\n";
  os << "</g>\n";

  os << "<g fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"" << num(stroke * 1.5) << "\">\n";
  for (const auto& p : pieces) {
    os << "<polyline points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << num(p[i][0]) << ',' << num(-p[i][1]);
    os << "\"/>\n";
  }
  os << "</g>\n";

  // kernel ticks along the parabolic curve
  if (r.degree >= 3 && !pieces.empty()) {
    const Jet jet(a.f);
    double total = 0.0;
    for (const auto& p : pieces)
      for (std::size_t i = 1; i < p.size(); ++i) total += std::hypot(p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]);
    const double gap = std::max(total / 120, 18 * px);
    const double len = 7 * px;
    os << "<g stroke=\"#2a7f3f\" stroke-width=\"" << num(stroke) << "\">\n";
    for (const auto& p : pieces) {
      double acc = gap;
      for (std::size_t i = 1; i < p.size(); ++i) {
        acc += std::hypot(p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]);
        if (acc < gap) continue;
        acc = 0.0;
        try {
          const auto d = kernel_direction(jet, p[i][0], p[i][1]).direction;
          os << "<line x1=\"" << num(p[i][0] - len * d[0]) << "\" y1=\"" << num(-(p[i][1] - len * d[1]))
             << "\" x2=\"" << num(p[i][0] + len * d[0]) << "\" y2=\"" << num(-(p[i][1] + len * d[1])) << "\"/>\n";
        } catch (const std::exception&) {
        }
      }
    }
    os << "</g>\n";
  }

  const double m = 7 * px;
  auto triangle = [&](double x, double y) {
    std::ostringstream t;
    t << "<polygon points=\"" << num(x) << ',' << num(-y - m) << ' ' << num(x - m) << ',' << num(-y + 0.8 * m) << ' '
      << num(x + m) << ',' << num(-y + 0.8 * m) << "\" fill=\"#c0392b\"/>\n";
    return t.str();
  };
  auto disc = [&](double x, double y) {
    return "<circle cx=\"" + num(x) + "\" cy=\"" + num(-y) + "\" r=\"" + num(0.8 * m) + "\" fill=\"#6c3483\"/>\n";
  };
  auto ring = [&](double x, double y) {
    return "<circle cx=\"" + num(x) + "\" cy=\"" + num(-y) + "\" r=\"" + num(0.8 * m) +
           "\" fill=\"none\" stroke=\"#6c3483\" stroke-width=\"" + num(stroke * 1.5) + "\"/>\n";
  };
  for (const auto& g : r.godrons) {
    if (g.type == "saddle") os << triangle(g.x, g.y);
    else if (g.type == "node") os << disc(g.x, g.y);
    else os << ring(g.x, g.y);
  }

  // legend
  const double lx = bx.x0 + 16 * px, ly = bx.y0 - 22 * px, step = 19 * px;
  const double fs = 13 * px;
  os << "<g font-family=\"sans-serif\" font-size=\"" << num(fs) << "\">\n";
  os << "<line x1=\"" << num(bx.x0) << "\" y1=\"" << num(-bx.y0) << "\" x2=\"" << num(bx.x1) << "\" y2=\""
     << num(-bx.y0) << "\" stroke=\"#999999\" stroke-width=\"" << num(stroke) << "\"/>\n";
  double yy = ly;
  auto label = [&](const std::string& text) {
    os << "<text x=\"" << num(lx + 2.5 * m) << "\" y=\"" << num(-yy + 0.4 * fs) << "\">" << text << "</text>\n";
    yy -= step;
  };
  os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(-yy) << "\" x2=\"" << num(lx + 1.6 * m) << "\" y2=\""
     << num(-yy) << "\" stroke=\"#1f4e99\" stroke-width=\"" << num(stroke * 1.5) << "\"/>\n";
  label("parabolic curve");
  os << "<rect x=\"" << num(lx) << "\" y=\"" << num(-yy - 0.5 * m) << "\" width=\"" << num(1.6 * m) << "\" height=\""
     << num(m) << "\" fill=\"#f4c7a1\"/>\n";
  label("Hess f &lt; 0");
  os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(-yy) << "\" x2=\"" << num(lx + 1.6 * m) << "\" y2=\""
     << num(-yy) << "\" stroke=\"#2a7f3f\" stroke-width=\"" << num(stroke) << "\"/>\n";
  label("asymptotic direction");
  os << triangle(lx + 0.8 * m, yy);
  label("folded saddle (index -1)");
  os << disc(lx + 0.8 * m, yy);
  label("folded node (index +1)");
  os << ring(lx + 0.8 * m, yy);
  label("folded focus (index +1)");
  os << "</g>\n</svg>\n";
  return os.str();
}

void emit_svg(const Analysis& a, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << render_svg(a);
  if (!os) throw std::runtime_error("cannot write " + path);
}

}  // namespace hatlas
