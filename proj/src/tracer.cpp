#include "hessian_atlas/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

using Vec3 = std::array<double, 3>;

std::string to_string(Chart c) {
  switch (c) {
    case Chart::z: return "z=1";
    case Chart::x: return "x=1";
    case Chart::y: return "y=1";
  }
  return "z=1";
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 unit(const Vec3& a) { return scale(a, 1.0 / norm(a)); }

int chart_axis(Chart c) { return c == Chart::x ? 0 : c == Chart::y ? 1 : 2; }

Chart largest_chart(const Vec3& q) {
  const double ax = std::abs(q[0]), ay = std::abs(q[1]), az = std::abs(q[2]);
  if (az >= ax && az >= ay) return Chart::z;
  return ax >= ay ? Chart::x : Chart::y;
}

Vec3 chart_lift(Chart c, double a, double b) {
  switch (c) {
    case Chart::z: return {a, b, 1.0};
    case Chart::x: return {1.0, a, b};
    case Chart::y: return {a, 1.0, b};
  }
  return {a, b, 1.0};
}

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = sub(b, a);
  const double len2 = dot(ab, ab);
  double t = len2 > 0 ? dot(sub(p, a), ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(sub(p, add(a, scale(ab, t))));
}

double tangential_gradient_norm(const TrivariateHomogeneous& H, const Vec3& q) {
  const Vec3 g = H.gradient(q);
  return norm(sub(g, scale(q, dot(g, q))));
}

// Newton along the tangential gradient; q is returned on the unit sphere.
bool project_to_curve(const TrivariateHomogeneous& H, Vec3& q, double tol) {
  q = unit(q);
  for (int it = 0; it < 30; ++it) {
    if (on_curve(H, q, tol)) return true;
    const Vec3 g = H.gradient(q);
    const Vec3 gt = sub(g, scale(q, dot(g, q)));
    const double gg = dot(gt, gt);
    if (gg == 0.0) return false;
    const double h = H(q);
    const Vec3 next = unit(sub(q, scale(gt, h / gg)));
    if (norm(sub(next, q)) > 0.2) return false;
    q = next;
  }
  return on_curve(H, q, tol);
}

// Hash of 3D points with a fixed cell size, used to find traced segments
// near a query point.
class SegmentHash {
 public:
  explicit SegmentHash(double cell) : cell_(cell) {}

  void insert(const Vec3& a, const Vec3& b, std::size_t branch, std::size_t index) {
    const Vec3 mid = scale(add(a, b), 0.5);
    buckets_[key(mid)].push_back({a, b, branch, index});
  }

  /// Distance from p to the closest stored segment, limited to one cell.
  double nearest(const Vec3& p, std::size_t* branch = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    const auto c = cell_of(p);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = buckets_.find(pack(c[0] + dx, c[1] + dy, c[2] + dz));
          if (it == buckets_.end()) continue;
          for (const auto& s : it->second) {
            const double d = segment_distance(p, s.a, s.b);
            if (d < best) {
              best = d;
              if (branch) *branch = s.branch;
            }
          }
        }
    return best;
  }

 private:
  struct Seg {
    Vec3 a, b;
    std::size_t branch, index;
  };
  std::array<long, 3> cell_of(const Vec3& p) const {
    return {static_cast<long>(std::floor(p[0] / cell_)), static_cast<long>(std::floor(p[1] / cell_)),
            static_cast<long>(std::floor(p[2] / cell_))};
  }
  static long pack(long a, long b, long c) { return ((a + 1024) << 22) | ((b + 1024) << 11) | (c + 1024); }
  long key(const Vec3& p) const {
    const auto c = cell_of(p);
    return pack(c[0], c[1], c[2]);
  }

  double cell_;
  std::unordered_map<long, std::vector<Seg>> buckets_;
};

double chart_distance(const ChartPoint& a, const ChartPoint& b) {
  const ChartPoint a2 = a.chart == b.chart ? a : ChartPoint::from_sphere(a.sphere, b.chart);
  return std::hypot(a2.coords[0] - b.coords[0], a2.coords[1] - b.coords[1]);
}

}  // namespace

ChartPoint ChartPoint::from_chart(Chart c, double a, double b) {
  ChartPoint p;
  p.chart = c;
  p.coords = {a, b};
  p.sphere = unit(chart_lift(c, a, b));
  return p;
}

ChartPoint ChartPoint::from_sphere(const std::array<double, 3>& q, Chart c) {
  ChartPoint p;
  p.chart = c;
  p.sphere = unit(q);
  const int k = chart_axis(c);
  const double s = q[k];
  switch (c) {
    case Chart::z: p.coords = {q[0] / s, q[1] / s}; break;
    case Chart::x: p.coords = {q[1] / s, q[2] / s}; break;
    case Chart::y: p.coords = {q[0] / s, q[2] / s}; break;
  }
  return p;
}

ChartPoint ChartPoint::from_sphere(const std::array<double, 3>& q) {
  return from_sphere(q, largest_chart(q));
}

bool on_curve(const TrivariateHomogeneous& H, const std::array<double, 3>& q, double tol) {
  const Vec3 u = unit(q);
  const double g = norm(H.gradient(u));
  const double floor = 64 * std::numeric_limits<double>::epsilon() * H.max_abs_coeff() *
                       static_cast<double>(H.coeffs().size());
  return std::abs(H(u)) <= std::max(tol * g, floor);
}

double projective_distance(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  return std::min(norm(sub(p, q)), norm(add(p, q)));
}

std::vector<ChartPoint> find_seeds(const TrivariateHomogeneous& H, const TraceOptions& opt) {
  std::vector<ChartPoint> seeds;
  if (H.degree() == 0) return seeds;
  const int G = opt.grid;
  const double R = opt.window;
  const double cell = 2 * R / G;
  std::vector<double> values((G + 1) * (G + 1));
  for (Chart chart : {Chart::z, Chart::x, Chart::y}) {
    auto coord = [&](int i) { return -R + cell * i; };
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) values[j * (G + 1) + i] = H(chart_lift(chart, coord(i), coord(j)));
    auto edge = [&](int i0, int j0, int i1, int j1) {
      const double v0 = values[j0 * (G + 1) + i0], v1 = values[j1 * (G + 1) + i1];
      if (v0 == 0.0 || (v0 < 0) == (v1 < 0)) {
        if (v0 != 0.0) return;
      }
      double a = 0.0, b = 1.0, fa = v0;
      auto at = [&](double t) {
        return chart_lift(chart, coord(i0) + t * (coord(i1) - coord(i0)),
                          coord(j0) + t * (coord(j1) - coord(j0)));
      };
      if (v0 != 0.0) {
        for (int it = 0; it < 40; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = H(at(m));
          if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
      }
      Vec3 q = at(0.5 * (a + b));
      if (!project_to_curve(H, q, opt.tol)) return;
      if (tangential_gradient_norm(H, q) == 0.0) return;
      seeds.push_back(ChartPoint::from_sphere(q));
    };
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i < G; ++i) edge(i, j, i + 1, j);
    for (int j = 0; j < G; ++j)
      for (int i = 0; i <= G; ++i) edge(i, j, i, j + 1);
  }
  return seeds;
}

CurveBranch trace_branch(const ChartPoint& seed, const TrivariateHomogeneous& H,
                         const TraceOptions& opt) {
  const Vec3 start = unit(seed.sphere);
  if (!on_curve(H, start, opt.tol)) throw std::invalid_argument("seed is not on the curve");
  const double gscale = gradient_scale(H);
  if (tangential_gradient_norm(H, start) <= 1e-7 * gscale)
    throw std::invalid_argument("seed is at a critical point of Hf");

  auto tangent = [&](const Vec3& q) { return unit(cross(q, H.gradient(q))); };

  CurveBranch br;
  Chart active = largest_chart(start);
  br.points.push_back(ChartPoint::from_sphere(start, active));
  br.min_gradient = norm(H.gradient(start)) / gscale;

  Vec3 q = start;
  Vec3 t = tangent(q);
  double h = opt.max_step * 0.5;
  double far = 0.0;

  while (true) {
    if (br.points.size() > opt.max_points)
      throw NumericalError("trace stalled: possible singular curve point");
    const Vec3 pred = unit(add(q, scale(t, h)));
    const Vec3 nrm = unit(cross(pred, t));
    // Newton on s -> H(pred + s * nrm); homogeneity makes normalisation harmless
    double s = 0.0;
    bool ok = false;
    int iters = 0;
    for (; iters < 8; ++iters) {
      const Vec3 p = add(pred, scale(nrm, s));
      const double v = H(p);
      const double dv = dot(H.gradient(p), nrm);
      if (dv == 0.0) break;
      const double ds = -v / dv;
      s += ds;
      if (std::abs(s) > 0.5 * h) break;
      if (std::abs(ds) <= 1e-15 && on_curve(H, add(pred, scale(nrm, s)), opt.tol)) {
        ok = true;
        break;
      }
      if (on_curve(H, add(pred, scale(nrm, s)), opt.tol)) {
        ok = true;
        break;
      }
    }
    Vec3 next{};
    Vec3 tn{};
    if (ok) {
      next = unit(add(pred, scale(nrm, s)));
      tn = tangent(next);
      const double turn = std::acos(std::clamp(dot(t, tn), -1.0, 1.0));
      // at the floor step a sharp bend is accepted; the corrector bound |s| <= h/2
      // still keeps the step on this branch
      const double turn_limit = h <= opt.min_step ? 0.5 : opt.max_turn;
      if (turn > turn_limit || dot(sub(next, q), t) <= 0.0) ok = false;
    }
    if (!ok) {
      if (h <= opt.min_step) throw NumericalError("trace stalled: possible singular curve point");
      h = std::max(0.5 * h, opt.min_step);
      continue;
    }

    const Vec3 prev = q;
    q = next;
    t = tn;
    far = std::max(far, norm(sub(q, start)));
    if ((prev[2] > 0) != (q[2] > 0) || q[2] == 0.0) br.crosses_infinity = true;

    const double close_tol = 1e-7 + 0.5 * h * opt.max_turn;
    if (far > 4 * close_tol + h && segment_distance(start, prev, q) < close_tol) {
      const ChartPoint end = ChartPoint::from_sphere(start, br.points.back().chart);
      br.arc_length += chart_distance(br.points.back(), end);
      br.points.push_back(end);
      br.closed = true;
      break;
    }

    const auto& last = br.points.back();
    if (std::hypot(last.coords[0], last.coords[1]) > opt.chart_radius) active = largest_chart(q);
    ChartPoint cp = ChartPoint::from_sphere(q, active);
    if (std::hypot(cp.coords[0], cp.coords[1]) > opt.chart_radius) {
      active = largest_chart(q);
      cp = ChartPoint::from_sphere(q, active);
    }
    br.arc_length += chart_distance(br.points.back(), cp);
    br.points.push_back(cp);
    br.min_gradient = std::min(br.min_gradient, norm(H.gradient(q)) / gscale);

    if (iters <= 2) h = std::min(opt.max_step, h * 1.5);
  }
  return br;
}

CurveSet assemble(const std::vector<ChartPoint>& seeds, const TrivariateHomogeneous& H,
                  const TraceOptions& opt) {
  CurveSet cs;
  SegmentHash hash(2.5 * opt.max_step);
  const double near_tol = 5e-4;
  for (const auto& seed : seeds) {
    const Vec3 s = unit(seed.sphere);
    if (hash.nearest(s) < near_tol || hash.nearest(scale(s, -1.0)) < near_tol) continue;
    CurveBranch br = trace_branch(seed, H, opt);

    // a second trace of an existing oval (seed missed by the hash) is dropped
    std::size_t other = 0;
    const Vec3 probe = br.points[br.points.size() / 2].sphere;
    const double d = std::min(hash.nearest(probe, &other), hash.nearest(scale(probe, -1.0), &other));
    if (d < 2 * opt.max_step) {
      double worst = 0.0;
      for (const auto& p : br.points)
        worst = std::max(worst, std::min(hash.nearest(p.sphere), hash.nearest(scale(p.sphere, -1.0))));
      if (worst < 2 * opt.max_step) continue;
    }

    const std::size_t id = cs.branches.size();
    for (std::size_t i = 0; i + 1 < br.points.size(); ++i)
      hash.insert(br.points[i].sphere, br.points[i + 1].sphere, id, i);
    if (br.crosses_infinity) cs.compact_in_affine_chart = false;
    cs.branches.push_back(std::move(br));
  }
  return cs;
}

CurveSet trace_curve(HessianData& hd, const TraceOptions& opt) {
  try {
    CurveSet cs = assemble(find_seeds(hd.Hf, opt), hd.Hf, opt);
    const auto h = hd.Hf.at_infinity();
    if (h.degree() == 0 || h.is_zero() || opt.window >= 32.0) return cs;
    std::vector<std::array<double, 2>> dirs;
    try {
      dirs = real_linear_factors(h).factor_directions;
    } catch (const NumericalError&) {
      return cs;
    }
    for (const auto& d : dirs) {
      const Vec3 q{d[0], d[1], 0.0};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& br : cs.branches)
        for (const auto& p : br.points) best = std::min(best, projective_distance(p.sphere, q));
      if (best > 0.1) {
        TraceOptions wide = opt;
        wide.window = 32.0;
        return assemble(find_seeds(hd.Hf, wide), hd.Hf, wide);
      }
    }
    return cs;
  } catch (const NumericalError&) {
    hd.smooth = false;
    throw;
  }
}

}  // namespace hatlas
