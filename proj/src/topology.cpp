#include "hessian_atlas/topology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

using Vec3 = std::array<double, 3>;

std::string to_string(Side s) {
  switch (s) {
    case Side::Bplus: return "B+";
    case Side::Bminus: return "B-";
    case Side::empty: return "empty";
  }
  return "empty";
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 neg(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
Vec3 unit(const Vec3& a) {
  const double r = std::sqrt(dot(a, a));
  return {a[0] / r, a[1] / r, a[2] / r};
}

std::vector<Vec3> fibonacci(int count) {
  std::vector<Vec3> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(1.0 - z * z);
    out.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return out;
}

struct Undecided {};

// Crossing-number test in a plane chart; throws Undecided when the ray
// grazes a vertex.
bool point_in_polygon(const std::vector<std::array<double, 2>>& poly, std::array<double, 2> p,
                      double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  auto rot = [&](const std::array<double, 2>& v) {
    return std::array<double, 2>{c * (v[0] - p[0]) + s * (v[1] - p[1]), -s * (v[0] - p[0]) + c * (v[1] - p[1])};
  };
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = rot(poly[i]);
    const auto b = rot(poly[(i + 1) % n]);
    if (std::abs(a[1]) < 1e-7 && a[0] > 0) throw Undecided{};
    if ((a[1] > 0) != (b[1] > 0)) {
      const double x = a[0] + (0.0 - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x > 0) inside = !inside;
    }
  }
  return inside;
}

// Chart path: a hemisphere containing the whole lift of the oval, where
// the gnomonic image is a closed plane polygon whose interior is the disk.
std::optional<bool> inside_by_chart(const std::vector<Vec3>& oval, const Vec3& b, std::mt19937_64& rng) {
  std::vector<Vec3> normals;
  Vec3 sum{0, 0, 0};
  for (const auto& q : oval)
    for (int k = 0; k < 3; ++k) sum[k] += q[k];
  if (dot(sum, sum) > 1e-20) normals.push_back(unit(sum));
  for (const auto& v : fibonacci(200)) normals.push_back(v);

  for (const auto& n : normals) {
    double lo = 1.0;
    for (const auto& q : oval) lo = std::min(lo, dot(n, q));
    if (lo < 1e-3) continue;
    const double nb = dot(n, b);
    if (std::abs(nb) < 1e-3) continue;
    const Vec3 bb = nb > 0 ? b : neg(b);
    const Vec3 e1 = unit(std::abs(n[0]) < 0.9 ? cross(n, {1, 0, 0}) : cross(n, {0, 1, 0}));
    const Vec3 e2 = cross(n, e1);
    auto project = [&](const Vec3& q) {
      const double d = dot(n, q);
      return std::array<double, 2>{dot(e1, q) / d, dot(e2, q) / d};
    };
    std::vector<std::array<double, 2>> poly;
    poly.reserve(oval.size());
    for (const auto& q : oval) poly.push_back(project(q));
    const auto p = project(bb);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int attempt = 0; attempt <= 16; ++attempt) {
      try {
        return point_in_polygon(poly, p, attempt == 0 ? 0.0 : angle(rng));
      } catch (const Undecided&) {
      }
    }
    throw NumericalError("nesting undecidable");
  }
  return std::nullopt;
}

bool arcs_cross(const Vec3& a1, const Vec3& a2, const Vec3& b1, const Vec3& b2) {
  const Vec3 na = cross(a1, a2), nb = cross(b1, b2);
  const double s1 = dot(na, b1), s2 = dot(na, b2), s3 = dot(nb, a1), s4 = dot(nb, a2);
  if (std::abs(s1) < 1e-12 || std::abs(s2) < 1e-12) throw Undecided{};
  if ((s1 > 0) == (s2 > 0) || (s3 > 0) == (s4 > 0)) return false;
  Vec3 x = cross(na, nb);
  const Vec3 mid{a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]};
  if (dot(x, mid) < 0) x = neg(x);
  const Vec3 midb{b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]};
  return dot(x, midb) > 0;
}

// Fallback on the sphere: the disk lift bounded by C is the component of
// S^2 \ C that avoids -C. Parity of crossings along a great arc from x to a
// vertex of -C decides which component x lies in.
bool in_disk_lift(const std::vector<Vec3>& oval, const Vec3& x, std::mt19937_64& rng) {
  std::vector<std::size_t> order(oval.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return dot(neg(oval[i]), x) > dot(neg(oval[j]), x); });
  std::uniform_int_distribution<std::size_t> pick(0, std::min<std::size_t>(order.size(), 64) - 1);
  for (int attempt = 0; attempt <= 16; ++attempt) {
    // antipode of a chord midpoint: the antipode of a vertex would put that
    // vertex on the test circle
    const std::size_t i = order[attempt == 0 ? 0 : pick(rng)];
    const Vec3& u = oval[i];
    const Vec3& v = oval[(i + 1) % oval.size()];
    const Vec3 target = neg(unit({u[0] + v[0], u[1] + v[1], u[2] + v[2]}));
    if (dot(target, x) < -0.999) continue;
    try {
      int crossings = 0;
      for (std::size_t i = 0; i + 1 < oval.size(); ++i)
        if (arcs_cross(x, target, oval[i], oval[i + 1])) ++crossings;
      return crossings % 2 == 1;
    } catch (const Undecided&) {
    }
  }
  throw NumericalError("nesting undecidable");
}

bool inside_oval(const CurveBranch& a, const Vec3& b, std::mt19937_64& rng) {
  std::vector<Vec3> oval;
  oval.reserve(a.points.size());
  for (const auto& p : a.points) oval.push_back(p.sphere);
  if (auto r = inside_by_chart(oval, b, rng)) return *r;
  return in_disk_lift(oval, b, rng) || in_disk_lift(oval, neg(b), rng);
}

}  // namespace

NestingResult nesting_forest(const CurveSet& cs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int m = static_cast<int>(cs.branches.size());
  for (const auto& br : cs.branches)
    if (!br.closed) throw std::invalid_argument("nesting requires closed branches");
  std::vector<std::vector<bool>> contains(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b) contains[a][b] = inside_oval(cs.branches[a], cs.branches[b].points.front().sphere, rng);
  NestingResult out;
  out.depth.assign(m, 0);
  out.parent.assign(m, -1);
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a)
      if (contains[a][b]) ++out.depth[b];
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a)
      if (contains[a][b] && (out.parent[b] < 0 || out.depth[a] > out.depth[out.parent[b]])) out.parent[b] = a;
    (out.depth[b] % 2 == 0 ? out.P : out.N)++;
  }
  return out;
}

int containment_depth(const CurveSet& cs, const std::array<double, 3>& q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int d = 0;
  for (const auto& br : cs.branches)
    if (inside_oval(br, unit(q), rng)) ++d;
  return d;
}

RegionTopology identify_H_le0(const CurveSet& cs, const TrivariateHomogeneous& H,
                              const NestingResult& nest, std::uint64_t seed) {
  RegionTopology rt;
  rt.P = nest.P;
  rt.N = nest.N;
  rt.chi_Bplus = nest.P - nest.N;
  rt.chi_Bminus = nest.N - nest.P + 1;
  rt.nesting_parent = nest.parent;
  rt.depth = nest.depth;
  for (int d : nest.depth)
    if (d == 0) ++rt.Cu_boundary_count;

  // sample where |H| is largest among a spread of points, well away from the curve
  Vec3 best{0, 0, 1};
  double best_val = -1.0;
  for (const auto& q : fibonacci(2000)) {
    const double v = std::abs(H(q));
    if (v > best_val) {
      best_val = v;
      best = q;
    }
  }
  const double sign_here = H(best) < 0 ? -1.0 : 1.0;
  if (cs.branches.empty()) {
    if (sign_here < 0) {
      rt.H_le0_is = Side::Bminus;
      rt.chi_H_le0 = rt.chi_Bminus;
      rt.H_le0_orientable = false;
    } else {
      rt.H_le0_is = Side::empty;
      rt.chi_H_le0 = 0;
      rt.H_le0_orientable = true;
    }
    return rt;
  }
  const int depth = containment_depth(cs, best, seed);
  const double sign_depth0 = depth % 2 == 0 ? sign_here : -sign_here;
  if (sign_depth0 < 0) {
    rt.H_le0_is = Side::Bminus;
    rt.chi_H_le0 = rt.chi_Bminus;
    rt.H_le0_orientable = false;
  } else {
    rt.H_le0_is = Side::Bplus;
    rt.chi_H_le0 = rt.chi_Bplus;
    rt.H_le0_orientable = true;
  }
  return rt;
}

// ---------------------------------------------------------------------------

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

struct CubeGrid {
  int G;
  int half;
  std::size_t stride;

  explicit CubeGrid(int g) : G(g), half(g / 2), stride(static_cast<std::size_t>(g + 1)) {}

  static std::array<int, 2> others(int axis) {
    return axis == 0 ? std::array<int, 2>{1, 2} : axis == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1};
  }
  std::array<int, 3> coords(int f, int i, int j) const {
    std::array<int, 3> c{};
    const int axis = f / 2;
    c[axis] = f % 2 == 0 ? half : -half;
    const auto o = others(axis);
    c[o[0]] = i - half;
    c[o[1]] = j - half;
    return c;
  }
  unsigned mask(const std::array<int, 3>& c) const {
    unsigned m = 0;
    for (int a = 0; a < 3; ++a) {
      if (c[a] == half) m |= 1u << (2 * a);
      if (c[a] == -half) m |= 1u << (2 * a + 1);
    }
    return m;
  }
  std::uint32_t index(int f, int i, int j) const {
    return static_cast<std::uint32_t>(f * stride * stride + j * stride + i);
  }
  // copy of the same 3D vertex on face f (which must be in its mask)
  std::uint32_t index_on(int f, const std::array<int, 3>& c) const {
    const auto o = others(f / 2);
    return index(f, c[o[0]] + half, c[o[1]] + half);
  }
  std::size_t size() const { return 6 * stride * stride; }
};

int lowest_bit(unsigned m) { return std::countr_zero(m); }

struct SignComplexStats {
  long long V[2] = {0, 0}, E[2] = {0, 0}, F[2] = {0, 0};
  int comps[2] = {0, 0};
  int comps_rp2[2] = {0, 0};
  bool hidden_change = false;
};

SignComplexStats analyze_grid(const TrivariateHomogeneous& H, int G) {
  CubeGrid cg(G);
  std::vector<std::uint8_t> sign(cg.size());
  for (int f = 0; f < 6; ++f)
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) {
        const auto c = cg.coords(f, i, j);
        sign[cg.index(f, i, j)] = H(c[0], c[1], c[2]) < 0 ? 1 : 0;
      }

  SignComplexStats st;
  UnionFind uf(cg.size()), uf2(cg.size());
  auto s_of = [&](int f, int i, int j) { return sign[cg.index(f, i, j)]; };
  auto point = [&](int f, double i, double j) {
    const auto o = CubeGrid::others(f / 2);
    std::array<double, 3> p{};
    p[f / 2] = f % 2 == 0 ? cg.half : -cg.half;
    p[o[0]] = i - cg.half;
    p[o[1]] = j - cg.half;
    return p;
  };
  auto hidden_on_edge = [&](int f, double i0, double j0, double i1, double j1, std::uint8_t s) {
    const auto p = point(f, 0.5 * (i0 + i1), 0.5 * (j0 + j1));
    return (H(p[0], p[1], p[2]) < 0 ? 1 : 0) != s;
  };

  for (int f = 0; f < 6; ++f) {
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) {
        const auto c = cg.coords(f, i, j);
        const unsigned m = cg.mask(c);
        const std::uint32_t v = cg.index(f, i, j);
        const int low = lowest_bit(m);
        if (low == f) ++st.V[sign[v]];
        else uf.unite(v, cg.index_on(low, c)), uf2.unite(v, cg.index_on(low, c));
        // antipode lives on the opposite face at mirrored local coordinates
        uf2.unite(v, cg.index(f ^ 1, G - i, G - j));
      }
    auto edge = [&](int i0, int j0, int i1, int j1) {
      const std::uint32_t a = cg.index(f, i0, j0), b = cg.index(f, i1, j1);
      if (sign[a] != sign[b]) return;
      const unsigned m = cg.mask(cg.coords(f, i0, j0)) & cg.mask(cg.coords(f, i1, j1));
      if (m == 0 || lowest_bit(m) == f) ++st.E[sign[a]];
      uf.unite(a, b);
      uf2.unite(a, b);
      if (!st.hidden_change && hidden_on_edge(f, i0, j0, i1, j1, sign[a])) st.hidden_change = true;
    };
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) {
        if (i < G) edge(i, j, i + 1, j);
        if (j < G) edge(i, j, i, j + 1);
        if (i < G && j < G) edge(i, j, i + 1, j + 1);
      }
    for (int j = 0; j < G; ++j)
      for (int i = 0; i < G; ++i) {
        const auto s00 = s_of(f, i, j), s10 = s_of(f, i + 1, j), s11 = s_of(f, i + 1, j + 1),
                   s01 = s_of(f, i, j + 1);
        if (s00 == s10 && s10 == s11) {
          ++st.F[s00];
          if (!st.hidden_change) {
            const auto p = point(f, i + 2.0 / 3.0, j + 1.0 / 3.0);
            if ((H(p[0], p[1], p[2]) < 0 ? 1 : 0) != s00) st.hidden_change = true;
          }
        }
        if (s00 == s11 && s11 == s01) {
          ++st.F[s00];
          if (!st.hidden_change) {
            const auto p = point(f, i + 1.0 / 3.0, j + 2.0 / 3.0);
            if ((H(p[0], p[1], p[2]) < 0 ? 1 : 0) != s00) st.hidden_change = true;
          }
        }
      }
  }

  std::vector<char> seen(cg.size(), 0), seen2(cg.size(), 0);
  for (int f = 0; f < 6; ++f)
    for (int j = 0; j <= G; ++j)
      for (int i = 0; i <= G; ++i) {
        const std::uint32_t v = cg.index(f, i, j);
        const std::uint32_t r = uf.find(v), r2 = uf2.find(v);
        if (!seen[r]) {
          seen[r] = 1;
          ++st.comps[sign[v]];
        }
        if (!seen2[r2]) {
          seen2[r2] = 1;
          ++st.comps_rp2[sign[v]];
        }
      }
  return st;
}

}  // namespace

GridTopology sphere_grid_fallback(const TrivariateHomogeneous& H, int grid) {
  if (grid < 2) throw std::invalid_argument("grid too small");
  int G = grid + grid % 2;
  GridTopology out;
  SignComplexStats st;
  for (int level = 0;; ++level) {
    st = analyze_grid(H, G);
    out.refinements = level;
    if (!st.hidden_change || level == 3 || G * 2 > 2048) break;
    G *= 2;
  }
  out.grid = G;
  auto chi = [&](int s) {
    const long long sphere = st.V[s] - st.E[s] + st.F[s];
    if (sphere % 2 != 0) throw NumericalError("sign complex is not antipodally symmetric");
    return static_cast<int>(sphere / 2);
  };
  out.chi_positive = chi(0);
  out.chi_negative = chi(1);
  out.components_positive = st.comps_rp2[0];
  out.components_negative = st.comps_rp2[1];
  out.positive_orientable = st.comps[0] == 2 * st.comps_rp2[0];
  out.negative_orientable = st.comps[1] == 2 * st.comps_rp2[1];
  if (out.components_negative == 0) {
    out.H_le0_is = Side::empty;
    out.chi_Bminus = out.chi_positive;
    out.chi_Bplus = 0;
  } else if (!out.negative_orientable) {
    out.H_le0_is = Side::Bminus;
    out.chi_Bminus = out.chi_negative;
    out.chi_Bplus = out.chi_positive;
  } else {
    out.H_le0_is = Side::Bplus;
    out.chi_Bplus = out.chi_negative;
    out.chi_Bminus = out.chi_positive;
  }
  return out;
}

UnboundedComponent unbounded_component(const CurveSet& cs, const NestingResult& nest) {
  if (!cs.compact_in_affine_chart) throw std::invalid_argument("C_u undefined");
  UnboundedComponent u;
  for (int d : nest.depth)
    if (d == 0) ++u.N_u;
  u.chi = 1 - u.N_u;
  return u;
}

}  // namespace hatlas
