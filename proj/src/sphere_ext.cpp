#include "hessian_atlas/sphere_ext.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

using Vec3 = std::array<double, 3>;

std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::skipped: return "skipped";
  }
  return "skipped";
}

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 axpy(double s, const Vec3& x, const Vec3& y) { return {s * x[0] + y[0], s * x[1] + y[1], s * x[2] + y[2]}; }
Vec3 unit(const Vec3& a) {
  const double r = std::sqrt(dot(a, a));
  return {a[0] / r, a[1] / r, a[2] / r};
}
Vec3 project(const Vec3& v, const Vec3& q) { return axpy(-dot(v, q), q, v); }

double wrap_pi(double a) {
  // into (-pi/2, pi/2]: difference of two lines
  while (a > std::numbers::pi / 2) a -= std::numbers::pi;
  while (a <= -std::numbers::pi / 2) a += std::numbers::pi;
  return a;
}

// Tangent frame from the rotation field (-v, u, 0) and the pole direction.
std::pair<Vec3, Vec3> frame(const Vec3& q) {
  const Vec3 t1 = unit(project({-q[1], q[0], 0.0}, q));
  Vec3 t2 = project({0.0, 0.0, 1.0}, q);
  t2 = unit(axpy(-dot(t2, t1), t1, t2));
  return {t1, t2};
}

struct Lines {
  bool defined = false;
  double a = 0.0, b = 0.0;
};

Lines asymptotic_lines(const SphereForm& sf, const Vec3& q) {
  const Mat3 M = sf.matrix(q);
  const auto [t1, t2] = frame(q);
  auto form = [&](const Vec3& x, const Vec3& y) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += x[i] * M[i][j] * y[j];
    return s;
  };
  const double a = form(t1, t1), b = form(t1, t2), c = form(t2, t2);
  Lines out;
  if (a * c - b * b >= 0.0) return out;
  const double mean = 0.5 * (a + c), rad = std::hypot(0.5 * (a - c), b);
  const double lp = mean + rad, lm = mean - rad;
  const double phi = 0.5 * std::atan2(2 * b, a - c);
  const double off = std::atan(std::sqrt(lp / -lm));
  out.defined = true;
  out.a = phi + off;
  out.b = phi - off;
  return out;
}

}  // namespace

Mat3 SphereForm::matrix(const std::array<double, 3>& q) const {
  const double w = q[2];
  const double uu = Fuu(q), uv = Fuv(q), vv = Fvv(q), a = A(q), b = B(q), s = S(q);
  return {{{w * w * uu, w * w * uv, w * a}, {w * w * uv, w * w * vv, w * b}, {w * a, w * b, s}}};
}

SphereForm build_sphere_form(const BivariatePolynomial& f) {
  if (f.degree() < 3) throw std::invalid_argument("degree >= 3 required");
  SphereForm sf;
  sf.n = f.degree();
  sf.F = homogenize(f, sf.n);
  sf.Fuu = sf.F.derivative(Var3::x).derivative(Var3::x);
  sf.Fuv = sf.F.derivative(Var3::x).derivative(Var3::y);
  sf.Fvv = sf.F.derivative(Var3::y).derivative(Var3::y);
  sf.A = -1.0 * (sf.Fuu.multiplied_by(Var3::x) + sf.Fuv.multiplied_by(Var3::y));
  sf.B = -1.0 * (sf.Fuv.multiplied_by(Var3::x) + sf.Fvv.multiplied_by(Var3::y));
  sf.S = sf.Fuu.multiplied_by(Var3::x).multiplied_by(Var3::x) +
         2.0 * sf.Fuv.multiplied_by(Var3::x).multiplied_by(Var3::y) +
         sf.Fvv.multiplied_by(Var3::y).multiplied_by(Var3::y);
  return sf;
}

LineFieldIndex line_field_index(const SphereForm& sf, const std::array<double, 3>& center,
                                double radius, int samples) {
  const Vec3 c = unit(center);
  for (double r = radius; r >= 1e-4 * (1 - 1e-12); r *= 0.5) {
    const auto [b1, b2] = frame(c);
    std::vector<Lines> lines(samples);
    bool ok = true;
    for (int j = 0; j < samples && ok; ++j) {
      const double th = (j + 0.5) * 2 * std::numbers::pi / samples;
      const Vec3 dir = axpy(std::sin(th), b2, {std::cos(th) * b1[0], std::cos(th) * b1[1], std::cos(th) * b1[2]});
      const Vec3 q = unit(axpy(std::sin(r), dir, {std::cos(r) * c[0], std::cos(r) * c[1], std::cos(r) * c[2]}));
      lines[j] = asymptotic_lines(sf, q);
      if (!lines[j].defined) ok = false;
      // both lines collapse onto the equator tangent near the equator, so
      // the separation test only applies away from it
      if (ok && std::abs(q[2]) > 0.1 * std::sin(r) && std::abs(wrap_pi(lines[j].a - lines[j].b)) < 1e-3) ok = false;
    }
    if (!ok) continue;
    // each root label of the restricted form is continuous where the lines
    // are defined; only its representative mod pi needs unwrapping
    auto run = [&](bool first) {
      double cur = first ? lines[0].a : lines[0].b;
      double total = 0.0;
      for (int j = 1; j <= samples; ++j) {
        const Lines& L = lines[j % samples];
        const double step = wrap_pi((first ? L.a : L.b) - cur);
        total += step;
        cur += step;
      }
      return total / (2 * std::numbers::pi);
    };
    LineFieldIndex out;
    out.radius = r;
    out.raw = run(true);
    out.raw_other = run(false);
    out.index = std::round(out.raw * 2.0) / 2.0;
    if (std::abs(out.raw - out.index) >= 0.05) continue;
    return out;
  }
  throw NumericalError("index undecidable");
}

std::vector<InfinitySingularPoint> singular_points_at_infinity(const SphereForm& sf,
                                                               const TopFormAnalysis& tfa,
                                                               const TrivariateHomogeneous& Hf) {
  std::vector<InfinitySingularPoint> out;
  const double scale = std::max(sf.S.max_abs_coeff(), 1e-300);
  for (const auto& d : tfa.factor_directions) {
    for (double sgn : {1.0, -1.0}) {
      const Vec3 q{sgn * d[0], sgn * d[1], 0.0};
      const Mat3 M = sf.matrix(q);
      double worst = 0.0;
      for (const auto& row : M)
        for (double v : row) worst = std::max(worst, std::abs(v));
      if (worst > 1e-9 * scale) throw NumericalError("inconsistent top-form root");
      InfinitySingularPoint p;
      p.direction = {q[0], q[1]};
      p.representative = sgn > 0;
      const double h = Hf(unit({q[0], q[1], 0.01}));
      p.Hf_sign_nearby = h < 0 ? -1 : h > 0 ? 1 : 0;
      const LineFieldIndex li = line_field_index(sf, q);
      p.index = li.index;
      p.raw_index = li.raw;
      p.radius = li.radius;
      p.sheets_agree = std::abs(li.raw - li.raw_other) < 0.05;
      out.push_back(p);
    }
  }
  return out;
}

namespace {

std::string half(int twice) {
  std::ostringstream os;
  if (twice % 2 == 0) os << twice / 2;
  else os << twice << "/2";
  return os.str();
}

}  // namespace

std::vector<AuditResult> global_index_audit(const std::vector<InfinitySingularPoint>& points,
                                            const RegionTopology& rt, const GlobalIndexInputs& in,
                                            const std::optional<std::string>& skip_reason) {
  std::vector<AuditResult> out{{"index_sum", AuditStatus::skipped, ""},
                               {"index_sum_bounds", AuditStatus::skipped, ""},
                               {"euler_index_identity", AuditStatus::skipped, ""},
                               {"godron_balance", AuditStatus::skipped, ""},
                               {"no_lone_positive_godron", AuditStatus::skipped, ""}};
  std::optional<std::string> reason = skip_reason;
  if (!reason && !in.generic) reason = "non-generic - index audits disabled";
  if (!reason && !in.transverse) reason = "curve not transverse to the line at infinity";
  if (reason) {
    for (auto& a : out) a.detail = *reason;
    return out;
  }
  double sum = 0.0;
  for (const auto& p : points)
    if (p.representative) sum += p.index;
  const int twice_sum = static_cast<int>(std::lround(2 * sum));
  auto status = [](bool ok) { return ok ? AuditStatus::pass : AuditStatus::fail; };
  std::ostringstream d0;
  d0 << "S_inf=" << half(twice_sum) << " k=" << in.k;
  out[0].status = status(twice_sum == in.k);
  out[0].detail = d0.str();

  std::ostringstream d1;
  d1 << "0 <= " << half(twice_sum) << " <= " << in.n;
  out[1].status = status(twice_sum >= 0 && twice_sum <= 2 * in.n);
  out[1].detail = d1.str();

  const int rhs = 2 * rt.chi_H_le0 + in.P_minus - in.P_plus;
  std::ostringstream d2;
  d2 << "S_inf=" << half(twice_sum) << " chi(H<=0)=" << rt.chi_H_le0 << " P-=" << in.P_minus
     << " P+=" << in.P_plus << " rhs=" << half(rhs);
  out[2].status = status(twice_sum == rhs);
  out[2].detail = d2.str();

  const bool hyp = in.k - 2 * rt.chi_H_le0 >= 0;
  std::ostringstream d3;
  d3 << "k-2chi=" << in.k - 2 * rt.chi_H_le0 << " P-=" << in.P_minus << " P+=" << in.P_plus;
  out[3].status = status(!hyp || in.P_minus >= in.P_plus);
  out[3].detail = d3.str();

  const bool lone = in.P_plus == 1 && in.P_minus == 0 && in.oval_count == 1 && in.transverse &&
                    rt.H_le0_is == Side::Bminus;
  out[4].status = status(!lone);
  out[4].detail = lone ? "hard inconsistency: lone positive godron on a connected curve"
                       : "configuration absent";
  return out;
}

}  // namespace hatlas
