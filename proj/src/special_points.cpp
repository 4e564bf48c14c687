#include "hessian_atlas/special_points.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

std::string to_string(FoldType t) {
  switch (t) {
    case FoldType::saddle: return "saddle";
    case FoldType::node: return "node";
    case FoldType::focus: return "focus";
  }
  return "saddle";
}

Jet::Jet(const BivariatePolynomial& f) {
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) d_[i][j] = differentiate(differentiate(f, Axis::x, i), Axis::y, j);
  hess_ = hessian_determinant(f);
  hess_x_ = differentiate(hess_, Axis::x);
  hess_y_ = differentiate(hess_, Axis::y);
}

namespace {

BivariatePolynomial swap_xy(const BivariatePolynomial& f) {
  BivariatePolynomial::Coefficients c;
  for (const auto& [e, v] : f.coeffs()) c[{e[1], e[0]}] = v;
  return BivariatePolynomial(std::move(c));
}

std::array<double, 2> raw_kernel(const Jet& jet, double x, double y) {
  const double a = jet(2, 0, x, y), b = jet(1, 1, x, y), c = jet(0, 2, x, y);
  if (std::abs(a) < 1e-10 && std::abs(b) < 1e-10 && std::abs(c) < 1e-10)
    throw NonGenericError("flat umbilic - non-generic");
  std::array<double, 2> d = std::abs(b) + std::abs(c) >= std::abs(a) + std::abs(b)
                                ? std::array<double, 2>{c, -b}
                                : std::array<double, 2>{-b, a};
  const double r = std::hypot(d[0], d[1]);
  return {d[0] / r, d[1] / r};
}

// Newton along grad(hess) back onto the parabolic curve.
bool project_affine(const Jet& jet, double& x, double& y) {
  for (int it = 0; it < 40; ++it) {
    const double h = jet.hess()(x, y);
    const auto g = jet.hess_gradient(x, y);
    const double gg = g[0] * g[0] + g[1] * g[1];
    if (gg == 0.0) return false;
    const double s = h / gg;
    x -= s * g[0];
    y -= s * g[1];
    if (std::abs(s) * std::sqrt(gg) <= 1e-15 * (1.0 + std::hypot(x, y))) return true;
  }
  const auto g = jet.hess_gradient(x, y);
  return std::abs(jet.hess()(x, y)) <= 1e-9 * std::hypot(g[0], g[1]);
}

double tau_at(const Jet& jet, double x, double y, const std::array<double, 2>& align,
              std::array<double, 2>* dir = nullptr) {
  auto d = raw_kernel(jet, x, y);
  if (d[0] * align[0] + d[1] * align[1] < 0) d = {-d[0], -d[1]};
  if (dir) *dir = d;
  const auto g = jet.hess_gradient(x, y);
  const double gn = std::hypot(g[0], g[1]);
  return (d[0] * g[0] + d[1] * g[1]) / gn;
}

struct Lift {
  // F, F_p, K = F_x + p F_y and their first derivatives in (x, y, p)
  double F, Fp, K;
  Eigen::Matrix3d D;  // rows: grad F, grad F_p, grad K
};

Lift lift_at(const Jet& j, double x, double y, double p) {
  const double fxx = j(2, 0, x, y), fxy = j(1, 1, x, y), fyy = j(0, 2, x, y);
  const double fxxx = j(3, 0, x, y), fxxy = j(2, 1, x, y), fxyy = j(1, 2, x, y), fyyy = j(0, 3, x, y);
  const double f40 = j(4, 0, x, y), f31 = j(3, 1, x, y), f22 = j(2, 2, x, y), f13 = j(1, 3, x, y),
               f04 = j(0, 4, x, y);
  Lift l;
  l.F = fxx + 2 * p * fxy + p * p * fyy;
  l.Fp = 2 * (fxy + p * fyy);
  l.K = fxxx + 3 * p * fxxy + 3 * p * p * fxyy + p * p * p * fyyy;
  l.D << fxxx + 2 * p * fxxy + p * p * fxyy, fxxy + 2 * p * fxyy + p * p * fyyy, l.Fp,
      2 * (fxxy + p * fxyy), 2 * (fxyy + p * fyyy), 2 * fyy,
      f40 + 3 * p * f31 + 3 * p * p * f22 + p * p * p * f13, f31 + 3 * p * f22 + 3 * p * p * f13 + p * p * p * f04,
      3 * fxxy + 6 * p * fxyy + 3 * p * p * fyyy;
  return l;
}

Eigen::Vector3d field(const Lift& l, double p) { return {l.Fp, p * l.Fp, -l.K}; }

Eigen::Matrix3d field_jacobian(const Lift& l, double p) {
  Eigen::Matrix3d J;
  J.row(0) = l.D.row(1);
  J.row(1) = p * l.D.row(1);
  J(1, 2) += l.Fp;
  J.row(2) = -l.D.row(2);
  return J;
}

}  // namespace

AsymptoticDirection kernel_direction(const Jet& jet, double x, double y) {
  const double a = jet(2, 0, x, y), b = jet(1, 1, x, y), c = jet(0, 2, x, y);
  const double h = a * c - b * b;
  if (std::abs(h) > 1e-7 * (a * a + 2 * b * b + c * c) + 1e-300)
    throw std::invalid_argument("point is not parabolic");
  AsymptoticDirection out;
  out.point = ChartPoint::from_chart(Chart::z, x, y);
  out.direction = raw_kernel(jet, x, y);
  return out;
}

AsymptoticDirection kernel_direction(const BivariatePolynomial& f, double x, double y) {
  return kernel_direction(Jet(f), x, y);
}

std::vector<GodronCandidate> detect_godrons(const CurveSet& cs, const BivariatePolynomial& f) {
  const Jet jet(f);
  std::vector<GodronCandidate> out;
  for (std::size_t b = 0; b < cs.branches.size(); ++b) {
    const auto& pts = cs.branches[b].points;
    bool have_prev = false;
    double px = 0, py = 0, ptau = 0;
    std::array<double, 2> pdir{1, 0};
    int flat_run = 0;
    for (const auto& cp : pts) {
      const auto& q = cp.sphere;
      if (std::abs(q[2]) < 1e-4) {
        have_prev = false;
        continue;
      }
      double x = q[0] / q[2], y = q[1] / q[2];
      std::array<double, 2> dir{};
      const double tau = tau_at(jet, x, y, have_prev ? pdir : raw_kernel(jet, x, y), &dir);
      flat_run = std::abs(tau) < 1e-9 ? flat_run + 1 : 0;
      if (flat_run > 100) throw NonGenericError("degenerate tangency arc - non-generic");
      if (have_prev && tau != 0.0 && ptau != 0.0 && (tau < 0) != (ptau < 0)) {
        // bisection on the chord, each probe projected back to the curve
        double lo = 0.0, hi = 1.0, tlo = ptau;
        double gx = x, gy = y, gtau = tau;
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (lo + hi);
          double mx = px + m * (x - px), my = py + m * (y - py);
          if (!project_affine(jet, mx, my)) break;
          const double tm = tau_at(jet, mx, my, pdir);
          gx = mx;
          gy = my;
          gtau = tm;
          if (std::abs(tm) < 1e-10) break;
          if ((tm < 0) == (tlo < 0)) {
            lo = m;
            tlo = tm;
          } else {
            hi = m;
          }
          if (hi - lo < 1e-16) break;
        }
        // a jump of the aligned kernel is not a tangency
        bool dup = std::abs(gtau) > 1e-6;
        for (const auto& g : out)
          if (std::hypot(g.x - gx, g.y - gy) < 1e-6 * (1.0 + std::hypot(gx, gy))) dup = true;
        if (!dup) out.push_back({gx, gy, b, gtau});
      }
      have_prev = true;
      px = x;
      py = y;
      ptau = tau;
      pdir = dir;
    }
  }
  return out;
}

SpecialParabolicPoint classify_godron(const GodronCandidate& g, const BivariatePolynomial& f, int chart) {
  const Jet jet0(f);
  const auto d = raw_kernel(jet0, g.x, g.y);
  bool use_q = std::abs(d[1]) > std::abs(d[0]);
  if (chart == 1) use_q = false;
  if (chart == 2) use_q = true;
  const BivariatePolynomial fc = use_q ? swap_xy(f) : f;
  const Jet jet(fc);
  double x = use_q ? g.y : g.x, y = use_q ? g.x : g.y;
  const double dx = use_q ? d[1] : d[0], dy = use_q ? d[0] : d[1];
  if (std::abs(dx) < 1e-12) throw NumericalError("slope chart cannot represent the direction");
  double p = dy / dx;

  Lift l = lift_at(jet, x, y, p);
  for (int it = 0; it < 50; ++it) {
    const Eigen::Vector3d r(l.F, l.Fp, l.K);
    const Eigen::Vector3d step = l.D.fullPivLu().solve(-r);
    x += step[0];
    y += step[1];
    p += step[2];
    l = lift_at(jet, x, y, p);
    if (step.norm() <= 1e-14 * (1.0 + std::abs(x) + std::abs(y) + std::abs(p))) break;
  }
  const double fscale = l.D.norm() * (1.0 + std::abs(x) + std::abs(y) + std::abs(p));
  if (std::abs(l.F) + std::abs(l.Fp) + std::abs(l.K) > 1e-7 * fscale ||
      std::hypot(x - (use_q ? g.y : g.x), y - (use_q ? g.x : g.y)) > 1e-3 * (1.0 + std::hypot(x, y)))
    throw NumericalError("Lie-Cartan lift did not converge");

  const Eigen::Matrix3d J = field_jacobian(l, p);
  const Eigen::Vector3d gradF = l.D.row(0).transpose();
  const Eigen::Vector3d e1(0, 0, 1);
  Eigen::Vector3d e2(-gradF[1], gradF[0], 0);
  if (e2.norm() == 0.0) throw NonGenericError("degenerate folded singularity - non-generic");
  e2.normalize();
  Eigen::Matrix2d R;
  R << e1.dot(J * e1), e1.dot(J * e2), e2.dot(J * e1), e2.dot(J * e2);
  const double D = R.determinant();
  const double T = R.trace();
  if (std::abs(D) <= 1e-9 * J.squaredNorm()) throw NonGenericError("degenerate folded singularity - non-generic");

  SpecialParabolicPoint sp;
  const double gx = use_q ? y : x, gy = use_q ? x : y;
  sp.location = ChartPoint::from_chart(Chart::z, gx, gy);
  sp.direction.point = sp.location;
  sp.direction.direction = raw_kernel(jet0, gx, gy);
  sp.lie_cartan_det = D;
  sp.lie_cartan_trace = T;
  sp.lift = {x, y, p, use_q};
  if (D < 0) {
    sp.folded_type = FoldType::saddle;
    sp.index = -1;
  } else {
    sp.folded_type = T * T - 4 * D >= 0 ? FoldType::node : FoldType::focus;
    sp.index = 1;
  }
  return sp;
}

int winding_index(const SpecialParabolicPoint& sp, const BivariatePolynomial& f) {
  const BivariatePolynomial fc = sp.lift.q_chart ? swap_xy(f) : f;
  const Jet jet(fc);
  const double x0 = sp.lift.x, y0 = sp.lift.y, p0 = sp.lift.p;
  const Lift l0 = lift_at(jet, x0, y0, p0);
  const Eigen::Vector3d P0(x0, y0, p0);
  const Eigen::Vector3d gradF = l0.D.row(0).transpose();
  const Eigen::Vector3d nrm = gradF.normalized();
  const Eigen::Vector3d e1(0, 0, 1);
  const Eigen::Vector3d e2 = Eigen::Vector3d(-gradF[1], gradF[0], 0).normalized();
  const double base = 1.0 + std::abs(x0) + std::abs(y0) + std::abs(p0);

  auto wind = [&](double rho, int m) -> std::optional<double> {
    double total = 0.0, prev = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double th = 2 * std::numbers::pi * k / m;
      Eigen::Vector3d P = P0 + rho * (std::cos(th) * e1 + std::sin(th) * e2);
      for (int it = 0; it < 30; ++it) {
        const Lift l = lift_at(jet, P[0], P[1], P[2]);
        const double dn = l.D.row(0).dot(nrm);
        if (dn == 0.0) return std::nullopt;
        const double dr = -l.F / dn;
        P += dr * nrm;
        if (std::abs(dr) < 1e-16 * base) break;
      }
      const Lift l = lift_at(jet, P[0], P[1], P[2]);
      const Eigen::Vector3d xi = field(l, P[2]);
      const double ang = std::atan2(e2.dot(xi), e1.dot(xi));
      if (k > 0) {
        double da = ang - prev;
        while (da > std::numbers::pi) da -= 2 * std::numbers::pi;
        while (da < -std::numbers::pi) da += 2 * std::numbers::pi;
        if (std::abs(da) > std::numbers::pi / 4) return std::nullopt;
        total += da;
      }
      prev = ang;
    }
    return total / (2 * std::numbers::pi);
  };

  for (double rho : {1e-3 * base, 1e-4 * base, 1e-5 * base}) {
    for (int m : {720, 2880, 11520}) {
      if (auto w = wind(rho, m)) {
        const double r = std::round(*w);
        if (std::abs(*w - r) < 0.05) return static_cast<int>(r);
      }
    }
  }
  throw NumericalError("winding index undecidable");
}

}  // namespace hatlas
