#include "hessian_atlas/hessian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

SecondFundamentalForm second_fundamental_form(const BivariatePolynomial& f) {
  return {differentiate(f, Axis::x, 2), differentiate(differentiate(f, Axis::x), Axis::y),
          differentiate(f, Axis::y, 2)};
}

HessianData build_hessian(const BivariatePolynomial& f) {
  if (f.degree() < 2) throw std::invalid_argument("degree >= 2 required");
  HessianData hd;
  hd.f = f;
  hd.n = f.degree();
  hd.hess = hessian_determinant(f);
  if (hd.hess.is_zero()) throw NonGenericError("Hessian identically zero");
  hd.Hf = homogenize(hd.hess, 2 * hd.n - 4);
  return hd;
}

double gradient_scale(const TrivariateHomogeneous& H) {
  return std::max(1.0, static_cast<double>(H.degree())) * H.max_abs_coeff();
}

bool check_transversality_at_infinity(const HessianData& hd, const TopFormAnalysis& /*tfa*/) {
  const auto h = hd.Hf.at_infinity();
  if (h.is_zero()) throw NonGenericError("no transversality certificate");
  if (h.degree() == 0) return true;
  TopFormAnalysis roots;
  try {
    roots = real_linear_factors(h);
  } catch (const NumericalError&) {
    return false;
  }
  if (!roots.all_real_factors_simple) return false;
  const double scale = gradient_scale(hd.Hf);
  for (const auto& d : roots.factor_directions) {
    const auto g = hd.Hf.gradient({d[0], d[1], 0.0});
    if (std::hypot(g[0], g[1]) <= 1e-9 * scale) return false;
  }
  return true;
}

namespace {

std::array<double, 3> normalized(std::array<double, 3> q) {
  const double r = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
  return {q[0] / r, q[1] / r, q[2] / r};
}

double norm3(const std::array<double, 3>& g) { return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]); }

}  // namespace

std::vector<std::array<double, 3>> find_singular_points(const TrivariateHomogeneous& H) {
  if (H.degree() < 2) return {};
  const double scale = gradient_scale(H);
  const std::array<TrivariateHomogeneous, 3> dH{H.derivative(Var3::x), H.derivative(Var3::y),
                                                H.derivative(Var3::z)};

  // Fibonacci sweep of the upper hemisphere; keep the points with the
  // smallest gradient as starting guesses.
  constexpr int kSweep = 20000;
  std::vector<std::pair<double, std::array<double, 3>>> scored;
  scored.reserve(kSweep);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kSweep; ++i) {
    const double z = 1.0 - (i + 0.5) / kSweep;
    const double r = std::sqrt(1.0 - z * z);
    const std::array<double, 3> q{r * std::cos(golden * i), r * std::sin(golden * i), z};
    scored.emplace_back(norm3(H.gradient(q)), q);
  }
  std::partial_sort(scored.begin(), scored.begin() + 64, scored.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::array<double, 3>> found;
  for (int s = 0; s < 64; ++s) {
    auto q = scored[s].second;
    double lambda = 1e-3;
    for (int it = 0; it < 60; ++it) {
      const auto g = H.gradient(q);
      Eigen::Vector3d qv(q[0], q[1], q[2]);
      Eigen::Vector3d t1 = qv.unitOrthogonal();
      Eigen::Vector3d t2 = qv.cross(t1);
      Eigen::Matrix3d D2;
      for (int a = 0; a < 3; ++a) {
        const auto row = dH[a].gradient(q);
        for (int b = 0; b < 3; ++b) D2(a, b) = row[b];
      }
      Eigen::Matrix<double, 3, 2> J;
      J.col(0) = D2 * t1;
      J.col(1) = D2 * t2;
      const Eigen::Vector3d r(g[0], g[1], g[2]);
      Eigen::Matrix2d A = J.transpose() * J;
      A.diagonal() *= 1.0 + lambda;
      const Eigen::Vector2d step = A.ldlt().solve(-J.transpose() * r);
      const Eigen::Vector3d cand = qv + step[0] * t1 + step[1] * t2;
      auto qn = normalized({cand[0], cand[1], cand[2]});
      if (norm3(H.gradient(qn)) < r.norm()) {
        q = qn;
        lambda *= 0.3;
      } else {
        lambda *= 10.0;
        if (lambda > 1e8) break;
      }
      if (step.norm() < 1e-14) break;
    }
    if (norm3(H.gradient(q)) > 1e-7 * scale) continue;
    // a critical point of H off the curve (an oval about to be born)
    if (std::abs(H(q)) > 1e-10 * scale) continue;
    if (q[2] < 0 || (q[2] == 0 && (q[1] < 0 || (q[1] == 0 && q[0] < 0)))) q = {-q[0], -q[1], -q[2]};
    bool dup = false;
    for (const auto& p : found) {
      const double d = std::min(norm3({p[0] - q[0], p[1] - q[1], p[2] - q[2]}),
                                norm3({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
      if (d < 1e-6) dup = true;
    }
    if (!dup) found.push_back(q);
  }
  return found;
}

GenericityScreen genericity_screen(const HessianData& hd, const TopFormAnalysis& tfa,
                                   bool folds_nondegenerate, bool search_singular) {
  GenericityScreen s;
  s.smooth = hd.smooth;
  if (s.smooth && search_singular && hd.Hf.degree() >= 2) s.smooth = find_singular_points(hd.Hf).empty();
  s.folds_nondegenerate = folds_nondegenerate;
  s.top_factors_simple = tfa.all_real_factors_simple;
  if (!s.smooth) s.notes.push_back("Hessian curve is singular");
  if (!s.folds_nondegenerate) s.notes.push_back("degenerate folded singularity");
  if (!s.top_factors_simple) s.notes.push_back("leading form has a repeated real factor");
  return s;
}

}  // namespace hatlas
