#include "hessian_atlas/top_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hessian_atlas/errors.hpp"
#include "hessian_atlas/roots.hpp"

namespace hatlas {

std::string to_string(FormClass c) {
  switch (c) {
    case FormClass::hyperbolic: return "hyperbolic";
    case FormClass::elliptic: return "elliptic";
    case FormClass::neither: return "neither";
  }
  return "neither";
}

namespace {

std::array<double, 2> canonical(double u, double v) {
  const double r = std::hypot(u, v);
  u /= r;
  v /= r;
  if (u < 0 || (u == 0 && v < 0)) {
    u = -u;
    v = -v;
  }
  return {u, v};
}

}  // namespace

TopFormAnalysis real_linear_factors(const HomogeneousPolynomial& fn) {
  if (fn.is_zero()) throw std::invalid_argument("zero form has no factor structure");
  const int n = fn.degree();
  TopFormAnalysis out;
  auto c = fn.affine_restriction();
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  // coefficient of y^n decides whether [0:1] is a root
  const bool root_at_vertical = std::abs(c[n]) <= 1e-14 * scale;
  for (const auto& r : real_roots(c)) {
    out.factor_directions.push_back(canonical(1.0, r.t));
    if (!r.simple) out.all_real_factors_simple = false;
  }
  if (root_at_vertical) {
    out.factor_directions.push_back({0.0, 1.0});
    // multiplicity of x as a factor equals the number of vanishing top coefficients
    if (n >= 1 && std::abs(c[n - 1]) <= 1e-14 * scale) out.all_real_factors_simple = false;
  }
  out.k = static_cast<int>(out.factor_directions.size());
  return out;
}

HomogeneousPolynomial form_hessian(const HomogeneousPolynomial& fn) {
  const int d = fn.degree();
  const auto h = hessian_determinant(fn.as_bivariate());
  if (d < 2) return HomogeneousPolynomial(0, {});
  return HomogeneousPolynomial(2 * d - 4, h.coeffs());
}

FormClass classify_form(const HomogeneousPolynomial& fn) {
  if (fn.is_zero() || fn.degree() < 2) throw std::invalid_argument("form of degree >= 2 required");
  const auto h = form_hessian(fn);
  if (h.is_zero()) throw NonGenericError("degenerate top form");
  if (h.degree() > 0 && real_linear_factors(h).k > 0) return FormClass::neither;
  bool neg = true, pos = true;
  for (int i = 0; i < 361; ++i) {
    const double a = std::numbers::pi * i / 361.0;
    const double v = h(std::cos(a), std::sin(a));
    if (v > 0) neg = false;
    if (v < 0) pos = false;
  }
  if (neg) return FormClass::hyperbolic;
  if (pos) return FormClass::elliptic;
  return FormClass::neither;
}

}  // namespace hatlas
