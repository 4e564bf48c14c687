#pragma once

#include <array>
#include <string>
#include <vector>

#include "hessian_atlas/poly.hpp"

namespace hatlas {

enum class FormClass { hyperbolic, elliptic, neither };

std::string to_string(FormClass c);

/// Real linear factors of a binary form. Directions are unit vectors (u, v)
/// with f(u, v) = 0, sign-normalized so the first nonzero entry is positive.
struct TopFormAnalysis {
  int k = 0;
  std::vector<std::array<double, 2>> factor_directions;
  bool all_real_factors_simple = true;
};

/// Throws std::invalid_argument on the zero form and NumericalError when the
/// roots cannot be separated.
TopFormAnalysis real_linear_factors(const HomogeneousPolynomial& fn);

/// Hessian determinant of a binary form, again a binary form (degree 2d-4).
HomogeneousPolynomial form_hessian(const HomogeneousPolynomial& fn);

/// Throws NonGenericError("degenerate top form") if Hess(fn) vanishes.
FormClass classify_form(const HomogeneousPolynomial& fn);

}  // namespace hatlas
