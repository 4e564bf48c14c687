#pragma once

#include <array>
#include <string>
#include <vector>

#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/top_form.hpp"

namespace hatlas {

/// Coefficients of dx^2, 2 dx dy, dy^2.
struct SecondFundamentalForm {
  BivariatePolynomial a, b, c;
};

SecondFundamentalForm second_fundamental_form(const BivariatePolynomial& f);

struct HessianData {
  BivariatePolynomial f;
  int n = 0;
  BivariatePolynomial hess;
  TrivariateHomogeneous Hf;
  bool transverse_at_infinity = false;
  bool smooth = true;
};

/// Throws std::invalid_argument for degree < 2 and NonGenericError when the
/// Hessian vanishes identically. Degree 2 is accepted so quadrics can be
/// inspected; their projective Hessian has degree 0.
HessianData build_hessian(const BivariatePolynomial& f);

/// Simple real roots of Hess f_n, each with a gradient of Hf that is not
/// parallel to (0,0,1). Throws NonGenericError when Hess f_n vanishes.
bool check_transversality_at_infinity(const HessianData& hd, const TopFormAnalysis& tfa);

/// Points on the unit sphere where grad Hf vanishes (singular points of the
/// projective curve). Local minimisation started from a coarse sweep.
std::vector<std::array<double, 3>> find_singular_points(const TrivariateHomogeneous& H);

/// Scale used for the relative gradient test: max |coefficient| of H.
double gradient_scale(const TrivariateHomogeneous& H);

struct GenericityScreen {
  bool smooth = true;
  bool folds_nondegenerate = true;
  bool top_factors_simple = true;
  std::vector<std::string> notes;

  bool passed() const { return smooth && folds_nondegenerate && top_factors_simple; }
};

/// Collects the three flags; the caller supplies the fold verdict from the
/// godron classifier. With `search_singular` a still-smooth hd is checked
/// with find_singular_points.
GenericityScreen genericity_screen(const HessianData& hd, const TopFormAnalysis& tfa,
                                   bool folds_nondegenerate, bool search_singular = true);

}  // namespace hatlas
