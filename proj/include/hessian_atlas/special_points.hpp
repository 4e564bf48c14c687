#pragma once

#include <array>
#include <string>
#include <vector>

#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/tracer.hpp"

namespace hatlas {

struct AsymptoticDirection {
  ChartPoint point;
  /// unit representative of the line
  std::array<double, 2> direction{1.0, 0.0};
};

enum class FoldType { saddle, node, focus };

std::string to_string(FoldType t);

/// Point of the surface F(x, y, p) = f_xx + 2p f_xy + p^2 f_yy = 0. In the
/// q-chart the roles of x and y are exchanged and p is dx/dy.
struct LieCartanPoint {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
  bool q_chart = false;
};

struct SpecialParabolicPoint {
  ChartPoint location;
  AsymptoticDirection direction;
  FoldType folded_type = FoldType::saddle;
  int index = -1;
  double lie_cartan_det = 0.0;
  double lie_cartan_trace = 0.0;
  LieCartanPoint lift;
};

/// All partial derivatives of f up to order four, evaluated on demand.
class Jet {
 public:
  explicit Jet(const BivariatePolynomial& f);
  /// d^(i+j) f / dx^i dy^j at (x, y), for i + j <= 4.
  double operator()(int i, int j, double x, double y) const { return d_[i][j](x, y); }
  const BivariatePolynomial& hess() const { return hess_; }
  std::array<double, 2> hess_gradient(double x, double y) const {
    return {hess_x_(x, y), hess_y_(x, y)};
  }

 private:
  std::array<std::array<BivariatePolynomial, 5>, 5> d_;
  BivariatePolynomial hess_, hess_x_, hess_y_;
};

/// Kernel line of the Hessian matrix at a parabolic point. Throws
/// std::invalid_argument off the curve and NonGenericError("flat umbilic -
/// non-generic") when all second derivatives vanish.
AsymptoticDirection kernel_direction(const Jet& jet, double x, double y);
AsymptoticDirection kernel_direction(const BivariatePolynomial& f, double x, double y);

struct GodronCandidate {
  double x = 0.0;
  double y = 0.0;
  std::size_t branch = 0;
  double tau = 0.0;
};

/// Sign changes of the tangency function along the traced polylines,
/// refined by bisection.
std::vector<GodronCandidate> detect_godrons(const CurveSet& cs, const BivariatePolynomial& f);

/// Lie-Cartan classification. `chart` selects the slope chart: 0 picks by
/// |p| <= 1, 1 forces the p-chart and 2 the q-chart. Throws NonGenericError
/// for a degenerate folded singularity and NumericalError if the lift does
/// not converge.
SpecialParabolicPoint classify_godron(const GodronCandidate& g, const BivariatePolynomial& f,
                                      int chart = 0);

/// Index of the lifted field at the godron's Lie-Cartan point, from the
/// winding of the field along a small loop on the surface F = 0.
int winding_index(const SpecialParabolicPoint& sp, const BivariatePolynomial& f);

}  // namespace hatlas
