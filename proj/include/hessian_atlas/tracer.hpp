#pragma once

#include <array>
#include <string>
#include <vector>

#include "hessian_atlas/hessian.hpp"
#include "hessian_atlas/poly.hpp"

namespace hatlas {

/// Affine charts of the projective plane: the named coordinate is set to 1.
/// Chart coordinates keep the order of the remaining variables, so the x=1
/// chart uses (y, z) and the y=1 chart uses (x, z).
enum class Chart { z, x, y };

std::string to_string(Chart c);

struct ChartPoint {
  Chart chart = Chart::z;
  std::array<double, 2> coords{0.0, 0.0};
  std::array<double, 3> sphere{0.0, 0.0, 1.0};

  static ChartPoint from_chart(Chart c, double a, double b);
  /// `q` need not be normalized; the sign of q is kept in `sphere`.
  static ChartPoint from_sphere(const std::array<double, 3>& q, Chart c);
  /// Uses the chart of the largest |component|.
  static ChartPoint from_sphere(const std::array<double, 3>& q);
};

struct CurveBranch {
  std::vector<ChartPoint> points;
  bool closed = false;
  bool crosses_infinity = false;
  double arc_length = 0.0;
  /// Smallest |grad Hf| / gradient_scale seen at an accepted point.
  double min_gradient = 0.0;
};

struct CurveSet {
  std::vector<CurveBranch> branches;
  bool compact_in_affine_chart = true;
};

struct TraceOptions {
  int grid = 512;
  double window = 8.0;
  double min_step = 1e-5;
  double max_step = 0.05;
  /// Largest turning angle of the tangent per accepted step (radians).
  double max_turn = 0.02;
  double chart_radius = 4.0;
  std::size_t max_points = 4'000'000;
  /// Relative curve-membership tolerance, see on_curve.
  double tol = 1e-9;
};

/// |H(q)| <= tol |grad H(q)| at the unit lift, with a floor at rounding level.
bool on_curve(const TrivariateHomogeneous& H, const std::array<double, 3>& q, double tol = 1e-9);

/// Projective distance on the sphere: min(|p - q|, |p + q|) for unit p, q.
double projective_distance(const std::array<double, 3>& p, const std::array<double, 3>& q);

std::vector<ChartPoint> find_seeds(const TrivariateHomogeneous& H, const TraceOptions& opt = {});

/// Throws std::invalid_argument when the seed is off the curve or at a
/// critical point, and NumericalError("trace stalled: possible singular
/// curve point") when the corrector keeps failing at the minimum step.
CurveBranch trace_branch(const ChartPoint& seed, const TrivariateHomogeneous& H,
                         const TraceOptions& opt = {});

CurveSet assemble(const std::vector<ChartPoint>& seeds, const TrivariateHomogeneous& H,
                  const TraceOptions& opt = {});

/// Seeds plus assembly, widening the window to 32 when some real root of
/// Hf(x, y, 0) has no traced point nearby. A stall marks hd.smooth = false
/// and rethrows.
CurveSet trace_curve(HessianData& hd, const TraceOptions& opt = {});

}  // namespace hatlas
