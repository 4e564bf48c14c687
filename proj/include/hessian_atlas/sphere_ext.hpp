#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/special_points.hpp"
#include "hessian_atlas/top_form.hpp"
#include "hessian_atlas/topology.hpp"

namespace hatlas {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Quadratic differential form on the sphere, in variables (u, v, w) laid
/// out as (x, y, z) of TrivariateHomogeneous.
struct SphereForm {
  int n = 0;
  TrivariateHomogeneous F, Fuu, Fuv, Fvv, A, B, S;

  /// Symmetric matrix acting on (du, dv, dw) at the point q.
  Mat3 matrix(const std::array<double, 3>& q) const;
};

/// Throws std::invalid_argument for degree < 3.
SphereForm build_sphere_form(const BivariatePolynomial& f);

struct InfinitySingularPoint {
  std::array<double, 2> direction{1.0, 0.0};
  /// upper representative of the antipodal pair
  bool representative = true;
  double index = 0.0;
  double raw_index = 0.0;
  double radius = 0.0;
  int Hf_sign_nearby = 0;
  bool sheets_agree = true;
};

/// Two antipodal sphere points per real factor of f_n, indices filled in.
/// Throws NumericalError("inconsistent top-form root") when the form does
/// not vanish at a claimed root.
std::vector<InfinitySingularPoint> singular_points_at_infinity(const SphereForm& sf,
                                                               const TopFormAnalysis& tfa,
                                                               const TrivariateHomogeneous& Hf);

struct LineFieldIndex {
  double raw = 0.0;
  double index = 0.0;
  double radius = 0.0;
  /// raw index obtained when starting on the other sheet
  double raw_other = 0.0;
};

/// Rotation of an asymptotic line along a geodesic loop, divided by 2 pi.
/// Halves the radius (down to 1e-4) on sheet ambiguity; throws
/// NumericalError("index undecidable") beyond that.
LineFieldIndex line_field_index(const SphereForm& sf, const std::array<double, 3>& center,
                                double radius = 0.05, int samples = 720);

enum class AuditStatus { pass, fail, skipped };

std::string to_string(AuditStatus s);

struct AuditResult {
  std::string name;
  AuditStatus status = AuditStatus::skipped;
  std::string detail;
};

struct GlobalIndexInputs {
  int n = 0;
  int k = 0;
  bool generic = false;
  bool transverse = false;
  int oval_count = 0;
  int P_minus = 0;
  int P_plus = 0;
};

/// Index-sum identity, its bounds, the Euler characteristic identity and the
/// two godron predicates, in that order.
std::vector<AuditResult> global_index_audit(const std::vector<InfinitySingularPoint>& points,
                                            const RegionTopology& rt, const GlobalIndexInputs& in,
                                            const std::optional<std::string>& skip_reason = std::nullopt);

}  // namespace hatlas
