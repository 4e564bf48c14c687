#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hessian_atlas/tracer.hpp"

namespace hatlas {

enum class Side { Bplus, Bminus, empty };

std::string to_string(Side s);

struct RegionTopology {
  int P = 0;
  int N = 0;
  int chi_Bplus = 1;
  int chi_Bminus = 0;
  Side H_le0_is = Side::empty;
  int chi_H_le0 = 0;
  bool H_le0_orientable = true;
  /// parent oval index per branch, -1 for depth 0
  std::vector<int> nesting_parent;
  std::vector<int> depth;
  int Cu_boundary_count = 0;
};

struct NestingResult {
  std::vector<int> depth;
  std::vector<int> parent;
  int P = 0;
  int N = 0;
};

/// Depth of every oval. `seed` drives the jitter used when a ray grazes a
/// vertex; throws NumericalError("nesting undecidable") after 16 retries.
NestingResult nesting_forest(const CurveSet& cs, std::uint64_t seed = 42);

/// Number of ovals whose disk contains the sphere point q.
int containment_depth(const CurveSet& cs, const std::array<double, 3>& q, std::uint64_t seed = 42);

/// Fills the remaining fields of a RegionTopology from nesting data and the
/// sign of Hf at a sampled point.
RegionTopology identify_H_le0(const CurveSet& cs, const TrivariateHomogeneous& H,
                              const NestingResult& nest, std::uint64_t seed = 42);

struct GridTopology {
  int grid = 0;
  int chi_Bplus = 0;
  int chi_Bminus = 0;
  /// Euler characteristic of the closed region where H <= 0.
  int chi_negative = 0;
  int chi_positive = 0;
  int components_negative = 0;
  int components_positive = 0;
  bool negative_orientable = true;
  bool positive_orientable = true;
  Side H_le0_is = Side::empty;
  int refinements = 0;
};

/// Sign complex of H on a cube-sphere triangulation, with antipodal
/// identification. The grid doubles (up to three times, at most 2048) while
/// some triangle hides a sign change at an edge midpoint or centroid.
GridTopology sphere_grid_fallback(const TrivariateHomogeneous& H, int grid = 512);

struct UnboundedComponent {
  int N_u = 0;
  int chi = 1;
};

/// Throws std::invalid_argument("C_u undefined") for a curve that meets the
/// line at infinity.
UnboundedComponent unbounded_component(const CurveSet& cs, const NestingResult& nest);

}  // namespace hatlas
