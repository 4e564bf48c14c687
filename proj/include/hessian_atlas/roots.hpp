#pragma once

#include <vector>

namespace hatlas {

struct RealRoot {
  double t = 0.0;
  bool simple = true;
};

/// Real roots of sum c[i] t^i, sorted ascending.
///
/// Brackets come from the roots of the derivative (recursively), so every
/// monotone piece holds at most one root. A critical point where the value
/// is numerically zero is reported as a non-simple root. Throws
/// NumericalError when two roots end up closer than 1e-8.
std::vector<RealRoot> real_roots(std::vector<double> c);

/// Horner evaluation of an ascending coefficient vector.
double horner(const std::vector<double>& c, double t) noexcept;

}  // namespace hatlas
