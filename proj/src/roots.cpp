#include "hessian_atlas/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessian_atlas/errors.hpp"

namespace hatlas {

double horner(const std::vector<double>& c, double t) noexcept {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs_horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  const double at = std::abs(t);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * at + std::abs(*it);
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
  return d;
}

// Safeguarded Newton on a bracket with a sign change.
double refine(const std::vector<double>& c, const std::vector<double>& dc, double a, double b) {
  double fa = horner(c, a);
  if (fa == 0.0) return a;
  if (horner(c, b) == 0.0) return b;
  double t = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double ft = horner(c, t);
    if (ft == 0.0) return t;
    if ((ft < 0) == (fa < 0)) {
      a = t;
      fa = ft;
    } else {
      b = t;
    }
    if (b - a <= 1e-12 * std::max(1.0, std::abs(t))) break;
    const double d = horner(dc, t);
    double next = d != 0.0 ? t - ft / d : a;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  return 0.5 * (a + b);
}

// Roots as plain locations plus multiplicity flag; recursion on derivative.
std::vector<RealRoot> roots_impl(const std::vector<double>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 0) return {};
  if (deg == 1) return {{-c[0] / c[1], true}};

  double bound = 0.0;
  for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(c[i] / c[deg]));
  bound += 1.0;

  const auto dc = derivative(c);
  std::vector<double> crit;
  for (const auto& r : roots_impl(dc))
    if (std::abs(r.t) < bound) crit.push_back(r.t);

  std::vector<double> knots;
  knots.push_back(-bound);
  knots.insert(knots.end(), crit.begin(), crit.end());
  knots.push_back(bound);

  std::vector<RealRoot> found;
  for (double cp : crit) {
    if (std::abs(horner(c, cp)) <= 64 * kEps * abs_horner(c, cp)) found.push_back({cp, false});
  }
  auto near_multiple = [&](double t) {
    for (const auto& r : found)
      if (!r.simple && std::abs(r.t - t) <= 1e-6 * std::max(1.0, std::abs(t))) return true;
    return false;
  };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    if (b <= a) continue;
    const double fa = horner(c, a), fb = horner(c, b);
    if (fa == 0.0 || fb == 0.0 || (fa < 0) == (fb < 0)) continue;
    const double t = refine(c, dc, a, b);
    if (!near_multiple(t)) found.push_back({t, true});
  }
  std::sort(found.begin(), found.end(), [](const RealRoot& x, const RealRoot& y) { return x.t < y.t; });
  return found;
}

}  // namespace

std::vector<RealRoot> real_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  for (double& v : c) v /= scale;
  while (!c.empty() && std::abs(c.back()) <= 1e-14) c.pop_back();
  auto roots = roots_impl(c);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i].t - roots[i - 1].t < 1e-8)
      throw NumericalError("root cluster - simplicity undecidable");
  }
  return roots;
}

}  // namespace hatlas
