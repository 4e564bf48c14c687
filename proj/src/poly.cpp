#include "hessian_atlas/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hatlas {

namespace {

template <class Map>
double max_abs(const Map& m) {
  double best = 0.0;
  for (const auto& [e, c] : m) best = std::max(best, std::abs(c));
  return best;
}

template <class Map>
Map prune(Map m, double relative) {
  const double cut = relative * max_abs(m);
  std::erase_if(m, [cut](const auto& kv) { return kv.second == 0.0 || std::abs(kv.second) <= cut; });
  return m;
}

double falling(int n, int order) {
  double r = 1.0;
  for (int t = 0; t < order; ++t) r *= n - t;
  return r;
}

}  // namespace

BivariatePolynomial::BivariatePolynomial(Coefficients coeffs) {
  for (const auto& [e, c] : coeffs) {
    if (e[0] < 0 || e[1] < 0) throw std::invalid_argument("negative exponent");
    if (c != 0.0) coeffs_.emplace(e, c);
  }
  for (const auto& [e, c] : coeffs_) degree_ = std::max(degree_, e[0] + e[1]);
  if (coeffs_.empty()) return;
  int max_j = 0;
  for (const auto& [e, c] : coeffs_) max_j = std::max(max_j, e[1]);
  rows_.assign(max_j + 1, {});
  for (const auto& [e, c] : coeffs_) {
    auto& row = rows_[e[1]];
    if (static_cast<int>(row.size()) <= e[0]) row.resize(e[0] + 1, 0.0);
    row[e[0]] = c;
  }
}

BivariatePolynomial BivariatePolynomial::constant(double c) {
  return BivariatePolynomial(Coefficients{{{0, 0}, c}});
}

BivariatePolynomial BivariatePolynomial::monomial(int i, int j, double c) {
  return BivariatePolynomial(Coefficients{{{i, j}, c}});
}

double BivariatePolynomial::coeff(int i, int j) const {
  auto it = coeffs_.find({i, j});
  return it == coeffs_.end() ? 0.0 : it->second;
}

double BivariatePolynomial::max_abs_coeff() const noexcept { return max_abs(coeffs_); }

double BivariatePolynomial::operator()(double x, double y) const noexcept {
  double acc = 0.0;
  for (auto row = rows_.rbegin(); row != rows_.rend(); ++row) {
    double inner = 0.0;
    for (auto c = row->rbegin(); c != row->rend(); ++c) inner = inner * x + *c;
    acc = acc * y + inner;
  }
  return acc;
}

BivariatePolynomial BivariatePolynomial::pruned(double relative) const {
  return BivariatePolynomial(prune(coeffs_, relative));
}

BivariatePolynomial operator+(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  auto out = a.coeffs();
  for (const auto& [e, c] : b.coeffs()) out[e] += c;
  return BivariatePolynomial(prune(std::move(out), kPruneRelative));
}

BivariatePolynomial operator-(const BivariatePolynomial& a) { return -1.0 * a; }

BivariatePolynomial operator-(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  auto out = a.coeffs();
  for (const auto& [e, c] : b.coeffs()) out[e] -= c;
  return BivariatePolynomial(prune(std::move(out), kPruneRelative));
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  BivariatePolynomial::Coefficients out;
  for (const auto& [ea, ca] : a.coeffs())
    for (const auto& [eb, cb] : b.coeffs()) out[{ea[0] + eb[0], ea[1] + eb[1]}] += ca * cb;
  return BivariatePolynomial(prune(std::move(out), kPruneRelative));
}

BivariatePolynomial operator*(double s, const BivariatePolynomial& a) {
  auto out = a.coeffs();
  for (auto& [e, c] : out) c *= s;
  return BivariatePolynomial(std::move(out));
}

// ---------------------------------------------------------------------------

HomogeneousPolynomial::HomogeneousPolynomial(int degree, std::map<Exponent2, double> coeffs)
    : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  for (const auto& [e, c] : coeffs) {
    if (e[0] < 0 || e[1] < 0 || e[0] + e[1] != degree)
      throw std::invalid_argument("monomial degree does not match homogeneous degree");
    if (c != 0.0) coeffs_.emplace(e, c);
  }
}

double HomogeneousPolynomial::coeff(int i, int j) const {
  auto it = coeffs_.find({i, j});
  return it == coeffs_.end() ? 0.0 : it->second;
}

double HomogeneousPolynomial::operator()(double x, double y) const noexcept {
  // Horner in the ratio is unstable near x = 0, so expand by powers of y.
  double acc = 0.0;
  for (int j = degree_; j >= 0; --j) {
    acc *= y;
    auto it = coeffs_.find({degree_ - j, j});
    if (it != coeffs_.end()) acc += it->second * std::pow(x, degree_ - j);
  }
  return acc;
}

std::vector<double> HomogeneousPolynomial::affine_restriction() const {
  std::vector<double> out(degree_ + 1, 0.0);
  for (const auto& [e, c] : coeffs_) out[e[1]] = c;
  return out;
}

// ---------------------------------------------------------------------------

TrivariateHomogeneous::TrivariateHomogeneous(int degree, std::map<Exponent3, double> coeffs)
    : degree_(degree) {
  if (degree < 0 || degree > kMaxDegree) throw std::invalid_argument("unsupported degree");
  for (const auto& [e, c] : coeffs) {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree)
      throw std::invalid_argument("monomial degree does not match homogeneous degree");
    if (c != 0.0) coeffs_.emplace(e, c);
  }
  compile();
}

void TrivariateHomogeneous::compile() {
  terms_.clear();
  terms_.reserve(coeffs_.size());
  for (const auto& [e, c] : coeffs_) terms_.push_back({e[0], e[1], e[2], c});
}

double TrivariateHomogeneous::coeff(int i, int j, int k) const {
  auto it = coeffs_.find({i, j, k});
  return it == coeffs_.end() ? 0.0 : it->second;
}

double TrivariateHomogeneous::max_abs_coeff() const noexcept { return max_abs(coeffs_); }

double TrivariateHomogeneous::operator()(double x, double y, double z) const noexcept {
  std::array<double, kMaxDegree + 1> px, py, pz;
  px[0] = py[0] = pz[0] = 1.0;
  for (int t = 1; t <= degree_; ++t) {
    px[t] = px[t - 1] * x;
    py[t] = py[t - 1] * y;
    pz[t] = pz[t - 1] * z;
  }
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.c * px[t.i] * py[t.j] * pz[t.k];
  return acc;
}

TrivariateHomogeneous TrivariateHomogeneous::derivative(Var3 v) const {
  if (degree_ == 0) return TrivariateHomogeneous(0, {});
  const int axis = static_cast<int>(v);
  std::map<Exponent3, double> out;
  for (const auto& [e, c] : coeffs_) {
    if (e[axis] == 0) continue;
    Exponent3 d = e;
    d[axis] -= 1;
    out[d] += c * e[axis];
  }
  return TrivariateHomogeneous(degree_ - 1, std::move(out));
}

std::array<double, 3> TrivariateHomogeneous::gradient(const std::array<double, 3>& p) const {
  std::array<double, kMaxDegree + 1> px, py, pz;
  px[0] = py[0] = pz[0] = 1.0;
  for (int t = 1; t <= degree_; ++t) {
    px[t] = px[t - 1] * p[0];
    py[t] = py[t - 1] * p[1];
    pz[t] = pz[t - 1] * p[2];
  }
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (const auto& t : terms_) {
    if (t.i > 0) g[0] += t.c * t.i * px[t.i - 1] * py[t.j] * pz[t.k];
    if (t.j > 0) g[1] += t.c * t.j * px[t.i] * py[t.j - 1] * pz[t.k];
    if (t.k > 0) g[2] += t.c * t.k * px[t.i] * py[t.j] * pz[t.k - 1];
  }
  return g;
}

TrivariateHomogeneous TrivariateHomogeneous::multiplied_by(Var3 v) const {
  const int axis = static_cast<int>(v);
  std::map<Exponent3, double> out;
  for (const auto& [e, c] : coeffs_) {
    Exponent3 d = e;
    d[axis] += 1;
    out[d] = c;
  }
  return TrivariateHomogeneous(degree_ + 1, std::move(out));
}

BivariatePolynomial TrivariateHomogeneous::dehomogenize(Var3 chart) const {
  BivariatePolynomial::Coefficients out;
  for (const auto& [e, c] : coeffs_) {
    switch (chart) {
      case Var3::z: out[{e[0], e[1]}] += c; break;
      case Var3::x: out[{e[1], e[2]}] += c; break;
      case Var3::y: out[{e[0], e[2]}] += c; break;
    }
  }
  return BivariatePolynomial(std::move(out));
}

HomogeneousPolynomial TrivariateHomogeneous::at_infinity() const {
  std::map<Exponent2, double> out;
  for (const auto& [e, c] : coeffs_)
    if (e[2] == 0) out[{e[0], e[1]}] = c;
  return HomogeneousPolynomial(degree_, std::move(out));
}

namespace {

TrivariateHomogeneous combine(const TrivariateHomogeneous& a, const TrivariateHomogeneous& b,
                              double sign) {
  if (a.is_zero()) return sign * b;
  if (b.is_zero()) return a;
  if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch");
  auto out = a.coeffs();
  for (const auto& [e, c] : b.coeffs()) out[e] += sign * c;
  return TrivariateHomogeneous(a.degree(), prune(std::move(out), kPruneRelative));
}

}  // namespace

TrivariateHomogeneous operator+(const TrivariateHomogeneous& a, const TrivariateHomogeneous& b) {
  return combine(a, b, 1.0);
}

TrivariateHomogeneous operator-(const TrivariateHomogeneous& a, const TrivariateHomogeneous& b) {
  return combine(a, b, -1.0);
}

TrivariateHomogeneous operator*(double s, const TrivariateHomogeneous& a) {
  auto out = a.coeffs();
  for (auto& [e, c] : out) c *= s;
  return TrivariateHomogeneous(a.degree(), std::move(out));
}

// ---------------------------------------------------------------------------

BivariatePolynomial differentiate(const BivariatePolynomial& p, Axis var, int order) {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  const int axis = var == Axis::x ? 0 : 1;
  BivariatePolynomial::Coefficients out;
  for (const auto& [e, c] : p.coeffs()) {
    if (e[axis] < order) continue;
    Exponent2 d = e;
    d[axis] -= order;
    out[d] += c * falling(e[axis], order);
  }
  return BivariatePolynomial(std::move(out));
}

std::vector<HomogeneousPolynomial> homogeneous_parts(const BivariatePolynomial& p) {
  if (p.is_zero()) return {};
  std::vector<std::map<Exponent2, double>> buckets(p.degree() + 1);
  for (const auto& [e, c] : p.coeffs()) buckets[e[0] + e[1]].emplace(e, c);
  std::vector<HomogeneousPolynomial> parts;
  parts.reserve(buckets.size());
  for (int d = 0; d <= p.degree(); ++d) parts.emplace_back(d, std::move(buckets[d]));
  return parts;
}

TrivariateHomogeneous homogenize(const BivariatePolynomial& p, int target_degree) {
  if (target_degree < p.degree()) throw std::invalid_argument("degree deficit");
  std::map<Exponent3, double> out;
  for (const auto& [e, c] : p.coeffs()) out[{e[0], e[1], target_degree - e[0] - e[1]}] = c;
  return TrivariateHomogeneous(target_degree, std::move(out));
}

BivariatePolynomial hessian_determinant(const BivariatePolynomial& p) {
  const auto fxx = differentiate(p, Axis::x, 2);
  const auto fyy = differentiate(p, Axis::y, 2);
  const auto fxy = differentiate(differentiate(p, Axis::x), Axis::y);
  return fxx * fyy - fxy * fxy;
}

}  // namespace hatlas
