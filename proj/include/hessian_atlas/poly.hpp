#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace hatlas {

using Exponent2 = std::array<int, 2>;
using Exponent3 = std::array<int, 3>;

enum class Axis { x, y };
enum class Var3 { x, y, z };

/// Coefficients below this fraction of the largest one are dropped after
/// arithmetic, so cancellation noise cannot inflate the degree.
inline constexpr double kPruneRelative = 1e-12;

/// Real polynomial in x, y stored as a dense-by-exponent map.
///
/// Values are immutable once built. The zero polynomial has an empty
/// coefficient table; `is_zero()` is the distinguishing flag and `degree()`
/// reports 0 for it.
class BivariatePolynomial {
 public:
  using Coefficients = std::map<Exponent2, double>;

  BivariatePolynomial() = default;
  /// Exact zeros are dropped; negative exponents are rejected.
  explicit BivariatePolynomial(Coefficients coeffs);

  static BivariatePolynomial constant(double c);
  static BivariatePolynomial monomial(int i, int j, double c = 1.0);

  const Coefficients& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return degree_; }
  double coeff(int i, int j) const;
  double max_abs_coeff() const noexcept;

  /// Horner evaluation, nested in y then x.
  double operator()(double x, double y) const noexcept;

  /// Copy with coefficients smaller than `relative * max_abs_coeff()` removed.
  BivariatePolynomial pruned(double relative = kPruneRelative) const;

  friend bool operator==(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  Coefficients coeffs_;
  int degree_ = 0;
  // rows_[j][i] is the coefficient of x^i y^j
  std::vector<std::vector<double>> rows_;
};

BivariatePolynomial operator+(const BivariatePolynomial& a, const BivariatePolynomial& b);
BivariatePolynomial operator-(const BivariatePolynomial& a, const BivariatePolynomial& b);
BivariatePolynomial operator-(const BivariatePolynomial& a);
BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);
BivariatePolynomial operator*(double s, const BivariatePolynomial& a);

/// Homogeneous binary form; every stored monomial has i + j == degree.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial() = default;
  /// Throws std::invalid_argument if a monomial has the wrong total degree.
  HomogeneousPolynomial(int degree, std::map<Exponent2, double> coeffs);

  int degree() const noexcept { return degree_; }
  const std::map<Exponent2, double>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double coeff(int i, int j) const;

  double operator()(double x, double y) const noexcept;

  BivariatePolynomial as_bivariate() const { return BivariatePolynomial(coeffs_); }
  /// Coefficients of t -> h(1, t), ascending powers of t.
  std::vector<double> affine_restriction() const;

  friend bool operator==(const HomogeneousPolynomial&, const HomogeneousPolynomial&) = default;

 private:
  int degree_ = 0;
  std::map<Exponent2, double> coeffs_;
};

/// Homogeneous polynomial in x, y, z (the sphere form works in u, v, w with
/// the same layout). Degree is limited to kMaxDegree.
class TrivariateHomogeneous {
 public:
  static constexpr int kMaxDegree = 60;

  TrivariateHomogeneous() = default;
  /// Throws std::invalid_argument if a monomial has the wrong total degree.
  TrivariateHomogeneous(int degree, std::map<Exponent3, double> coeffs);

  int degree() const noexcept { return degree_; }
  const std::map<Exponent3, double>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  double coeff(int i, int j, int k) const;
  double max_abs_coeff() const noexcept;

  double operator()(double x, double y, double z) const noexcept;
  double operator()(const std::array<double, 3>& p) const noexcept {
    return (*this)(p[0], p[1], p[2]);
  }

  TrivariateHomogeneous derivative(Var3 v) const;
  std::array<double, 3> gradient(const std::array<double, 3>& p) const;
  TrivariateHomogeneous multiplied_by(Var3 v) const;

  /// The chart polynomial obtained by setting `chart` to 1; remaining
  /// variables keep their order (x=1 gives a polynomial in (y, z)).
  BivariatePolynomial dehomogenize(Var3 chart) const;
  /// Restriction to z = 0.
  HomogeneousPolynomial at_infinity() const;

  friend bool operator==(const TrivariateHomogeneous& a, const TrivariateHomogeneous& b) {
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }
  friend TrivariateHomogeneous operator+(const TrivariateHomogeneous& a,
                                         const TrivariateHomogeneous& b);
  friend TrivariateHomogeneous operator-(const TrivariateHomogeneous& a,
                                         const TrivariateHomogeneous& b);
  friend TrivariateHomogeneous operator*(double s, const TrivariateHomogeneous& a);

 private:
  struct Term {
    int i, j, k;
    double c;
  };
  void compile();

  int degree_ = 0;
  std::map<Exponent3, double> coeffs_;
  std::vector<Term> terms_;
};

/// Term-by-term derivative of the given order along one axis.
BivariatePolynomial differentiate(const BivariatePolynomial& p, Axis var, int order = 1);

/// Parts f_0 .. f_n with sum equal to p; empty for the zero polynomial.
std::vector<HomogeneousPolynomial> homogeneous_parts(const BivariatePolynomial& p);

/// R(x, y, z) with R(x, y, 1) = p and every monomial padded by z^(d - i - j).
/// Throws std::invalid_argument("degree deficit") when d < degree(p).
TrivariateHomogeneous homogenize(const BivariatePolynomial& p, int target_degree);

/// f_xx * f_yy - f_xy^2.
BivariatePolynomial hessian_determinant(const BivariatePolynomial& p);

inline double evaluate(const BivariatePolynomial& p, double x, double y) { return p(x, y); }
inline double evaluate_homogeneous(const TrivariateHomogeneous& p, double x, double y,
                                   double z) {
  return p(x, y, z);
}

}  // namespace hatlas
