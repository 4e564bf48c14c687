#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/poly.hpp"
#include "test_util.hpp"

using namespace hatlas;
using testutil::close_rel;

TEST_CASE("differentiate examples") {
  CHECK(differentiate(parse_polynomial("x^3 + y"), Axis::x) == parse_polynomial("3x^2"));
  CHECK(differentiate(parse_polynomial("x^2 + y^2"), Axis::x, 2) == BivariatePolynomial::constant(2));
  const auto d = differentiate(parse_polynomial("x^4 - 2x + 5"), Axis::y);
  CHECK(d.is_zero());
  CHECK(d.degree() == 0);
}

TEST_CASE("zero polynomial representation") {
  BivariatePolynomial z;
  CHECK(z.is_zero());
  CHECK(z.coeffs().empty());
  const auto p = parse_polynomial("x*y - y*x");
  CHECK(p.is_zero());
  const auto q = BivariatePolynomial({{{2, 0}, 0.0}, {{1, 0}, 3.0}});
  CHECK(q.coeffs().size() == 1);
  CHECK(q.degree() == 1);
  CHECK_THROWS_AS(BivariatePolynomial({{{-1, 0}, 1.0}}), std::invalid_argument);
}

TEST_CASE("homogeneous_parts") {
  const auto parts = homogeneous_parts(parse_polynomial("x^3 + x y + 7"));
  REQUIRE(parts.size() == 4);
  CHECK(parts[0].coeff(0, 0) == 7.0);
  CHECK(parts[1].is_zero());
  CHECK(parts[2].coeff(1, 1) == 1.0);
  CHECK(parts[2].coeffs().size() == 1);
  CHECK(parts[3].coeff(3, 0) == 1.0);

  const auto circle = homogeneous_parts(parse_polynomial("x^2 + y^2"));
  REQUIRE(circle.size() == 3);
  CHECK(circle[0].is_zero());
  CHECK(circle[1].is_zero());
  CHECK(circle[2].as_bivariate() == parse_polynomial("x^2 + y^2"));

  CHECK(homogeneous_parts(BivariatePolynomial{}).empty());
}

TEST_CASE("sum of parts is exact") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testutil::random_poly(rng, 1 + trial % 6);
    BivariatePolynomial sum;
    for (const auto& h : homogeneous_parts(p)) sum = sum + h.as_bivariate();
    CHECK(sum == p);
  }
}

TEST_CASE("homogenize examples") {
  const auto h = homogenize(parse_polynomial("x^2 - 1"), 2);
  CHECK(h == TrivariateHomogeneous(2, {{{2, 0, 0}, 1.0}, {{0, 0, 2}, -1.0}}));

  const auto p = parse_polynomial("36x y - 9");
  const auto hp = homogenize(p, 2);
  CHECK(hp == TrivariateHomogeneous(2, {{{1, 1, 0}, 36.0}, {{0, 0, 2}, -9.0}}));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(close_rel(hp(x, y, 1.0), 36 * x * y - 9, 1e-14));
  }

  CHECK_THROWS_WITH_AS(homogenize(parse_polynomial("x"), 0), "degree deficit", std::invalid_argument);
}

TEST_CASE("homogenize pads to a higher degree") {
  const auto h = homogenize(parse_polynomial("x + 2"), 3);
  CHECK(h.degree() == 3);
  CHECK(h.coeff(1, 0, 2) == 1.0);
  CHECK(h.coeff(0, 0, 3) == 2.0);
  CHECK(h.dehomogenize(Var3::z) == parse_polynomial("x + 2"));
}

TEST_CASE("evaluation") {
  CHECK(evaluate(parse_polynomial("x^2 + y^2"), 3, 4) == 25.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int d = 2; d <= 8; d += 2) {
    const auto H = homogenize(testutil::random_poly(rng, d), d);
    for (int i = 0; i < 10; ++i) {
      const double x = u(rng), y = u(rng), z = u(rng);
      CHECK(evaluate_homogeneous(H, x, y, z) == doctest::Approx(evaluate_homogeneous(H, -x, -y, -z)).epsilon(1e-13));
    }
  }
}

TEST_CASE("derivative commutativity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = testutil::random_poly(rng, 2 + trial % 5);
    const auto a = differentiate(differentiate(p, Axis::x), Axis::y);
    const auto b = differentiate(differentiate(p, Axis::y), Axis::x);
    CHECK(a == b);
  }
}

TEST_CASE("Euler identity for forms") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int d = 1; d <= 7; ++d) {
    const auto h = homogeneous_parts(testutil::random_poly(rng, d)).back();
    REQUIRE(h.degree() == d);
    const auto hb = h.as_bivariate();
    const auto hx = differentiate(hb, Axis::x), hy = differentiate(hb, Axis::y);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng), y = u(rng);
      CHECK(close_rel(x * hx(x, y) + y * hy(x, y), d * h(x, y), 1e-9, 1e-9));
    }
  }
}

TEST_CASE("finite difference agreement") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double step = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = testutil::random_poly(rng, 3 + trial % 4);
    for (Axis ax : {Axis::x, Axis::y}) {
      const auto dp = differentiate(p, ax);
      for (int i = 0; i < 10; ++i) {
        const double x = u(rng), y = u(rng);
        const double exact = dp(x, y);
        if (std::abs(exact) < 1e-2) continue;
        const double fd = ax == Axis::x ? (p(x + step, y) - p(x - step, y)) / (2 * step)
                                        : (p(x, y + step) - p(x, y - step)) / (2 * step);
        CHECK(close_rel(fd, exact, 1e-6));
        ++checked;
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("hessian_determinant matches a hand expansion") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testutil::random_poly(rng, 3 + trial % 3);
    const auto h = hessian_determinant(p);
    for (int i = 0; i < 10; ++i) {
      const double x = u(rng), y = u(rng);
      // second derivatives summed monomial by monomial
      double fxx = 0, fxy = 0, fyy = 0;
      for (const auto& [e, c] : p.coeffs()) {
        const int a = e[0], b = e[1];
        if (a >= 2) fxx += c * a * (a - 1) * std::pow(x, a - 2) * std::pow(y, b);
        if (a >= 1 && b >= 1) fxy += c * a * b * std::pow(x, a - 1) * std::pow(y, b - 1);
        if (b >= 2) fyy += c * b * (b - 1) * std::pow(x, a) * std::pow(y, b - 2);
      }
      CHECK(close_rel(h(x, y), fxx * fyy - fxy * fxy, 1e-9, 1e-9));
    }
  }
}

TEST_CASE("pruning drops cancellation noise") {
  const auto a = BivariatePolynomial({{{3, 0}, 1.0}, {{0, 0}, 1.0}});
  const auto b = BivariatePolynomial({{{3, 0}, 1.0 + 1e-15}});
  const auto d = (a - b).pruned();
  CHECK(d.degree() == 0);
}
