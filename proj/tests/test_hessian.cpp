#include <stdexcept>
#include <random>

#include "doctest.h"
#include "hessian_atlas/errors.hpp"
#include "hessian_atlas/hessian.hpp"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/top_form.hpp"
#include "test_util.hpp"

using namespace hatlas;
using testutil::close_rel;

TEST_CASE("build_hessian examples") {
  CHECK(build_hessian(parse_polynomial("x^2 + y^2")).hess == BivariatePolynomial::constant(4));
  // f_xx = 6x, f_yy = 6y, f_xy = 3
  const auto hd = build_hessian(parse_polynomial("x^3 + y^3 + 3x y"));
  CHECK(hd.hess == parse_polynomial("6x * 6y - 3*3"));
  CHECK(hd.Hf == TrivariateHomogeneous(2, {{{1, 1, 0}, 36.0}, {{0, 0, 2}, -9.0}}));
  CHECK_THROWS_WITH_AS(build_hessian(parse_polynomial("x^3")), "Hessian identically zero", NonGenericError);
  CHECK_THROWS_AS(build_hessian(parse_polynomial("x + y")), std::invalid_argument);
}

TEST_CASE("projective Hessian restricts correctly") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = testutil::random_poly(rng, n);
      const auto hd = build_hessian(f);
      CHECK(hd.Hf.degree() == 2 * n - 4);
      for (int i = 0; i < 100; ++i) {
        const double x = u(rng), y = u(rng);
        CHECK(close_rel(hd.Hf(x, y, 1.0), hd.hess(x, y), 1e-9, 1e-9));
      }
      const auto fn = homogeneous_parts(f).back();
      const auto at_inf = hd.Hf.at_infinity();
      const auto want = form_hessian(fn);
      REQUIRE(at_inf.degree() == want.degree());
      for (const auto& [e, c] : want.coeffs()) CHECK(close_rel(at_inf.coeff(e[0], e[1]), c, 1e-12));
      for (const auto& [e, c] : at_inf.coeffs()) CHECK(close_rel(want.coeff(e[0], e[1]), c, 1e-12));
    }
  }
}

TEST_CASE("sign of Hess matches the asymptotic direction count") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto f = testutil::random_poly(rng, 4);
  const auto sff = second_fundamental_form(f);
  const auto hess = hessian_determinant(f);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    const double a = sff.a(x, y), b = sff.b(x, y), c = sff.c(x, y);
    // directions solve a dx^2 + 2b dx dy + c dy^2 = 0; discriminant 4(b^2 - ac)
    const double disc = 4 * (b * b - a * c);
    CHECK(close_rel(disc, -4 * hess(x, y), 1e-9, 1e-9));
    if (std::abs(hess(x, y)) < 1e-9) continue;
    int real_dirs = 0;
    for (int k = 0; k < 3600; ++k) {
      const double t0 = 3.14159265358979 * k / 3600, t1 = 3.14159265358979 * (k + 1) / 3600;
      auto q = [&](double t) {
        const double dx = std::cos(t), dy = std::sin(t);
        return a * dx * dx + 2 * b * dx * dy + c * dy * dy;
      };
      if ((q(t0) > 0) != (q(t1) > 0)) ++real_dirs;
    }
    if (std::abs(hess(x, y)) > 1e-3 * (a * a + b * b + c * c)) CHECK(real_dirs == (hess(x, y) < 0 ? 2 : 0));
  }
}

TEST_CASE("transversality at infinity") {
  {
    auto hd = build_hessian(parse_polynomial("x^3 + y^3 + 3x y"));
    const auto tfa = real_linear_factors(homogeneous_parts(hd.f).back());
    CHECK(check_transversality_at_infinity(hd, tfa));
    // oracle: the gradient of 36xy - 9z^2 at (1,0,0) and (0,1,0)
    const auto g1 = hd.Hf.gradient({1, 0, 0});
    const auto g2 = hd.Hf.gradient({0, 1, 0});
    CHECK((std::abs(g1[0]) + std::abs(g1[1])) > 0);
    CHECK((std::abs(g2[0]) + std::abs(g2[1])) > 0);
  }
  {
    auto hd = build_hessian(parse_polynomial("x^4 + x^2 y^2 + y^4 + x y"));
    const auto tfa = real_linear_factors(homogeneous_parts(hd.f).back());
    CHECK(check_transversality_at_infinity(hd, tfa));
  }
  {
    auto hd = build_hessian(parse_polynomial("x^4 + y^4 + x^2 - y^2 + x y"));
    const auto tfa = real_linear_factors(homogeneous_parts(hd.f).back());
    CHECK_FALSE(check_transversality_at_infinity(hd, tfa));
  }
}

TEST_CASE("genericity screen") {
  {
    auto hd = build_hessian(parse_polynomial("x^3 + y^3 + 3x y"));
    const auto tfa = real_linear_factors(homogeneous_parts(hd.f).back());
    const auto s = genericity_screen(hd, tfa, true);
    CHECK(s.passed());
    CHECK(find_singular_points(hd.Hf).empty());
  }
  {
    auto hd = build_hessian(parse_polynomial("x^3 + y^3"));
    const auto tfa = real_linear_factors(homogeneous_parts(hd.f).back());
    const auto s = genericity_screen(hd, tfa, true);
    CHECK_FALSE(s.smooth);
    CHECK_FALSE(s.passed());
    const auto sing = find_singular_points(hd.Hf);
    REQUIRE(!sing.empty());
    // the double point of 36xy = 0 is the origin [0:0:1]
    bool origin = false;
    for (const auto& p : sing) origin = origin || std::abs(std::abs(p[2]) - 1.0) < 1e-6;
    CHECK(origin);
  }
}

TEST_CASE("singular points must lie on the curve") {
  // x^2 - y^2 has a node at the origin; x^2 + y^2 + 1e-6 z^2 has a critical point there but no real points
  const TrivariateHomogeneous node(2, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, -1.0}});
  const TrivariateHomogeneous empty(2, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1e-6}});
  CHECK(find_singular_points(node).size() == 1);
  CHECK(find_singular_points(empty).empty());
}
