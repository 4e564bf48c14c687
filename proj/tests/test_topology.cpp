#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hessian_atlas/hessian.hpp"
#include "hessian_atlas/parser.hpp"
#include "hessian_atlas/topology.hpp"
#include "hessian_atlas/tracer.hpp"

using namespace hatlas;

namespace {

const TrivariateHomogeneous kCircle(2, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, -1.0}});

CurveSet trace_poly(const char* s) {
  auto hd = build_hessian(parse_polynomial(s));
  return trace_curve(hd);
}

// closed circle polylines in the z=1 chart, centred at (cx, cy)
CurveBranch circle(double cx, double cy, double r) {
  CurveBranch b;
  b.closed = true;
  const int m = 400;
  for (int i = 0; i < m; ++i) {
    const double t = 2 * 3.14159265358979 * i / m;
    b.points.push_back(ChartPoint::from_chart(Chart::z, cx + r * std::cos(t), cy + r * std::sin(t)));
  }
  return b;
}

}  // namespace

TEST_CASE("nesting examples") {
  CurveSet one;
  one.branches = {circle(0, 0, 1)};
  auto n1 = nesting_forest(one);
  CHECK(n1.depth == std::vector<int>{0});
  CHECK(n1.P == 1);
  CHECK(n1.N == 0);

  CurveSet two;
  two.branches = {circle(-2, 0, 1), circle(2, 0, 1)};
  auto n2 = nesting_forest(two);
  CHECK(n2.P == 2);
  CHECK(n2.N == 0);

  CurveSet nested;
  nested.branches = {circle(0, 0, 1), circle(0.1, 0, 3)};
  auto n3 = nesting_forest(nested);
  CHECK(n3.P == 1);
  CHECK(n3.N == 1);
  CHECK(n3.depth == std::vector<int>{1, 0});
  CHECK(n3.parent == std::vector<int>{1, -1});
  CHECK(n3.P - n3.N == 0);

  CHECK(containment_depth(nested, {0, 0, 1}) == 2);
  CHECK(containment_depth(nested, {2, 0, 1}) == 1);
  CHECK(containment_depth(nested, {10, 0, 1}) == 0);
}

TEST_CASE("nesting for an oval through infinity") {
  // a degree-6 Hessian curve with one oval meeting the line at infinity
  const auto cs = trace_poly("x^5 + 2x^3y^2 + y^5 + 3x^2y + x y + y^2");
  REQUIRE(cs.branches.size() == 1);
  CHECK(cs.branches[0].crosses_infinity);
  const auto n = nesting_forest(cs);
  CHECK(n.P == 1);
  CHECK(n.N == 0);
}

TEST_CASE("circle regions") {
  CurveSet cs;
  cs.branches = {trace_branch(ChartPoint::from_chart(Chart::z, 1.0, 0.0), kCircle)};
  const auto nest = nesting_forest(cs);
  const auto rt = identify_H_le0(cs, kCircle, nest);
  CHECK(rt.chi_Bplus == 1);
  CHECK(rt.chi_Bminus == 0);
  CHECK(rt.H_le0_is == Side::Bplus);
  CHECK(rt.H_le0_orientable);

  const auto g = sphere_grid_fallback(kCircle, 128);
  CHECK(g.chi_Bplus == 1);
  CHECK(g.chi_Bminus == 0);
  CHECK(g.H_le0_is == Side::Bplus);
  CHECK(g.chi_negative == 1);
}

TEST_CASE("region invariants") {
  for (const char* s : {"x^3 + y^3 + 3x y", "17x^4 - 46x^2y^2 + 17y^4 + 20x^3 - 60x y^2 + 9x^2 - 47y^2",
                        "x^4 + 2x^2y^2 + y^4 - 4x^2 - 4y^2 + 1/2 x^3", "x^4 + x^2y^2 + y^4 - 3x^2 + y^2 + x y"}) {
    CAPTURE(s);
    auto hd = build_hessian(parse_polynomial(s));
    const auto cs = trace_curve(hd);
    const auto nest = nesting_forest(cs);
    const auto rt = identify_H_le0(cs, hd.Hf, nest);
    CHECK(rt.chi_Bplus + rt.chi_Bminus == 1);
    CHECK(rt.P + rt.N == static_cast<int>(cs.branches.size()));
    CHECK(rt.chi_Bplus == rt.P - rt.N);
    const auto g = sphere_grid_fallback(hd.Hf);
    CHECK(g.chi_Bplus == rt.chi_Bplus);
    CHECK(g.chi_Bminus == rt.chi_Bminus);
    CHECK(g.H_le0_is == rt.H_le0_is);
  }
}

TEST_CASE("hyperbolic top form puts H<=0 on the non-orientable side") {
  auto hd = build_hessian(parse_polynomial("x^3 - 3x y^2 + x^2 + y^2"));
  const auto cs = trace_curve(hd);
  const auto rt = identify_H_le0(cs, hd.Hf, nesting_forest(cs));
  CHECK(rt.H_le0_is == Side::Bminus);
  CHECK_FALSE(rt.H_le0_orientable);
  CHECK(rt.chi_H_le0 == 0);
}

TEST_CASE("one oval from the cubic hyperbola") {
  auto hd = build_hessian(parse_polynomial("x^3 + y^3 + 3x y"));
  const auto cs = trace_curve(hd);
  const auto nest = nesting_forest(cs);
  const auto g = sphere_grid_fallback(hd.Hf);
  CHECK(nest.P == 1);
  CHECK(nest.N == 0);
  CHECK(g.chi_Bplus == 1);
  CHECK(g.chi_Bminus == 0);
}

TEST_CASE("four ovals") {
  auto hd = build_hessian(parse_polynomial("17x^4 - 46x^2y^2 + 17y^4 + 20x^3 - 60x y^2 + 9x^2 - 47y^2"));
  const auto cs = trace_curve(hd);
  const auto nest = nesting_forest(cs);
  const auto rt = identify_H_le0(cs, hd.Hf, nest);
  CHECK(rt.chi_Bplus == 4);
  CHECK(rt.chi_Bminus == -3);
  const auto g = sphere_grid_fallback(hd.Hf);
  CHECK(g.chi_Bplus == 4);
  CHECK(g.chi_Bminus == -3);
  const auto u = unbounded_component(cs, nest);
  CHECK(u.N_u == 4);
  CHECK(u.chi == -3);
}

TEST_CASE("unbounded component") {
  {
    CurveSet one;
    one.branches = {circle(0, 0, 1)};
    const auto u = unbounded_component(one, nesting_forest(one));
    CHECK(u.N_u == 1);
    CHECK(u.chi == 0);
  }
  {
    auto hd = build_hessian(parse_polynomial("x^3 + y^3 + 3x y"));
    const auto cs = trace_curve(hd);
    CHECK_THROWS_WITH_AS(unbounded_component(cs, nesting_forest(cs)), "C_u undefined", std::invalid_argument);
  }
}

TEST_CASE("empty curve") {
  auto hd = build_hessian(parse_polynomial("x^2 + y^2"));
  const auto cs = trace_curve(hd);
  const auto rt = identify_H_le0(cs, hd.Hf, nesting_forest(cs));
  CHECK(rt.H_le0_is == Side::empty);
  CHECK(rt.chi_H_le0 == 0);
}
