#include <catch2/catch.hpp>

#include "realsmooth/reduce.hpp"
#include "test_util.hpp"

using rs::Complex;

TEST_CASE("lifting strict inequalities") {
  SECTION("no inequalities: system unchanged") {
    rs::SemiAlgebraicInput in;
    in.vars = {"x"};
    in.equations = {P("x-1", in.vars)};
    auto sys = rs::lift_inequalities(in);
    CHECK(sys.nvars() == 1);
    CHECK(sys.size() == 1);
  }
  SECTION("single inequality gains one slack variable") {
    rs::SemiAlgebraicInput in;
    in.vars = {"x"};
    in.inequalities = {P("x", in.vars)};
    auto sys = rs::lift_inequalities(in);
    REQUIRE(sys.nvars() == 2);
    REQUIRE(sys.size() == 1);
    CHECK(sys[0] == P("_z1^2*x - 1", sys.var_names()));
    // Real solutions force x > 0: at z1 = 2, x = 1/4.
    rs::CVec pt(2);
    pt << Complex(0.25, 0), Complex(2, 0);
    CHECK(std::abs(sys.eval(pt)(0)) < 1e-15);
  }
  SECTION("upper semicircle") {
    rs::SemiAlgebraicInput in;
    in.vars = {"x", "y"};
    in.equations = {P("x^2+y^2-1", in.vars)};
    in.inequalities = {P("y", in.vars)};
    auto sys = rs::lift_inequalities(in);
    REQUIRE(sys.nvars() == 3);
    REQUIRE(sys.size() == 2);
    // (x, y, z1) with y = sin > 0, z1 = 1/sqrt(y).
    const double y = 0.6;
    rs::CVec pt(3);
    pt << Complex(0.8, 0), Complex(y, 0), Complex(1.0 / std::sqrt(y), 0);
    CHECK(sys.eval(pt).norm() < 1e-12);
  }
  SECTION("every inequality is strictly positive at real solutions") {
    std::mt19937_64 eng(5);
    rs::SemiAlgebraicInput in;
    in.vars = {"x", "y"};
    in.inequalities = {P("x+2", in.vars), P("y+3", in.vars)};
    auto sys = rs::lift_inequalities(in);
    for (int trial = 0; trial < 25; ++trial) {
      std::uniform_real_distribution<double> d(-1.5, 1.5);
      const double x = d(eng), y = d(eng);
      // Solve the two slack equations for z when possible.
      const double q1 = x + 2, q2 = y + 3;
      REQUIRE(q1 > 0);
      REQUIRE(q2 > 0);
      rs::CVec pt(4);
      pt << Complex(x, 0), Complex(y, 0), Complex(1 / std::sqrt(q1), 0), Complex(1 / std::sqrt(q2), 0);
      CHECK(sys.eval(pt).norm() < 1e-12);
    }
  }
}

TEST_CASE("bounded embedding") {
  const std::vector<std::string> x1{"x"};

  SECTION("line restricted to a disk") {
    auto F = make_system(x1, {"x"});
    rs::RVec q(1);
    q << 0.0;
    auto emb = rs::embed_bounded(F, q, 4.0);
    REQUIRE(emb.nvars() == 2);
    REQUIRE(emb.size() == 2);
    // Real solutions (0, +-2).
    rs::CVec p1(2), p2(2);
    p1 << Complex(0, 0), Complex(2, 0);
    p2 << Complex(0, 0), Complex(-2, 0);
    CHECK(emb.eval(p1).norm() < 1e-14);
    CHECK(emb.eval(p2).norm() < 1e-14);
  }
  SECTION("empty system gives the circle") {
    rs::PolySystem F(x1);
    rs::RVec q(1);
    q << 0.0;
    auto emb = rs::embed_bounded(F, q, 1.0);
    REQUIRE(emb.size() == 1);
    CHECK(emb[0] == P("x^2 + _bnd^2 - 1", emb.var_names()));
  }
  SECTION("localized handle sphere of the Whitney example") {
    const std::vector<std::string> xyz{"x", "y", "z"};
    auto F = make_system(xyz, {"x^2 - y^2*z"});
    rs::RVec q(3);
    q << 0.0, 0.0, -1.0;
    auto emb = rs::embed_bounded(F, q, 0.25);
    REQUIRE(emb.size() == 2);
    CHECK(emb[1] == P("x^2 + y^2 + (z+1)^2 + _bnd^2 - 0.25", emb.var_names()));
  }
  SECTION("rejects nonpositive delta") {
    auto F = make_system(x1, {"x"});
    rs::RVec q(1);
    q << 0.0;
    CHECK_THROWS_AS(rs::embed_bounded(F, q, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rs::embed_bounded(F, q, -1.0), std::invalid_argument);
  }
  SECTION("lifted real points satisfy the embedded system") {
    std::mt19937_64 eng(7);
    const std::vector<std::string> xy{"x", "y"};
    for (int trial = 0; trial < 20; ++trial) {
      // Circle point inside the ball around a random center.
      std::uniform_real_distribution<double> d(-0.5, 0.5);
      const double theta = d(eng) * 6.28;
      rs::RVec q(2);
      q << d(eng), d(eng);
      const double delta = 9.0;
      auto F = make_system(xy, {"x^2+y^2-1"});
      auto emb = rs::embed_bounded(F, q, delta);
      const double px = std::cos(theta), py = std::sin(theta);
      const double dist2 = (px - q(0)) * (px - q(0)) + (py - q(1)) * (py - q(1));
      REQUIRE(dist2 < delta);
      rs::CVec lift(3);
      lift << Complex(px, 0), Complex(py, 0), Complex(std::sqrt(delta - dist2), 0);
      CHECK(emb.eval(lift).norm() <= 1e-12);
    }
  }
}
