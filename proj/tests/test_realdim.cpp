#include <catch2/catch.hpp>

#include "realsmooth/realdim.hpp"
#include "realsmooth/reduce.hpp"
#include "test_util.hpp"

using rs::Complex;

TEST_CASE("real dimension of small sets") {
  rs::Tolerances tol;
  const std::vector<std::string> xy{"x", "y"};

  SECTION("circle is a real curve") {
    auto run = rs::real_dimension(make_system(xy, {"x^2+y^2-1"}), 2029, tol);
    CHECK(run.result == 1);
    REQUIRE_FALSE(run.witnesses.empty());
    for (const auto& w : run.witnesses)
      CHECK(std::abs(w.x.squaredNorm() - 1.0) < 1e-6);
  }

  SECTION("A-invariance of the result") {
    auto a = rs::real_dimension(make_system(xy, {"x^2+y^2-1"}), 11, tol);
    auto b = rs::real_dimension(make_system(xy, {"x^2+y^2-1"}), 12, tol);
    CHECK(a.result == b.result);
  }

  SECTION("empty real set returns -1") {
    auto run = rs::real_dimension(make_system(xy, {"x^2+y^2+1"}), 31, tol);
    CHECK(run.result == -1);
    // Monotonicity: every level above the answer was empty.
    for (const auto& lvl : run.per_i) CHECK(lvl.s_i_size == 0);
  }

  SECTION("origin-only set has dimension zero") {
    // {x^2 + y^2} bounded-embedded: real points (0, 0, +-4).
    auto F = make_system(xy, {"x^2+y^2"});
    rs::RVec q(2);
    q.setZero();
    auto emb = rs::embed_bounded(F, q, 16.0);
    auto run = rs::real_dimension(emb, 2033, tol);
    CHECK(run.result == 0);
    REQUIRE_FALSE(run.witnesses.empty());
    for (const auto& w : run.witnesses) {
      CHECK(std::abs(w.x(0)) < 1e-5);
      CHECK(std::abs(w.x(1)) < 1e-5);
      CHECK(std::abs(std::abs(w.x(2)) - 4.0) < 1e-5);
    }
  }
}

TEST_CASE("smooth sampling service") {
  rs::Tolerances tol;
  const std::vector<std::string> xy{"x", "y"};
  const std::vector<std::string> xyz{"x", "y", "z"};

  SECTION("user objective on Thom's lips") {
    auto rep = rs::smooth_sample(make_system(xy, {"y^2-(x^3-x^2)^2"}),
                                 P("x*(x-1)", xy), 51, tol);
    REQUIRE(rep.points.size() == 2);
    for (const auto& p : rep.points) {
      CHECK(std::abs(p.x(0) - 0.5) < 1e-6);
      CHECK(std::abs(std::abs(p.x(1)) - 0.125) < 1e-6);
    }
  }

  SECTION("Samosa distance-squared objective finds the four real critical points") {
    // Analytic solve of the Lagrange system: (0,0,+-1) and +-(1/2,-1/2,0).
    auto rep = rs::smooth_sample(make_system(xyz, {"2*x*y-x^2-y^2-z^2+1"}),
                                 P("x^2+y^2+z^2-3", xyz), 53, tol);
    REQUIRE(rep.points.size() == 4);
    int poles = 0, saddle = 0;
    for (const auto& p : rep.points) {
      if (std::abs(std::abs(p.x(2)) - 1.0) < 1e-7 && std::abs(p.x(0)) < 1e-7) {
        ++poles;
        CHECK(std::abs(p.g_value + 2.0) < 1e-7);
      }
      if (std::abs(p.x(2)) < 1e-7 && std::abs(std::abs(p.x(0)) - 0.5) < 1e-7) {
        ++saddle;
        CHECK(std::abs(p.g_value + 2.5) < 1e-7);
      }
    }
    CHECK(poles == 2);
    CHECK(saddle == 2);
  }

  SECTION("empty real set yields an empty report") {
    auto rep = rs::smooth_sample(make_system(xy, {"x^2+1", "y"}), P("x", xy), 55, tol);
    CHECK(rep.points.empty());
  }

  SECTION("auto-constructed objective on the circle") {
    auto rep = rs::smooth_sample(make_system(xy, {"x^2+y^2-1"}), std::nullopt, 57, tol);
    REQUIRE_FALSE(rep.points.empty());
    for (const auto& p : rep.points)
      CHECK(std::abs(p.x.squaredNorm() - 1.0) < 1e-6);
  }
}
