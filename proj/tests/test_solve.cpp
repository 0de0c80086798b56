#include <catch2/catch.hpp>

#include "realsmooth/solve.hpp"
#include "test_util.hpp"

using rs::Complex;

namespace {

rs::PolySystem make_family(const std::vector<std::string>& vars,
                           const std::vector<std::string>& exprs) {
  rs::PolySystem sys(vars, {"t"});
  std::vector<std::string> all = vars;
  all.push_back("t");
  for (const auto& e : exprs) sys.push_back(P(e, all));
  return sys;
}

double set_distance(const std::vector<rs::CVec>& A, const std::vector<rs::CVec>& B) {
  if (A.size() != B.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& a : A) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : B) best = std::min(best, (a - b).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("total degree start systems") {
  const std::vector<std::string> x1{"x"};
  auto s1 = rs::total_degree_start(make_system(x1, {"x^2-3"}));
  CHECK(s1.system[0] == P("x^2-1", x1));
  REQUIRE(s1.roots.size() == 2);
  CHECK(std::abs(s1.roots[0](0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(s1.roots[1](0) - Complex(-1, 0)) < 1e-12);

  const std::vector<std::string> xy{"x", "y"};
  auto s2 = rs::total_degree_start(make_system(xy, {"x^2+y-1", "x*y-2"}));
  CHECK(s2.roots.size() == 4);

  CHECK_THROWS_AS(rs::total_degree_start(make_system(xy, {"x", "3"})), std::invalid_argument);
}

TEST_CASE("tracking a simple blend") {
  const std::vector<std::string> x1{"x"};
  rs::Tolerances tol;
  auto H = rs::Homotopy::blend(make_system(x1, {"x^2-1"}), make_system(x1, {"x^2-4"}),
                               Complex(1, 0));
  rs::Homotopy::Workspace ws;
  rs::CVec x0(1);
  x0 << Complex(1, 0);
  auto pr = rs::track(H, x0, 0.0, tol, ws);
  REQUIRE(pr.status == rs::PathStatus::converged);
  CHECK(std::abs(pr.endpoint(0) - Complex(2, 0)) < 1e-8);

  // A start point that is not a root is rejected before tracking.
  rs::CVec bad(1);
  bad << Complex(3, 0);
  auto rej = rs::track(H, bad, 0.0, tol, ws);
  CHECK(rej.status == rs::PathStatus::path_failure);
  CHECK(rej.final_t == 1.0);
}

TEST_CASE("solve_square on small systems") {
  rs::Tolerances tol;
  const std::vector<std::string> xy{"x", "y"};
  auto sol = rs::solve_square(make_system(xy, {"x^2-1", "y-x"}), 7, tol);
  REQUIRE(sol.roots.size() == 2);
  std::vector<rs::CVec> expected(2, rs::CVec(2));
  expected[0] << Complex(1, 0), Complex(1, 0);
  expected[1] << Complex(-1, 0), Complex(-1, 0);
  CHECK(set_distance(expected, [&] {
          std::vector<rs::CVec> got;
          for (const auto& r : sol.roots) got.push_back(r.x);
          return got;
        }()) < 1e-9);

  const std::vector<std::string> x1{"x"};
  auto sol2 = rs::solve_square(make_system(x1, {"x^2+1"}), 7, tol);
  REQUIRE(sol2.roots.size() == 2);
  for (const auto& r : sol2.roots) CHECK(std::abs(r.x(0).imag()) > 0.99);
}

TEST_CASE("path count conservation and gamma invariance") {
  rs::Tolerances tol;
  std::mt19937_64 eng(101);
  const std::vector<std::string> xy{"x", "y"};

  for (int trial = 0; trial < 50; ++trial) {
    rs::PolySystem sys(xy);
    sys.push_back(random_poly(eng, 2, 2, 4));
    sys.push_back(random_poly(eng, 2, 2, 4));
    if (sys[0].degree() < 1 || sys[1].degree() < 1) continue;
    auto sol = rs::solve_square(sys, 1000 + trial, tol);
    CHECK(sol.start_count ==
          static_cast<std::size_t>(sol.n_converged + sol.n_diverged + sol.n_failed));
    int mult_sum = 0;
    for (const auto& r : sol.roots) mult_sum += r.multiplicity;
    CHECK(mult_sum <= static_cast<int>(sol.start_count));
  }

  for (int trial = 0; trial < 10; ++trial) {
    rs::PolySystem sys(xy);
    sys.push_back(random_poly(eng, 2, 2, 4));
    sys.push_back(random_poly(eng, 2, 2, 4));
    if (sys[0].degree() < 1 || sys[1].degree() < 1) continue;
    auto a = rs::solve_square(sys, 555, tol);
    auto b = rs::solve_square(sys, 777, tol);
    std::vector<rs::CVec> ra, rb;
    for (const auto& r : a.roots) ra.push_back(r.x);
    for (const auto& r : b.roots) rb.push_back(r.x);
    CHECK(set_distance(ra, rb) < 1e-8);
  }
}

TEST_CASE("limit extraction along the arc") {
  rs::Tolerances tol;
  rs::Rng xi_rng(99, "xi");
  const Complex xi = xi_rng.unit_complex();

  SECTION("single path with linear limit") {
    const std::vector<std::string> v{"x1", "x2"};
    // x1*x2 - t*xi, x1*x2 - x1: the unique path is (t*xi, 1) -> (0, 1).
    rs::PolySystem fam(v, {"t"});
    auto t_poly = rs::Polynomial::variable(2, 3);
    fam.push_back(P("x1*x2", {"x1", "x2", "t"}) - t_poly * xi);
    fam.push_back(P("x1*x2 - x1", {"x1", "x2", "t"}));
    rs::CVec start(2);
    start << xi, Complex(1, 0);
    auto H = rs::Homotopy::param_arc(fam);
    auto lim = rs::limit_points(H, {start}, tol);
    REQUIRE(lim.limits.size() == 1);
    rs::CVec expect(2);
    expect << Complex(0, 0), Complex(1, 0);
    CHECK((lim.limits[0] - expect).norm() < 1e-7);
  }

  SECTION("no real limit for x^2 + 1") {
    const std::vector<std::string> v{"x"};
    rs::PolySystem fam(v, {"t"});
    auto t_poly = rs::Polynomial::variable(1, 2);
    fam.push_back(P("x^2 + 1", {"x", "t"}) - t_poly * xi);
    // Roots at t=1: x^2 = xi - 1.
    const Complex r = std::sqrt(xi - Complex(1, 0));
    auto H = rs::Homotopy::param_arc(fam);
    std::vector<rs::CVec> starts(2, rs::CVec(1));
    starts[0] << r;
    starts[1] << -r;
    auto lim = rs::limit_points(H, starts, tol);
    REQUIRE(lim.limits.size() == 2);
    for (const auto& l : lim.limits) CHECK(std::abs(l(0).imag()) > 0.99);
  }

  SECTION("double root merges into one limit with multiplicity two") {
    const std::vector<std::string> v{"x"};
    rs::PolySystem fam(v, {"t"});
    auto t_poly = rs::Polynomial::variable(1, 2);
    fam.push_back(P("x^2", {"x", "t"}) - t_poly * xi);
    const Complex r = std::sqrt(xi);
    auto H = rs::Homotopy::param_arc(fam);
    std::vector<rs::CVec> starts(2, rs::CVec(1));
    starts[0] << r;
    starts[1] << -r;
    auto lim = rs::limit_points(H, starts, tol);
    REQUIRE(lim.limits.size() == 1);
    CHECK(lim.multiplicity[0] == 2);
    CHECK(lim.winding[0] >= 2);
    CHECK(lim.limits[0].norm() < 1e-6);
  }

  SECTION("xi invariance of the limit set") {
    const std::vector<std::string> v{"x", "y"};
    std::vector<std::vector<rs::CVec>> results;
    for (std::uint64_t seed : {13u, 14u}) {
      rs::Rng rng(seed, "xi");
      const Complex xi2 = rng.unit_complex();
      rs::PolySystem fam(v, {"t"});
      auto tp = rs::Polynomial::variable(2, 3);
      fam.push_back(P("x^2 + y^2 - 1", {"x", "y", "t"}) - tp * xi2);
      fam.push_back(P("x - 2*y", {"x", "y", "t"}));
      auto t1 = fam.specialize_param("t", Complex(1, 0));
      auto sol = rs::solve_square(t1, seed, rs::Tolerances{});
      std::vector<rs::CVec> starts;
      for (const auto& r2 : sol.roots) starts.push_back(r2.x);
      auto H = rs::Homotopy::param_arc(fam);
      auto lim = rs::limit_points(H, starts, rs::Tolerances{});
      results.push_back(lim.limits);
    }
    CHECK(set_distance(results[0], results[1]) < 1e-6);
  }
}

TEST_CASE("newton refinement") {
  rs::Tolerances tol;
  const std::vector<std::string> x1{"x"};
  const std::vector<std::string> xy{"x", "y"};

  auto s = make_system(x1, {"x^2-2"});
  rs::CVec x0(1);
  x0 << Complex(1.4, 0);
  auto rr = rs::newton_refine(s, x0, 20, tol);
  CHECK(std::abs(rr.x(0) - Complex(std::sqrt(2.0), 0)) < 1e-11);
  CHECK_FALSE(rr.singular);

  auto s2 = make_system(xy, {"x^2+y^2-1", "x-y"});
  rs::CVec y0(2);
  y0 << Complex(0.7, 0), Complex(0.7, 0);
  auto rr2 = rs::newton_refine(s2, y0, 20, tol);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(rr2.x(0) - Complex(inv_sqrt2, 0)) < 1e-12);
  CHECK(std::abs(rr2.x(1) - Complex(inv_sqrt2, 0)) < 1e-12);

  auto s3 = make_system(x1, {"x^2"});
  rs::CVec z0(1);
  z0 << Complex(1e-3, 0);
  auto rr3 = rs::newton_refine(s3, z0, 8, tol);
  CHECK(rr3.singular);
}

TEST_CASE("numerical rank thresholds") {
  CHECK(rs::numerical_rank(rs::CMat::Identity(3, 3)) == 3);
  CHECK(rs::numerical_rank(rs::CMat::Zero(2, 5)) == 0);
  rs::CMat D = rs::CMat::Zero(2, 2);
  D(0, 0) = Complex(1, 0);
  D(1, 1) = Complex(1e-12, 0);
  CHECK(rs::numerical_rank(D, 1e-8) == 1);
}
