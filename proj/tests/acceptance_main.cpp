// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. CLI-facing criteria run the installed binary (path via
// --cli); the rest exercise the library directly.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "realsmooth/realsmooth.hpp"

namespace rs = realsmooth;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

struct CliRun {
  int exit_code = -1;
  json doc;
};

CliRun run_cli(const std::string& cli, const std::string& args, const std::string& out_path) {
  CliRun r;
  const std::string cmd = cli + " " + args + " --out " + out_path + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream f(out_path);
  if (f) {
    try {
      f >> r.doc;
    } catch (...) {
    }
  }
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// --- criterion 1: circle baseline through the CLI ---------------------------
void criterion_circle(const std::string& cli, const std::string& dir) {
  write_file(dir + "/circle.sys", "vars x y\neq: x^2 + y^2 - 1\n");
  auto t0 = Clock::now();
  CliRun r = run_cli(cli, "smooth-points --input " + dir + "/circle.sys --g x --seed 101",
                     dir + "/circle.json");
  const double el = seconds_since(t0);
  bool ok = r.exit_code == 0 && r.doc.contains("points") && r.doc["points"].size() == 2;
  double worst = 1.0;
  if (ok) {
    bool plus = false, minus = false;
    worst = 0.0;
    for (const auto& p : r.doc["points"]) {
      const double x = p["x"][0].get<double>();
      const double y = p["x"][1].get<double>();
      const double g = p["g_value"].get<double>();
      worst = std::max({worst, std::abs(std::abs(x) - 1.0), std::abs(y)});
      if (std::abs(g - 1.0) < 1e-9 && std::abs(x - 1.0) < 1e-9) plus = true;
      if (std::abs(g + 1.0) < 1e-9 && std::abs(x + 1.0) < 1e-9) minus = true;
    }
    ok = plus && minus && worst <= 1e-9;
  }
  ok = ok && el < 1.0;
  report(1, "circle baseline (smooth-points, g = x)", ok,
         "err=" + fmt(worst) + " time=" + fmt(el) + "s");
}

// --- criterion 2: Thom's lips ------------------------------------------------
void criterion_lips(const std::string& cli, const std::string& dir) {
  write_file(dir + "/lips.sys", "vars x y\neq: y^2 - (x^3 - x^2)^2\n");
  auto t0 = Clock::now();
  CliRun r = run_cli(cli,
                     "smooth-points --input " + dir + "/lips.sys --g \"x*(x-1)\" --seed 102",
                     dir + "/lips.json");
  const double el = seconds_since(t0);
  bool ok = r.exit_code == 0 && r.doc.contains("points") && r.doc["points"].size() == 2;
  double worst = 1.0;
  if (ok) {
    bool upper = false, lower = false;
    worst = 0.0;
    for (const auto& p : r.doc["points"]) {
      const double x = p["x"][0].get<double>();
      const double y = p["x"][1].get<double>();
      worst = std::max({worst, std::abs(x - 0.5), std::abs(std::abs(y) - 0.125)});
      if (!p["certified_smooth"].get<bool>()) ok = false;
      if (y > 0) upper = true;
      if (y < 0) lower = true;
    }
    ok = ok && upper && lower && worst <= 1e-6;
  }
  ok = ok && el < 5.0;
  report(2, "Thom's lips (two smooth points, one per lip)", ok,
         "err=" + fmt(worst) + " time=" + fmt(el) + "s");
}

// --- criterion 3: Whitney umbrella real dimension ----------------------------
void criterion_whitney(const std::string& cli, const std::string& dir) {
  write_file(dir + "/whitney.sys",
             "vars x y z w\neq: x^2 - y^2*z\neq: x^2 + y^2 + z^2 + w^2 - 4\n");
  auto t0 = Clock::now();
  CliRun full = run_cli(cli, "real-dim --input " + dir + "/whitney.sys --seed 103",
                        dir + "/whitney.json");
  const double el_full = seconds_since(t0);
  bool ok_full = full.exit_code == 0 && full.doc.contains("dimension") &&
                 full.doc["dimension"].get<int>() == 2;
  report(3, "Whitney umbrella: real dimension 2", ok_full && el_full < 60.0,
         "dim=" + (full.doc.contains("dimension") ? full.doc["dimension"].dump() : "?") +
             " time=" + fmt(el_full) + "s (budget 60s)");

  write_file(dir + "/whitney_handle.sys",
             "vars x y z w\neq: x^2 - y^2*z\neq: x^2 + y^2 + (z+1)^2 + w^2 - 0.25\n");
  auto t1 = Clock::now();
  CliRun handle = run_cli(cli, "real-dim --input " + dir + "/whitney_handle.sys --seed 104",
                          dir + "/whitney_handle.json");
  const double el_handle = seconds_since(t1);
  bool ok_handle = handle.exit_code == 0 && handle.doc.contains("dimension") &&
                   handle.doc["dimension"].get<int>() == 1;
  bool on_handle = false;
  if (ok_handle && handle.doc.contains("witnesses")) {
    for (const auto& p : handle.doc["witnesses"]) {
      const double x = p["x"][0].get<double>();
      const double y = p["x"][1].get<double>();
      if (std::abs(x) <= 1e-6 && std::abs(y) <= 1e-6) on_handle = true;
    }
  }
  report(3, "Whitney handle localization: real dimension 1 with x=y=0 witness",
         ok_handle && on_handle && el_handle < 60.0,
         "dim=" + (handle.doc.contains("dimension") ? handle.doc["dimension"].dump() : "?") +
             " handle_point=" + (on_handle ? "yes" : "no") + " time=" + fmt(el_handle) +
             "s (budget 60s)");
}

// --- criterion 4: deflation unit fidelity ------------------------------------
void criterion_deflation() {
  auto t0 = Clock::now();
  rs::Tolerances tol;
  bool ok = true;
  std::string note;

  // Example 7.3 shape: H1 = [x1 x2 - t, x1 x2 - x1] at p = (0, 1).
  {
    const std::vector<std::string> v{"x1", "x2"};
    const std::vector<std::string> vt{"x1", "x2", "t"};
    rs::PolySystem fam(v, {"t"});
    fam.push_back(rs::parse_polynomial("x1*x2 - t", vt));
    fam.push_back(rs::parse_polynomial("x1*x2 - x1", vt));
    rs::CVec p(2);
    p << rs::Complex(0, 0), rs::Complex(1, 0);
    auto seq = rs::witness_system_for_limit(fam, p, tol);
    if (seq.ranks.empty() || seq.ranks[0] != 2) {
      ok = false;
      note += "rank JF0 != 2; ";
    }
    // The deflated system must isolate (0,1): Newton from a nearby start.
    rs::CVec guess(2);
    guess << rs::Complex(0.07, -0.03), rs::Complex(1.06, 0.02);
    auto rr = rs::newton_refine(seq.limit_system, guess, 40, tol);
    if ((rr.x - p).norm() > 1e-10 || rr.residual > 1e-10) {
      ok = false;
      note += "deflated system does not isolate (0,1); ";
    }
  }

  // Example 7.4 shape: {x1^2 - x2 - t, x2} at the origin has multiplicity 2;
  // the multiplicity-one refinement appends a polynomial proportional to x1.
  {
    const std::vector<std::string> v{"x1", "x2"};
    const std::vector<std::string> vt{"x1", "x2", "t"};
    rs::PolySystem fam(v, {"t"});
    fam.push_back(rs::parse_polynomial("x1^2 - x2 - t", vt));
    fam.push_back(rs::parse_polynomial("x2", vt));
    rs::CVec p(2);
    p.setZero();
    auto seq = rs::witness_system_for_limit(fam, p, tol);
    if (seq.limit_system.size() != 2) {
      ok = false;
      note += "Ex7.4 witness system changed size; ";
    }
    auto refined = rs::multiplicity_one_refine(seq.limit_system, p, 0, tol);
    bool has_x1 = false;
    const rs::Polynomial x1 = rs::Polynomial::variable(0, 2);
    for (const auto& poly : refined.polys())
      if (poly.normalized() == x1.normalized()) has_x1 = true;
    if (!has_x1) {
      ok = false;
      note += "refinement did not append x1; ";
    }
    const int r = rs::anchored_rank(refined.jacobian(p), tol.rank_tol, 1.0);
    if (static_cast<int>(refined.nvars()) - r != 0) {
      ok = false;
      note += "null dimension not 0 after refinement; ";
    }
    if (refined.eval(p).norm() > 1e-10) {
      ok = false;
      note += "anchor residual too high; ";
    }
  }

  report(4, "isosingular deflation unit fidelity", ok,
         note.empty() ? "time=" + fmt(seconds_since(t0)) + "s" : note);
}

// --- criterion 5: Lemma 5.5 operational check --------------------------------
void criterion_xi_invariance() {
  auto t0 = Clock::now();
  rs::Tolerances tol;
  const std::vector<std::string> v{"x", "y", "z"};
  std::mt19937_64 eng(505);
  std::uniform_int_distribution<int> cdist(-3, 3);

  // Random degree-2 system in three variables; f is its sum of squares.
  rs::PolySystem F(v);
  for (int k = 0; k < 3; ++k) {
    rs::Polynomial p(3);
    for (std::uint32_t a = 0; a <= 2; ++a)
      for (std::uint32_t b = 0; a + b <= 2; ++b)
        for (std::uint32_t c = 0; a + b + c <= 2; ++c) {
          int coef = cdist(eng);
          if (coef == 0) continue;
          rs::Monomial m(3);
          m.exponents = {a, b, c};
          p.add_term(m, rs::Complex(coef, 0));
        }
    F.push_back(p);
  }
  rs::RMat I = rs::RMat::Identity(3, 3);
  rs::Polynomial f = rs::sum_of_squares_pullback(F, I);

  // One generic slice, fixed across both xi arcs.
  rs::Rng slice_rng(99, "slice");
  std::vector<rs::Polynomial> slices{slice_rng.random_affine_linear(3),
                                     slice_rng.random_affine_linear(3)};

  std::vector<std::vector<rs::CVec>> limit_sets;
  for (std::uint64_t seed : {7101u, 7102u}) {
    rs::Rng xi_rng(seed, "xi");
    const rs::Complex xi = xi_rng.unit_complex();
    rs::PolySystem fam(v, {"t"});
    rs::Polynomial arc = f.insert_vars(3, 1);
    rs::Polynomial t_term(4);
    rs::Monomial mt(4);
    mt.exponents = {0, 0, 0, 1};
    t_term.add_term(mt, -xi);
    fam.push_back(arc + t_term);
    for (const auto& L : slices) fam.push_back(L.insert_vars(3, 1));

    auto t1sys = fam.specialize_param("t", rs::Complex(1, 0));
    auto sol = rs::solve_square(t1sys, seed, tol);
    std::vector<rs::CVec> starts;
    for (const auto& r : sol.roots) starts.push_back(r.x);
    auto H = rs::Homotopy::param_arc(fam);
    auto lim = rs::limit_points(H, starts, tol);
    limit_sets.push_back(lim.limits);
  }

  bool ok = limit_sets[0].size() == limit_sets[1].size() && !limit_sets[0].empty();
  double worst = ok ? 0.0 : 1.0;
  if (ok) {
    for (const auto& a : limit_sets[0]) {
      double best = 1e9;
      for (const auto& b : limit_sets[1]) best = std::min(best, (a - b).norm());
      worst = std::max(worst, best);
    }
    ok = worst <= 1e-6;
  }
  const double el = seconds_since(t0);
  report(5, "Lemma-style xi invariance of polar limits", ok && el < 30.0,
         "sets " + std::to_string(limit_sets[0].size()) + "/" +
             std::to_string(limit_sets[1].size()) + " dist=" + fmt(worst) + " time=" + fmt(el) +
             "s");
}

// --- criterion 6: Kuramoto desk scale -----------------------------------------
void criterion_kuramoto(const std::string& cli, const std::string& dir) {
  auto t0 = Clock::now();
  CliRun r = run_cli(cli, "kuramoto --n 4 --samples 20 --seed 106", dir + "/kuramoto.json");
  const double el = seconds_since(t0);
  bool ok = r.exit_code == 0 && r.doc.contains("max_observed") &&
            r.doc["max_observed"].get<int>() <= 10 && r.doc["gamma_invariant"].get<bool>();
  // Necessary condition: a frequency outside the box has no real equilibria.
  rs::Tolerances tol;
  const int out_of_box = rs::count_real_equilibria(4, {0.9, 0.0, -0.9}, 1066, tol);
  ok = ok && out_of_box == 0 && el < 600.0;
  report(6, "Kuramoto n=4 equilibria counting over 20 samples", ok,
         "max=" + (r.doc.contains("max_observed") ? r.doc["max_observed"].dump() : "?") +
             " out_of_box=" + std::to_string(out_of_box) + " time=" + fmt(el) +
             "s (budget 600s)");
}

// --- criterion 7: property suites ----------------------------------------------
void criterion_properties() {
  auto t0 = Clock::now();
  rs::Tolerances tol;
  bool ok = true;
  std::string note;
  std::mt19937_64 eng(707);
  std::uniform_int_distribution<int> cdist(-5, 5);
  const std::vector<std::string> xy{"x", "y"};

  auto random_quad = [&](std::size_t nv) {
    rs::Polynomial p(nv);
    for (int trial = 0; trial < 6; ++trial) {
      rs::Monomial m(nv);
      int rem = 2;
      for (std::size_t v2 = 0; v2 < nv; ++v2) {
        int e = static_cast<int>(eng() % (rem + 1));
        m.exponents[v2] = static_cast<std::uint32_t>(e);
        rem -= e;
      }
      int c = cdist(eng);
      if (c == 0) c = 1;
      p.add_term(m, rs::Complex(c, 0));
    }
    return p;
  };

  // Derivative versus central finite differences.
  {
    double worst = 0.0;
    std::uniform_real_distribution<double> pd(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      rs::Polynomial p(2);
      for (int k = 0; k < 8; ++k) {
        rs::Monomial m(2);
        m.exponents = {static_cast<std::uint32_t>(eng() % 5),
                       static_cast<std::uint32_t>(eng() % 5)};
        p.add_term(m, rs::Complex(cdist(eng), 0));
      }
      const double x = pd(eng), y = pd(eng);
      const double h = 1e-6;
      for (std::size_t var = 0; var < 2; ++var) {
        std::vector<rs::Complex> hi{rs::Complex(x, 0), rs::Complex(y, 0)};
        std::vector<rs::Complex> lo = hi;
        hi[var] += h;
        lo[var] -= h;
        const rs::Complex fd = (p.eval(hi) - p.eval(lo)) / (2.0 * h);
        std::vector<rs::Complex> at{rs::Complex(x, 0), rs::Complex(y, 0)};
        const rs::Complex ex = p.diff(var).eval(at);
        worst = std::max(worst, std::abs(fd - ex) / (1.0 + std::abs(ex)));
      }
    }
    if (worst > 1e-6) {
      ok = false;
      note += "finite differences off by " + fmt(worst) + "; ";
    }
  }

  // Path-count conservation on 50 random square quadratic systems.
  {
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
      rs::PolySystem sys(xy);
      sys.push_back(random_quad(2));
      sys.push_back(random_quad(2));
      if (sys[0].degree() < 1 || sys[1].degree() < 1) continue;
      auto sol = rs::solve_square(sys, 9000 + trial, tol);
      ++checked;
      if (sol.start_count !=
          static_cast<std::size_t>(sol.n_converged + sol.n_diverged + sol.n_failed)) {
        ok = false;
        note += "conservation violated; ";
        break;
      }
    }
    if (checked < 40) {
      ok = false;
      note += "too few usable systems; ";
    }
  }

  // Gamma invariance of endpoint sets on 10 systems.
  {
    for (int trial = 0; trial < 10; ++trial) {
      rs::PolySystem sys(xy);
      sys.push_back(random_quad(2));
      sys.push_back(random_quad(2));
      if (sys[0].degree() < 1 || sys[1].degree() < 1) continue;
      auto a = rs::solve_square(sys, 100 + trial, tol);
      auto b = rs::solve_square(sys, 900 + trial, tol);
      if (a.roots.size() != b.roots.size()) {
        ok = false;
        note += "gamma root-count mismatch; ";
        break;
      }
      double worst = 0.0;
      for (const auto& ra : a.roots) {
        double best = 1e9;
        for (const auto& rb : b.roots) best = std::min(best, (ra.x - rb.x).norm());
        worst = std::max(worst, best);
      }
      if (worst > 1e-8) {
        ok = false;
        note += "gamma endpoint distance " + fmt(worst) + "; ";
        break;
      }
    }
  }

  report(7, "property suites (derivatives, conservation, gamma invariance)", ok,
         note.empty() ? "time=" + fmt(seconds_since(t0)) + "s" : note);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  if (cli.empty()) {
    std::cerr << "usage: acceptance --cli <path-to-realsmooth-binary>" << std::endl;
    return 2;
  }
  std::string dir = "acceptance_tmp";
  std::system(("mkdir -p " + dir).c_str());

  criterion_circle(cli, dir);
  criterion_lips(cli, dir);
  criterion_whitney(cli, dir);
  criterion_deflation();
  criterion_xi_invariance();
  criterion_kuramoto(cli, dir);
  criterion_properties();

  std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES present");
  return g_failures == 0 ? 0 : 1;
}
