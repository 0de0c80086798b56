#ifndef REALSMOOTH_REALDIM_HPP
#define REALSMOOTH_REALDIM_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "realsmooth/deflation.hpp"
#include "realsmooth/lagrange.hpp"
#include "realsmooth/polar.hpp"
#include "realsmooth/solve.hpp"

namespace realsmooth {

struct LevelTrace {
  int i = 0;
  std::size_t witness_paths = 0;
  std::size_t witness_points = 0;
  std::size_t groups = 0;
  std::vector<std::int64_t> g_degrees;
  std::size_t s_i_size = 0;
  double elapsed_seconds = 0.0;
  std::vector<std::string> notes;
};

struct RealDimRun {
  int result = -1;  // real dimension, or -1 for the empty set
  RMat A;
  Complex xi{0, 0};
  std::uint64_t seed = 0;
  std::vector<LevelTrace> per_i;
  std::vector<SmoothPoint> witnesses;  // points at the answering level, input coordinates
  std::vector<std::string> warnings;
};

namespace detail {

struct LevelOutcome {
  std::vector<SmoothPoint> points;  // rotated coordinates
  LevelTrace trace;
};

inline void harvest_group(const std::vector<CVec>& candidates, const PolySystem& witness,
                          const Polynomial& g, int expected_rank, const Tolerances& tol,
                          const PolySystem& membership, SmoothPointReport& rep) {
  harvest_candidates(candidates, witness, g, tol, rep, expected_rank, &membership);
  // Keep only certified points: the rank certificate doubles as the
  // signature-membership test for the group's components.
  std::vector<SmoothPoint> kept;
  for (auto& p : rep.points)
    if (p.certified_smooth) kept.push_back(std::move(p));
  rep.points = std::move(kept);
}

// One level of the dimension loop: witness points of the polar-variety limit,
// signature grouping with deflation, one minor-determinant objective per
// group, then the perturbed Lagrange arc whose real limit points with g != 0
// certify dimension i-1. Groups are processed deepest deflation first and the
// level returns on its first nonempty group.
inline LevelOutcome run_polar_level(const Polynomial& f, const PolySystem& rotated_input,
                                    const std::vector<std::string>& vars,
                                    std::size_t i, Complex xi, std::uint64_t seed,
                                    const Tolerances& tol, std::vector<std::string>& warnings,
                                    bool top_level) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = vars.size();
  LevelOutcome out;
  out.trace.i = static_cast<int>(i);

  // Polar family and a generic slice fixed for the whole level.
  PolySystem family = polar_system(f, vars, i, /*with_t=*/true, xi);
  Rng slice_rng(seed, "slice-" + std::to_string(i));
  PolySystem sliced(vars, {"t"});
  for (const auto& p : family.polys()) sliced.push_back(p);
  for (std::size_t k = 0; k + 1 < i; ++k) {
    Polynomial L = slice_rng.random_affine_linear(n);
    sliced.push_back(L.insert_vars(n, 1));
  }

  // Witness points of the limit variety: solve at t=1, then t -> 0.
  PolySystem at_t1 = sliced.specialize_param("t", Complex(1, 0));
  SolveResult wsol = solve_square(at_t1, derive_seed(seed, "witness-" + std::to_string(i)), tol);
  out.trace.witness_paths = wsol.start_count;

  Homotopy Hw = Homotopy::param_arc(sliced);
  std::vector<CVec> starts;
  for (const auto& r : wsol.roots) starts.push_back(r.x);
  LimitResult wlim = limit_points(Hw, starts, tol);
  out.trace.witness_points = wlim.limits.size();

  if (top_level && !starts.empty() && wlim.n_diverged >= static_cast<int>(0.8 * starts.size()))
    warnings.push_back("mass path divergence at the top level; the real set may be unbounded");

  if (wlim.limits.empty()) {
    out.trace.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  // Deflate each witness point and group by rank signature.
  std::vector<std::string> defl_errors;
  std::vector<SignatureGroup> groups =
      group_by_signature(wlim.limits, family, static_cast<int>(i) - 1, tol, &defl_errors);
  for (const auto& e : defl_errors) {
    warnings.push_back(e);
    out.trace.notes.push_back(e);
  }
  out.trace.groups = groups.size();

  // Deepest deflation first: squared-up real loci always sit in the singular
  // strata, so those groups are where real smooth points can appear.
  std::sort(groups.begin(), groups.end(), [](const SignatureGroup& a, const SignatureGroup& b) {
    if (a.signature.size() != b.signature.size())
      return a.signature.size() > b.signature.size();
    return a.signature < b.signature;
  });

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& grp = groups[gi];
    const CVec& rep_pt = grp.points.front();
    Polynomial g;
    try {
      g = minor_g(grp.witness_limit, rep_pt, static_cast<int>(n - i + 1), tol);
    } catch (const std::invalid_argument& e) {
      warnings.push_back(std::string("group skipped: ") + e.what());
      out.trace.notes.push_back(e.what());
      continue;
    }
    out.trace.g_degrees.push_back(g.degree());

    std::vector<CVec> candidates;
    if (g.is_constant()) {
      // A constant objective happens for zero-dimensional groups; the witness
      // points themselves are the critical set.
      candidates = grp.points;
    } else {
      LagrangeArc arc = build_lagrange_arc(family, g, derive_seed(seed, "arc"));
      PolySystem arc_t1 = arc.tracking.specialize_param("t", Complex(1, 0));
      SolveOptions opts;
      opts.multiplier_block = arc.n_mult + 1;
      SolveResult lsol;
      try {
        lsol = solve_square(arc_t1, derive_seed(seed, "lagrange-" + std::to_string(i)), tol, opts);
      } catch (const std::exception& e) {
        warnings.push_back(std::string("group solve failed: ") + e.what());
        continue;
      }
      std::vector<CVec> lstarts;
      for (const auto& r : lsol.roots) lstarts.push_back(r.x);
      Homotopy Hl = Homotopy::param_arc(arc.tracking);
      LimitResult llim = limit_points(Hl, lstarts, tol);
      for (const auto& l : llim.limits) candidates.push_back(l.head(static_cast<int>(n)));
    }

    SmoothPointReport rep;
    harvest_group(candidates, grp.witness_limit, g, static_cast<int>(n - i + 1), tol,
                  rotated_input, rep);
    if (!rep.points.empty()) {
      for (auto& p : rep.points) p.component_hint = static_cast<int>(gi);
      out.points = std::move(rep.points);
      out.trace.s_i_size = out.points.size();
      break;  // S_i is nonempty; remaining groups can only add more points
    }
  }

  out.trace.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace detail

// Numerical real dimension: random orthogonal change of coordinates, the
// sum-of-squares objective, and one polar level per candidate dimension from
// n down to 1. Returns i-1 at the first level whose smooth-point set is
// nonempty and -1 when the loop exhausts (empty real set). Requires a compact
// real zero set (user-asserted; see embed_bounded).
inline RealDimRun real_dimension(const PolySystem& F, std::uint64_t seed, const Tolerances& tol) {
  const std::size_t n = F.nvars();
  if (n < 2) throw std::invalid_argument("real_dimension: need at least two variables");
  if (F.nparams() != 0)
    throw std::invalid_argument("real_dimension: system must be parameter-free");

  RealDimRun run;
  run.seed = seed;
  Rng a_rng(seed, "A");
  run.A = a_rng.random_orthogonal(static_cast<int>(n));
  Rng xi_rng(seed, "xi");
  run.xi = xi_rng.unit_complex();

  const PolySystem rotated = compose_linear(F, run.A);
  const Polynomial f = sum_of_squares_pullback(F, run.A);

  for (std::size_t i = n; i >= 1; --i) {
    detail::LevelOutcome lvl = detail::run_polar_level(
        f, rotated, F.var_names(), i, run.xi, seed, tol, run.warnings, /*top_level=*/i == n);
    run.per_i.push_back(lvl.trace);
    if (!lvl.points.empty()) {
      run.result = static_cast<int>(i) - 1;
      // Map the points back through A to the input coordinate system.
      for (auto& p : lvl.points) {
        RVec orig = run.A * p.x;
        p.x = orig;
        run.witnesses.push_back(std::move(p));
      }
      return run;
    }
  }
  run.result = -1;
  return run;
}

// Standalone smooth-point sampler. With a user objective the Theorem-3.1 or
// Theorem-3.5 route runs on the input system directly; without one the
// objective is auto-constructed from the polar/deflation machinery at the top
// dimension and points are mapped back through A.
inline SmoothPointReport smooth_sample(const PolySystem& F, const std::optional<Polynomial>& g,
                                       std::uint64_t seed, const Tolerances& tol,
                                       bool perturbed = false) {
  if (g.has_value()) {
    if (perturbed) {
      Rng a_rng(seed, "perturb-a");
      std::vector<double> a;
      for (std::size_t j = 0; j < F.size(); ++j) a.push_back(a_rng.gaussian());
      return critical_points_perturbed(F, *g, a, seed, tol);
    }
    return critical_points_unperturbed(F, *g, seed, tol);
  }

  const std::size_t n = F.nvars();
  Rng a_rng(seed, "A");
  RMat A = a_rng.random_orthogonal(static_cast<int>(n));
  Rng xi_rng(seed, "xi");
  const Complex xi = xi_rng.unit_complex();
  const PolySystem rotated = compose_linear(F, A);
  const Polynomial f = sum_of_squares_pullback(F, A);

  std::vector<std::string> warnings;
  detail::LevelOutcome lvl =
      detail::run_polar_level(f, rotated, F.var_names(), n, xi, seed, tol, warnings, true);

  SmoothPointReport rep;
  rep.seed = seed;
  rep.method = "auto-g";
  rep.xi = xi;
  rep.warnings = std::move(warnings);
  rep.expected_rank = 1;
  for (auto& p : lvl.points) {
    p.x = (A * p.x).eval();
    rep.points.push_back(std::move(p));
  }
  if (rep.points.empty())
    rep.warnings.push_back("no smooth real point found at the top dimension");
  return rep;
}

}  // namespace realsmooth

#endif
