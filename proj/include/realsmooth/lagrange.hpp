#ifndef REALSMOOTH_LAGRANGE_HPP
#define REALSMOOTH_LAGRANGE_HPP

#include <string>
#include <vector>

#include "realsmooth/rng.hpp"
#include "realsmooth/solve.hpp"

namespace realsmooth {

// Square Lagrange-multiplier system for the critical points of g on the zero
// set of `base`: the n stationarity rows dg/dx_i + sum_j lambda_j df_j/dx_i
// followed by the base equations, in the variables (x, lambda). Parameters of
// the base (a homotopy t) are inherited.
struct LagrangeSystem {
  PolySystem base;
  Polynomial objective;
  std::size_t n_x = 0;
  std::size_t n_mult = 0;
  PolySystem combined;
};

inline LagrangeSystem build_lagrange(const PolySystem& base, const Polynomial& g) {
  const std::size_t n = base.nvars();
  const std::size_t m = base.size();
  const std::size_t P = base.nparams();
  if (g.nvars() != n)
    throw std::invalid_argument("build_lagrange: objective must live on the base variables");
  if (g.is_constant())
    throw std::invalid_argument("build_lagrange: constant objective has no critical structure");
  if (m == 0 || m > n)
    throw std::invalid_argument("build_lagrange: base must have between 1 and n polynomials");

  std::vector<std::string> names = base.var_names();
  for (std::size_t j = 0; j < m; ++j) names.push_back("lambda" + std::to_string(j + 1));

  LagrangeSystem out;
  out.base = base;
  out.objective = g;
  out.n_x = n;
  out.n_mult = m;
  out.combined = PolySystem(names, base.param_names(), base.param_values());
  const std::size_t arity = n + m + P;

  // Pre-lift: x-block stays, multipliers inserted at position n.
  std::vector<Polynomial> base_lifted;
  base_lifted.reserve(m);
  for (const auto& f : base.polys()) base_lifted.push_back(f.insert_vars(n, m));
  Polynomial g_lifted = g.insert_vars(n, m + P);

  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row = g_lifted.diff(i);
    for (std::size_t j = 0; j < m; ++j)
      row += Polynomial::variable(n + j, arity) * base_lifted[j].diff(i);
    out.combined.push_back(std::move(row));
  }
  for (auto& f : base_lifted) out.combined.push_back(std::move(f));
  return out;
}

struct SmoothPoint {
  RVec x;
  double g_value = 0.0;
  int jacobian_rank = 0;
  double residual = 0.0;
  bool certified_smooth = false;
  int component_hint = 0;
};

struct SmoothPointReport {
  std::vector<SmoothPoint> points;
  std::uint64_t seed = 0;
  std::string method;      // "unperturbed" | "perturbed"
  Complex gamma{0, 0};
  Complex xi{0, 0};
  std::vector<double> perturbation;  // the direction a (perturbed runs)
  int expected_rank = 0;             // n - d smoothness certificate target
  int n_paths = 0, n_converged = 0, n_diverged = 0, n_failed = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// Positive-dimensional Lagrange solution sets show up as several converged
// endpoints with singular Jacobians scattered along a continuum. Isolated but
// badly conditioned roots (near cusps) produce the same flags, so the
// continuum is confirmed by a midpoint probe: between two solutions of a
// positive-dimensional set, Newton finds yet another solution; between
// isolated roots it falls back onto a known one or fails. A confirmed
// continuum means dim V cap V(g) > d-1 and the run aborts with a diagnostic.
inline void check_degenerate_objective(const SolveResult& sol, const PolySystem& target,
                                       const Tolerances& tol) {
  std::vector<const Root*> singular;
  for (const auto& r : sol.roots)
    if (r.singular && r.multiplicity == 1) singular.push_back(&r);
  if (singular.size() < 3) return;

  // Probe the most separated pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < singular.size(); ++a)
    for (std::size_t b = a + 1; b < singular.size(); ++b) pairs.emplace_back(a, b);
  std::sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
    return (singular[p.first]->x - singular[p.second]->x).norm() >
           (singular[q.first]->x - singular[q.second]->x).norm();
  });

  int hits = 0;
  for (std::size_t k = 0; k < std::min<std::size_t>(pairs.size(), 4); ++k) {
    const CVec& a = singular[pairs[k].first]->x;
    const CVec& b = singular[pairs[k].second]->x;
    const double gap = (a - b).norm();
    if (gap <= 100.0 * tol.dedup_tol * (1.0 + a.norm())) continue;
    CVec mid = 0.5 * (a + b);
    RefineResult rr = newton_refine(target, mid, 30, tol);
    if (rr.residual > tol.witness_residual * (1.0 + rr.x.norm())) continue;
    if ((rr.x - mid).norm() > gap) continue;  // wandered far; not on a local branch
    bool is_known = false;
    for (const auto& r : sol.roots)
      if (detail::points_equal(r.x, rr.x, 10.0 * tol.dedup_tol)) { is_known = true; break; }
    if (!is_known) ++hits;
  }
  if (hits >= 2)
    throw DegenerateObjectiveError(
        "critical points form a continuum; choose a g with dim V(g) cap V <= d-1");
}

// Shared tail: realness filter, g != 0 filter, certificate evaluation. The
// certificate system is the one rank/residual are checked against (the base
// for the critical-point theorems, the deflated witness system for the
// dimension algorithm); expected_rank is its smooth-point Jacobian rank.
inline void harvest_candidates(const std::vector<CVec>& xs, const PolySystem& base,
                               const Polynomial& g, const Tolerances& tol,
                               SmoothPointReport& rep, int expected_rank = -1,
                               const PolySystem* membership = nullptr) {
  const std::size_t n = base.nvars();
  const int expected = expected_rank >= 0 ? expected_rank : static_cast<int>(base.size());
  rep.expected_rank = expected;

  struct Cand {
    CVec x;
    double gval;
  };
  std::vector<Cand> reals;
  double g_scale = 0.0;
  for (const auto& raw : xs) {
    CVec x = raw;
    // Polish onto the variety, then pull toward the real slice when close.
    RefineResult rr = newton_refine(base, x, 40, tol);
    if (rr.residual <= tol.witness_residual * (1.0 + rr.x.norm())) x = rr.x;
    if (max_im(x) > 1e-3) continue;
    RefineResult rreal = newton_refine(base, real_part(x), 40, tol);
    if (rreal.residual <= tol.witness_residual * (1.0 + rreal.x.norm()) &&
        max_im(rreal.x) <= tol.real_tol &&
        (rreal.x - x).norm() <= 10.0 * std::max(max_im(x), tol.dedup_tol) * (1.0 + x.norm()))
      x = rreal.x;
    if (max_im(x) > tol.real_tol) continue;

    if (membership) {
      // Pull the real representative onto the membership variety; a genuine
      // point converges to machine residual there, a stray one does not.
      RefineResult rm = newton_refine(*membership, real_part(x), 40, tol);
      if (rm.residual <= tol.witness_residual * (1.0 + rm.x.norm()) &&
          max_im(rm.x) <= tol.real_tol &&
          (rm.x - x).norm() <= 1e-2 * (1.0 + x.norm()))
        x = rm.x;
      if (membership->eval(x).norm() > tol.witness_residual * (1.0 + x.norm())) continue;
    }

    std::vector<Complex> at(x.data(), x.data() + x.size());
    const Complex gv = g.eval(at);
    g_scale = std::max(g_scale, std::abs(gv));
    reals.push_back({x, gv.real()});
  }

  const double g_thresh = tol.g_zero_tol * (1.0 + g_scale);
  int hint = 0;
  for (const auto& c : reals) {
    if (std::abs(c.gval) <= g_thresh) continue;
    // Deduplicate real representatives.
    bool dup = false;
    for (const auto& pt : rep.points) {
      CVec diff(static_cast<int>(n));
      for (std::size_t v = 0; v < n; ++v)
        diff(static_cast<int>(v)) = Complex(pt.x(static_cast<int>(v)), 0.0) - c.x(static_cast<int>(v));
      if (diff.norm() <= tol.dedup_tol * (1.0 + c.x.norm())) { dup = true; break; }
    }
    if (dup) continue;

    SmoothPoint sp;
    sp.x = RVec(static_cast<int>(n));
    for (std::size_t v = 0; v < n; ++v) sp.x(static_cast<int>(v)) = c.x(static_cast<int>(v)).real();
    sp.g_value = c.gval;
    CVec xr(static_cast<int>(n));
    for (std::size_t v = 0; v < n; ++v) xr(static_cast<int>(v)) = Complex(sp.x(static_cast<int>(v)), 0.0);
    sp.residual = base.eval(xr).norm();
    sp.jacobian_rank = anchored_rank(base.jacobian(xr), tol.rank_tol, 1.0 + xr.norm());
    sp.certified_smooth = sp.jacobian_rank == expected &&
                          sp.residual <= tol.witness_residual * (1.0 + xr.norm());
    sp.component_hint = hint++;
    rep.points.push_back(std::move(sp));
  }
  if (!reals.empty() && rep.points.empty())
    rep.warnings.push_back("all real critical values vanish; objective may be degenerate on the real part");
}

}  // namespace detail

// Theorem-3.1 route: critical points of g on V(base) solved directly. The
// base is presumed equidimensional with compact real part (user assertion).
inline SmoothPointReport critical_points_unperturbed(const PolySystem& base, const Polynomial& g,
                                                     std::uint64_t seed, const Tolerances& tol) {
  if (base.nparams() != 0)
    throw std::invalid_argument("critical_points_unperturbed: base must be parameter-free");
  LagrangeSystem L = build_lagrange(base, g);

  SolveOptions opts;
  opts.multiplier_block = L.n_mult;
  SolveResult sol = solve_square(L.combined, seed, tol, opts);
  detail::check_degenerate_objective(sol, L.combined, tol);

  SmoothPointReport rep;
  rep.seed = seed;
  rep.method = "unperturbed";
  rep.gamma = sol.gamma;
  rep.n_paths = static_cast<int>(sol.start_count);
  rep.n_converged = sol.n_converged;
  rep.n_diverged = sol.n_diverged;
  rep.n_failed = sol.n_failed;

  std::vector<CVec> xs;
  for (const auto& r : sol.roots) {
    if (max_im(r.x) > 1e-3) continue;  // cheap pre-filter before polishing
    xs.push_back(r.x.head(static_cast<int>(base.nvars())));
  }
  detail::harvest_candidates(xs, base, g, tol, rep);
  return rep;
}

// Lagrange arc with projectivized multipliers: rows l0*dg/dx_i + sum_j l_j*
// df_j/dx_i, the base equations, and a generic affine patch on (l0, l).
// Solutions with finite multipliers lift to the patch with l0 != 0; as t->0
// the x projection converges even when the affine multipliers blow up
// (l0 -> 0), which is exactly the lim pi_x(V(L_t)) the theorems use.
struct LagrangeArc {
  PolySystem tracking;  // vars (x..., l0, lambda...), parameter t
  std::size_t n_x = 0;
  std::size_t n_mult = 0;  // multipliers excluding l0
};

inline LagrangeArc build_lagrange_arc(const PolySystem& family, const Polynomial& g,
                                      std::uint64_t seed) {
  const std::size_t n = family.nvars();
  const std::size_t m = family.size();
  const std::size_t P = family.nparams();
  if (g.nvars() != n)
    throw std::invalid_argument("build_lagrange_arc: objective must live on the base variables");
  if (g.is_constant())
    throw std::invalid_argument("build_lagrange_arc: constant objective has no critical structure");

  std::vector<std::string> names = family.var_names();
  names.push_back("lambda0");
  for (std::size_t j = 0; j < m; ++j) names.push_back("lambda" + std::to_string(j + 1));

  LagrangeArc arc;
  arc.n_x = n;
  arc.n_mult = m;
  arc.tracking = PolySystem(names, family.param_names(), family.param_values());
  const std::size_t arity = n + 1 + m + P;

  std::vector<Polynomial> base_lifted;
  base_lifted.reserve(m);
  for (const auto& f : family.polys()) base_lifted.push_back(f.insert_vars(n, m + 1));
  Polynomial g_lifted = g.insert_vars(n, m + 1 + P);

  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row = Polynomial::variable(n, arity) * g_lifted.diff(i);
    for (std::size_t j = 0; j < m; ++j)
      row += Polynomial::variable(n + 1 + j, arity) * base_lifted[j].diff(i);
    arc.tracking.push_back(std::move(row));
  }
  for (auto& f : base_lifted) arc.tracking.push_back(std::move(f));

  Rng patch_rng(seed, "lagrange-patch");
  Polynomial patch = Polynomial::constant(Complex(-1, 0), arity);
  for (std::size_t j = 0; j <= m; ++j)
    patch += Polynomial::variable(n + j, arity) * patch_rng.unit_complex();
  arc.tracking.push_back(std::move(patch));
  return arc;
}

// Theorem-3.5 route: perturb the base to f_j - t*xi*a_j, solve the Lagrange
// system at t=1 and take t->0 limits along the complex arc. Limits are
// filtered to real points with g != 0; certificates are evaluated against the
// unperturbed base.
inline SmoothPointReport critical_points_perturbed(const PolySystem& base, const Polynomial& g,
                                                   const std::vector<double>& a,
                                                   std::uint64_t seed, const Tolerances& tol) {
  if (base.nparams() != 0)
    throw std::invalid_argument("critical_points_perturbed: base must be parameter-free");
  if (a.size() != base.size())
    throw std::invalid_argument("critical_points_perturbed: one direction entry per equation");
  bool all_zero = true;
  for (double v : a) if (v != 0.0) all_zero = false;
  if (all_zero)
    throw std::invalid_argument("critical_points_perturbed: direction must be nonzero");

  const std::size_t n = base.nvars();
  Rng xi_rng(seed, "xi");
  const Complex xi = xi_rng.unit_complex();

  PolySystem family(base.var_names(), {"t"});
  for (std::size_t j = 0; j < base.size(); ++j) {
    Polynomial f = base[j].insert_vars(n, 1);
    Polynomial t_term(n + 1);
    Monomial mt(n + 1);
    mt.exponents[n] = 1;
    t_term.add_term(mt, -xi * a[j]);
    family.push_back(f + t_term);
  }

  LagrangeArc arc = build_lagrange_arc(family, g, seed);
  PolySystem at_t1 = arc.tracking.specialize_param("t", Complex(1, 0));

  SolveOptions opts;
  opts.multiplier_block = arc.n_mult + 1;  // l0 and the lambdas
  SolveResult sol = solve_square(at_t1, seed, tol, opts);
  detail::check_degenerate_objective(sol, at_t1, tol);

  std::vector<CVec> starts;
  starts.reserve(sol.roots.size());
  for (const auto& r : sol.roots) starts.push_back(r.x);

  Homotopy H = Homotopy::param_arc(arc.tracking);
  LimitResult lim = limit_points(H, starts, tol);

  SmoothPointReport rep;
  rep.seed = seed;
  rep.method = "perturbed";
  rep.gamma = sol.gamma;
  rep.xi = xi;
  rep.perturbation = a;
  rep.n_paths = static_cast<int>(sol.start_count);
  rep.n_converged = sol.n_converged;
  rep.n_diverged = sol.n_diverged;
  rep.n_failed = sol.n_failed;
  if (lim.limits.empty())
    rep.warnings.push_back("all limits diverged or failed; empty report is legal");

  std::vector<CVec> xs;
  for (const auto& l : lim.limits) {
    if (max_im(l.head(static_cast<int>(n))) > 1e-3) continue;
    xs.push_back(l.head(static_cast<int>(n)));
  }
  detail::harvest_candidates(xs, base, g, tol, rep);
  return rep;
}

}  // namespace realsmooth

#endif
