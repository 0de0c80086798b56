#ifndef REALSMOOTH_SOLVE_HPP
#define REALSMOOTH_SOLVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "realsmooth/homotopy.hpp"
#include "realsmooth/linalg.hpp"
#include "realsmooth/parallel.hpp"
#include "realsmooth/start_system.hpp"

namespace realsmooth {

inline double max_im(const CVec& x) {
  double m = 0.0;
  for (int i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x(i).imag()));
  return m;
}

inline CVec real_part(const CVec& x) {
  CVec r(x.size());
  for (int i = 0; i < x.size(); ++i) r(i) = Complex(x(i).real(), 0.0);
  return r;
}

struct RefineResult {
  CVec x;
  double residual = std::numeric_limits<double>::infinity();
  bool singular = false;  // rank-deficient Jacobian or stalled convergence
  int iterations = 0;
};

// Newton refinement; Gauss-Newton least squares for non-square systems and
// for square systems whose Jacobian is numerically rank-deficient. Stops at
// residual <= newton_tol*(1+||x||) plus one extra polishing step. Stalled
// linear-rate convergence (multiple roots) and rank-deficient Jacobians are
// flagged singular; iteration keeps the best iterate seen.
inline RefineResult newton_refine(const PolySystem& S, const CVec& x0, int max_iter,
                                  const Tolerances& tol) {
  RefineResult out;
  out.x = x0;
  const auto rows = static_cast<int>(S.size());
  const auto cols = static_cast<int>(S.nvars());

  if (numerical_rank(S.jacobian(x0), tol.rank_tol) < std::min(rows, cols))
    out.singular = true;

  CVec x = x0;
  CVec best = x0;
  double best_res = S.eval(x0).norm();
  out.residual = best_res;
  bool hit_tolerance = false;
  bool extra_step_taken = false;
  for (int it = 0; it < max_iter; ++it) {
    CVec F = S.eval(x);
    const double res = F.norm();
    if (res < best_res) { best_res = res; best = x; }
    if (extra_step_taken) break;
    if (res <= tol.newton_tol * (1.0 + x.norm())) {
      hit_tolerance = true;
      extra_step_taken = true;  // allow exactly one polishing step
    }
    // Truncated-SVD step: rank-deficient Jacobians (deflated or squared-up
    // systems) must not push the iterate along near-null directions.
    CMat J = S.jacobian(x);
    Eigen::JacobiSVD<CMat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) break;
    CVec y = svd.matrixU().adjoint() * (-F);
    for (int k = 0; k < sv.size(); ++k)
      y(k) = sv(k) > tol.rank_tol * sv(0) ? y(k) / sv(k) : Complex(0, 0);
    CVec dx = svd.matrixV() * y;
    if (!dx.allFinite()) break;
    x += dx;
    out.iterations = it + 1;
  }
  {
    const double res = S.eval(x).norm();
    if (res < best_res) { best_res = res; best = x; }
  }
  out.x = best;
  out.residual = best_res;
  if (!hit_tolerance) out.singular = true;  // stalled before reaching tolerance
  if (anchored_rank(S.jacobian(best), tol.rank_tol, 1.0 + best.norm()) < std::min(rows, cols))
    out.singular = true;  // multiple root or positive-dimensional set
  return out;
}

struct Root {
  CVec x;
  int multiplicity = 1;
  double residual = 0.0;
  double cond = 0.0;
  bool singular = false;
};

struct SolveOptions {
  // Size of a trailing variable block the system is linear in (Lagrange
  // multipliers). Nonzero selects the two-group linear-product start system;
  // zero selects the total-degree start.
  std::size_t multiplier_block = 0;
  double t_final = 1e-6;  // blend tracked to here before the final refinement
  int refine_iters = 60;
};

struct SolveResult {
  std::vector<PathResult> paths;
  std::vector<Root> roots;  // deduplicated converged endpoints
  Complex gamma;
  std::size_t start_count = 0;
  int n_converged = 0;
  int n_diverged = 0;
  int n_failed = 0;
};

namespace detail {

// Canonical order so concurrent path results aggregate deterministically.
inline bool cvec_less(const CVec& a, const CVec& b) {
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return a.size() < b.size();
}

inline bool points_equal(const CVec& a, const CVec& b, double dedup_tol) {
  return (a - b).norm() <= dedup_tol * (1.0 + a.norm());
}

}  // namespace detail

// Total-degree (or multiplier-structured) homotopy from a random gamma on the
// unit circle; all start roots tracked, endpoints Newton-polished against the
// target and deduplicated with multiplicity counts.
inline SolveResult solve_square(const PolySystem& target, std::uint64_t seed,
                                const Tolerances& tol, SolveOptions opts = {}) {
  SolveResult res;
  Rng gamma_rng(seed, "gamma");
  res.gamma = gamma_rng.unit_complex();

  StartSystem start;
  if (opts.multiplier_block > 0) {
    Rng start_rng(seed, "mhom-start");
    start = multiplier_linear_start(target, target.nvars() - opts.multiplier_block, start_rng);
  } else {
    start = total_degree_start(target);
  }
  res.start_count = start.roots.size();
  Homotopy H = start.row_factors.empty()
                   ? Homotopy::blend(start.system, target, res.gamma)
                   : Homotopy::blend_factored(start.row_factors, target, res.gamma);

  std::vector<PathResult> paths(start.roots.size());
  parallel_for(start.roots.size(), [&](std::size_t i) {
    Homotopy::Workspace ws;
    PathResult pr = track(H, start.roots[i], opts.t_final, tol, ws);
    if (pr.status == PathStatus::converged) {
      RefineResult rr = newton_refine(target, pr.endpoint, opts.refine_iters, tol);
      // Backward-error acceptance: the residual must sit at rounding level
      // relative to the absolute-value evaluation at the endpoint.
      const double accept = 1e-11 * (1.0 + target.eval_abs_scale(rr.x));
      if (rr.residual <= accept) {
        pr.endpoint = rr.x;
        pr.residual = rr.residual;
        if (rr.singular) pr.winding_hint = 2;  // slow contraction near a multiple root
      } else if (rr.x.norm() > tol.divergence) {
        pr.status = PathStatus::diverged;
      } else {
        pr.status = PathStatus::path_failure;
        pr.endpoint = rr.x;
        pr.residual = rr.residual;
      }
    }
    paths[i] = std::move(pr);
  });

  // Deterministic aggregation: order converged endpoints canonically first.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    switch (paths[i].status) {
      case PathStatus::converged: res.n_converged++; order.push_back(i); break;
      case PathStatus::diverged: res.n_diverged++; break;
      case PathStatus::path_failure: res.n_failed++; break;
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::cvec_less(paths[a].endpoint, paths[b].endpoint);
  });
  for (std::size_t idx : order) {
    const auto& pr = paths[idx];
    bool merged = false;
    for (auto& r : res.roots) {
      if (detail::points_equal(r.x, pr.endpoint, tol.dedup_tol)) {
        r.multiplicity++;
        r.singular = true;  // several paths into one endpoint
        merged = true;
        break;
      }
    }
    if (!merged) {
      Root r;
      r.x = pr.endpoint;
      r.residual = pr.residual;
      r.cond = pr.cond_estimate;
      r.singular = pr.winding_hint > 1;
      res.roots.push_back(std::move(r));
    }
  }
  res.paths = std::move(paths);
  return res;
}

struct LimitResult {
  std::vector<CVec> limits;  // deduplicated limit points (x-space of the family)
  std::vector<int> multiplicity;
  std::vector<int> winding;
  std::vector<PathStatus> path_status;  // one per input endpoint
  int n_converged = 0;
  int n_diverged = 0;
  int n_failed = 0;
};

namespace detail {

// Componentwise Richardson extrapolation over geometric samples
// x(t_min * 2^-k). Each coordinate estimates its own leading Puiseux exponent
// 1/w from successive difference ratios, so paths winding into a singular
// limit (x_j ~ t^{1/w}) extrapolate correctly next to analytic coordinates;
// w = 1 reproduces the classical table.
inline std::pair<CVec, int> richardson_limit(const std::vector<CVec>& samples) {
  const int K = static_cast<int>(samples.size());
  CVec last = samples.back();
  if (K < 3) return {last, 1};
  const int n = static_cast<int>(last.size());
  const double scale = 1.0 + last.norm();

  CVec out(n);
  int winding = 1;
  std::vector<Complex> col(static_cast<std::size_t>(K));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < K; ++k) col[static_cast<std::size_t>(k)] = samples[static_cast<std::size_t>(k)](j);

    std::vector<double> diff(static_cast<std::size_t>(K) - 1);
    for (int k = 0; k + 1 < K; ++k)
      diff[static_cast<std::size_t>(k)] = std::abs(col[static_cast<std::size_t>(k + 1)] - col[static_cast<std::size_t>(k)]);
    if (diff.back() <= 1e-13 * scale) {  // coordinate already converged in t
      out(j) = col.back();
      continue;
    }

    // Average the last ratios; alpha = -log2(ratio) is the leading exponent.
    double ratio = 0.0;
    int used = 0;
    for (std::size_t k = diff.size() >= 3 ? diff.size() - 2 : 1; k < diff.size(); ++k) {
      if (diff[k - 1] > 1e-15 * scale) { ratio += diff[k] / diff[k - 1]; ++used; }
    }
    int w = 1;
    if (used > 0) {
      ratio /= used;
      if (ratio > 0 && ratio < 0.95) {
        const double alpha = -std::log2(ratio);
        if (alpha > 1e-3) {
          w = static_cast<int>(std::lround(1.0 / alpha));
          w = std::max(1, std::min(w, 8));
        }
      }
    }
    winding = std::max(winding, w);

    const double r = std::pow(2.0, 1.0 / static_cast<double>(w));
    std::vector<Complex> row = col;
    for (int lvl = 1; lvl < K; ++lvl) {
      const double rj = std::pow(r, lvl);
      for (int k = K - 1; k >= lvl; --k)
        row[static_cast<std::size_t>(k)] =
            (rj * row[static_cast<std::size_t>(k)] - row[static_cast<std::size_t>(k - 1)]) / (rj - 1.0);
    }
    out(j) = row.back();
  }
  return {out, winding};
}

}  // namespace detail

// Tracks each t=1 solution of a parameter homotopy toward t=0 and extracts
// the finite limit set: geometric samples at t_min*2^-k followed by
// componentwise Richardson extrapolation. Diverged paths are discarded; an
// empty result is legal and signals an empty limit.
inline LimitResult limit_points(const Homotopy& H, const std::vector<CVec>& endpoints_at_t1,
                                const Tolerances& tol) {
  if (H.kind() != Homotopy::Kind::ParamArc)
    throw std::invalid_argument("limit_points: homotopy must carry t inside the system");
  LimitResult res;
  res.path_status.assign(endpoints_at_t1.size(), PathStatus::path_failure);

  struct PathLimit {
    bool ok = false;
    CVec limit;
    int winding = 1;
  };
  std::vector<PathLimit> per_path(endpoints_at_t1.size());

  parallel_for(endpoints_at_t1.size(), [&](std::size_t i) {
    Homotopy::Workspace ws;
    CVec Hx;
    H.eval(endpoints_at_t1[i], 1.0, Hx, ws);
    if (Hx.norm() > 1e-7 * H.residual_scale(endpoints_at_t1[i])) {
      res.path_status[i] = PathStatus::path_failure;  // precondition violated
      return;
    }
    PathResult pr = track(H, endpoints_at_t1[i], tol.t_min, tol, ws);
    if (pr.status != PathStatus::converged) {
      res.path_status[i] = pr.status;
      return;
    }
    std::vector<CVec> samples;
    samples.push_back(pr.endpoint);
    double t_hi = tol.t_min;
    bool bad = false;
    for (int k = 1; k < tol.richardson_depth; ++k) {
      const double t_lo = tol.t_min * std::pow(0.5, k);
      // Continue the same path over [t_hi, t_lo] by rescaling the arc: track
      // expects the range [1, t_end], so reuse with a fresh sub-track.
      PathResult hop = track_segment(H, samples.back(), t_hi, t_lo, tol, ws);
      if (hop.status != PathStatus::converged) { bad = true; break; }
      samples.push_back(hop.endpoint);
      t_hi = t_lo;
    }
    if (bad && samples.size() < 3) {
      res.path_status[i] = PathStatus::path_failure;
      return;
    }
    auto [limit, w] = detail::richardson_limit(samples);
    if (limit.norm() > tol.divergence) {
      res.path_status[i] = PathStatus::diverged;
      return;
    }
    res.path_status[i] = PathStatus::converged;
    per_path[i].ok = true;
    per_path[i].limit = std::move(limit);
    per_path[i].winding = w;
  });

  for (auto s : res.path_status) {
    if (s == PathStatus::converged) res.n_converged++;
    else if (s == PathStatus::diverged) res.n_diverged++;
    else res.n_failed++;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < per_path.size(); ++i)
    if (per_path[i].ok) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detail::cvec_less(per_path[a].limit, per_path[b].limit);
  });
  for (std::size_t idx : order) {
    bool merged = false;
    for (std::size_t r = 0; r < res.limits.size(); ++r) {
      if (detail::points_equal(res.limits[r], per_path[idx].limit, tol.dedup_tol)) {
        res.multiplicity[r]++;
        res.winding[r] = std::max(res.winding[r], per_path[idx].winding);
        merged = true;
        break;
      }
    }
    if (!merged) {
      res.limits.push_back(per_path[idx].limit);
      res.multiplicity.push_back(1);
      res.winding.push_back(per_path[idx].winding);
    }
  }
  return res;
}

}  // namespace realsmooth

#endif
