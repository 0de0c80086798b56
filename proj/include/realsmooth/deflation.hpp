#ifndef REALSMOOTH_DEFLATION_HPP
#define REALSMOOTH_DEFLATION_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "realsmooth/linalg.hpp"
#include "realsmooth/poly_system.hpp"
#include "realsmooth/solve.hpp"

namespace realsmooth {

// Witness set data for one limit variety: witness system, generic linear
// slice, witness points and the rank signature of the deflation sequence.
struct WitnessData {
  PolySystem witness_system;
  std::vector<Polynomial> slice;
  std::vector<CVec> points;
  int dim = 0;
  std::vector<int> deflation_signature;
};

namespace detail {

// Determinants of all k x k column selections of the first k rows, computed
// by dynamic programming over column masks. rows[i][c] indexes a matrix of
// polynomials.
inline Polynomial poly_det(const std::vector<std::vector<const Polynomial*>>& rows) {
  const std::size_t k = rows.size();
  if (k == 0) throw std::invalid_argument("poly_det: empty matrix");
  const std::size_t arity = rows[0][0]->nvars();
  // DP over subsets: D[mask] = det of rows 0..popcount(mask)-1 on columns in mask.
  std::map<std::uint32_t, Polynomial> cur;
  cur[0] = Polynomial::constant(Complex(1, 0), arity);
  for (std::size_t i = 0; i < k; ++i) {
    std::map<std::uint32_t, Polynomial> next;
    for (const auto& [mask, det] : cur) {
      for (std::size_t c = 0; c < k; ++c) {
        const std::uint32_t bit = 1u << c;
        if (mask & bit) continue;
        // Sign: parity of selected columns below c in the new mask.
        int lower = 0;
        for (std::size_t b = 0; b < c; ++b)
          if (mask & (1u << b)) ++lower;
        const double sign = (static_cast<int>(i) + lower) % 2 == 0 ? 1.0 : -1.0;
        Polynomial contrib = det * (*rows[i][c]) * Complex(sign, 0.0);
        auto it = next.find(mask | bit);
        if (it == next.end()) next.emplace(mask | bit, std::move(contrib));
        else it->second += contrib;
      }
    }
    cur = std::move(next);
  }
  return cur.at((1u << k) - 1);
}

inline bool same_up_to_scale(const Polynomial& a, const Polynomial& b) {
  return a.normalized() == b.normalized();
}

// Numeric evaluation helpers shared by the rank probe.
inline CMat numeric_jacobian(const std::vector<std::vector<Polynomial>>& symjac,
                             const std::vector<Complex>& at) {
  CMat J(static_cast<int>(symjac.size()),
         symjac.empty() ? 0 : static_cast<int>(symjac[0].size()));
  for (std::size_t i = 0; i < symjac.size(); ++i)
    for (std::size_t j = 0; j < symjac[i].size(); ++j)
      J(static_cast<int>(i), static_cast<int>(j)) = symjac[i][j].eval(at);
  return J;
}

}  // namespace detail

// One application of the isosingular deflation operator D at an anchor q:
// appends all (r+1) x (r+1) minors of the symbolic Jacobian, where r is the
// numerical rank of the Jacobian at q. When no minors of that size exist the
// input is returned unchanged (sequence stabilized). Appended minors are
// normalized and deduplicated; the anchor remains a root by construction.
inline PolySystem deflation_step(const PolySystem& F, const CVec& q, const Tolerances& tol) {
  if (F.nparams() != 0)
    throw std::invalid_argument("deflation_step: system must be parameter-free");
  const double resid = F.eval(q).norm();
  if (resid > 1e-8 * (1.0 + q.norm()))
    throw std::invalid_argument("deflation_step: anchor is not a root of the system");

  const int rows = static_cast<int>(F.size());
  const int cols = static_cast<int>(F.nvars());
  const int r = anchored_rank(F.jacobian(q), tol.rank_tol, 1.0 + q.norm());
  const int k = r + 1;
  if (k > rows || k > cols) return F;

  // Budget check before any symbolic work.
  auto binom = [](int n, int m) -> double {
    double v = 1.0;
    for (int i = 0; i < m; ++i) v = v * (n - i) / (i + 1);
    return v;
  };
  if (binom(rows, k) * binom(cols, k) > static_cast<double>(tol.minor_budget))
    throw DeflationCapError("deflation_step: minor budget exceeded (" +
                            std::to_string(rows) + " x " + std::to_string(cols) +
                            " Jacobian, rank " + std::to_string(r) + ")");

  const auto symjac = F.symbolic_jacobian();
  PolySystem out = F;
  std::vector<Polynomial> appended;

  std::vector<int> rowsel(static_cast<std::size_t>(k));
  std::vector<int> colsel(static_cast<std::size_t>(k));
  std::function<void(int, int)> pick_cols;
  std::function<void(int, int)> pick_rows = [&](int from, int need) {
    if (need == 0) { pick_cols(0, k); return; }
    for (int i = from; i <= rows - need; ++i) {
      rowsel[static_cast<std::size_t>(k - need)] = i;
      pick_rows(i + 1, need - 1);
    }
  };
  pick_cols = [&](int from, int need) {
    if (need == 0) {
      std::vector<std::vector<const Polynomial*>> sub(static_cast<std::size_t>(k));
      for (int a = 0; a < k; ++a) {
        sub[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(k));
        for (int b = 0; b < k; ++b)
          sub[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
              &symjac[static_cast<std::size_t>(rowsel[static_cast<std::size_t>(a)])]
                     [static_cast<std::size_t>(colsel[static_cast<std::size_t>(b)])];
      }
      Polynomial det = detail::poly_det(sub).normalized();
      if (det.is_zero()) return;
      for (const auto& p : out.polys())
        if (detail::same_up_to_scale(p, det)) return;
      for (const auto& p : appended)
        if (detail::same_up_to_scale(p, det)) return;
      appended.push_back(std::move(det));
      return;
    }
    for (int c = from; c <= cols - need; ++c) {
      colsel[static_cast<std::size_t>(k - need)] = c;
      pick_cols(c + 1, need - 1);
    }
  };
  pick_rows(0, k);

  for (auto& p : appended) out.push_back(std::move(p));
  return out;
}

namespace detail {

// Rank the Jacobian of D(F) would have at q, computed numerically without
// materializing the symbolic minors: the gradient of det(M) is the sum of
// determinants with one row replaced by its entrywise gradient, which only
// needs first and second derivative values of F at q.
inline int probe_rank_after_step(const PolySystem& F, const CVec& q, const Tolerances& tol) {
  const int rows = static_cast<int>(F.size());
  const int cols = static_cast<int>(F.nvars());
  std::vector<Complex> at(q.data(), q.data() + q.size());

  const auto symjac = F.symbolic_jacobian();
  const CMat J = detail::numeric_jacobian(symjac, at);
  const int r = anchored_rank(J, tol.rank_tol, 1.0 + q.norm());
  const int k = r + 1;
  if (k > rows || k > cols) return r;

  // Second derivative values: hess[b](m, c) = d^2 F_b / dx_c dx_m at q.
  std::vector<CMat> hess(static_cast<std::size_t>(rows));
  for (int b = 0; b < rows; ++b) {
    hess[static_cast<std::size_t>(b)].resize(cols, cols);
    for (int c = 0; c < cols; ++c) {
      for (int m = c; m < cols; ++m) {
        Complex v = symjac[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]
                        .diff(static_cast<std::size_t>(m))
                        .eval(at);
        hess[static_cast<std::size_t>(b)](m, c) = v;
        hess[static_cast<std::size_t>(b)](c, m) = v;
      }
    }
  }

  std::vector<CVec> grads;
  constexpr std::size_t kProbeBudget = 50000;  // gradients stacked at most
  std::vector<int> rowsel(static_cast<std::size_t>(k)), colsel(static_cast<std::size_t>(k));
  CMat M(k, k), Mrep(k, k);

  std::function<void(int, int)> pick_cols;
  std::function<void(int, int)> pick_rows = [&](int from, int need) {
    if (need == 0) { pick_cols(0, k); return; }
    for (int i = from; i <= rows - need; ++i) {
      rowsel[static_cast<std::size_t>(k - need)] = i;
      pick_rows(i + 1, need - 1);
    }
  };
  pick_cols = [&](int from, int need) {
    if (need == 0) {
      if (grads.size() >= kProbeBudget) return;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          M(a, b) = J(rowsel[static_cast<std::size_t>(a)], colsel[static_cast<std::size_t>(b)]);
      CVec grad(cols);
      for (int m = 0; m < cols; ++m) {
        Complex acc(0, 0);
        for (int a = 0; a < k; ++a) {
          Mrep = M;
          for (int b = 0; b < k; ++b)
            Mrep(a, b) = hess[static_cast<std::size_t>(rowsel[static_cast<std::size_t>(a)])](
                m, colsel[static_cast<std::size_t>(b)]);
          acc += Mrep.determinant();
        }
        grad(m) = acc;
      }
      grads.push_back(std::move(grad));
      return;
    }
    for (int c = from; c <= cols - need; ++c) {
      colsel[static_cast<std::size_t>(k - need)] = c;
      pick_cols(c + 1, need - 1);
    }
  };
  pick_rows(0, k);

  CMat stacked(rows + static_cast<int>(grads.size()), cols);
  stacked.topRows(rows) = J;
  for (std::size_t g = 0; g < grads.size(); ++g)
    stacked.row(rows + static_cast<int>(g)) = grads[g].transpose();
  return anchored_rank(stacked, tol.rank_tol, 1.0 + q.norm());
}

}  // namespace detail

struct DeflationSequence {
  PolySystem final_system;   // F_{j*} over (x..., t, s)
  PolySystem limit_system;   // F_{j*}(x, 0, 0) over the x variables
  CVec anchor;               // q = (p, 0, 0)
  std::vector<int> ranks;    // rank at each step
};

// Builds F_0(x,t,s) = {H(x,t), s} for the non-slice part of the homotopy and
// iterates the deflation operator at q = (p,0,0) until the rank at q
// stabilizes across two consecutive steps (the follow-up rank is probed
// numerically, so the stabilized round's minors are never materialized).
// Returns both the (x,t,s) system and its t=s=0 specialization.
inline DeflationSequence witness_system_for_limit(const PolySystem& family, const CVec& p,
                                                  const Tolerances& tol) {
  if (family.nparams() != 1 || family.param_names()[0] != "t")
    throw std::invalid_argument("witness_system_for_limit: family needs parameter t");
  const std::size_t n = family.nvars();

  // Limit points carry endgame-extrapolation error; pull the anchor onto the
  // t=0 fiber before deflating (the anchor must be a root to 1e-8).
  CVec p_use = p;
  {
    PolySystem fiber = family.specialize_param("t", Complex(0, 0));
    RefineResult rr = newton_refine(fiber, p, 60, tol);
    if (rr.residual <= 1e-8 * (1.0 + rr.x.norm()) &&
        (rr.x - p).norm() <= 1e-2 * (1.0 + p.norm()))
      p_use = rr.x;
    else if (fiber.eval(p).norm() > 1e-8 * (1.0 + p.norm()))
      throw DeflationCapError(
          "witness_system_for_limit: limit point does not reach the t=0 fiber to 1e-8");
  }

  // Variables (x..., t, s).
  PolySystem with_t = family.params_as_vars();
  std::vector<std::string> names = with_t.var_names();
  names.push_back("_s");
  PolySystem F0(names);
  for (const auto& poly : with_t.polys()) F0.push_back(poly.insert_vars(n + 1, 1));
  F0.push_back(Polynomial::variable(n + 1, n + 2));

  CVec q(static_cast<int>(n + 2));
  q.setZero();
  q.head(static_cast<int>(n)) = p_use;

  DeflationSequence seq;
  seq.anchor = q;
  PolySystem F = F0;
  for (int j = 0; j <= tol.deflation_max_iters; ++j) {
    const int r = anchored_rank(F.jacobian(q), tol.rank_tol, 1.0 + q.norm());
    seq.ranks.push_back(r);
    const int r_next = detail::probe_rank_after_step(F, q, tol);
    if (r_next == r) break;
    if (j == tol.deflation_max_iters)
      throw DeflationCapError("witness_system_for_limit: no stabilization within iteration cap");
    F = deflation_step(F, q, tol);
  }

  seq.final_system = F;
  // Specialize t = s = 0 and drop zero polynomials.
  PolySystem limit(family.var_names());
  std::set<std::string> seen;
  for (const auto& poly : F.polys()) {
    Polynomial sub = poly.bind(n, Complex(0, 0)).bind(n + 1, Complex(0, 0));
    sub = sub.drop_var(n + 1).drop_var(n);
    if (sub.is_zero()) continue;
    Polynomial norm = sub.normalized();
    std::string key = norm.to_string(family.var_names());
    if (seen.insert(key).second) limit.push_back(std::move(norm));
  }
  seq.limit_system = std::move(limit);
  return seq;
}

// Iterates the deflation operator on an x-space system until the Jacobian
// null space at p has the target dimension (the multiplicity-one witness
// system of the component through p). Appends the rank sequence to `ranks`
// when provided.
inline PolySystem multiplicity_one_refine(const PolySystem& F, const CVec& p, int target_dim,
                                          const Tolerances& tol,
                                          std::vector<int>* ranks = nullptr) {
  PolySystem G = F;
  for (int j = 0; j <= tol.deflation_max_iters; ++j) {
    const int r = anchored_rank(G.jacobian(p), tol.rank_tol, 1.0 + p.norm());
    const int null_dim = static_cast<int>(G.nvars()) - r;
    if (ranks) ranks->push_back(r);
    if (null_dim == target_dim) return G;
    if (null_dim < target_dim)
      throw DeflationCapError("multiplicity_one_refine: null dimension fell below target");
    PolySystem next = deflation_step(G, p, tol);
    if (next.size() == G.size())
      throw DeflationCapError("multiplicity_one_refine: operator stationary before target");
    G = std::move(next);
  }
  throw DeflationCapError("multiplicity_one_refine: iteration cap exceeded");
}

// det(M(x)) for a well-conditioned (target_rank x target_rank) submatrix M of
// the symbolic Jacobian of F, chosen by greedy pivoting on JF(z). Among
// pivots within a factor of the best, rows adding lower degree are preferred
// to keep the objective degree down. Guarantees |g(z)| > minor_pivot_tol.
inline Polynomial minor_g(const PolySystem& F, const CVec& z, int target_rank,
                          const Tolerances& tol) {
  const int rows = static_cast<int>(F.size());
  const int cols = static_cast<int>(F.nvars());
  if (target_rank < 1 || target_rank > std::min(rows, cols))
    throw std::invalid_argument("minor_g: bad target rank");
  const CMat Jz = F.jacobian(z);
  if (anchored_rank(Jz, tol.rank_tol, 1.0 + z.norm()) != target_rank)
    throw std::invalid_argument("minor_g: Jacobian rank at z does not match target");

  const auto symjac = F.symbolic_jacobian();
  std::vector<std::int64_t> row_degree(static_cast<std::size_t>(rows), 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      row_degree[static_cast<std::size_t>(i)] =
          std::max(row_degree[static_cast<std::size_t>(i)],
                   symjac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].degree());

  std::vector<int> R, C;
  for (int k = 0; k < target_rank; ++k) {
    double best_score = 0.0;
    // First pass: best achievable |det| with one more row/column.
    CMat M(k + 1, k + 1);
    auto det_with = [&](int r, int c) {
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) M(a, b) = Jz(R[static_cast<std::size_t>(a)], C[static_cast<std::size_t>(b)]);
        M(a, k) = Jz(R[static_cast<std::size_t>(a)], c);
        M(k, a) = Jz(r, C[static_cast<std::size_t>(a)]);
      }
      M(k, k) = Jz(r, c);
      return std::abs(M.determinant());
    };
    for (int r = 0; r < rows; ++r) {
      if (std::find(R.begin(), R.end(), r) != R.end()) continue;
      for (int c = 0; c < cols; ++c) {
        if (std::find(C.begin(), C.end(), c) != C.end()) continue;
        best_score = std::max(best_score, det_with(r, c));
      }
    }
    if (best_score <= tol.minor_pivot_tol)
      throw std::invalid_argument("minor_g: no nonsingular minor at z (rank precondition violated)");
    // Second pass: among pivots within 5% of the best, take the lowest-degree row.
    int pick_r = -1, pick_c = -1;
    std::int64_t pick_deg = std::numeric_limits<std::int64_t>::max();
    double pick_score = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (std::find(R.begin(), R.end(), r) != R.end()) continue;
      for (int c = 0; c < cols; ++c) {
        if (std::find(C.begin(), C.end(), c) != C.end()) continue;
        const double s = det_with(r, c);
        if (s < 0.05 * best_score) continue;
        const std::int64_t deg = row_degree[static_cast<std::size_t>(r)];
        if (deg < pick_deg || (deg == pick_deg && s > pick_score)) {
          pick_deg = deg;
          pick_score = s;
          pick_r = r;
          pick_c = c;
        }
      }
    }
    R.push_back(pick_r);
    C.push_back(pick_c);
  }

  std::sort(R.begin(), R.end());
  std::sort(C.begin(), C.end());
  std::vector<std::vector<const Polynomial*>> sub(static_cast<std::size_t>(target_rank));
  for (int a = 0; a < target_rank; ++a) {
    sub[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(target_rank));
    for (int b = 0; b < target_rank; ++b)
      sub[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          &symjac[static_cast<std::size_t>(R[static_cast<std::size_t>(a)])]
                 [static_cast<std::size_t>(C[static_cast<std::size_t>(b)])];
  }
  Polynomial g = detail::poly_det(sub).normalized();
  const std::vector<Complex> at(z.data(), z.data() + z.size());
  if (std::abs(g.eval(at)) <= tol.minor_pivot_tol)
    throw std::invalid_argument("minor_g: selected minor vanishes at z");
  return g;
}

// Limit points grouped by their deflation signature (witness-stage rank
// sequence plus the multiplicity-one refinement ranks). Each group carries
// the refined witness system of its first representative; points whose
// deflation hits the iteration or budget cap are reported in `errors` and
// skipped.
struct SignatureGroup {
  std::vector<int> signature;
  std::vector<CVec> points;
  PolySystem witness_limit;    // multiplicity-one witness system over x
  DeflationSequence sequence;  // witness-stage data of the representative
};

inline std::vector<SignatureGroup> group_by_signature(const std::vector<CVec>& points,
                                                      const PolySystem& family,
                                                      int target_dim, const Tolerances& tol,
                                                      std::vector<std::string>* errors = nullptr) {
  std::vector<SignatureGroup> groups;
  for (const auto& p : points) {
    try {
      DeflationSequence seq = witness_system_for_limit(family, p, tol);
      const CVec anchor = seq.anchor.head(static_cast<int>(family.nvars()));
      std::vector<int> sig = seq.ranks;
      sig.push_back(-1);  // stage separator
      std::vector<int> refine_ranks;
      PolySystem refined =
          multiplicity_one_refine(seq.limit_system, anchor, target_dim, tol, &refine_ranks);
      sig.insert(sig.end(), refine_ranks.begin(), refine_ranks.end());

      bool placed = false;
      for (auto& grp : groups) {
        if (grp.signature == sig) {
          grp.points.push_back(anchor);
          placed = true;
          break;
        }
      }
      if (!placed) {
        SignatureGroup grp;
        grp.signature = std::move(sig);
        grp.points.push_back(anchor);
        grp.witness_limit = std::move(refined);
        grp.sequence = std::move(seq);
        groups.push_back(std::move(grp));
      }
    } catch (const DeflationCapError& e) {
      if (errors) errors->push_back(e.what());
    } catch (const std::invalid_argument& e) {
      if (errors) errors->push_back(e.what());
    }
  }
  return groups;
}

}  // namespace realsmooth

#endif
