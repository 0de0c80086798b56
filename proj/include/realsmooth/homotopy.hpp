#ifndef REALSMOOTH_HOMOTOPY_HPP
#define REALSMOOTH_HOMOTOPY_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "realsmooth/compiled.hpp"
#include "realsmooth/config.hpp"
#include "realsmooth/linalg.hpp"
#include "realsmooth/poly_system.hpp"

namespace realsmooth {

enum class PathStatus { converged, diverged, path_failure };

struct PathResult {
  CVec endpoint;
  PathStatus status = PathStatus::path_failure;
  double final_t = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  double cond_estimate = std::numeric_limits<double>::infinity();
  int winding_hint = 1;
  int steps = 0;
};

// Square homotopy H(x,t) with known nonsingular roots at t=1. Two blends:
//  - Blend:    H(x,t) = gamma * t * start(x) + (1-t) * target(x)
//  - ParamArc: t appears inside the system itself (trailing parameter "t"),
//    as in the polar families f - t*xi.
class Homotopy {
 public:
  enum class Kind { Blend, ParamArc };

  static Homotopy blend(const PolySystem& start, const PolySystem& target, Complex gamma) {
    if (start.size() != target.size() || start.nvars() != target.nvars())
      throw std::invalid_argument("Homotopy::blend: shape mismatch");
    if (start.size() != start.nvars())
      throw std::invalid_argument("Homotopy::blend: system must be square");
    Homotopy h;
    h.kind_ = Kind::Blend;
    h.n_ = start.nvars();
    h.gamma_ = gamma;
    h.compile_plain(start, h.start_);
    h.compile_plain(target, h.target_);
    for (const auto& p : start.polys()) h.max_degree_ = std::max(h.max_degree_, p.degree());
    for (const auto& p : target.polys()) h.max_degree_ = std::max(h.max_degree_, p.degree());
    return h;
  }

  // Blend whose start equations are products of affine-linear factors; the
  // factored form is evaluated directly (values and gradients via
  // prefix/suffix products), which is far cheaper than the expanded
  // polynomials for high-degree linear-product starts.
  static Homotopy blend_factored(const std::vector<std::vector<Polynomial>>& start_factors,
                                 const PolySystem& target, Complex gamma) {
    Homotopy h;
    h.kind_ = Kind::Blend;
    h.n_ = target.nvars();
    h.gamma_ = gamma;
    if (start_factors.size() != target.size() || target.size() != target.nvars())
      throw std::invalid_argument("Homotopy::blend_factored: shape mismatch");
    h.compile_plain(target, h.target_);
    h.factored_.resize(start_factors.size());
    for (std::size_t i = 0; i < start_factors.size(); ++i) {
      std::int64_t deg = 0;
      for (const auto& f : start_factors[i]) {
        if (f.degree() > 1)
          throw std::invalid_argument("Homotopy::blend_factored: factors must be affine");
        AffineForm af;
        af.coeff = CVec::Zero(static_cast<int>(h.n_));
        for (const auto& [m, c] : f.terms()) {
          if (m.is_constant()) {
            af.c0 = c;
          } else {
            for (std::size_t v = 0; v < h.n_; ++v)
              if (m.exponents[v]) af.coeff(static_cast<int>(v)) = c;
          }
        }
        h.factored_[i].push_back(std::move(af));
        ++deg;
      }
      h.max_degree_ = std::max(h.max_degree_, deg);
    }
    for (const auto& p : target.polys()) h.max_degree_ = std::max(h.max_degree_, p.degree());
    h.use_factored_ = true;
    return h;
  }

  // family: PolySystem over the x variables with one parameter named "t".
  static Homotopy param_arc(const PolySystem& family) {
    if (family.nparams() != 1 || family.param_names()[0] != "t")
      throw std::invalid_argument("Homotopy::param_arc: expected single parameter t");
    if (family.size() != family.nvars())
      throw std::invalid_argument("Homotopy::param_arc: system must be square");
    Homotopy h;
    h.kind_ = Kind::ParamArc;
    h.n_ = family.nvars();
    h.family_ = family;
    h.compile_arc(family);
    for (const auto& p : family.polys()) h.max_degree_ = std::max(h.max_degree_, p.degree());
    return h;
  }

  Kind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  Complex gamma() const { return gamma_; }
  const PolySystem& family() const { return family_; }
  std::int64_t max_degree() const { return max_degree_; }

  // Evaluation-noise scale for residual checks: polynomial values at a point
  // of infinity-norm r carry roundoff proportional to r^deg.
  double residual_scale(const CVec& x) const {
    const double r = std::min(x.lpNorm<Eigen::Infinity>(), 1e2);
    return 1.0 + std::pow(std::max(1.0, r), static_cast<double>(max_degree_));
  }

  struct Workspace {
    std::vector<Complex> point;
    std::vector<Complex> vals_a;
    std::vector<Complex> vals_b;
    std::vector<Complex> start_P;        // factored start row values
    std::vector<Complex> factor_values;  // scratch for one row's factors
  };

  void eval(const CVec& x, double t, CVec& out, Workspace& ws) const {
    const int n = static_cast<int>(n_);
    out.resize(n);
    if (kind_ == Kind::Blend) {
      fill_point(x, ws);
      if (!use_factored_) start_.set.eval_table(ws.point.data(), ws.vals_a);
      else factored_products(x, ws);
      target_.set.eval_table(ws.point.data(), ws.vals_b);
      const Complex a = gamma_ * t;
      const Complex b = 1.0 - t;
      for (int i = 0; i < n; ++i)
        out(i) = a * start_value(i, ws) + b * target_.set.eval_poly(target_.sys[i], ws.vals_b);
    } else {
      fill_point_t(x, t, ws);
      arc_.set.eval_table(ws.point.data(), ws.vals_a);
      for (int i = 0; i < n; ++i) out(i) = arc_.set.eval_poly(arc_.sys[i], ws.vals_a);
    }
  }

  // Jacobian with respect to x; expects eval() has just populated the tables
  // for the same (x,t) when reuse_tables is true.
  void jac_x(const CVec& x, double t, CMat& out, Workspace& ws, bool reuse_tables = false) const {
    const int n = static_cast<int>(n_);
    out.resize(n, n);
    if (kind_ == Kind::Blend) {
      if (!reuse_tables) {
        fill_point(x, ws);
        if (!use_factored_) start_.set.eval_table(ws.point.data(), ws.vals_a);
        else factored_products(x, ws);
        target_.set.eval_table(ws.point.data(), ws.vals_b);
      }
      const Complex a = gamma_ * t;
      const Complex b = 1.0 - t;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out(i, j) = b * target_.set.eval_poly(target_.jac[i][j], ws.vals_b);
      if (!use_factored_) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            out(i, j) += a * start_.set.eval_poly(start_.jac[i][j], ws.vals_a);
      } else {
        CVec grad(n);
        for (int i = 0; i < n; ++i) {
          factored_gradient(x, i, grad, ws);
          for (int j = 0; j < n; ++j) out(i, j) += a * grad(j);
        }
      }
    } else {
      if (!reuse_tables) {
        fill_point_t(x, t, ws);
        arc_.set.eval_table(ws.point.data(), ws.vals_a);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out(i, j) = arc_.set.eval_poly(arc_.jac[i][j], ws.vals_a);
    }
  }

  void dt(const CVec& x, double t, CVec& out, Workspace& ws, bool reuse_tables = false) const {
    const int n = static_cast<int>(n_);
    out.resize(n);
    if (kind_ == Kind::Blend) {
      if (!reuse_tables) {
        fill_point(x, ws);
        if (!use_factored_) start_.set.eval_table(ws.point.data(), ws.vals_a);
        else factored_products(x, ws);
        target_.set.eval_table(ws.point.data(), ws.vals_b);
      }
      for (int i = 0; i < n; ++i)
        out(i) = gamma_ * start_value(i, ws) - target_.set.eval_poly(target_.sys[i], ws.vals_b);
    } else {
      if (!reuse_tables) {
        fill_point_t(x, t, ws);
        arc_.set.eval_table(ws.point.data(), ws.vals_a);
      }
      for (int i = 0; i < n; ++i) out(i) = arc_.set.eval_poly(arc_.dt[i], ws.vals_a);
    }
  }

 private:
  struct AffineForm {
    Complex c0{0, 0};
    CVec coeff;

    Complex value(const CVec& x) const { return c0 + coeff.cwiseProduct(x).sum(); }
  };

  Complex start_value(int i, const Workspace& ws) const {
    return use_factored_ ? ws.start_P[static_cast<std::size_t>(i)]
                         : start_.set.eval_poly(start_.sys[i], ws.vals_a);
  }

  void factored_products(const CVec& x, Workspace& ws) const {
    ws.start_P.resize(factored_.size());
    for (std::size_t i = 0; i < factored_.size(); ++i) {
      Complex P(1, 0);
      for (const auto& af : factored_[i]) P *= af.value(x);
      ws.start_P[i] = P;
    }
  }

  // Gradient of the factored row i via prefix/suffix products.
  void factored_gradient(const CVec& x, int i, CVec& grad, Workspace& ws) const {
    const auto& row = factored_[static_cast<std::size_t>(i)];
    const std::size_t m = row.size();
    ws.factor_values.resize(m);
    for (std::size_t k = 0; k < m; ++k) ws.factor_values[k] = row[k].value(x);
    grad.setZero(static_cast<int>(n_));
    Complex prefix(1, 0);
    for (std::size_t k = 0; k < m; ++k) {
      Complex suffix(1, 0);
      for (std::size_t l = k + 1; l < m; ++l) suffix *= ws.factor_values[l];
      const Complex outer = prefix * suffix;
      grad += outer * row[k].coeff;
      prefix *= ws.factor_values[k];
    }
  }

  struct PlainCompiled {
    CompiledSet set;
    std::vector<int> sys;
    std::vector<std::vector<int>> jac;
  };
  struct ArcCompiled {
    CompiledSet set;          // arity n+1, t last
    std::vector<int> sys;
    std::vector<std::vector<int>> jac;  // d/dx only
    std::vector<int> dt;
  };

  void compile_plain(const PolySystem& S, PlainCompiled& out) {
    out.set = CompiledSet(S.nvars());
    auto symjac = S.symbolic_jacobian();
    for (const auto& p : S.polys()) out.sys.push_back(out.set.add(p));
    out.jac.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
      for (std::size_t j = 0; j < S.nvars(); ++j)
        out.jac[i].push_back(out.set.add(symjac[i][j]));
  }

  void compile_arc(const PolySystem& S) {
    const std::size_t m = S.nvars() + 1;  // x..., t
    arc_.set = CompiledSet(m);
    for (const auto& p : S.polys()) arc_.sys.push_back(arc_.set.add(p));
    arc_.jac.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      for (std::size_t j = 0; j < S.nvars(); ++j)
        arc_.jac[i].push_back(arc_.set.add(S.polys()[i].diff(j)));
      arc_.dt.push_back(arc_.set.add(S.polys()[i].diff(m - 1)));
    }
  }

  void fill_point(const CVec& x, Workspace& ws) const {
    ws.point.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) ws.point[i] = x(static_cast<int>(i));
  }

  void fill_point_t(const CVec& x, double t, Workspace& ws) const {
    ws.point.resize(n_ + 1);
    for (std::size_t i = 0; i < n_; ++i) ws.point[i] = x(static_cast<int>(i));
    ws.point[n_] = Complex(t, 0.0);
  }

  Kind kind_ = Kind::Blend;
  std::size_t n_ = 0;
  std::int64_t max_degree_ = 1;
  bool use_factored_ = false;
  std::vector<std::vector<AffineForm>> factored_;
  Complex gamma_{1.0, 0.0};
  PolySystem family_;
  PlainCompiled start_;
  PlainCompiled target_;
  ArcCompiled arc_;
};

// Predictor-corrector path tracking over [t_from, t_to] with t decreasing.
// Euler prediction along the tangent, Newton correction at fixed t, adaptive
// step length: halve on corrector failure, double after `grow_after`
// consecutive successes. A start point that does not satisfy H(x,t_from)=0 is
// rejected without tracking.
inline PathResult track_segment(const Homotopy& H, const CVec& x0, double t_from,
                                double t_to, const Tolerances& tol,
                                Homotopy::Workspace& ws) {
  PathResult res;
  res.endpoint = x0;
  const int n = static_cast<int>(H.n());
  CVec Hx(n), rhs(n), xpred(n), x = x0;
  CMat J(n, n);

  const double t_end = t_to;
  H.eval(x, t_from, Hx, ws);
  if (Hx.norm() > 1e-8 * H.residual_scale(x)) {
    res.status = PathStatus::path_failure;  // invalid start point
    res.final_t = t_from;
    res.residual = Hx.norm();
    return res;
  }

  double t = t_from;
  // The step fraction is kept relative to the current t: the same halving and
  // doubling schedule then traverses the t -> 0 tail geometrically instead of
  // grinding it down in absolute increments.
  double step_frac = std::min(tol.first_step / std::max(t_from, 1e-30), 0.5);
  int successes = 0;
  Eigen::PartialPivLU<CMat> lu;
  CVec k1;
  bool have_k1 = false;  // tangent cache survives step halvings

  while (t > t_end) {
    if (res.steps++ > tol.max_track_steps) {
      res.status = PathStatus::path_failure;
      res.final_t = t;
      res.endpoint = x;
      return res;
    }
    const double eff_step = std::min(step_frac * t, tol.max_step);
    const double gap = t - t_end;
    // Land when the natural step covers the gap; a target of exactly zero is
    // otherwise only approached geometrically, so the last sliver is jumped.
    const double next_t = (gap <= eff_step || t <= 1e-10) ? t_end : t - eff_step;
    const double h = next_t - t;

    // Midpoint (RK2) prediction along the Davidenko field J dx/dt = -dH/dt.
    if (!have_k1) {
      H.eval(x, t, Hx, ws);
      H.jac_x(x, t, J, ws, /*reuse_tables=*/true);
      H.dt(x, t, rhs, ws, /*reuse_tables=*/true);
      lu.compute(J);
      k1 = lu.solve(-rhs);
      have_k1 = true;
    }
    CVec xmid = x + k1 * (0.5 * h);
    const double tmid = t + 0.5 * h;
    H.jac_x(xmid, tmid, J, ws, /*reuse_tables=*/false);
    H.dt(xmid, tmid, rhs, ws, /*reuse_tables=*/true);
    lu.compute(J);
    CVec k2 = lu.solve(-rhs);
    xpred = x + k2 * h;
    if (!xpred.allFinite()) xpred = x + k1 * h;

    // Newton correction at fixed next_t.
    bool ok = false;
    CVec xc = xpred;
    for (int iter = 0; iter < tol.max_corrector_iters; ++iter) {
      H.eval(xc, next_t, Hx, ws);
      H.jac_x(xc, next_t, J, ws, /*reuse_tables=*/true);
      lu.compute(J);
      CVec dx = lu.solve(-Hx);
      xc += dx;
      if (!xc.allFinite()) break;
      if (dx.norm() <= tol.track_tol() * (1.0 + xc.norm())) { ok = true; break; }
    }

    if (ok) {
      x = xc;
      t = next_t;
      have_k1 = false;
      if (x.norm() > tol.divergence) {
        res.status = PathStatus::diverged;
        res.final_t = t;
        res.endpoint = x;
        return res;
      }
      if (++successes >= tol.grow_after) {
        step_frac = std::min(step_frac * 2.0, 0.5);
        successes = 0;
      }
    } else {
      step_frac *= 0.5;
      successes = 0;
      if (step_frac * t < tol.min_step) {
        res.status = PathStatus::path_failure;
        res.final_t = t;
        res.endpoint = x;
        H.eval(x, t, Hx, ws);
        res.residual = Hx.norm();
        return res;
      }
    }
  }

  H.eval(x, t_end, Hx, ws);
  H.jac_x(x, t_end, J, ws, /*reuse_tables=*/true);
  res.status = PathStatus::converged;
  res.final_t = t_end;
  res.endpoint = x;
  res.residual = Hx.norm();
  res.cond_estimate = condition_estimate(J);
  return res;
}

inline PathResult track(const Homotopy& H, const CVec& x0, double t_end,
                        const Tolerances& tol, Homotopy::Workspace& ws) {
  return track_segment(H, x0, 1.0, t_end, tol, ws);
}

}  // namespace realsmooth

#endif
