#ifndef REALSMOOTH_POLY_SYSTEM_HPP
#define REALSMOOTH_POLY_SYSTEM_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "realsmooth/polynomial.hpp"

namespace realsmooth {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Ordered list of polynomials over a shared variable registry, with optional
// named parameter slots (t, e, ...). Parameters occupy the trailing arity
// positions of every member polynomial; evaluation binds them to their stored
// values unless a caller supplies overrides. Immutable after construction by
// convention: workers share const references.
class PolySystem {
 public:
  PolySystem() = default;

  explicit PolySystem(std::vector<std::string> var_names,
                      std::vector<std::string> param_names = {},
                      std::vector<Complex> param_values = {})
      : vars_(std::move(var_names)), params_(std::move(param_names)),
        param_values_(std::move(param_values)) {
    if (param_values_.empty()) param_values_.assign(params_.size(), Complex(0, 0));
    if (param_values_.size() != params_.size())
      throw std::invalid_argument("PolySystem: parameter value count mismatch");
  }

  std::size_t nvars() const { return vars_.size(); }
  std::size_t nparams() const { return params_.size(); }
  std::size_t arity() const { return vars_.size() + params_.size(); }
  std::size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }

  const std::vector<std::string>& var_names() const { return vars_; }
  const std::vector<std::string>& param_names() const { return params_; }
  const std::vector<Complex>& param_values() const { return param_values_; }
  const std::vector<Polynomial>& polys() const { return polys_; }
  const Polynomial& operator[](std::size_t i) const { return polys_[i]; }

  void push_back(Polynomial p) {
    if (p.nvars() != arity())
      throw std::invalid_argument("PolySystem: polynomial arity mismatch");
    polys_.push_back(std::move(p));
  }

  void set_param_value(const std::string& name, Complex v) {
    param_values_[param_index(name)] = v;
  }

  std::size_t param_index(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i] == name) return i;
    throw std::invalid_argument("PolySystem: unknown parameter " + name);
  }

  // Evaluation at a point of matching dimension returns a vector of length |polys|.
  CVec eval(const CVec& point) const {
    return eval_with_params(point, param_values_);
  }

  CVec eval_with_params(const CVec& point, const std::vector<Complex>& pvals) const {
    if (static_cast<std::size_t>(point.size()) != nvars())
      throw std::invalid_argument("PolySystem::eval: point dimension mismatch");
    std::vector<Complex> full(arity());
    for (std::size_t i = 0; i < nvars(); ++i) full[i] = point(static_cast<int>(i));
    for (std::size_t i = 0; i < nparams(); ++i) full[nvars() + i] = pvals[i];
    CVec out(static_cast<int>(polys_.size()));
    for (std::size_t i = 0; i < polys_.size(); ++i)
      out(static_cast<int>(i)) = polys_[i].eval(full);
    return out;
  }

  // Largest row of the absolute-value evaluation sum |c| * prod |x_v|^e; the
  // natural backward-error scale for residuals at this point.
  double eval_abs_scale(const CVec& point) const {
    if (static_cast<std::size_t>(point.size()) != nvars())
      throw std::invalid_argument("PolySystem::eval_abs_scale: dimension mismatch");
    std::vector<Complex> full(arity());
    for (std::size_t i = 0; i < nvars(); ++i)
      full[i] = Complex(std::abs(point(static_cast<int>(i))), 0.0);
    for (std::size_t i = 0; i < nparams(); ++i)
      full[nvars() + i] = Complex(std::abs(param_values_[i]), 0.0);
    double worst = 0.0;
    for (const auto& poly : polys_) {
      double acc = 0.0;
      std::vector<std::vector<double>> powers(arity());
      for (std::size_t v = 0; v < arity(); ++v) {
        auto maxdeg = poly.degree_in(v);
        powers[v].resize(static_cast<std::size_t>(maxdeg) + 1);
        powers[v][0] = 1.0;
        for (std::int64_t k = 1; k <= maxdeg; ++k)
          powers[v][static_cast<std::size_t>(k)] =
              powers[v][static_cast<std::size_t>(k - 1)] * full[v].real();
      }
      for (const auto& [m, c] : poly.terms()) {
        double t = std::abs(c);
        for (std::size_t v = 0; v < arity(); ++v)
          if (m.exponents[v]) t *= powers[v][m.exponents[v]];
        acc += t;
      }
      worst = std::max(worst, acc);
    }
    return worst;
  }

  // Numeric Jacobian with respect to the unknowns only; entry (i,j) is the
  // value of d(poly_i)/d(var_j) at the point.
  CMat jacobian(const CVec& point) const {
    if (static_cast<std::size_t>(point.size()) != nvars())
      throw std::invalid_argument("PolySystem::jacobian: point dimension mismatch");
    ensure_symbolic_jacobian();
    std::vector<Complex> full(arity());
    for (std::size_t i = 0; i < nvars(); ++i) full[i] = point(static_cast<int>(i));
    for (std::size_t i = 0; i < nparams(); ++i) full[nvars() + i] = param_values_[i];
    CMat J(static_cast<int>(polys_.size()), static_cast<int>(nvars()));
    for (std::size_t i = 0; i < polys_.size(); ++i)
      for (std::size_t j = 0; j < nvars(); ++j)
        J(static_cast<int>(i), static_cast<int>(j)) = jac_cache_[i][j].eval(full);
    return J;
  }

  // Matrix of formal partial derivatives with respect to the unknowns.
  std::vector<std::vector<Polynomial>> symbolic_jacobian() const {
    ensure_symbolic_jacobian();
    return jac_cache_;
  }

  // Substitute a parameter by a constant and remove its slot.
  PolySystem specialize_param(const std::string& name, Complex value) const {
    const std::size_t pi = param_index(name);
    const std::size_t col = nvars() + pi;
    std::vector<std::string> new_params;
    std::vector<Complex> new_values;
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (i != pi) { new_params.push_back(params_[i]); new_values.push_back(param_values_[i]); }
    PolySystem out(vars_, new_params, new_values);
    for (const auto& p : polys_) out.push_back(p.bind(col, value).drop_var(col));
    return out;
  }

  // Promote every parameter to an ordinary trailing variable.
  PolySystem params_as_vars() const {
    std::vector<std::string> all = vars_;
    all.insert(all.end(), params_.begin(), params_.end());
    PolySystem out(all);
    for (const auto& p : polys_) out.push_back(p);
    return out;
  }

  std::vector<std::int64_t> degrees() const {
    std::vector<std::int64_t> d;
    d.reserve(polys_.size());
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
  }

 private:
  void ensure_symbolic_jacobian() const {
    if (!jac_cache_.empty() && jac_cache_.size() == polys_.size()) return;
    jac_cache_.clear();
    jac_cache_.reserve(polys_.size());
    for (const auto& p : polys_) {
      std::vector<Polynomial> row;
      row.reserve(nvars());
      for (std::size_t j = 0; j < nvars(); ++j) row.push_back(p.diff(j));
      jac_cache_.push_back(std::move(row));
    }
  }

  std::vector<std::string> vars_;
  std::vector<std::string> params_;
  std::vector<Complex> param_values_;
  std::vector<Polynomial> polys_;
  mutable std::vector<std::vector<Polynomial>> jac_cache_;
};

// The system x -> F(Ax) over the same registry.
inline PolySystem compose_linear(const PolySystem& F, const RMat& A) {
  const std::size_t n = F.nvars();
  if (F.nparams() != 0)
    throw std::invalid_argument("compose_linear: system must be parameter-free");
  if (static_cast<std::size_t>(A.rows()) != n || static_cast<std::size_t>(A.cols()) != n)
    throw std::invalid_argument("compose_linear: A must be n x n");
  std::vector<Polynomial> subs;
  subs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (A(static_cast<int>(i), static_cast<int>(j)) == 0.0) continue;
      row += Polynomial::variable(j, n) * Complex(A(static_cast<int>(i), static_cast<int>(j)), 0.0);
    }
    subs.push_back(std::move(row));
  }
  PolySystem out(F.var_names());
  for (const auto& f : F.polys()) out.push_back(f.substitute(subs));
  return out;
}

// f(x) := sum_i f_i(Ax)^2 for an invertible real matrix A. The real zero set
// of the result is A^{-1} applied to the real zero set of F.
inline Polynomial sum_of_squares_pullback(const PolySystem& F, const RMat& A) {
  // Invertibility check on the row-scaled matrix.
  RMat S = A;
  for (int r = 0; r < S.rows(); ++r) {
    double norm = S.row(r).norm();
    if (norm > 0) S.row(r) /= norm;
  }
  if (std::abs(S.determinant()) <= 1e-10)
    throw std::invalid_argument("sum_of_squares_pullback: A is numerically singular");

  PolySystem rotated = compose_linear(F, A);
  Polynomial acc(F.nvars());
  for (const auto& comp : rotated.polys()) acc += comp * comp;
  return acc;
}

}  // namespace realsmooth

#endif
