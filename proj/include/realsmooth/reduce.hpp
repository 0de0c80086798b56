#ifndef REALSMOOTH_REDUCE_HPP
#define REALSMOOTH_REDUCE_HPP

#include <string>
#include <vector>

#include "realsmooth/poly_system.hpp"

namespace realsmooth {

// Atomic semi-algebraic input: equations f_i = 0 and strict inequalities
// q_j > 0 over one registry of x variables.
struct SemiAlgebraicInput {
  std::vector<std::string> vars;
  std::vector<Polynomial> equations;
  std::vector<Polynomial> inequalities;
};

// Fresh-variable names carry a reserved prefix so projections are purely
// positional ("drop the trailing coordinates").
inline constexpr const char* kSlackPrefix = "_z";
inline constexpr const char* kBoundVarName = "_bnd";

// Lift each strict inequality q_j > 0 into the equation z_j^2 q_j - 1 = 0
// with a fresh variable z_j. The projection of the real zero set to the x
// coordinates is exactly the input set; smooth points project to smooth
// points.
inline PolySystem lift_inequalities(const SemiAlgebraicInput& in) {
  const std::size_t n = in.vars.size();
  const std::size_t m = in.inequalities.size();
  std::vector<std::string> names = in.vars;
  for (std::size_t j = 0; j < m; ++j)
    names.push_back(kSlackPrefix + std::to_string(j + 1));

  PolySystem out(names);
  for (const auto& f : in.equations)
    out.push_back(f.insert_vars(n, m));
  for (std::size_t j = 0; j < m; ++j) {
    Polynomial q = in.inequalities[j].insert_vars(n, m);
    Polynomial zj = Polynomial::variable(n + j, n + m);
    out.push_back(zj * zj * q - Polynomial::constant(Complex(1, 0), n + m));
  }
  return out;
}

// Append the bounding equation (x_1-q_1)^2 + ... + (x_{n-1}-q_{n-1})^2 +
// x_n^2 - delta with one fresh variable x_n. The real zero set of the output
// is contained in a sphere of radius sqrt(delta) about (q, 0), and dropping
// the last coordinate recovers the input set intersected with the closed
// ball of radius sqrt(delta) about q.
inline PolySystem embed_bounded(const PolySystem& F, const RVec& q, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("embed_bounded: delta must be positive");
  const std::size_t n_old = F.nvars();
  if (static_cast<std::size_t>(q.size()) != n_old)
    throw std::invalid_argument("embed_bounded: q must match the variable count");
  if (F.nparams() != 0)
    throw std::invalid_argument("embed_bounded: system must be parameter-free");

  std::vector<std::string> names = F.var_names();
  names.push_back(kBoundVarName);
  const std::size_t n = n_old + 1;

  PolySystem out(names);
  for (const auto& f : F.polys()) out.push_back(f.insert_vars(n_old, 1));
  Polynomial sphere(n);
  for (std::size_t i = 0; i < n_old; ++i) {
    Polynomial d = Polynomial::variable(i, n) -
                   Polynomial::constant(Complex(q(static_cast<int>(i)), 0.0), n);
    sphere += d * d;
  }
  Polynomial b = Polynomial::variable(n_old, n);
  sphere += b * b;
  sphere -= Polynomial::constant(Complex(delta, 0.0), n);
  out.push_back(sphere);
  return out;
}

}  // namespace realsmooth

#endif
