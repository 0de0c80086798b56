#ifndef REALSMOOTH_KURAMOTO_HPP
#define REALSMOOTH_KURAMOTO_HPP

#include <string>
#include <vector>

#include "realsmooth/rng.hpp"
#include "realsmooth/solve.hpp"

namespace realsmooth {

// Steady-state polynomial system of the Kuramoto model after the
// sine/cosine substitution: coupling equations
//   omega_i - (1/n) * sum_j (s_i c_j - s_j c_i)   for i = 1..n-1
// plus the Pythagorean identities s_i^2 + c_i^2 - 1, with the gauge choice
// s_n = 0, c_n = 1 and omega_n = -(omega_1 + ... + omega_{n-1}) implied.
// Supported sizes: n = 3 and n = 4 (all equations quadratic).
inline PolySystem kuramoto_system(int n, const std::vector<double>& omega) {
  if (n != 3 && n != 4)
    throw std::invalid_argument("kuramoto_system: only n = 3 and n = 4 are supported");
  const std::size_t k = static_cast<std::size_t>(n - 1);  // free oscillators
  if (omega.size() != k)
    throw std::invalid_argument("kuramoto_system: omega needs n-1 entries");

  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) names.push_back("s" + std::to_string(i));
  for (std::size_t i = 1; i <= k; ++i) names.push_back("c" + std::to_string(i));
  const std::size_t nv = 2 * k;

  auto s_var = [&](std::size_t i) { return Polynomial::variable(i, nv); };
  auto c_var = [&](std::size_t i) { return Polynomial::variable(k + i, nv); };

  PolySystem sys(names);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < k; ++i) {
    Polynomial coupling(nv);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      coupling += s_var(i) * c_var(j) - s_var(j) * c_var(i);
    }
    coupling += s_var(i);  // the j = n term with s_n = 0, c_n = 1
    Polynomial eq = Polynomial::constant(Complex(omega[i], 0.0), nv) - coupling * Complex(inv_n, 0.0);
    sys.push_back(eq);
  }
  for (std::size_t i = 0; i < k; ++i)
    sys.push_back(s_var(i) * s_var(i) + c_var(i) * c_var(i) -
                  Polynomial::constant(Complex(1, 0), nv));
  return sys;
}

// Count of nonsingular real equilibria for one frequency vector: total-degree
// solve, then the certificate |Im| <= real_tol, residual <= 1e-12, Jacobian
// full rank on each deduplicated endpoint.
inline int count_real_equilibria(int n, const std::vector<double>& omega, std::uint64_t seed,
                                 const Tolerances& tol) {
  PolySystem sys = kuramoto_system(n, omega);
  SolveResult sol = solve_square(sys, seed, tol);
  int count = 0;
  for (const auto& r : sol.roots) {
    CVec x = r.x;
    RefineResult rr = newton_refine(sys, x, 40, tol);
    if (rr.residual <= 1e-12 * (1.0 + rr.x.norm())) x = rr.x;
    if (max_im(x) > 1e-3) continue;
    RefineResult rreal = newton_refine(sys, real_part(x), 40, tol);
    if (rreal.residual <= 1e-12 * (1.0 + rreal.x.norm()) && max_im(rreal.x) <= tol.real_tol)
      x = rreal.x;
    if (max_im(x) > tol.real_tol) continue;
    if (rr.residual > 1e-12 * (1.0 + x.norm()) &&
        sys.eval(x).norm() > 1e-12 * (1.0 + x.norm()))
      continue;
    const int full = static_cast<int>(sys.nvars());
    if (numerical_rank(sys.jacobian(x), tol.rank_tol) != full) continue;
    ++count;
  }
  return count;
}

// Frequency samples uniform in the box |omega_i| <= 0.75 for i = 1..n-1 with
// the implied omega_n also inside the box (rejection sampling).
inline std::vector<std::vector<double>> sample_omegas(int n, int samples, std::uint64_t seed) {
  Rng rng(seed, "omega");
  std::vector<std::vector<double>> out;
  const std::size_t k = static_cast<std::size_t>(n - 1);
  while (out.size() < static_cast<std::size_t>(samples)) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& v : w) { v = rng.uniform(-0.75, 0.75); sum += v; }
    if (std::abs(sum) > 0.75) continue;  // omega_n = -sum must stay in the box
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace realsmooth

#endif
