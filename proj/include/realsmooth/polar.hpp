#ifndef REALSMOOTH_POLAR_HPP
#define REALSMOOTH_POLAR_HPP

#include <string>
#include <vector>

#include "realsmooth/poly_system.hpp"

namespace realsmooth {

// Polar-variety system crit(V(f), pi_i): the defining polynomial together
// with the partials with respect to the trailing variables x_{i+1},...,x_n.
// With with_t set, f is replaced by the arc f - t*xi (parameter t), which is
// the family whose t->0 limit the algorithm consumes. For i = n the system
// is {f - t*xi} alone.
inline PolySystem polar_system(const Polynomial& f, const std::vector<std::string>& vars,
                               std::size_t i, bool with_t, Complex xi = Complex(1, 0)) {
  const std::size_t n = vars.size();
  if (f.nvars() != n) throw std::invalid_argument("polar_system: arity mismatch");
  if (i < 1 || i > n) throw std::invalid_argument("polar_system: need 1 <= i <= n");

  PolySystem out = with_t ? PolySystem(vars, {"t"}) : PolySystem(vars);
  const std::size_t arity = out.arity();

  Polynomial head = with_t ? f.insert_vars(n, 1) : f;
  if (with_t) {
    Polynomial t_term(arity);
    Monomial m(arity);
    m.exponents[n] = 1;
    t_term.add_term(m, -xi);
    head += t_term;
  }
  out.push_back(head);
  for (std::size_t k = i; k < n; ++k) {
    Polynomial d = f.diff(k);
    out.push_back(with_t ? d.insert_vars(n, 1) : d);
  }
  return out;
}

}  // namespace realsmooth

#endif
