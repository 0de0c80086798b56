#ifndef REALSMOOTH_START_SYSTEM_HPP
#define REALSMOOTH_START_SYSTEM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "realsmooth/rng.hpp"

namespace realsmooth {

struct StartSystem {
  PolySystem system;
  std::vector<CVec> roots;
  // Affine factorization of each start equation when available (linear
  // product systems); the tracker evaluates these directly instead of the
  // expanded polynomials.
  std::vector<std::vector<Polynomial>> row_factors;
};

// Total-degree start system {x_i^{d_i} - 1}. Roots are all tuples of d_i-th
// roots of unity; their count is the Bezout number of the target.
inline StartSystem total_degree_start(const PolySystem& target) {
  const std::size_t n = target.nvars();
  if (target.size() != n)
    throw std::invalid_argument("total_degree_start: system must be square");
  if (target.nparams() != 0)
    throw std::invalid_argument("total_degree_start: specialize parameters first");
  std::vector<std::int64_t> degs;
  for (const auto& p : target.polys()) {
    const auto d = p.degree();
    if (d < 1)
      throw std::invalid_argument("total_degree_start: zero or constant polynomial in target");
    degs.push_back(d);
  }

  StartSystem out;
  out.system = PolySystem(target.var_names());
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial p(target.arity());
    Monomial m(target.arity());
    m.exponents[i] = static_cast<std::uint32_t>(degs[i]);
    p.add_term(m, Complex(1, 0));
    p.add_term(Monomial(target.arity()), Complex(-1, 0));
    out.system.push_back(p);
  }

  std::size_t count = 1;
  for (auto d : degs) count *= static_cast<std::size_t>(d);
  out.roots.reserve(count);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    CVec root(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double theta =
          2.0 * std::numbers::pi * static_cast<double>(idx[i]) / static_cast<double>(degs[i]);
      root(static_cast<int>(i)) = Complex(std::cos(theta), std::sin(theta));
    }
    out.roots.push_back(std::move(root));
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < static_cast<std::size_t>(degs[i])) break;
      idx[i] = 0;
    }
  }
  return out;
}

// Two-group linear-product start system for systems that are linear in a
// trailing block of variables (Lagrange multipliers). Equation i of bidegree
// (d_i, 1) becomes a product of d_i generic affine forms in the main block
// times one generic affine form in the multiplier block; equations of
// bidegree (e_j, 0) become products of e_j main-block forms. Start roots are
// enumerated by factor selection and solved from two triangular linear
// blocks. The root count is the two-homogeneous Bezout number, which for
// Lagrange systems is far below the total-degree count.
inline StartSystem multiplier_linear_start(const PolySystem& target,
                                           std::size_t n_main, Rng& rng) {
  const std::size_t n = target.nvars();
  if (target.size() != n)
    throw std::invalid_argument("multiplier_linear_start: system must be square");
  if (target.nparams() != 0)
    throw std::invalid_argument("multiplier_linear_start: specialize parameters first");
  if (n_main == 0 || n_main > n)
    throw std::invalid_argument("multiplier_linear_start: bad main block size");
  const std::size_t n_mult = n - n_main;
  const std::size_t arity = target.arity();

  // Classify equations by multiplier-degree (must be 0 or 1) and record the
  // main-block degree of each.
  std::vector<int> mult_deg(target.size(), 0);
  std::vector<std::int64_t> main_deg(target.size(), 0);
  for (std::size_t i = 0; i < target.size(); ++i) {
    for (const auto& [m, c] : target[i].terms()) {
      std::int64_t dm = 0, dl = 0;
      for (std::size_t v = 0; v < n_main; ++v) dm += m.exponents[v];
      for (std::size_t v = n_main; v < n; ++v) dl += m.exponents[v];
      if (dl > 1)
        throw std::invalid_argument("multiplier_linear_start: equation not linear in multipliers");
      mult_deg[i] = std::max<int>(mult_deg[i], static_cast<int>(dl));
      main_deg[i] = std::max(main_deg[i], dm);
    }
    if (main_deg[i] + mult_deg[i] < 1)
      throw std::invalid_argument("multiplier_linear_start: constant equation");
    if (main_deg[i] == 0) main_deg[i] = 0;
  }

  auto affine_main = [&]() {
    Polynomial p = Polynomial::constant(rng.unit_complex(), arity);
    for (std::size_t v = 0; v < n_main; ++v)
      p += Polynomial::variable(v, arity) * rng.unit_complex();
    return p;
  };
  auto affine_mult = [&]() {
    Polynomial p = Polynomial::constant(rng.unit_complex(), arity);
    for (std::size_t v = n_main; v < n; ++v)
      p += Polynomial::variable(v, arity) * rng.unit_complex();
    return p;
  };

  // Factor tables per equation.
  std::vector<std::vector<Polynomial>> main_factors(target.size());
  std::vector<Polynomial> mult_factor(target.size(), Polynomial(arity));
  StartSystem out;
  out.system = PolySystem(target.var_names());
  out.row_factors.resize(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    Polynomial prod = Polynomial::constant(Complex(1, 0), arity);
    for (std::int64_t k = 0; k < main_deg[i]; ++k) {
      main_factors[i].push_back(affine_main());
      prod *= main_factors[i].back();
      out.row_factors[i].push_back(main_factors[i].back());
    }
    if (mult_deg[i] == 1) {
      mult_factor[i] = affine_mult();
      prod *= mult_factor[i];
      out.row_factors[i].push_back(mult_factor[i]);
    }
    out.system.push_back(prod);
  }

  // Enumerate factor selections: exactly n_mult equations contribute their
  // multiplier factor, the rest contribute one main factor each, and the
  // total of selected main factors must be n_main.
  std::vector<std::size_t> mult_eligible;
  for (std::size_t i = 0; i < target.size(); ++i)
    if (mult_deg[i] == 1) mult_eligible.push_back(i);

  std::vector<std::size_t> combo;
  std::vector<bool> uses_mult(target.size(), false);

  std::function<void()> emit_roots = [&]() {
    // Selected structure fixed; iterate over main-factor choices.
    std::vector<std::size_t> main_eqs;
    for (std::size_t i = 0; i < target.size(); ++i)
      if (!uses_mult[i]) {
        if (main_factors[i].empty()) return;  // equation cannot contribute a main factor
        main_eqs.push_back(i);
      }
    if (main_eqs.size() != n_main) return;

    std::vector<std::size_t> pick(main_eqs.size(), 0);
    for (;;) {
      // Solve the main block.
      CMat Am(static_cast<int>(n_main), static_cast<int>(n_main));
      CVec bm(static_cast<int>(n_main));
      for (std::size_t r = 0; r < main_eqs.size(); ++r) {
        const Polynomial& L = main_factors[main_eqs[r]][pick[r]];
        for (std::size_t v = 0; v < n_main; ++v) {
          Monomial m(arity);
          m.exponents[v] = 1;
          auto it = L.terms().find(m);
          Am(static_cast<int>(r), static_cast<int>(v)) =
              it == L.terms().end() ? Complex(0, 0) : it->second;
        }
        auto itc = L.terms().find(Monomial(arity));
        bm(static_cast<int>(r)) = itc == L.terms().end() ? Complex(0, 0) : -itc->second;
      }
      CVec xm = Am.partialPivLu().solve(bm);

      // Solve the multiplier block (affine forms in multipliers only).
      CVec root(static_cast<int>(n));
      for (std::size_t v = 0; v < n_main; ++v) root(static_cast<int>(v)) = xm(static_cast<int>(v));
      if (n_mult > 0) {
        CMat Al(static_cast<int>(n_mult), static_cast<int>(n_mult));
        CVec bl(static_cast<int>(n_mult));
        std::size_t r = 0;
        for (std::size_t i = 0; i < target.size(); ++i) {
          if (!uses_mult[i]) continue;
          const Polynomial& L = mult_factor[i];
          for (std::size_t v = 0; v < n_mult; ++v) {
            Monomial m(arity);
            m.exponents[n_main + v] = 1;
            auto it = L.terms().find(m);
            Al(static_cast<int>(r), static_cast<int>(v)) =
                it == L.terms().end() ? Complex(0, 0) : it->second;
          }
          auto itc = L.terms().find(Monomial(arity));
          bl(static_cast<int>(r)) = itc == L.terms().end() ? Complex(0, 0) : -itc->second;
          ++r;
        }
        CVec xl = Al.partialPivLu().solve(bl);
        for (std::size_t v = 0; v < n_mult; ++v)
          root(static_cast<int>(n_main + v)) = xl(static_cast<int>(v));
      }
      out.roots.push_back(std::move(root));

      // Advance the mixed-radix main-factor picker.
      std::size_t d = 0;
      for (; d < pick.size(); ++d) {
        if (++pick[d] < main_factors[main_eqs[d]].size()) break;
        pick[d] = 0;
      }
      if (d == pick.size()) break;
    }
  };

  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t from, std::size_t need) {
    if (need == 0) {
      emit_roots();
      return;
    }
    if (from >= mult_eligible.size() || mult_eligible.size() - from < need) return;
    uses_mult[mult_eligible[from]] = true;
    choose(from + 1, need - 1);
    uses_mult[mult_eligible[from]] = false;
    choose(from + 1, need);
  };
  choose(0, n_mult);
  return out;
}

}  // namespace realsmooth

#endif
