#ifndef REALSMOOTH_COMPILED_HPP
#define REALSMOOTH_COMPILED_HPP

#include <map>
#include <vector>

#include "realsmooth/polynomial.hpp"

namespace realsmooth {

// Shared straight-line evaluator for a family of polynomials over one variable
// set. All distinct monomials are closed under "divide by one variable" and
// evaluated once per point with a single multiplication each; every compiled
// polynomial is then a sparse dot product against that table. This is the hot
// path of the tracker, so construction cost is paid once per system.
class CompiledSet {
 public:
  struct CompiledPoly {
    std::vector<std::pair<int, Complex>> terms;  // (slot, coefficient)

    Complex eval(const std::vector<Complex>& vals) const {
      Complex acc(0.0, 0.0);
      for (const auto& [slot, c] : terms) acc += c * vals[slot];
      return acc;
    }
  };

  CompiledSet() = default;

  explicit CompiledSet(std::size_t arity) : arity_(arity) {
    Monomial one(arity_);
    slot_of_.emplace(one, 0);
    parent_.push_back(-1);
    var_.push_back(-1);
  }

  std::size_t arity() const { return arity_; }
  std::size_t table_size() const { return parent_.size(); }
  std::size_t size() const { return polys_.size(); }

  int add(const Polynomial& p) {
    if (p.nvars() != arity_)
      throw std::invalid_argument("CompiledSet: arity mismatch");
    CompiledPoly cp;
    cp.terms.reserve(p.terms().size());
    for (const auto& [m, c] : p.terms()) cp.terms.emplace_back(intern(m), c);
    polys_.push_back(std::move(cp));
    return static_cast<int>(polys_.size()) - 1;
  }

  // Fills vals with the value of every interned monomial at x (|x| = arity).
  void eval_table(const Complex* x, std::vector<Complex>& vals) const {
    vals.resize(parent_.size());
    vals[0] = Complex(1.0, 0.0);
    for (std::size_t k = 1; k < parent_.size(); ++k)
      vals[k] = vals[static_cast<std::size_t>(parent_[k])] * x[var_[k]];
  }

  Complex eval_poly(int idx, const std::vector<Complex>& vals) const {
    return polys_[static_cast<std::size_t>(idx)].eval(vals);
  }

 private:
  int intern(const Monomial& m) {
    auto it = slot_of_.find(m);
    if (it != slot_of_.end()) return it->second;
    // Parent: decrement the first nonzero exponent. Interning the parent first
    // keeps slot indices topologically ordered (parents come earlier because
    // recursion bottoms out at the constant slot before this entry is added).
    std::size_t v = 0;
    while (m.exponents[v] == 0) ++v;
    Monomial par = m;
    --par.exponents[v];
    int pslot = intern(par);
    int slot = static_cast<int>(parent_.size());
    parent_.push_back(pslot);
    var_.push_back(static_cast<int>(v));
    slot_of_.emplace(m, slot);
    return slot;
  }

  std::size_t arity_ = 0;
  std::map<Monomial, int, GradedLexLess> slot_of_;
  std::vector<int> parent_;
  std::vector<int> var_;
  std::vector<CompiledPoly> polys_;
};

}  // namespace realsmooth

#endif
