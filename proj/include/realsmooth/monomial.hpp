#ifndef REALSMOOTH_MONOMIAL_HPP
#define REALSMOOTH_MONOMIAL_HPP

#include <cstdint>
#include <numeric>
#include <vector>

namespace realsmooth {

// Exponent vector of a single term; one entry per registered variable.
struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exponents(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}

  std::size_t nvars() const { return exponents.size(); }

  std::int64_t degree() const {
    std::int64_t d = 0;
    for (auto e : exponents) d += e;
    return d;
  }

  bool is_constant() const {
    for (auto e : exponents) if (e) return false;
    return true;
  }

  Monomial operator*(const Monomial& other) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exponents.size(); ++i)
      r.exponents[i] += other.exponents[i];
    return r;
  }

  bool operator==(const Monomial& other) const { return exponents == other.exponents; }
  bool operator!=(const Monomial& other) const { return !(*this == other); }
};

// Graded lexicographic order: total degree first, then lex on exponents.
// Gives a canonical, reproducible term iteration order.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const auto da = a.degree();
    const auto db = b.degree();
    if (da != db) return da < db;
    return a.exponents < b.exponents;
  }
};

}  // namespace realsmooth

#endif
