#ifndef REALSMOOTH_POLYNOMIAL_HPP
#define REALSMOOTH_POLYNOMIAL_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "realsmooth/config.hpp"
#include "realsmooth/monomial.hpp"

namespace realsmooth {

// Sparse multivariate polynomial over complex double coefficients with exact
// integer exponents. Terms with exactly zero coefficient are never stored;
// products drop coefficients below 1e-300 to avoid subnormal buildup.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Complex, GradedLexLess>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(Complex c, std::size_t nvars) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
  }

  static Polynomial variable(std::size_t index, std::size_t nvars) {
    if (index >= nvars) throw std::invalid_argument("variable index out of range");
    Polynomial p(nvars);
    Monomial m(nvars);
    m.exponents[index] = 1;
    p.add_term(m, Complex(1.0, 0.0));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
  }

  std::int64_t degree() const {
    std::int64_t d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;  // -1 for the zero polynomial
  }

  std::int64_t degree_in(std::size_t var) const {
    std::int64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max<std::int64_t>(d, m.exponents[var]);
    return d;
  }

  void add_term(const Monomial& m, Complex c) {
    assert(m.nvars() == nvars_);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != Complex(0.0, 0.0)) terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
    }
  }

  Polynomial operator+(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r = *this;
    for (const auto& [m, c] : other.terms_) r.add_term(m, c);
    return r;
  }

  Polynomial operator-(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r = *this;
    for (const auto& [m, c] : other.terms_) r.add_term(m, -c);
    return r;
  }

  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  Polynomial operator*(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r(nvars_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : other.terms_) {
        Complex c = ca * cb;
        if (std::abs(c) < 1e-300) continue;  // drop subnormal products
        r.add_term(ma * mb, c);
      }
    return r;
  }

  Polynomial operator*(Complex s) const {
    Polynomial r(nvars_);
    if (s == Complex(0.0, 0.0)) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
    return r;
  }

  Polynomial& operator+=(const Polynomial& other) { return *this = *this + other; }
  Polynomial& operator-=(const Polynomial& other) { return *this = *this - other; }
  Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }

  bool operator==(const Polynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

  // Horner-free sparse evaluation with per-variable power tables.
  Complex eval(const std::vector<Complex>& point) const {
    if (point.size() != nvars_)
      throw std::invalid_argument("eval: point dimension mismatch");
    std::vector<std::vector<Complex>> powers(nvars_);
    for (std::size_t v = 0; v < nvars_; ++v) {
      auto maxdeg = degree_in(v);
      powers[v].resize(static_cast<std::size_t>(maxdeg) + 1);
      powers[v][0] = Complex(1.0, 0.0);
      for (std::int64_t k = 1; k <= maxdeg; ++k)
        powers[v][static_cast<std::size_t>(k)] =
            powers[v][static_cast<std::size_t>(k - 1)] * point[v];
    }
    Complex acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
      Complex t = c;
      for (std::size_t v = 0; v < nvars_; ++v)
        if (m.exponents[v]) t *= powers[v][m.exponents[v]];
      acc += t;
    }
    return acc;
  }

  // Exact formal partial derivative.
  Polynomial diff(std::size_t var) const {
    if (var >= nvars_) throw std::invalid_argument("diff: variable index out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      const auto e = m.exponents[var];
      if (e == 0) continue;
      Monomial dm = m;
      dm.exponents[var] = e - 1;
      r.add_term(dm, c * static_cast<double>(e));
    }
    return r;
  }

  // Substitute subs[v] for variable v. All substituted polynomials must share
  // one arity, which becomes the arity of the result.
  Polynomial substitute(const std::vector<Polynomial>& subs) const {
    if (subs.size() != nvars_)
      throw std::invalid_argument("substitute: needs one polynomial per variable");
    const std::size_t out_vars = subs.empty() ? 0 : subs[0].nvars();
    for (const auto& s : subs)
      if (s.nvars() != out_vars)
        throw std::invalid_argument("substitute: inconsistent arities");
    // Power memo per variable, extended on demand.
    std::vector<std::vector<Polynomial>> pw(nvars_);
    for (std::size_t v = 0; v < nvars_; ++v)
      pw[v].push_back(Polynomial::constant(Complex(1.0, 0.0), out_vars));
    Polynomial acc(out_vars);
    for (const auto& [m, c] : terms_) {
      Polynomial term = Polynomial::constant(c, out_vars);
      for (std::size_t v = 0; v < nvars_; ++v) {
        const auto e = m.exponents[v];
        while (pw[v].size() <= e) pw[v].push_back(pw[v].back() * subs[v]);
        if (e) term *= pw[v][e];
      }
      acc += term;
    }
    return acc;
  }

  // Fix one variable to a constant; the result keeps the same arity with the
  // variable now absent from every term.
  Polynomial bind(std::size_t var, Complex value) const {
    if (var >= nvars_) throw std::invalid_argument("bind: variable index out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      Complex coeff = c;
      for (std::uint32_t k = 0; k < m.exponents[var]; ++k) coeff *= value;
      Monomial mm = m;
      mm.exponents[var] = 0;
      r.add_term(mm, coeff);
    }
    return r;
  }

  // Remove a variable that no longer occurs in any term.
  Polynomial drop_var(std::size_t var) const {
    Polynomial r(nvars_ - 1);
    for (const auto& [m, c] : terms_) {
      if (m.exponents[var] != 0)
        throw std::invalid_argument("drop_var: variable still occurs");
      Monomial mm(nvars_ - 1);
      for (std::size_t v = 0, w = 0; v < nvars_; ++v)
        if (v != var) mm.exponents[w++] = m.exponents[v];
      r.terms_.emplace(mm, c);
    }
    return r;
  }

  // Insert `count` fresh variables starting at position pos (exponent 0 everywhere).
  Polynomial insert_vars(std::size_t pos, std::size_t count) const {
    if (pos > nvars_) throw std::invalid_argument("insert_vars: bad position");
    Polynomial r(nvars_ + count);
    for (const auto& [m, c] : terms_) {
      Monomial mm(nvars_ + count);
      for (std::size_t v = 0; v < pos; ++v) mm.exponents[v] = m.exponents[v];
      for (std::size_t v = pos; v < nvars_; ++v) mm.exponents[v + count] = m.exponents[v];
      r.terms_.emplace(mm, c);
    }
    return r;
  }

  double max_coeff_abs() const {
    double m = 0.0;
    for (const auto& [mon, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  // Divide by the largest coefficient (complex division, so a pure-phase
  // polynomial becomes real). Truncates imaginary dust afterwards.
  Polynomial normalized() const {
    if (terms_.empty()) return *this;
    const Monomial* argmax = nullptr;
    double best = -1.0;
    for (const auto& [m, c] : terms_) {
      if (std::abs(c) > best) { best = std::abs(c); argmax = &m; }
    }
    Complex pivot = terms_.at(*argmax);
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      Complex v = c / pivot;
      if (std::abs(v.imag()) <= 1e-12 * std::abs(v)) v = Complex(v.real(), 0.0);
      if (std::abs(v) > 1e-300) r.terms_.emplace(m, v);
    }
    return r;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print highest degree first; reverse of the storage order.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string coeff = coeff_string(c, first);
      os << coeff;
      bool printed_var = false;
      for (std::size_t v = 0; v < nvars_; ++v) {
        if (!m.exponents[v]) continue;
        if (printed_var || !coeff_is_sign_only(coeff)) os << "*";
        os << (v < names.size() ? names[v] : "x" + std::to_string(v + 1));
        if (m.exponents[v] > 1) os << "^" << m.exponents[v];
        printed_var = true;
      }
      if (!printed_var && coeff_is_sign_only(coeff))
        os << "1";
      first = false;
    }
    return os.str();
  }

 private:
  static bool coeff_is_sign_only(const std::string& s) {
    return s.empty() || s == "-" || s == "+";
  }

  static std::string coeff_string(Complex c, bool leading) {
    std::ostringstream os;
    if (c.imag() == 0.0) {
      double re = c.real();
      if (re < 0) { os << "-"; re = -re; }
      else if (!leading) os << "+";
      if (re != 1.0) {
        std::ostringstream num;
        num.precision(17);
        num << re;
        os << num.str();
      }
    } else {
      if (!leading) os << "+";
      os.precision(17);
      os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    return os.str();
  }

  void check_same_arity(const Polynomial& other) const {
    if (nvars_ != other.nvars_)
      throw std::invalid_argument("polynomial arity mismatch");
  }

  std::size_t nvars_;
  TermMap terms_;
};

inline Polynomial operator*(Complex s, const Polynomial& p) { return p * s; }

}  // namespace realsmooth

#endif
