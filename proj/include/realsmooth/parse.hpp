#ifndef REALSMOOTH_PARSE_HPP
#define REALSMOOTH_PARSE_HPP

#include <cctype>
#include <string>
#include <vector>

#include "realsmooth/polynomial.hpp"

namespace realsmooth {

// Recursive-descent parser for polynomial expressions. Variables are
// identifiers resolved against a registry, operators are + - * ^ with integer
// exponents, literals may be integer, decimal, or scientific. Whitespace is
// ignored everywhere.
class ExprParser {
 public:
  ExprParser(const std::string& text, const std::vector<std::string>& names,
             int line_offset = 1)
      : text_(text), names_(names), line_(line_offset) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ < text_.size())
      fail("unexpected trailing input '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  Polynomial parse_expr() {
    skip_ws();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = (next() == '-');
    Polynomial acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '+' || c == '-') {
        next();
        Polynomial rhs = parse_term();
        acc = (c == '+') ? acc + rhs : acc - rhs;
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_power();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        next();
        acc *= parse_power();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_power() {
    Polynomial base = parse_primary();
    skip_ws();
    if (peek() == '^') {
      next();
      skip_ws();
      long e = parse_int();
      if (e < 0) fail("negative exponents are not supported");
      Polynomial acc = Polynomial::constant(Complex(1, 0), names_.size());
      Polynomial sq = base;
      long n = e;
      while (n) {  // exponentiation by squaring
        if (n & 1) acc *= sq;
        n >>= 1;
        if (n) sq *= sq;
      }
      return acc;
    }
    return base;
  }

  Polynomial parse_primary() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      next();
      Polynomial p = parse_expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      next();
      return p;
    }
    if (c == '-') {  // unary minus inside a product
      next();
      return -parse_primary();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Polynomial::constant(Complex(parse_number(), 0.0), names_.size());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = parse_identifier();
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == id) return Polynomial::variable(i, names_.size());
      fail("unknown identifier '" + id + "'");
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected character '" + std::string(1, c) + "'");
    return Polynomial();  // unreachable
  }

  std::string parse_identifier() {
    std::string id;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      id += text_[pos_++], ++col_;
    return id;
  }

  double parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    col_ += static_cast<int>(pos_ - start);
    try {
      return std::stod(text_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      fail("malformed numeric literal");
      return 0.0;
    }
  }

  long parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    col_ += static_cast<int>(pos_ - start);
    return std::stol(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char next() { ++col_; return text_[pos_++]; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') { ++line_; col_ = 1; }
      else ++col_;
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line_, col_);
  }

  const std::string& text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline Polynomial parse_polynomial(const std::string& text,
                                   const std::vector<std::string>& names,
                                   int line_offset = 1) {
  return ExprParser(text, names, line_offset).parse();
}

}  // namespace realsmooth

#endif
