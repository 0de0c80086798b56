#ifndef REALSMOOTH_IO_HPP
#define REALSMOOTH_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "realsmooth/parse.hpp"
#include "realsmooth/reduce.hpp"

namespace realsmooth {

// Structured text input:
//   vars x y z
//   eq: x^2 + y^2 - 1
//   gt: y
// Lines starting with '#' are comments. A JSON document with fields
// {vars, equations, inequalities} is accepted as an equivalent encoding.
inline SemiAlgebraicInput parse_input_text(const std::string& text) {
  SemiAlgebraicInput in;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_vars = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::string trimmed = line;
    const auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed.empty() || trimmed[0] == '#') continue;

    if (trimmed.rfind("vars", 0) == 0 &&
        (trimmed.size() == 4 || std::isspace(static_cast<unsigned char>(trimmed[4])))) {
      if (saw_vars) throw ParseError("duplicate vars line", lineno, 1);
      std::istringstream vs(trimmed.substr(4));
      std::string name;
      while (vs >> name) in.vars.push_back(name);
      if (in.vars.empty()) throw ParseError("vars line declares no variables", lineno, 1);
      saw_vars = true;
      continue;
    }
    if (trimmed.rfind("eq:", 0) == 0 || trimmed.rfind("gt:", 0) == 0) {
      if (!saw_vars) throw ParseError("vars line must precede equations", lineno, 1);
      const bool is_eq = trimmed[0] == 'e';
      Polynomial p = parse_polynomial(trimmed.substr(3), in.vars, lineno);
      (is_eq ? in.equations : in.inequalities).push_back(std::move(p));
      continue;
    }
    throw ParseError("unrecognized line '" + trimmed.substr(0, 24) + "'", lineno, 1);
  }
  if (!saw_vars) throw ParseError("input declares no variables", 1, 1);
  return in;
}

inline SemiAlgebraicInput parse_input_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what(), 1, 1);
  }
  SemiAlgebraicInput in;
  if (!j.contains("vars") || !j["vars"].is_array())
    throw ParseError("JSON input needs a vars array", 1, 1);
  for (const auto& v : j["vars"]) in.vars.push_back(v.get<std::string>());
  if (j.contains("equations"))
    for (const auto& e : j["equations"])
      in.equations.push_back(parse_polynomial(e.get<std::string>(), in.vars));
  if (j.contains("inequalities"))
    for (const auto& e : j["inequalities"])
      in.inequalities.push_back(parse_polynomial(e.get<std::string>(), in.vars));
  return in;
}

inline SemiAlgebraicInput parse_input_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open input file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
    return parse_input_json(text);
  return parse_input_text(text);
}

inline std::string serialize_input(const SemiAlgebraicInput& in) {
  std::ostringstream os;
  os << "vars";
  for (const auto& v : in.vars) os << " " << v;
  os << "\n";
  for (const auto& e : in.equations) os << "eq: " << e.to_string(in.vars) << "\n";
  for (const auto& q : in.inequalities) os << "gt: " << q.to_string(in.vars) << "\n";
  return os.str();
}

inline nlohmann::json complex_json(Complex z) {
  return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

inline nlohmann::json tolerances_json(const Tolerances& tol) {
  return nlohmann::json{{"real_tol", tol.real_tol},
                        {"g_zero_tol", tol.g_zero_tol},
                        {"rank_tol", tol.rank_tol},
                        {"dedup_tol", tol.dedup_tol},
                        {"t_min", tol.t_min}};
}

// CSV plot data: one real point per row, plus (for two-variable systems) a
// dense sampling of the curve V(f) via sign changes on a grid.
inline void write_plot_csv(const std::string& path, const std::vector<RVec>& points,
                           const PolySystem& sys, double extent = 3.0, int grid = 400) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open plot file: " + path);
  const std::size_t n = sys.nvars();
  f << "kind";
  for (std::size_t v = 0; v < n; ++v) f << "," << sys.var_names()[v];
  f << "\n";
  f.precision(12);
  for (const auto& p : points) {
    f << "point";
    for (int v = 0; v < p.size(); ++v) f << "," << p(v);
    f << "\n";
  }
  if (n == 2 && sys.size() >= 1) {
    const Polynomial& curve = sys[0];
    auto val = [&](double x, double y) {
      std::vector<Complex> at{Complex(x, 0), Complex(y, 0)};
      return curve.eval(at).real();
    };
    const double h = 2.0 * extent / grid;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double x0 = -extent + i * h, y0 = -extent + j * h;
        const double v00 = val(x0, y0), v10 = val(x0 + h, y0), v01 = val(x0, y0 + h);
        if (v00 == 0.0) { f << "curve," << x0 << "," << y0 << "\n"; continue; }
        if (v00 * v10 < 0) {
          const double s = v00 / (v00 - v10);
          f << "curve," << (x0 + s * h) << "," << y0 << "\n";
        }
        if (v00 * v01 < 0) {
          const double s = v00 / (v00 - v01);
          f << "curve," << x0 << "," << (y0 + s * h) << "\n";
        }
      }
    }
  }
}

}  // namespace realsmooth

#endif
