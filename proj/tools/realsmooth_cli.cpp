// Command-line front end: smooth-points, real-dim and kuramoto subcommands
// over the structured text / JSON input formats. Reports are JSON documents
// embedding the seed, xi, gamma and tolerances so runs can be replayed.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "realsmooth/realsmooth.hpp"

namespace rs = realsmooth;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 2;
constexpr int kExitDeflationCap = 3;
constexpr int kExitParse = 4;
constexpr int kExitError = 1;

struct BoundSpec {
  bool enabled = false;
  std::vector<double> q;  // may be shorter than nvars; padded with zeros
  double delta = 16.0;
};

// --bound center_1,...,center_k,delta  (a single value is just delta)
BoundSpec parse_bound(const std::string& text) {
  BoundSpec b;
  b.enabled = true;
  if (text.empty()) return b;
  std::stringstream ss(text);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.empty()) return b;
  b.delta = vals.back();
  vals.pop_back();
  b.q = vals;
  if (b.delta <= 0) throw std::invalid_argument("--bound: delta must be positive");
  return b;
}

struct PreparedSystem {
  rs::PolySystem sys;          // lifted (and possibly bounded) system
  std::size_t n_original = 0;  // coordinates reported to the user
  std::vector<std::string> original_vars;
};

PreparedSystem prepare(const rs::SemiAlgebraicInput& in, const BoundSpec& bound) {
  PreparedSystem out;
  out.n_original = in.vars.size();
  out.original_vars = in.vars;
  out.sys = rs::lift_inequalities(in);
  if (bound.enabled) {
    rs::RVec q(static_cast<int>(out.sys.nvars()));
    q.setZero();
    for (std::size_t i = 0; i < bound.q.size() && i < out.sys.nvars(); ++i)
      q(static_cast<int>(i)) = bound.q[i];
    out.sys = rs::embed_bounded(out.sys, q, bound.delta);
  }
  return out;
}

json point_json(const rs::SmoothPoint& p, std::size_t n_report) {
  json arr = json::array();
  for (std::size_t v = 0; v < n_report && v < static_cast<std::size_t>(p.x.size()); ++v)
    arr.push_back(p.x(static_cast<int>(v)));
  return json{{"x", arr},
              {"g_value", p.g_value},
              {"rank", p.jacobian_rank},
              {"residual", p.residual},
              {"certified_smooth", p.certified_smooth},
              {"component", p.component_hint}};
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << std::endl;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << doc.dump(2) << std::endl;
  }
}

// Two reports agree when their points pair up within tol and the g-sign
// pattern matches; used by the --xi-crosscheck flag.
bool reports_agree(const rs::SmoothPointReport& a, const rs::SmoothPointReport& b, double tol) {
  if (a.points.size() != b.points.size()) return false;
  for (const auto& pa : a.points) {
    bool matched = false;
    for (const auto& pb : b.points) {
      if ((pa.x - pb.x).norm() <= tol * (1.0 + pa.x.norm()) &&
          pa.g_value * pb.g_value > 0) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

int cmd_smooth_points(const std::string& input, const std::string& g_expr,
                      const rs::RunConfig& cfg, const std::string& bound_text,
                      bool perturbed, const std::string& out_path,
                      const std::string& plot_path) {
  auto in = rs::parse_input_file(input);
  BoundSpec bound;
  if (!bound_text.empty()) bound = parse_bound(bound_text == "default" ? "" : bound_text);
  PreparedSystem prep = prepare(in, bound);

  std::optional<rs::Polynomial> g;
  if (!g_expr.empty()) {
    rs::Polynomial gx = rs::parse_polynomial(g_expr, in.vars);
    // Lift the objective over the slack/bounding variables.
    g = gx.insert_vars(in.vars.size(), prep.sys.nvars() - in.vars.size());
  }

  rs::SmoothPointReport rep = rs::smooth_sample(prep.sys, g, cfg.seed, cfg.tol, perturbed);
  if (cfg.xi_crosscheck) {
    rs::SmoothPointReport again =
        rs::smooth_sample(prep.sys, g, rs::derive_seed(cfg.seed, "crosscheck"), cfg.tol, perturbed);
    if (!reports_agree(rep, again, 1e-6))
      rep.warnings.push_back("xi crosscheck mismatch: rerun with a different seed");
  }

  json doc;
  doc["method"] = rep.method;
  doc["seed"] = cfg.seed;
  doc["xi"] = rs::complex_json(rep.xi);
  doc["gamma"] = rs::complex_json(rep.gamma);
  doc["tolerances"] = rs::tolerances_json(cfg.tol);
  doc["warnings"] = rep.warnings;
  doc["points"] = json::array();
  for (const auto& p : rep.points) doc["points"].push_back(point_json(p, prep.n_original));

  if (!plot_path.empty()) {
    std::vector<rs::RVec> pts;
    for (const auto& p : rep.points) pts.push_back(p.x.head(static_cast<int>(prep.n_original)));
    rs::PolySystem original(in.vars);
    for (const auto& e : in.equations) original.push_back(e);
    rs::write_plot_csv(plot_path, pts, original);
  }
  emit(doc, out_path);
  return kExitOk;
}

int cmd_real_dim(const std::string& input, const rs::RunConfig& cfg,
                 const std::string& bound_text, const std::string& out_path) {
  auto in = rs::parse_input_file(input);
  BoundSpec bound;
  if (!bound_text.empty()) bound = parse_bound(bound_text == "default" ? "" : bound_text);
  PreparedSystem prep = prepare(in, bound);

  rs::RealDimRun run = rs::real_dimension(prep.sys, cfg.seed, cfg.tol);

  json doc;
  doc["dimension"] = run.result;
  doc["seed"] = cfg.seed;
  doc["xi"] = rs::complex_json(run.xi);
  doc["tolerances"] = rs::tolerances_json(cfg.tol);
  doc["warnings"] = run.warnings;
  doc["trace"] = json::array();
  for (const auto& lvl : run.per_i) {
    json g_degs = json::array();
    for (auto d : lvl.g_degrees) g_degs.push_back(d);
    doc["trace"].push_back(json{{"i", lvl.i},
                                {"witness_paths", lvl.witness_paths},
                                {"witness_points", lvl.witness_points},
                                {"groups", lvl.groups},
                                {"g_degrees", g_degs},
                                {"s_i_size", lvl.s_i_size},
                                {"elapsed_seconds", lvl.elapsed_seconds},
                                {"notes", lvl.notes}});
  }
  doc["witnesses"] = json::array();
  for (const auto& w : run.witnesses) doc["witnesses"].push_back(point_json(w, prep.n_original));
  emit(doc, out_path);
  return kExitOk;
}

int cmd_kuramoto(int n, int samples, const rs::RunConfig& cfg, const std::string& out_path) {
  auto omegas = rs::sample_omegas(n, samples, cfg.seed);
  std::vector<int> counts, recheck;
  for (const auto& w : omegas) {
    counts.push_back(rs::count_real_equilibria(n, w, rs::derive_seed(cfg.seed, "count-a"), cfg.tol));
    recheck.push_back(rs::count_real_equilibria(n, w, rs::derive_seed(cfg.seed, "count-b"), cfg.tol));
  }
  int max_observed = 0;
  bool invariant = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    max_observed = std::max(max_observed, counts[i]);
    if (counts[i] != recheck[i]) invariant = false;
  }

  json doc;
  doc["n"] = n;
  doc["samples"] = samples;
  doc["seed"] = cfg.seed;
  doc["tolerances"] = rs::tolerances_json(cfg.tol);
  doc["omegas"] = json::array();
  for (const auto& w : omegas) doc["omegas"].push_back(w);
  doc["per_sample_counts"] = counts;
  doc["recheck_counts"] = recheck;
  doc["gamma_invariant"] = invariant;
  doc["max_observed"] = max_observed;
  emit(doc, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real smooth points on real algebraic and semi-algebraic sets"};
  app.require_subcommand(1);

  rs::RunConfig cfg;
  std::string input, g_expr, bound_text, out_path, plot_path;
  bool perturbed = false;
  int kuramoto_n = 4, kuramoto_samples = 20;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "RNG seed recorded in the report");
    cmd->add_option("--out", out_path, "write the JSON report to a file");
    cmd->add_option("--real-tol", cfg.tol.real_tol, "max |Im| for real points");
    cmd->add_option("--g-zero-tol", cfg.tol.g_zero_tol, "threshold for g = 0");
    cmd->add_option("--rank-tol", cfg.tol.rank_tol, "relative singular value cutoff");
    cmd->add_option("--dedup-tol", cfg.tol.dedup_tol, "endpoint dedup tolerance");
    cmd->add_option("--t-min", cfg.tol.t_min, "endgame start parameter");
  };

  auto* sp = app.add_subcommand("smooth-points",
                                "smooth real points per connected component");
  sp->add_option("--input", input, "system file (text or JSON)")->required();
  sp->add_option("--g", g_expr, "objective polynomial (auto-constructed when omitted)");
  sp->add_option("--bound", bound_text,
                 "restrict to a ball: center_1,..,center_k,delta (default origin, 16)")
      ->expected(0, 1)
      ->default_str("default");
  sp->add_flag("--perturbed", perturbed, "use the perturbed (limit) formulation");
  sp->add_flag("--xi-crosscheck", cfg.xi_crosscheck, "verify xi-independence of the result");
  sp->add_option("--plot", plot_path, "CSV plot data (points plus curve for 2-var inputs)");
  add_common(sp);

  auto* rd = app.add_subcommand("real-dim", "numerical real dimension");
  rd->add_option("--input", input, "system file (text or JSON)")->required();
  rd->add_option("--bound", bound_text,
                 "restrict to a ball: center_1,..,center_k,delta (default origin, 16)")
      ->expected(0, 1)
      ->default_str("default");
  add_common(rd);

  auto* ku = app.add_subcommand("kuramoto", "count real equilibria over sampled frequencies");
  ku->add_option("--n", kuramoto_n, "number of oscillators (3 or 4)");
  ku->add_option("--samples", kuramoto_samples, "number of frequency samples");
  add_common(ku);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sp))
      return cmd_smooth_points(input, g_expr, cfg, sp->count("--bound") ? (bound_text.empty() ? "default" : bound_text) : "",
                               perturbed, out_path, plot_path);
    if (app.got_subcommand(rd))
      return cmd_real_dim(input, cfg, rd->count("--bound") ? (bound_text.empty() ? "default" : bound_text) : "", out_path);
    if (app.got_subcommand(ku))
      return cmd_kuramoto(kuramoto_n, kuramoto_samples, cfg, out_path);
  } catch (const rs::ParseError& e) {
    std::cerr << "parse error (line " << e.line << ", col " << e.col << "): " << e.what()
              << std::endl;
    return kExitParse;
  } catch (const rs::DegenerateObjectiveError& e) {
    std::cerr << "degenerate objective: " << e.what() << std::endl;
    return kExitDegenerate;
  } catch (const rs::DeflationCapError& e) {
    std::cerr << "deflation cap: " << e.what() << std::endl;
    return kExitDeflationCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitError;
  }
  return kExitError;
}
