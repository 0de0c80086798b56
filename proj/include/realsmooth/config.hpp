#ifndef REALSMOOTH_CONFIG_HPP
#define REALSMOOTH_CONFIG_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace realsmooth {

using Complex = std::complex<double>;

// Tolerances and knobs shared across the solver stack. Every threshold that
// appears in a result filter is collected here so runs are reproducible from
// the values embedded in reports.
struct Tolerances {
  double real_tol = 1e-6;        // max |Im| accepted when projecting to real points
  double g_zero_tol = 1e-8;      // relative threshold below which g counts as zero
  double rank_tol = 1e-8;        // singular values below rank_tol*sigma_1 are noise
  double dedup_tol = 1e-6;       // ||a-b|| <= dedup_tol*(1+||a||) merges endpoints
  double t_min = 1e-4;           // endgame start for limit extraction
  int richardson_depth = 5;      // geometric samples used by the extrapolator
  double newton_tol = 1e-13;     // refinement stops at newton_tol*(1+||x||)
  double divergence = 1e8;       // ||x|| beyond this marks the path diverged
  double min_step = 1e-14;       // step underflow -> path_failure
  double first_step = 0.05;
  double max_step = 0.2;
  double corrector_tol = 1e-6;   // accepted Newton update size while tracking
  double track_tol() const { return corrector_tol; }
  int grow_after = 3;            // successes before doubling the step
  int max_corrector_iters = 4;
  int max_track_steps = 3000;
  int deflation_max_iters = 10;
  std::size_t minor_budget = 50000;  // hard cap on minors per deflation round
  double minor_pivot_tol = 1e-10;    // |det M(z)| must exceed this in minor_g
  double witness_residual = 1e-8;    // membership / certificate residual bound
};

struct RunConfig {
  std::uint64_t seed = 2027;
  Tolerances tol;
  double delta = 16.0;       // default bounding radius for --bound
  bool emit_plot = false;
  bool xi_crosscheck = false;
};

// Exit-code-bearing error types surfaced by the CLI.
struct DegenerateObjectiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DeflationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg), line(line), col(col) {}
  int line = 0;
  int col = 0;
};

}  // namespace realsmooth

#endif
