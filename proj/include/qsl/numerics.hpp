#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace qsl {

/// Uniform grid on [start, stop] with `nodes` points.
struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int nodes = 201;

  std::vector<double> points() const;
  double step() const { return (stop - start) / (nodes - 1); }
};

/// Composite Simpson on pre-sampled values over a uniform grid (odd node count).
double simpson(const std::vector<double>& values, double step);

struct QuadratureResult {
  double value = 0.0;
  int nodes = 0;
  double relative_change = 0.0;
  bool converged = false;
};

/// Composite Simpson starting at `initial_nodes`, doubling the interval count until two
/// successive estimates agree to `rel_tol` or `max_nodes` is reached. `sampler` receives the
/// node count and returns the integrand on the uniform grid over [a, b].
QuadratureResult simpson_adaptive(const std::function<std::vector<double>(int nodes)>& sampler, double a,
                                  double b, int initial_nodes = 201, double rel_tol = 1e-6,
                                  int max_nodes = 1 << 16 | 1);

/// Convenience overload for a pointwise integrand.
QuadratureResult simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                                  int initial_nodes = 201, double rel_tol = 1e-6, int max_nodes = 1 << 16 | 1);

double clamped_acos(double x);

/// FNV-1a 64-bit, rendered as 16 hex digits.
class Digest {
 public:
  Digest& add(std::string_view bytes);
  Digest& add(double x);
  Digest& add(std::int64_t x);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Worker count from QSL_LAB_THREADS (0 or unset = hardware concurrency).
unsigned sweep_threads();

/// Runs body(i) for i in [0, n) over `threads` workers. Results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = sweep_threads());

}  // namespace qsl
