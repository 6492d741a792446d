#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace goupillaud {

enum class DriverKind { CompoundPoisson, Gamma };

/// Law of an increasing Levy process with strictly positive drift.
///
/// CompoundPoisson: jumps of fixed size `jump_size` arriving at rate
/// `intensity` (intensity 0 gives the drift-only path X(t) = d t).
/// Gamma: the increment over a time step dt is d*dt + Gamma(shape*dt, scale).
struct SubordinatorSpec {
  DriverKind kind = DriverKind::CompoundPoisson;
  double drift = 1.0;
  double intensity = 0.0;
  double jump_size = 1.0;
  double shape = 1.0;
  double scale = 1.0;

  static SubordinatorSpec compound_poisson(double intensity, double jump_size, double drift);
  static SubordinatorSpec drift_only(double drift) { return compound_poisson(0.0, 1.0, drift); }
  static SubordinatorSpec gamma(double shape, double scale, double drift);

  /// Throws NonPositiveDrift / BadParameter.
  void validate() const;
};

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  double length() const noexcept { return hi - lo; }
};

/// Knot indices k_lo..k_hi of a dyadic grid; increments are indexed
/// k_lo+1..k_hi (increment k spans [t_{k-1}, t_k]).
struct IndexWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t increment_count() const noexcept { return hi - lo; }
};

/// t_k^(N) = k / 2^N, exact in binary floating point.
inline double grid_time(std::int64_t k, int level) noexcept {
  return std::ldexp(static_cast<double>(k), -level);
}

/// Largest knot window at `level` whose knot times lie inside `window`.
IndexWindow knot_window(const TimeWindow& window, int level);

struct Jump {
  double time;
  double size;
};

/// Exact cadlag path X(t) = d t + (signed sum of jumps between 0 and t) on a
/// finite window containing 0.
class JumpPath {
 public:
  /// Jumps must be sorted with strictly increasing times inside the window.
  JumpPath(double drift, TimeWindow window, std::vector<Jump> jumps, std::uint64_t seed = 0);

  double drift() const noexcept { return drift_; }
  const TimeWindow& window() const noexcept { return window_; }
  std::span<const Jump> jumps() const noexcept { return jumps_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Right-continuous value X(t).
  double evaluate(double t) const;
  /// lim_{s -> t-} X(s).
  double left_limit(double t) const;
  /// inf{t : X(t) >= x}; returns the jump time when x falls in a jump gap.
  double generalized_inverse(double x) const;

  /// Jump size at exactly `t`, or 0.
  double jump_at(double t) const;
  bool is_jump_time(double t) const { return jump_at(t) != 0.0; }

 private:
  double offset(std::size_t count) const noexcept { return prefix_[count] - base_; }
  void check_time(double t) const;

  double drift_;
  TimeWindow window_;
  std::vector<Jump> jumps_;
  std::vector<double> times_;
  std::vector<double> prefix_;  // prefix_[m] = sum of the first m jump sizes
  double base_;                 // prefix_ at the jumps with T_i <= 0
  std::uint64_t seed_;
};

/// Increments of a path on a dyadic grid at one level.
class GridPath {
 public:
  GridPath(int level, IndexWindow knots, std::vector<double> increments, std::uint64_t seed = 0);

  int level() const noexcept { return level_; }
  const IndexWindow& knots() const noexcept { return knots_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double dt() const noexcept { return std::ldexp(1.0, -level_); }
  TimeWindow time_window() const noexcept {
    return {grid_time(knots_.lo, level_), grid_time(knots_.hi, level_)};
  }

  /// Increments for k = knots().lo + 1 .. knots().hi, in that order.
  std::span<const double> increments() const noexcept { return increments_; }
  double increment(std::int64_t k) const;

  /// X_k for k = knots().lo .. knots().hi, anchored at X_0 = 0 and
  /// accumulated outward from 0 with compensated summation.
  std::vector<double> knot_values() const;

 private:
  int level_;
  IndexWindow knots_;
  std::vector<double> increments_;
  std::uint64_t seed_;
};

/// Poisson arrivals by exponential gaps from window.lo; deterministic in
/// (spec, window, seed).
JumpPath sample_compound_poisson(const SubordinatorSpec& spec, const TimeWindow& window,
                                 std::uint64_t seed);

/// Increment k is d*dt + Gamma(shape*dt, scale) drawn from its own stream
/// stream_seed(seed, k), so a wider window extends the same path.
GridPath sample_gamma_grid(const SubordinatorSpec& spec, int level, const IndexWindow& knots,
                           std::uint64_t seed);

GridPath increments_at_level(const JumpPath& path, int level, const IndexWindow& knots);

/// Sums sibling pairs level by level down to `level`.
GridPath coarsen(const GridPath& grid, int level);

void write_jump_path(std::ostream& os, const JumpPath& path);
JumpPath read_jump_path(std::istream& is);
void write_grid_path(std::ostream& os, const GridPath& grid);
GridPath read_grid_path(std::istream& is);

}  // namespace goupillaud
