#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "goupillaud/levy_paths.hpp"

namespace goupillaud {

/// Goupillaud layering at one dyadic level: layer k occupies
/// [X_{k-1}, X_k) and is crossed in exactly dt = 2^-N time units.
///
/// Increments are stored and speeds derived from them, so
/// increment(k) == speed(k) * dt() holds exactly (dt is a power of two).
class LayeredMedium {
 public:
  explicit LayeredMedium(const GridPath& grid);

  int level() const noexcept { return level_; }
  double dt() const noexcept { return std::ldexp(1.0, -level_); }
  /// Layer indices first_layer()..last_layer().
  std::int64_t first_layer() const noexcept { return first_knot_ + 1; }
  std::int64_t last_layer() const noexcept {
    return first_knot_ + static_cast<std::int64_t>(boundaries_.size()) - 1;
  }

  /// X_k for k = first_layer()-1 .. last_layer().
  std::span<const double> boundaries() const noexcept { return boundaries_; }
  double lower_boundary(std::int64_t k) const;
  double upper_boundary(std::int64_t k) const;
  double increment(std::int64_t k) const;
  double speed(std::int64_t k) const { return std::ldexp(increment(k), level_); }

  /// Speed of the layer containing x; layers are left-closed, right-open.
  double speed_at(double x) const;
  /// Index of the layer containing x.
  std::int64_t layer_at(double x) const;

 private:
  std::size_t slot(std::int64_t k) const;

  int level_;
  std::int64_t first_knot_;
  std::vector<double> boundaries_;
  std::vector<double> increments_;
};

/// Rows "k,X_{k-1},X_k,C_k".
void write_medium(std::ostream& os, const LayeredMedium& medium);

/// Strictly increasing continuous polygon through (k/2^N, X_k).
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(int level, std::int64_t first_knot, std::vector<double> knot_values);

  static PiecewiseLinearPath from_grid(const GridPath& grid);
  /// Knots X(t_k) for every k/2^N inside the path window.
  static PiecewiseLinearPath from_path(const JumpPath& path, int level);

  int level() const noexcept { return level_; }
  double dt() const noexcept { return std::ldexp(1.0, -level_); }
  std::int64_t first_knot() const noexcept { return first_knot_; }
  std::int64_t last_knot() const noexcept {
    return first_knot_ + static_cast<std::int64_t>(values_.size()) - 1;
  }
  double knot_time(std::int64_t k) const noexcept { return grid_time(k, level_); }
  double knot_value(std::int64_t k) const;
  std::span<const double> knot_values() const noexcept { return values_; }

  TimeWindow domain() const noexcept { return {knot_time(first_knot()), knot_time(last_knot())}; }
  double range_lo() const noexcept { return values_.front(); }
  double range_hi() const noexcept { return values_.back(); }

  /// xi^(N)(tau) = alpha X_{k-1} + (1 - alpha) X_k on [t_{k-1}, t_k),
  /// alpha = (t_k - tau) 2^N.
  double interpolate(double tau) const;
  /// Exact inverse of interpolate on [range_lo, range_hi].
  double inverse(double x) const;

 private:
  int level_;
  std::int64_t first_knot_;
  std::vector<double> values_;
};

}  // namespace goupillaud
