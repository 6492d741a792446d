#include "goupillaud/dyadic_medium.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "goupillaud/error.hpp"
#include "goupillaud/text_io.hpp"

namespace goupillaud {

LayeredMedium::LayeredMedium(const GridPath& grid)
    : level_(grid.level()),
      first_knot_(grid.knots().lo),
      boundaries_(grid.knot_values()),
      increments_(grid.increments().begin(), grid.increments().end()) {}

std::size_t LayeredMedium::slot(std::int64_t k) const {
  if (k < first_layer() || k > last_layer())
    throw DomainError(ErrorKind::OutOfRange, "layer " + std::to_string(k) + " outside [" +
                                                 std::to_string(first_layer()) + ", " +
                                                 std::to_string(last_layer()) + "]");
  return static_cast<std::size_t>(k - first_knot_);
}

double LayeredMedium::lower_boundary(std::int64_t k) const { return boundaries_[slot(k) - 1]; }
double LayeredMedium::upper_boundary(std::int64_t k) const { return boundaries_[slot(k)]; }
double LayeredMedium::increment(std::int64_t k) const { return increments_[slot(k) - 1]; }

std::int64_t LayeredMedium::layer_at(double x) const {
  const auto s = static_cast<std::size_t>(
      std::upper_bound(boundaries_.begin(), boundaries_.end(), x) - boundaries_.begin());
  if (s == 0 || s == boundaries_.size())
    throw DomainError(ErrorKind::OutOfRange, "position " + format_real(x) + " outside [" +
                                                 format_real(boundaries_.front()) + ", " +
                                                 format_real(boundaries_.back()) + ")");
  return first_knot_ + static_cast<std::int64_t>(s);
}

double LayeredMedium::speed_at(double x) const { return speed(layer_at(x)); }

void write_medium(std::ostream& os, const LayeredMedium& medium) {
  os << "k,X_lower,X_upper,C\n";
  for (std::int64_t k = medium.first_layer(); k <= medium.last_layer(); ++k)
    os << k << ',' << format_real(medium.lower_boundary(k)) << ','
       << format_real(medium.upper_boundary(k)) << ',' << format_real(medium.speed(k)) << '\n';
}

// ---------------------------------------------------------------------------

PiecewiseLinearPath::PiecewiseLinearPath(int level, std::int64_t first_knot,
                                         std::vector<double> knot_values)
    : level_(level), first_knot_(first_knot), values_(std::move(knot_values)) {
  if (level_ < 0 || level_ > 52)
    throw DomainError(ErrorKind::BadLevel, "level " + std::to_string(level_) + " outside [0, 52]");
  if (values_.size() < 2)
    throw DomainError(ErrorKind::InvalidGrid, "a polygon needs at least two knots");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (!(values_[i] > values_[i - 1]))
      throw DomainError(ErrorKind::InvalidGrid, "knot values must be strictly increasing");
}

PiecewiseLinearPath PiecewiseLinearPath::from_grid(const GridPath& grid) {
  return PiecewiseLinearPath(grid.level(), grid.knots().lo, grid.knot_values());
}

PiecewiseLinearPath PiecewiseLinearPath::from_path(const JumpPath& path, int level) {
  const IndexWindow knots = knot_window(path.window(), level);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(knots.hi - knots.lo + 1));
  for (std::int64_t k = knots.lo; k <= knots.hi; ++k) values.push_back(path.evaluate(grid_time(k, level)));
  return PiecewiseLinearPath(level, knots.lo, std::move(values));
}

double PiecewiseLinearPath::knot_value(std::int64_t k) const {
  if (k < first_knot() || k > last_knot())
    throw DomainError(ErrorKind::OutOfWindow, "knot " + std::to_string(k) + " outside [" +
                                                  std::to_string(first_knot()) + ", " +
                                                  std::to_string(last_knot()) + "]");
  return values_[static_cast<std::size_t>(k - first_knot_)];
}

double PiecewiseLinearPath::interpolate(double tau) const {
  const TimeWindow dom = domain();
  if (!dom.contains(tau))
    throw DomainError(ErrorKind::OutOfWindow, "time " + format_real(tau) + " outside [" +
                                                  format_real(dom.lo) + ", " + format_real(dom.hi) + "]");
  if (tau == dom.hi) return values_.back();
  const double pos = std::ldexp(tau, level_);
  const double cell = std::floor(pos);
  const auto s = static_cast<std::size_t>(static_cast<std::int64_t>(cell) - first_knot_);
  const double lower = values_[s];
  const double upper = values_[s + 1];
  const double alpha = 1.0 - (pos - cell);
  return std::clamp(alpha * lower + (1.0 - alpha) * upper, lower, upper);
}

double PiecewiseLinearPath::inverse(double x) const {
  if (!(x >= values_.front() && x <= values_.back()))
    throw DomainError(ErrorKind::OutOfRange, "value " + format_real(x) + " outside [" +
                                                 format_real(values_.front()) + ", " +
                                                 format_real(values_.back()) + "]");
  if (x == values_.back()) return domain().hi;
  const auto s = static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
  const double lower = values_[s - 1];
  const double upper = values_[s];
  const std::int64_t k_lower = first_knot_ + static_cast<std::int64_t>(s) - 1;
  const double t_lower = knot_time(k_lower);
  const double t = t_lower + std::ldexp((x - lower) / (upper - lower), -level_);
  return std::clamp(t, t_lower, knot_time(k_lower + 1));
}

}  // namespace goupillaud
