#include "goupillaud/characteristics.hpp"

#include <cmath>

namespace goupillaud {

Characteristic Characteristic::discrete(const PiecewiseLinearPath& path, Anchor anchor) {
  return Characteristic(Kind::Discrete, &path, nullptr, anchor, path.inverse(anchor.x));
}

Characteristic Characteristic::limit(const JumpPath& path, Anchor anchor) {
  return Characteristic(Kind::Limit, nullptr, &path, anchor, path.generalized_inverse(anchor.x));
}

std::optional<int> Characteristic::level() const noexcept {
  if (kind_ == Kind::Discrete) return polygon_->level();
  return std::nullopt;
}

double Characteristic::at(double tau) const {
  if (kind_ == Kind::Limit) return jumps_->evaluate(shifted_time(tau));
  // The polygon is continuous and passes through its anchor.
  if (tau == anchor_.t) return anchor_.x;
  return polygon_->interpolate(shifted_time(tau));
}

double Characteristic::left_limit_at(double tau) const {
  if (kind_ == Kind::Limit) return jumps_->left_limit(shifted_time(tau));
  return at(tau);
}

double gamma_discrete(const PiecewiseLinearPath& path, double tau, double x, double t) {
  return Characteristic::discrete(path, {x, t}).at(tau);
}

double gamma_limit(const JumpPath& path, double tau, double x, double t) {
  return Characteristic::limit(path, {x, t}).at(tau);
}

bool is_continuity_point(const JumpPath& path, double tau0, double x, double t) {
  const double s = Characteristic::limit(path, {x, t}).shifted_time(tau0);
  if (!path.window().contains(s)) path.evaluate(s);  // raises OutOfWindow
  return !path.is_jump_time(s);
}

std::vector<ProbeSample> convergence_probe(const JumpPath& path, double tau0, double x, double t,
                                           std::span<const int> levels) {
  std::vector<PiecewiseLinearPath> polygons;
  polygons.reserve(levels.size());
  for (int n : levels) polygons.push_back(PiecewiseLinearPath::from_path(path, n));
  return convergence_probe(path, polygons, tau0, x, t);
}

std::vector<ProbeSample> convergence_probe(const JumpPath& path,
                                           std::span<const PiecewiseLinearPath> polygons,
                                           double tau0, double x, double t) {
  const double limit = gamma_limit(path, tau0, x, t);
  std::vector<ProbeSample> out;
  out.reserve(polygons.size());
  for (const auto& pl : polygons)
    out.push_back({pl.level(), std::fabs(gamma_discrete(pl, tau0, x, t) - limit)});
  return out;
}

}  // namespace goupillaud
