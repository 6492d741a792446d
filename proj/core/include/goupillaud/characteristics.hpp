#pragma once

#include <optional>
#include <span>
#include <vector>

#include "goupillaud/dyadic_medium.hpp"
#include "goupillaud/levy_paths.hpp"

namespace goupillaud {

struct Anchor {
  double x;
  double t;
};

/// Characteristic through an anchor (x, t): a copy of the medium path
/// shifted in time so that it passes through the anchor.
///
/// Discrete:  gamma^(N)(tau) = xi^(N)(inverse_N(x) + (tau - t))
/// Limit:     Gamma(tau)     = X(X*(x) + (tau - t))
///
/// The shift is computed once at construction. Holds a non-owning pointer to
/// its source path, which must outlive it.
class Characteristic {
 public:
  enum class Kind { Discrete, Limit };

  static Characteristic discrete(const PiecewiseLinearPath& path, Anchor anchor);
  static Characteristic limit(const JumpPath& path, Anchor anchor);

  Kind kind() const noexcept { return kind_; }
  /// Refinement level; empty for the limit kind.
  std::optional<int> level() const noexcept;
  const Anchor& anchor() const noexcept { return anchor_; }
  /// inverse(x) for the discrete kind, X*(x) for the limit kind.
  double anchor_time() const noexcept { return anchor_time_; }

  /// Source-path time visited at tau.
  double shifted_time(double tau) const noexcept { return anchor_time_ + (tau - anchor_.t); }
  double at(double tau) const;
  /// Left limit in tau; equals at(tau) for the discrete kind.
  double left_limit_at(double tau) const;

 private:
  Characteristic(Kind kind, const PiecewiseLinearPath* pl, const JumpPath* jp, Anchor anchor,
                 double anchor_time)
      : kind_(kind), polygon_(pl), jumps_(jp), anchor_(anchor), anchor_time_(anchor_time) {}

  Kind kind_;
  const PiecewiseLinearPath* polygon_;
  const JumpPath* jumps_;
  Anchor anchor_;
  double anchor_time_;
};

double gamma_discrete(const PiecewiseLinearPath& path, double tau, double x, double t);
double gamma_limit(const JumpPath& path, double tau, double x, double t);

/// True iff tau0 + X*(x) - t is not a stored jump time.
bool is_continuity_point(const JumpPath& path, double tau0, double x, double t);

struct ProbeSample {
  int level;
  double gap;  // |gamma^(N)(tau0) - Gamma(tau0)|
};

/// Builds xi^(N) from the path for each level and records the gap to the
/// limit characteristic at tau0.
std::vector<ProbeSample> convergence_probe(const JumpPath& path, double tau0, double x, double t,
                                           std::span<const int> levels);

/// Same as convergence_probe with the polygons supplied by the caller.
std::vector<ProbeSample> convergence_probe(const JumpPath& path,
                                           std::span<const PiecewiseLinearPath> polygons,
                                           double tau0, double x, double t);

}  // namespace goupillaud
